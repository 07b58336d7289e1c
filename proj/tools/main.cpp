#include "cli.hpp"

int main(int argc, char** argv) { return kyt::cli::run(argc, argv); }
