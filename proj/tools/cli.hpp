#pragma once

namespace kyt::cli {

/// Runs the command-line interface. Exit codes: 0 on success, 2 when an
/// algorithm declares "fail" (or a verification rejects), 1 on I/O or
/// validation errors.
int run(int argc, const char* const* argv);

} // namespace kyt::cli
