#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kyt {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad dimensions, malformed files, parameter violations.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

/// An algorithm declared "fail" on a well-formed input (wrong intersection
/// dimension, ambiguous pairing, unstable diagonalization, ...). Kept separate
/// from InvalidInput so callers can map it to a dedicated exit code.
class AlgorithmFail : public Error {
public:
    AlgorithmFail(std::string step, const std::string& what)
        : Error("fail [" + step + "]: " + what), step_(std::move(step)) {}

    const std::string& step() const { return step_; }

private:
    std::string step_;
};

} // namespace kyt
