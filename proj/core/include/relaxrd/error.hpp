#pragma once

#include <stdexcept>
#include <string>

namespace relaxrd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Non-finite value produced during time stepping.
class SolverFault : public Error {
public:
    SolverFault(const std::string& what, std::size_t unknown, std::size_t cell, double time)
        : Error(what), unknown_(unknown), cell_(cell), time_(time) {}

    std::size_t unknown() const noexcept { return unknown_; }
    std::size_t cell() const noexcept { return cell_; }
    double time() const noexcept { return time_; }

private:
    std::size_t unknown_;
    std::size_t cell_;
    double time_;
};

} // namespace relaxrd
