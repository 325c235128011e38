#pragma once

#include <stdexcept>
#include <string>

namespace boxbound {

// Malformed or inconsistent caller input (dimension mismatch, caps exceeded, bad schema).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure could not produce a certified answer, e.g. an LP built
// from user-supplied moments turned out infeasible.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace boxbound
