#pragma once

#include <stdexcept>
#include <string>

namespace qpc {

// Raised when a validated input (config value, precondition on user data)
// is rejected. Maps to CLI exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation breaks an internal invariant (non-finite entry,
// broken conjugate symmetry, indeterminate certified comparison). Exit code 1.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qpc
