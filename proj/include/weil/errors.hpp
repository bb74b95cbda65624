#pragma once

#include <stdexcept>
#include <string>

namespace weil {

// Bad input: malformed lattice, matrix outside the required subgroup, etc.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed the desk-scale cap.
struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A mathematical identity that must hold did not.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace weil
