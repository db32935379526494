// errors.hpp
// Exception hierarchy shared by every entropic module.

#pragma once

#include <stdexcept>
#include <string>

namespace entropic {

/// Malformed or out-of-range argument (unknown label, wrong size, odd N, ...).
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Value outside the mathematical domain of a function, e.g. p > 1.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// A physical precondition failed: non-commuting observables, non-involutive operators.
struct precondition_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Floating-point result that cannot be trusted (large imaginary residue, negative probability).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Always a bug.
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace entropic
