#pragma once

#include <stdexcept>
#include <string>

namespace gpt_compat {

// Malformed input: ragged vertex lists, dimension mismatches, bad parameters.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An affine functional fails the effect bounds, or an observable is not normalized.
class ValidationError : public InputError {
public:
    using InputError::InputError;
};

// A vertex-value assignment that no affine functional reproduces.
class RepresentabilityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Iteration limit hit or an internal consistency check failed. Never used to
// signal an infeasible LP.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gpt_compat
