#pragma once

#include <stdexcept>
#include <string>

namespace transhyp {

// Invalid parameter bundle (bad counts, zero slopes, non-positive scale, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A symmetric function that must be nonzero vanished (within tolerance).
struct DegenerateParameterError : ParameterError {
  using ParameterError::ParameterError;
};

// Evaluation point outside the open domain of a profile or graph.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Index or order outside its admissible range.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// A finite-difference stencil would leave the domain.
struct StencilError : DomainError {
  using DomainError::DomainError;
};

// ODE integration ran into the cos-singularity.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace transhyp
