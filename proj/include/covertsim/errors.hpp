#pragma once

#include <stdexcept>
#include <string>

namespace covertsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the region where a closed form is defined.
struct DomainError : Error {
  using Error::Error;
};

/// The covert constraint needs more cooperators (or interference power)
/// than the user population can supply.
struct InfeasibleCover : Error {
  using Error::Error;
};

/// A root search was asked for a target the function never reaches.
struct NoSolution : Error {
  using Error::Error;
};

/// Rejected configuration document or parameter set.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace covertsim
