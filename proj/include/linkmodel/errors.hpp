#pragma once

#include <stdexcept>

namespace linkmodel {

/// Bad or missing configuration data: unparseable files, unknown keys,
/// absent code spectra.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs for which the requested quantity is undefined, e.g. the mean
/// duration of a successful transmission when no attempt can succeed.
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace linkmodel
