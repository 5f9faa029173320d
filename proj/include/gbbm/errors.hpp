#pragma once

#include <stdexcept>
#include <string>

namespace gbbm {

/// Invalid configuration: bad file syntax, unknown key, out-of-range value.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runtime numerical failure: blow-up, non-finite state, non-convergence.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gbbm
