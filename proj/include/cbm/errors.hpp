#pragma once

#include <stdexcept>
#include <string>

namespace cbm {

// Raised when an operation needs a Jack table beyond the configured weight
// limit (see jack::k_max). Distinct from std::domain_error so the CLI can
// map it to the usage/capacity exit code.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cbm
