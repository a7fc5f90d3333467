#pragma once

#include <stdexcept>
#include <string>

namespace oustat {

// Thrown when a computation would exceed its configured budget (series too
// long, rejection sampler out of attempts, parameters outside the supported
// numeric range).  CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an evaluation lands on a sign boundary that the algorithm
// refuses to resolve by guessing (see eval_psi).
class boundary_error : public std::domain_error {
 public:
  explicit boundary_error(const std::string& what) : std::domain_error(what) {}
};

// Invalid arguments (shape mismatches, bad parity, non-coprime pairs) are
// reported with std::invalid_argument; CLI maps those to exit code 2.

}  // namespace oustat
