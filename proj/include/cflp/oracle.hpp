#pragma once

#include <stdexcept>

#include "cflp/instance.hpp"

namespace cflp {

class OracleError : public std::runtime_error {
 public:
  enum class Kind { TooManyFacilities, InfeasibleInstance };
  OracleError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct OracleOptions {
  int max_facilities = 15;   // enumeration refuses beyond 2^15 subsets
  bool cross_validate = false;  // solve assignments with the tableau reference
};

// Ground truth by brute force: every opening subset with enough capacity is
// evaluated with an exact assignment LP, cost ties broken toward the
// lexicographically smallest opening vector. In cross-validation mode the
// assignment LPs run on the independent full-tableau solver instead of the
// revised engine.
Solution solve_exhaustive(const Instance& inst, const OracleOptions& options = {});

}  // namespace cflp
