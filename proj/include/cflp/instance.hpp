#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cflp {

// A capacitated facility location instance: m customers with demands, n
// candidate facilities with opening costs and capacities, and a per-unit
// transportation cost for every (customer, facility) pair.
struct Instance {
  int num_customers = 0;               // m
  int num_facilities = 0;              // n
  std::vector<double> fixed_cost;      // f_j, size n
  std::vector<double> capacity;        // s_j, size n
  std::vector<double> demand;          // d_i, size m
  std::vector<double> transport_cost;  // c_ij, row-major m*n

  double cost(int i, int j) const { return transport_cost[static_cast<std::size_t>(i) * num_facilities + j]; }
  double& cost(int i, int j) { return transport_cost[static_cast<std::size_t>(i) * num_facilities + j]; }

  double total_demand() const;
  double total_capacity() const;
};

// A candidate solution: which facilities are open and the fraction of each
// customer's demand served by each facility.
struct Solution {
  std::vector<int> open;           // y_j in {0,1}, size n
  std::vector<double> assignment;  // x_ij in [0,1], row-major m*n
  double total_cost = 0.0;

  double frac(int i, int j, int n) const { return assignment[static_cast<std::size_t>(i) * n + j]; }
};

// Objective (fixed + transportation) of an explicit (y, x) pair.
double solution_cost(const Instance& inst, const std::vector<int>& open,
                     const std::vector<double>& assignment);

struct Violation {
  enum class Kind {
    DimensionMismatch,
    NonPositiveSize,
    NegativeCost,
    NonPositiveDemand,
    NonPositiveCapacity,
    NonFinite,
    InsufficientCapacity,
  };
  Kind kind;
  int i = -1;  // customer index when applicable
  int j = -1;  // facility index when applicable
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks dimensions, sign constraints, finiteness, and the aggregate
// solvability condition sum(capacity) >= sum(demand). Violations are
// returned as data; nothing throws.
ValidationResult validate_instance(const Instance& inst);

// Deterministic random instance. For a fixed (m, n, seed) the result is
// bitwise identical on every conforming platform. Draw order: all c_ij
// row-major, then f_1..f_n, then d_1..d_m, then s_1..s_n, with
//   c ~ U(50, 100), f ~ U(1000, 1500), d ~ U(50, 100), s ~ U(2000, 2500)
// (open intervals, see SplitMix64::next_open).
Instance generate_instance(int num_customers, int num_facilities, std::uint64_t seed);

// Parse failure for instance files; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Line-oriented text format:
//   cflp 1
//   m n
//   f_1 ... f_n
//   s_1 ... s_n
//   d_1 ... d_m
//   c_11 ... c_1n     (one line per customer)
// Lines whose first non-blank character is '#' are comments. Values are
// written with 17 significant digits so write/read round-trips exactly.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(const Instance& inst, std::ostream& out);
void write_instance_file(const Instance& inst, const std::string& path);

}  // namespace cflp
