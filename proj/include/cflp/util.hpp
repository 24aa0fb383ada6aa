#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace cflp {

// Neumaier-compensated accumulator. Several tests compare sums of cut
// coefficients at tolerances close to machine precision, so plain
// left-to-right summation is not accurate enough.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double kahan_total(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

inline double kahan_dot(std::span<const double> a, std::span<const double> b) {
  KahanSum s;
  for (std::size_t k = 0; k < a.size(); ++k) s.add(a[k] * b[k]);
  return s.value();
}

}  // namespace cflp
