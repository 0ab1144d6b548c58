#pragma once

#include <cmath>
#include <cstddef>

namespace qdurr {

/// Neumaier's variant of Kahan summation. Terms must be added in a fixed
/// order for results to be reproducible bit for bit.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(double initial) : sum_(initial) {}

  constexpr void add(double term) {
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(double term) {
    add(term);
    return *this;
  }

  [[nodiscard]] constexpr double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Relative-term stopping rule shared by every truncated series: the series
/// is declared converged after `required` consecutive terms satisfy
/// |term| < rel_eps * |partial sum|.
class StoppingRule {
 public:
  explicit StoppingRule(double rel_eps, std::size_t required = 2)
      : rel_eps_(rel_eps), required_(required) {}

  /// Feeds the latest term and the partial sum that already includes it.
  /// `zero_sum_negligible` decides whether a term may count as small while
  /// the partial sum is still exactly zero.
  bool observe(double term, double partial_sum, bool zero_sum_negligible = false) {
    bool small;
    if (partial_sum == 0.0) {
      small = term == 0.0 && zero_sum_negligible;
    } else {
      small = std::fabs(term) < rel_eps_ * std::fabs(partial_sum);
    }
    run_ = small ? run_ + 1 : 0;
    return converged();
  }

  [[nodiscard]] bool converged() const { return run_ >= required_; }

 private:
  double rel_eps_;
  std::size_t required_;
  std::size_t run_ = 0;
};

}  // namespace qdurr
