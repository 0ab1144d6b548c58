#pragma once

// q-calculus primitives: q-integers, q-factorials, Gaussian binomials,
// q-Pochhammer products and the Jackson integral on [0,1].
//
// Every primitive accepts q = 1 and then returns the classical value, so
// the classical Bernstein/Durrmeyer formulas serve as oracles.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qdurr/error.hpp"
#include "qdurr/summation.hpp"

namespace qdurr {

template <typename F>
concept RealCallable = std::regular_invocable<const F&, double> &&
                       std::convertible_to<std::invoke_result_t<const F&, double>, double>;

/// Deformation parameter q in (0, 1].
class QParam {
 public:
  explicit QParam(double q) : q_(q) {
    if (!(q > 0.0 && q <= 1.0)) {
      throw DomainError("q must lie in (0, 1], got " + std::to_string(q));
    }
  }

  [[nodiscard]] double value() const { return q_; }
  [[nodiscard]] bool classical() const { return q_ == 1.0; }
  /// log(q), computed without cancellation for q close to 1.
  [[nodiscard]] double log() const { return std::log1p(q_ - 1.0); }

  friend bool operator==(QParam, QParam) = default;

 private:
  double q_;
};

struct TruncationPolicy {
  double rel_eps = 1e-14;
  std::size_t max_terms = 1'000'000;

  void validate() const {
    if (!(rel_eps > 0.0)) throw DomainError("rel_eps must be positive");
    if (max_terms < 1) throw DomainError("max_terms must be at least 1");
  }
};

/// Degree or product length: a nonnegative integer or infinity.
class Order {
 public:
  static constexpr Order finite(std::uint64_t n) { return Order(n, false); }
  static constexpr Order infinite() { return Order(0, true); }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }
  [[nodiscard]] std::uint64_t value() const {
    if (infinite_) throw DomainError("infinite order has no integer value");
    return n_;
  }
  [[nodiscard]] std::string to_string() const { return infinite_ ? "inf" : std::to_string(n_); }

  friend constexpr bool operator==(Order, Order) = default;

 private:
  constexpr Order(std::uint64_t n, bool inf) : n_(n), infinite_(inf) {}
  std::uint64_t n_;
  bool infinite_;
};

/// [n]_q = (1 - q^n)/(1 - q), or n when q = 1.
inline double q_integer(std::uint64_t n, QParam q) {
  if (n == 0) return 0.0;
  if (q.classical()) return static_cast<double>(n);
  const double lq = q.log();
  return std::expm1(static_cast<double>(n) * lq) / std::expm1(lq);
}

inline double q_factorial(std::uint64_t n, QParam q) {
  double result = 1.0;
  for (std::uint64_t j = 2; j <= n; ++j) {
    result *= q_integer(j, q);
    if (!std::isfinite(result)) {
      throw NumericError("q-factorial overflows at n = " + std::to_string(n));
    }
  }
  return result;
}

/// Row [n choose 0]_q ... [n choose n]_q via the q-Pascal recurrence
/// C(m,k) = C(m-1,k-1) + q^k C(m-1,k). All additions are of nonnegative terms.
inline std::vector<double> q_binomial_row(std::uint64_t n, QParam q) {
  const double qv = q.value();
  std::vector<double> row(n + 1, 0.0);
  std::vector<double> qpow(n + 1, 1.0);
  for (std::uint64_t k = 1; k <= n; ++k) qpow[k] = qpow[k - 1] * qv;
  row[0] = 1.0;
  for (std::uint64_t m = 1; m <= n; ++m) {
    row[m] = 1.0;
    for (std::uint64_t k = m - 1; k >= 1; --k) {
      row[k] = row[k - 1] + qpow[k] * row[k];
    }
  }
  for (double c : row) {
    if (!std::isfinite(c)) {
      throw NumericError("q-binomial row overflows at n = " + std::to_string(n));
    }
  }
  return row;
}

inline double q_binomial(std::uint64_t n, std::int64_t k, QParam q) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0.0;
  const auto kk = static_cast<std::uint64_t>(k);
  // Only the first kk+1 entries of each Pascal row are needed.
  const double qv = q.value();
  std::vector<double> row(kk + 1, 0.0);
  row[0] = 1.0;
  for (std::uint64_t m = 1; m <= n; ++m) {
    const std::uint64_t top = std::min(m, kk);
    for (std::uint64_t j = top; j >= 1; --j) {
      row[j] = row[j - 1] + std::pow(qv, static_cast<double>(j)) * row[j];
    }
  }
  if (!std::isfinite(row[kk])) throw NumericError("q-binomial overflows");
  return row[kk];
}

namespace detail {

// Relative size of the neglected tail of prod_{s>=S} (1 - q^s x), bounded by
// sum_{s>=S} q^s |x| = q^S |x| / (1-q).
inline double pochhammer_tail(double qs_x, double q) { return qs_x / (1.0 - q); }

// Stopping threshold for a series whose terms shrink at least geometrically
// with ratio r: a term below rel_eps (1 - r) |sum| leaves a tail below
// rel_eps |sum|.
inline double geometric_stop_eps(double rel_eps, double r) { return rel_eps * (1.0 - r); }

}  // namespace detail

/// (x; q)_m = prod_{s=0}^{m-1} (1 - q^s x), m finite or infinite.
/// The infinite product requires q < 1.
inline double q_pochhammer(double x, QParam q, Order m, const TruncationPolicy& policy = {}) {
  const double qv = q.value();
  if (!m.is_infinite()) {
    double result = 1.0;
    double qs = 1.0;
    for (std::uint64_t s = 0; s < m.value(); ++s) {
      result *= 1.0 - qs * x;
      qs *= qv;
    }
    return result;
  }
  if (q.classical()) throw DomainError("infinite q-Pochhammer product requires q < 1");
  double result = 1.0;
  double qs = 1.0;
  for (std::size_t s = 0;; ++s) {
    if (s >= policy.max_terms) {
      throw NumericError("infinite q-Pochhammer product exhausted max_terms");
    }
    const double factor = 1.0 - qs * x;
    result *= factor;
    if (result == 0.0) return 0.0;
    qs *= qv;
    if (detail::pochhammer_tail(qs * std::fabs(x), qv) < policy.rel_eps) return result;
  }
}

/// log (x; q)_inf for x < 1, summed in ascending s with compensation.
inline double log_q_pochhammer_infinite(double x, QParam q, const TruncationPolicy& policy = {}) {
  if (q.classical()) throw DomainError("infinite q-Pochhammer product requires q < 1");
  if (!(x < 1.0)) throw DomainError("log (x;q)_inf requires x < 1");
  const double qv = q.value();
  CompensatedSum sum;
  double qs = 1.0;
  for (std::size_t s = 0;; ++s) {
    if (s >= policy.max_terms) {
      throw NumericError("infinite q-Pochhammer product exhausted max_terms");
    }
    sum += std::log1p(-qs * x);
    qs *= qv;
    if (detail::pochhammer_tail(qs * std::fabs(x), qv) < policy.rel_eps) return sum.value();
  }
}

/// Classical integral over [0,1] by adaptive Gauss-Kronrod quadrature.
template <RealCallable F>
double classical_integral(const F& f, const TruncationPolicy& policy = {}) {
  auto checked = [&f](double t) {
    const double v = static_cast<double>(f(t));
    if (!std::isfinite(v)) {
      throw NumericError("integrand is not finite at t = " + std::to_string(t));
    }
    return v;
  };
  const double tol = std::max(policy.rel_eps, 1e-15);
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(checked, 0.0, 1.0, 20, tol);
}

/// Jackson integral (1 - q) sum_{j>=0} q^j f(q^j). At q = 1 this is the
/// Riemann integral and is evaluated by classical_integral.
template <RealCallable F>
double jackson_integral(const F& f, QParam q, const TruncationPolicy& policy = {}) {
  if (q.classical()) return classical_integral(f, policy);
  const double qv = q.value();
  CompensatedSum sum;
  StoppingRule stop(detail::geometric_stop_eps(policy.rel_eps, qv));
  for (std::size_t j = 0;; ++j) {
    if (j >= policy.max_terms) {
      throw NumericError("Jackson integral exhausted max_terms");
    }
    const double node = std::pow(qv, static_cast<double>(j));
    const double fv = static_cast<double>(f(node));
    if (!std::isfinite(fv)) {
      throw NumericError("integrand is not finite at t = " + std::to_string(node));
    }
    const double term = node * fv;
    sum += term;
    if (stop.observe(term, sum.value(), node < policy.rel_eps)) break;
  }
  return (1.0 - qv) * sum.value();
}

}  // namespace qdurr
