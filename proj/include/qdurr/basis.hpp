#pragma once

// Finite q-Bernstein basis p_{nk}(q;x) = [n k]_q x^k (x;q)_{n-k} and the
// limit basis p_{inf,k}(q;x) = x^k (x;q)_inf / (q;q)_k for fixed q < 1.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qdurr/error.hpp"
#include "qdurr/qcore.hpp"
#include "qdurr/summation.hpp"

namespace qdurr {

inline void require_unit_interval(double x, const char* what = "x") {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

/// All basis values p_{n0}, ..., p_{nn} at one point, sharing the Gaussian
/// binomial row and the cumulative Pochhammer products across k.
class BernsteinRow {
 public:
  BernsteinRow(std::uint64_t n, QParam q) : n_(n), q_(q), binomials_(q_binomial_row(n, q)) {}

  [[nodiscard]] std::uint64_t degree() const { return n_; }
  [[nodiscard]] QParam q() const { return q_; }
  [[nodiscard]] std::span<const double> binomials() const { return binomials_; }

  /// Writes p_{nk}(q;x) into out[k]; `out` must hold n+1 values.
  void evaluate(double x, std::span<double> out) const {
    require_unit_interval(x);
    if (out.size() < n_ + 1) throw DomainError("output span too small for basis row");
    // out temporarily holds (x;q)_m for m = 0..n.
    const double qv = q_.value();
    out[0] = 1.0;
    double qs = 1.0;
    for (std::uint64_t m = 1; m <= n_; ++m) {
      out[m] = out[m - 1] * (1.0 - qs * x);
      qs *= qv;
    }
    // Walk k upward while reading (x;q)_{n-k} downward: swap into place.
    for (std::uint64_t lo = 0, hi = n_; lo < hi; ++lo, --hi) std::swap(out[lo], out[hi]);
    double xk = 1.0;
    for (std::uint64_t k = 0; k <= n_; ++k) {
      out[k] = (binomials_[k] * xk) * out[k];
      xk *= x;
    }
  }

  [[nodiscard]] std::vector<double> operator()(double x) const {
    std::vector<double> out(n_ + 1);
    evaluate(x, out);
    return out;
  }

 private:
  std::uint64_t n_;
  QParam q_;
  std::vector<double> binomials_;
};

inline double bernstein_basis(std::uint64_t n, std::int64_t k, QParam q, double x) {
  require_unit_interval(x);
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0.0;
  const auto kk = static_cast<std::uint64_t>(k);
  return q_binomial(n, k, q) * std::pow(x, static_cast<double>(kk)) *
         q_pochhammer(x, q, Order::finite(n - kk));
}

/// Evaluator for the limit basis at a fixed q < 1. Caches log (q;q)_k.
class LimitBasis {
 public:
  explicit LimitBasis(QParam q, TruncationPolicy policy = {}) : q_(q), policy_(policy) {
    if (q.classical()) throw DomainError("limit basis requires q < 1");
    log_qq_.push_back(0.0);
  }

  [[nodiscard]] QParam q() const { return q_; }

  /// log (q;q)_k = sum_{j=1}^k log(1 - q^j).
  double log_q_shifted_factorial(std::uint64_t k) {
    const double lq = q_.log();
    while (log_qq_.size() <= k) {
      const auto j = static_cast<double>(log_qq_.size());
      acc_ += std::log1p(-std::exp(j * lq));
      log_qq_.push_back(acc_.value());
    }
    return log_qq_[k];
  }

  double value(std::uint64_t k, double x) {
    require_unit_interval(x);
    if (x == 1.0) return 0.0;
    if (x == 0.0) return k == 0 ? 1.0 : 0.0;
    const double lp = static_cast<double>(k) * std::log(x) +
                      log_q_pochhammer_infinite(x, q_, policy_) - log_q_shifted_factorial(k);
    return std::exp(lp);
  }

  /// p_{inf,0}(x), p_{inf,1}(x), ... truncated once the terms have
  /// decreased for three consecutive k and both the current term and the
  /// geometric tail bound fall below rel_eps. Empty at x = 1, where every
  /// term vanishes.
  std::vector<double> row(double x) {
    require_unit_interval(x);
    std::vector<double> out;
    if (x == 1.0) return out;
    if (x == 0.0) {
      out.push_back(1.0);
      return out;
    }
    const double lx = std::log(x);
    const double lpoch = log_q_pochhammer_infinite(x, q_, policy_);
    int decreasing = 0;
    for (std::uint64_t k = 0;; ++k) {
      if (k >= policy_.max_terms) throw NumericError("limit basis row exhausted max_terms");
      const double p =
          std::exp(static_cast<double>(k) * lx + lpoch - log_q_shifted_factorial(k));
      out.push_back(p);
      if (k == 0) continue;
      const double prev = out[k - 1];
      decreasing = p < prev ? decreasing + 1 : 0;
      if (decreasing >= 3) {
        const double r = p / prev;
        const double tail = p * r / (1.0 - r);
        if (p <= policy_.rel_eps && tail <= policy_.rel_eps) break;
      }
    }
    return out;
  }

 private:
  QParam q_;
  TruncationPolicy policy_;
  std::vector<double> log_qq_;
  CompensatedSum acc_;
};

inline double limit_basis(std::uint64_t k, QParam q, double x, const TruncationPolicy& policy = {}) {
  LimitBasis basis(q, policy);
  return basis.value(k, x);
}

struct IdentitySums {
  double s0;  ///< sum p_{inf,k}
  double s1;  ///< sum (1 - q^k) p_{inf,k}
  double s2;  ///< sum (1 - q^k)^2 p_{inf,k}
};

inline IdentitySums limit_basis_identity_sums(QParam q, double x, const TruncationPolicy& policy = {}) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("identity sums require x in [0, 1)");
  LimitBasis basis(q, policy);
  const auto row = basis.row(x);
  const double lq = q.log();
  CompensatedSum s0, s1, s2;
  for (std::size_t k = 0; k < row.size(); ++k) {
    const double w = -std::expm1(static_cast<double>(k) * lq);
    s0 += row[k];
    s1 += w * row[k];
    s2 += w * w * row[k];
  }
  return {s0.value(), s1.value(), s2.value()};
}

}  // namespace qdurr
