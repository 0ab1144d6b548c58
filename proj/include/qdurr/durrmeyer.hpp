#pragma once

// q-Durrmeyer-Stancu operators.
//
// Finite:  D_n(f;x)   = sum_{k=0}^{n} A_{nk}(f) p_{nk}(q;x),
//          A_{nk}(f)  = [n+1]_q q^{-k} int_0^1 f(([n]_q t + varpi)/([n]_q + vartheta)) p_{nk}(q;qt) d_qt
// Limit:   D_inf(f;x) = sum_{k>=0} A_{inf,k}(f) p_{inf,k}(q;x),
//          A_{inf,k}(f) = q^{-k}/(1-q) int_0^1 f((t + (1-q) varpi)/(1 + (1-q) vartheta)) p_{inf,k}(q;qt) d_qt
//
// The numerator shift is always varpi and the denominator shift vartheta;
// the limit inner argument is the n -> inf limit of the finite one.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "qdurr/basis.hpp"
#include "qdurr/error.hpp"
#include "qdurr/qcore.hpp"
#include "qdurr/summation.hpp"

namespace qdurr {

struct StancuParams {
  double varpi = 0.0;
  double vartheta = 0.0;

  void validate() const {
    if (!(varpi >= 0.0 && vartheta >= varpi && std::isfinite(vartheta))) {
      throw DomainError("Stancu shifts must satisfy 0 <= varpi <= vartheta");
    }
  }
};

struct OperatorSpec {
  Order n = Order::finite(1);
  QParam q = QParam(1.0);
  StancuParams stancu{};
  TruncationPolicy policy{};

  static OperatorSpec finite(std::uint64_t n, double q, StancuParams s = {}, TruncationPolicy p = {}) {
    OperatorSpec spec{Order::finite(n), QParam(q), s, p};
    spec.validate();
    return spec;
  }
  static OperatorSpec limit(double q, StancuParams s = {}, TruncationPolicy p = {}) {
    OperatorSpec spec{Order::infinite(), QParam(q), s, p};
    spec.validate();
    return spec;
  }

  void validate() const {
    stancu.validate();
    policy.validate();
    if (n.is_infinite()) {
      if (q.classical()) throw DomainError("the limit operator requires q < 1");
    } else if (n.value() < 1) {
      throw DomainError("operator degree must be positive");
    }
  }
};

/// ([n]_q t + varpi)/([n]_q + vartheta), clamped to [0,1].
inline double finite_inner_argument(double qint_n, const StancuParams& s, double t) {
  return std::clamp((qint_n * t + s.varpi) / (qint_n + s.vartheta), 0.0, 1.0);
}

/// (t + (1-q) varpi)/(1 + (1-q) vartheta), clamped to [0,1].
inline double limit_inner_argument(QParam q, const StancuParams& s, double t) {
  const double c = 1.0 - q.value();
  return std::clamp((t + c * s.varpi) / (1.0 + c * s.vartheta), 0.0, 1.0);
}

namespace detail {

inline double checked_value(double v, double at) {
  if (!std::isfinite(v)) {
    throw NumericError("function value is not finite at t = " + std::to_string(at));
  }
  return v;
}

inline void require_finite_spec(const OperatorSpec& spec) {
  spec.validate();
  if (spec.n.is_infinite()) throw DomainError("finite operator requires a finite degree");
}

inline void require_limit_spec(const OperatorSpec& spec) {
  spec.validate();
  if (!spec.n.is_infinite()) throw DomainError("limit operator requires an infinite degree");
}

}  // namespace detail

/// A_{nk}(f) for a single k via one Jackson integral.
template <RealCallable F>
double coefficient_finite(const OperatorSpec& spec, std::uint64_t k, const F& f) {
  detail::require_finite_spec(spec);
  const std::uint64_t n = spec.n.value();
  if (k > n) throw DomainError("coefficient index exceeds degree");
  const QParam q = spec.q;
  const double qn = q_integer(n, q);
  const double binom = q_binomial(n, static_cast<std::int64_t>(k), q);
  const double qv = q.value();
  auto integrand = [&](double t) {
    const double u = finite_inner_argument(qn, spec.stancu, t);
    const double x = qv * t;
    const double p = binom * std::pow(x, static_cast<double>(k)) *
                     q_pochhammer(x, q, Order::finite(n - k));
    return detail::checked_value(static_cast<double>(f(u)), u) * p;
  };
  const double integral = jackson_integral(integrand, q, spec.policy);
  return q_integer(n + 1, q) * std::pow(qv, -static_cast<double>(k)) * integral;
}

/// A_{n0}(f), ..., A_{nn}(f). For q < 1 every Jackson node t = q^j is
/// visited once and the whole basis row p_{n.}(q; q^{j+1}) is reused by all
/// k; each k keeps its own stopping rule so the values do not depend on
/// which other coefficients are computed alongside.
template <RealCallable F>
std::vector<double> finite_coefficients(const OperatorSpec& spec, const F& f) {
  detail::require_finite_spec(spec);
  const std::uint64_t n = spec.n.value();
  const QParam q = spec.q;
  const double qn = q_integer(n, q);
  const double prefactor = q_integer(n + 1, q);
  std::vector<double> coefficients(n + 1, 0.0);

  if (q.classical()) {
    const auto binom = q_binomial_row(n, q);
    for (std::uint64_t k = 0; k <= n; ++k) {
      auto integrand = [&](double t) {
        const double u = finite_inner_argument(qn, spec.stancu, t);
        const double p = binom[k] * std::pow(t, static_cast<double>(k)) *
                         std::pow(1.0 - t, static_cast<double>(n - k));
        return detail::checked_value(static_cast<double>(f(u)), u) * p;
      };
      coefficients[k] = prefactor * classical_integral(integrand, spec.policy);
    }
    return coefficients;
  }

  const double qv = q.value();
  const BernsteinRow row(n, q);
  std::vector<double> basis(n + 1);
  std::vector<CompensatedSum> sums(n + 1);
  std::vector<StoppingRule> stops;
  stops.reserve(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) {
    stops.emplace_back(detail::geometric_stop_eps(spec.policy.rel_eps, std::pow(q.value(), double(k + 1))));
  }
  std::vector<char> active(n + 1, 1);
  std::uint64_t remaining = n + 1;
  for (std::size_t j = 0; remaining > 0; ++j) {
    if (j >= spec.policy.max_terms) {
      throw NumericError("finite coefficients exhausted max_terms (n = " + std::to_string(n) + ")");
    }
    const double t = std::pow(qv, static_cast<double>(j));
    const double u = finite_inner_argument(qn, spec.stancu, t);
    const double fv = detail::checked_value(static_cast<double>(f(u)), u);
    row.evaluate(std::min(1.0, qv * t), basis);
    for (std::uint64_t k = 0; k <= n; ++k) {
      if (!active[k]) continue;
      const double term = t * fv * basis[k];
      sums[k] += term;
      if (stops[k].observe(term, sums[k].value(), t < spec.policy.rel_eps)) {
        active[k] = 0;
        --remaining;
      }
    }
  }
  for (std::uint64_t k = 0; k <= n; ++k) {
    coefficients[k] =
        prefactor * (1.0 - qv) * std::pow(qv, -static_cast<double>(k)) * sums[k].value();
  }
  return coefficients;
}

/// D_n(f; .) with its coefficients computed once at construction.
class FiniteOperator {
 public:
  template <RealCallable F>
  FiniteOperator(const OperatorSpec& spec, const F& f)
      : spec_(spec), coefficients_(finite_coefficients(spec, f)), row_(spec.n.value(), spec.q) {}

  [[nodiscard]] const OperatorSpec& spec() const { return spec_; }
  [[nodiscard]] std::span<const double> coefficients() const { return coefficients_; }

  double operator()(double x) const {
    std::vector<double> basis(coefficients_.size());
    row_.evaluate(x, basis);
    CompensatedSum sum;
    for (std::size_t k = 0; k < basis.size(); ++k) sum += coefficients_[k] * basis[k];
    return sum.value();
  }

  std::vector<double> operator()(std::span<const double> xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back((*this)(x));
    return out;
  }

 private:
  OperatorSpec spec_;
  std::vector<double> coefficients_;
  BernsteinRow row_;
};

template <RealCallable F>
double apply_finite(const OperatorSpec& spec, const F& f, double x) {
  require_unit_interval(x);
  return FiniteOperator(spec, f)(x);
}

/// D_inf(f; .). Coefficients A_{inf,k} are extended on demand as points
/// closer to 1 require more terms of the k-series; the cache is guarded so
/// one instance may be shared between threads.
class LimitOperator {
 public:
  template <RealCallable F>
  LimitOperator(const OperatorSpec& spec, F f)
      : spec_(validated(spec)),
        f_(std::move(f)),
        basis_(spec.q, spec.policy),
        log_qq_inf_(log_q_pochhammer_infinite(spec.q.value(), spec.q, spec.policy)) {}

  LimitOperator(const LimitOperator&) = delete;
  LimitOperator& operator=(const LimitOperator&) = delete;

  [[nodiscard]] const OperatorSpec& spec() const { return spec_; }

  /// A_{inf,k}(f) = sum_j f(h(q^j)) q^{j(k+1)} (q;q)_inf / ((q;q)_j (q;q)_k),
  /// i.e. the Jackson sum with p_{inf,k}(q; q^{j+1}) written in closed form.
  double coefficient(std::uint64_t k) {
    std::lock_guard lock(mutex_);
    extend_coefficients(k + 1);
    return coefficients_[k];
  }

  double operator()(double x) {
    require_unit_interval(x);
    if (x == 1.0) {
      // Every p_{inf,k}(q;1) vanishes; the operator is continuous at 1 with
      // value lim_k A_{inf,k}(f) = f(h(1)).
      const double u = limit_inner_argument(spec_.q, spec_.stancu, 1.0);
      return detail::checked_value(f_(u), u);
    }
    std::lock_guard lock(mutex_);
    const auto row = basis_.row(x);
    extend_coefficients(row.size());
    CompensatedSum sum;
    for (std::size_t k = 0; k < row.size(); ++k) sum += coefficients_[k] * row[k];
    return sum.value();
  }

  std::vector<double> operator()(std::span<const double> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back((*this)(x));
    return out;
  }

 private:
  static const OperatorSpec& validated(const OperatorSpec& spec) {
    detail::require_limit_spec(spec);
    return spec;
  }

  double node_value(std::size_t j) {
    while (node_values_.size() <= j) {
      const double t = std::pow(spec_.q.value(), static_cast<double>(node_values_.size()));
      const double u = limit_inner_argument(spec_.q, spec_.stancu, t);
      node_values_.push_back(detail::checked_value(f_(u), u));
    }
    return node_values_[j];
  }

  void extend_coefficients(std::size_t count) {
    const double lq = spec_.q.log();
    while (coefficients_.size() < count) {
      const std::uint64_t k = coefficients_.size();
      const double log_k = log_qq_inf_ - basis_.log_q_shifted_factorial(k);
      CompensatedSum sum;
      StoppingRule stop(detail::geometric_stop_eps(spec_.policy.rel_eps, std::exp(double(k + 1) * lq)));
      for (std::size_t j = 0;; ++j) {
        if (j >= spec_.policy.max_terms) {
          throw NumericError("limit coefficient exhausted max_terms (k = " + std::to_string(k) + ")");
        }
        const double jd = static_cast<double>(j);
        const double weight =
            std::exp(jd * static_cast<double>(k + 1) * lq + log_k - basis_.log_q_shifted_factorial(j));
        const double term = weight * node_value(j);
        sum += term;
        if (stop.observe(term, sum.value(), std::exp(jd * lq) < spec_.policy.rel_eps)) break;
      }
      coefficients_.push_back(sum.value());
    }
  }

  OperatorSpec spec_;
  std::function<double(double)> f_;
  LimitBasis basis_;
  double log_qq_inf_;
  std::vector<double> coefficients_;
  std::vector<double> node_values_;
  std::mutex mutex_;
};

template <RealCallable F>
double coefficient_limit(const OperatorSpec& spec, std::uint64_t k, const F& f) {
  LimitOperator op(spec, f);
  return op.coefficient(k);
}

template <RealCallable F>
double apply_limit(const OperatorSpec& spec, const F& f, double x) {
  LimitOperator op(spec, f);
  return op(x);
}

/// D_n(f; x_i) or D_inf(f; x_i) over a set of points, dispatching on spec.n.
template <RealCallable F>
std::vector<double> apply_on_points(const OperatorSpec& spec, const F& f, std::span<const double> xs) {
  if (spec.n.is_infinite()) {
    LimitOperator op(spec, f);
    return op(xs);
  }
  return FiniteOperator(spec, f)(xs);
}

}  // namespace qdurr
