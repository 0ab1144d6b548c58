#pragma once

// Grid-based modulus of continuity and sup norms, and the experiments that
// check the finite-to-limit rate, the q -> 1 convergence of the limit
// operator, its fixed points and the basis comparison inequality.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdurr/basis.hpp"
#include "qdurr/durrmeyer.hpp"
#include "qdurr/error.hpp"
#include "qdurr/qcore.hpp"

namespace qdurr {

struct GridSpec {
  std::size_t points = 1001;

  [[nodiscard]] double spacing() const { return 1.0 / static_cast<double>(points - 1); }

  /// Uniform points i/(points-1); both endpoints are exact.
  [[nodiscard]] std::vector<double> nodes() const {
    if (points < 2) throw DomainError("grid needs at least 2 points");
    std::vector<double> xs(points);
    const auto last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) xs[i] = static_cast<double>(i) / last;
    return xs;
  }
};

/// Grid estimate of omega(f, t) = sup{|f(x) - f(y)| : |x - y| <= t}: the
/// maximum over grid pairs with |x - y| <= t + h/2. This is a lower bound
/// for the true modulus (up to the half-spacing slack) and converges to it
/// as the grid is refined.
template <RealCallable F>
double modulus_of_continuity(const F& f, double t, const GridSpec& grid = {}) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("omega needs 0 <= t <= 1");
  const auto xs = grid.nodes();
  std::vector<double> values(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) values[i] = static_cast<double>(f(xs[i]));
  const auto reach = static_cast<std::size_t>(std::floor(t / grid.spacing() + 0.5 + 1e-9));
  double omega = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t end = std::min(values.size() - 1, i + reach);
    for (std::size_t j = i + 1; j <= end; ++j) {
      omega = std::max(omega, std::fabs(values[i] - values[j]));
    }
  }
  return omega;
}

template <RealCallable F, RealCallable G>
double sup_norm_diff(const F& f, const G& g, const GridSpec& grid = {}) {
  double sup = 0.0;
  for (const double x : grid.nodes()) {
    const double d = static_cast<double>(f(x)) - static_cast<double>(g(x));
    if (!std::isfinite(d)) throw NumericError("non-finite value at x = " + std::to_string(x));
    sup = std::max(sup, std::fabs(d));
  }
  return sup;
}

inline double sup_abs(std::span<const double> values) {
  double sup = 0.0;
  for (const double v : values) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in sup norm");
    sup = std::max(sup, std::fabs(v));
  }
  return sup;
}

struct RateRow {
  std::uint64_t n;
  double sup_diff;
  double omega;
  std::optional<double> ratio;  ///< sup_diff / omega, absent when omega == 0
};

struct RateReport {
  double q;
  StancuParams stancu;
  std::vector<RateRow> rows;
  double estimated_constant = 0.0;  ///< max ratio over the rows
};

/// ||D_{n,q} f - D_{inf,q} f|| on the grid for each n, alongside
/// omega(f, q^n) and their ratio.
template <RealCallable F>
RateReport rate_experiment(const F& f, double q, const StancuParams& stancu,
                           std::span<const std::uint64_t> n_list, const GridSpec& grid = {},
                           const TruncationPolicy& policy = {}) {
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw DomainError("n_list must be strictly increasing");
  }
  const auto xs = grid.nodes();
  LimitOperator limit(OperatorSpec::limit(q, stancu, policy), f);
  const auto limit_values = limit(xs);
  RateReport report{q, stancu, {}, 0.0};
  for (const std::uint64_t n : n_list) {
    const FiniteOperator finite(OperatorSpec::finite(n, q, stancu, policy), f);
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sup = std::max(sup, std::fabs(finite(xs[i]) - limit_values[i]));
    }
    const double omega = modulus_of_continuity(f, std::pow(q, static_cast<double>(n)), grid);
    RateRow row{n, sup, omega, std::nullopt};
    if (omega > 0.0) {
      row.ratio = sup / omega;
      report.estimated_constant = std::max(report.estimated_constant, *row.ratio);
    }
    report.rows.push_back(row);
  }
  return report;
}

struct QToOneRow {
  double q;
  double sup_diff;
};

/// ||D_{inf,q} f - f|| on the grid for each q.
template <RealCallable F>
std::vector<QToOneRow> q_to_one_experiment(const F& f, const StancuParams& stancu,
                                           std::span<const double> q_list, const GridSpec& grid = {},
                                           const TruncationPolicy& policy = {}) {
  if (!std::is_sorted(q_list.begin(), q_list.end())) throw DomainError("q_list must be increasing");
  const auto xs = grid.nodes();
  std::vector<QToOneRow> rows;
  for (const double q : q_list) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q_list entries must lie in (0, 1)");
    LimitOperator op(OperatorSpec::limit(q, stancu, policy), f);
    double sup = 0.0;
    for (const double x : xs) {
      const double d = op(x) - static_cast<double>(f(x));
      if (!std::isfinite(d)) throw NumericError("non-finite value at x = " + std::to_string(x));
      sup = std::max(sup, std::fabs(d));
    }
    rows.push_back({q, sup});
  }
  return rows;
}

/// ||D_{inf,q} f - f|| on the grid; zero exactly for constant f.
template <RealCallable F>
double fixed_point_check(const F& f, double q, const StancuParams& stancu, const GridSpec& grid = {},
                         const TruncationPolicy& policy = {}) {
  const double qs[] = {q};
  return q_to_one_experiment(f, stancu, qs, grid, policy).front().sup_diff;
}

/// max over k <= n and grid x of
///   |p_{nk} - p_{inf,k}| - q^{n-k}/(1-q) (p_{nk} + p_{inf,k});
/// the comparison inequality holds where this is <= 0.
inline double basis_inequality_check(std::uint64_t n, double q, const GridSpec& grid = {},
                                     const TruncationPolicy& policy = {}) {
  const QParam qp(q);
  if (qp.classical()) throw DomainError("basis inequality needs q < 1");
  const BernsteinRow finite(n, qp);
  LimitBasis limit(qp, policy);
  std::vector<double> pn(n + 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (const double x : grid.nodes()) {
    finite.evaluate(x, pn);
    for (std::uint64_t k = 0; k <= n; ++k) {
      const double pinf = limit.value(k, x);
      const double lhs = std::fabs(pn[k] - pinf);
      const double rhs = std::pow(q, static_cast<double>(n - k)) / (1.0 - q) * (pn[k] + pinf);
      worst = std::max(worst, lhs - rhs);
    }
  }
  return worst;
}

}  // namespace qdurr
