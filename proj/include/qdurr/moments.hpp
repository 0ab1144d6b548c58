#pragma once

// Closed-form moments D(t^j; x), j = 0, 1, 2, of the finite and limit
// operators, the central moments of the finite operator, and a grid
// verifier comparing the closed forms with the series evaluation path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdurr/durrmeyer.hpp"
#include "qdurr/error.hpp"
#include "qdurr/qcore.hpp"

namespace qdurr {

namespace detail {

inline void require_moment_order(int j) {
  if (j < 0 || j > 2) throw DomainError("moment order must be 0, 1 or 2");
}

// The q-integers that appear in every finite moment formula.
struct FiniteMomentTerms {
  double n;       // [n]_q
  double n2;      // [n+2]_q
  double n3;      // [n+3]_q
  double three;   // [3]_q
  double q;
  double varpi;
  double vartheta;

  explicit FiniteMomentTerms(const OperatorSpec& spec) {
    require_finite_spec(spec);
    const std::uint64_t deg = spec.n.value();
    n = q_integer(deg, spec.q);
    n2 = q_integer(deg + 2, spec.q);
    n3 = q_integer(deg + 3, spec.q);
    three = q_integer(3, spec.q);
    q = spec.q.value();
    varpi = spec.stancu.varpi;
    vartheta = spec.stancu.vartheta;
  }
};

}  // namespace detail

/// D_n(t^j; x) in closed form.
inline double finite_moment(const OperatorSpec& spec, int j, double x) {
  detail::require_moment_order(j);
  require_unit_interval(x);
  const detail::FiniteMomentTerms m(spec);
  const double q = m.q;
  const double w = m.varpi;
  const double shifted = m.n + m.vartheta;
  if (j == 0) return 1.0;
  if (j == 1) return (m.n + w * m.n2 + q * x * m.n * m.n) / (m.n2 * shifted);
  const double den = shifted * shifted * m.n2 * m.n3;
  const double n2p = m.n * m.n;
  const double n3p = n2p * m.n;
  const double quad = q * q * q * n3p * (m.n - 1.0) * x * x;
  const double lin = ((q * (1.0 + q) * (1.0 + q) + 2.0 * w * q * q * q * q) * n3p +
                      2.0 * w * q * m.three * n2p) * x;
  const double constant = (1.0 + q + 2.0 * w * q * q * q) * n2p + 2.0 * w * m.three * m.n;
  return (quad + lin) / den + constant / den + w * w / (shifted * shifted);
}

struct CentralMoments {
  double delta;  ///< D_n(t - x; x)
  double gamma;  ///< D_n((t - x)^2; x)
};

/// Central moments as rational functions of x with the coefficients of
/// m2 - 2x m1 + x^2 collected over ([n]+vartheta)^2 [n+2] [n+3].
inline CentralMoments central_moments(const OperatorSpec& spec, double x) {
  require_unit_interval(x);
  const detail::FiniteMomentTerms m(spec);
  const double q = m.q;
  const double w = m.varpi;
  const double shifted = m.n + m.vartheta;
  const double n2p = m.n * m.n;
  const double den = shifted * shifted * m.n2 * m.n3;

  const double delta = (q * n2p / (m.n2 * shifted) - 1.0) * x + (m.n + w * m.n2) / (m.n2 * shifted);

  const double a2 = (q * q * q * n2p * n2p - q * q * q * n2p * m.n -
                     2.0 * q * n2p * m.n3 * shifted + m.n2 * m.n3 * shifted * shifted) / den;
  const double a1 = (q * (1.0 + q) * (1.0 + q) * n2p * m.n + 2.0 * q * w * n2p * m.n3 -
                     (2.0 * m.n + 2.0 * w * m.n2) * m.n3 * shifted) / den;
  const double a0 = ((1.0 + q) * n2p + 2.0 * w * m.n * m.n3) / den + w * w / (shifted * shifted);
  return {delta, a2 * x * x + a1 * x + a0};
}

/// The central moments exactly as printed in the source remark on central
/// moments. The printed gamma differs from m2 - 2x m1 + x^2 (q^4 instead of
/// q^3 on [n]^4, and no varpi^2/([n]+vartheta)^2 term); it is kept only so
/// the discrepancy can be measured.
inline CentralMoments printed_central_moments(const OperatorSpec& spec, double x) {
  require_unit_interval(x);
  const detail::FiniteMomentTerms m(spec);
  const double q = m.q;
  const double w = m.varpi;
  const double shifted = m.n + m.vartheta;
  const double n2p = m.n * m.n;
  const double den = shifted * shifted * m.n2 * m.n3;

  const double delta = (q * n2p / (m.n2 * shifted) - 1.0) * x + (m.n + w * m.n2) / (m.n2 * shifted);
  const double a2 = (std::pow(q, 4) * n2p * n2p - q * q * q * n2p * m.n -
                     2.0 * q * n2p * m.n3 * shifted + m.n2 * m.n3 * shifted * shifted) / den;
  const double a1 = (q * (1.0 + q) * (1.0 + q) * n2p * m.n + 2.0 * q * w * n2p * m.n3 -
                     (2.0 * m.n + 2.0 * w * m.n2) * m.n3 * shifted) / den;
  const double a0 = ((1.0 + q) * n2p + 2.0 * w * m.n * m.n3) / den;
  return {delta, a2 * x * x + a1 * x + a0};
}

/// D_inf(t^j; x) in closed form (numerator shift varpi, denominator shift
/// vartheta).
inline double limit_moment(QParam q, const StancuParams& stancu, int j, double x) {
  detail::require_moment_order(j);
  require_unit_interval(x);
  stancu.validate();
  if (q.classical()) throw DomainError("limit moments require q < 1");
  if (j == 0) return 1.0;
  const double qv = q.value();
  const double c = 1.0 - qv;
  const double w = stancu.varpi;
  const double den = 1.0 + stancu.vartheta * c;
  if (j == 1) return (1.0 + qv * (x - 1.0) + w * c) / den;
  const double q4 = qv * qv * qv * qv;
  const double lin = qv * (1.0 + qv) * (1.0 - qv * qv) + 2.0 * c * qv * w;
  const double constant = ((1.0 + qv) + 2.0 * w + w * w) * c * c;
  return (q4 * x * x + lin * x + constant) / (den * den);
}

/// Points at which closed forms and series evaluations are compared.
/// Combinations of an infinite degree with q = 1 are skipped.
struct MomentGrid {
  std::vector<Order> degrees;
  std::vector<double> qs;
  std::vector<StancuParams> shifts;
  std::vector<double> xs;
  TruncationPolicy policy{};

  static MomentGrid defaults() {
    MomentGrid g;
    g.degrees = {Order::finite(1), Order::finite(2), Order::finite(5), Order::finite(10),
                 Order::finite(25), Order::infinite()};
    g.qs = {0.5, 0.8, 0.95, 1.0};
    g.shifts = {{0.0, 0.0}, {1.0, 2.0}, {0.5, 3.0}};
    for (int i = 0; i <= 10; ++i) g.xs.push_back(i / 10.0);
    return g;
  }
};

struct MomentRow {
  Order n;
  double q;
  double varpi;
  double vartheta;
  double x;
  int j;
  double closed;
  double series;
  double abs_dev;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
};

/// Compares closed-form moments with the operators applied to t^j.
/// A failure of the series path is rethrown with the grid point attached.
inline MomentReport verify_moments(const MomentGrid& grid) {
  if (grid.degrees.empty() || grid.qs.empty() || grid.shifts.empty() || grid.xs.empty()) {
    throw DomainError("moment grid is empty");
  }
  MomentReport report;
  for (const Order n : grid.degrees) {
    for (const double qv : grid.qs) {
      if (n.is_infinite() && qv == 1.0) continue;
      for (const StancuParams& s : grid.shifts) {
        const OperatorSpec spec{n, QParam(qv), s, grid.policy};
        spec.validate();
        for (int j = 0; j <= 2; ++j) {
          auto monomial = [j](double t) { return std::pow(t, j); };
          std::vector<double> series;
          try {
            series = apply_on_points(spec, monomial, grid.xs);
          } catch (const std::exception& e) {
            std::ostringstream where;
            where << e.what() << " [n=" << n.to_string() << ", q=" << qv << ", varpi=" << s.varpi
                  << ", vartheta=" << s.vartheta << ", j=" << j << "]";
            throw NumericError(where.str());
          }
          for (std::size_t i = 0; i < grid.xs.size(); ++i) {
            const double x = grid.xs[i];
            const double closed = n.is_infinite() ? limit_moment(spec.q, s, j, x)
                                                  : finite_moment(spec, j, x);
            const double dev = std::fabs(closed - series[i]);
            report.rows.push_back({n, qv, s.varpi, s.vartheta, x, j, closed, series[i], dev});
            report.max_abs_dev = std::max(report.max_abs_dev, dev);
            if (closed != 0.0) {
              report.max_rel_dev = std::max(report.max_rel_dev, dev / std::fabs(closed));
            }
          }
        }
      }
    }
  }
  return report;
}

}  // namespace qdurr
