#pragma once

// alpha-beta statistical densities of order gamma, their weighted variant,
// admissible q_n sequences and the Korovkin-type harness that tracks
// ||D_{n,q_n}(t^i) - x^i|| along a sequence of degrees.
//
// Only finite-n trajectories are computed; no limit is ever asserted here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdurr/durrmeyer.hpp"
#include "qdurr/error.hpp"
#include "qdurr/funcreg.hpp"
#include "qdurr/moments.hpp"
#include "qdurr/qcore.hpp"

namespace qdurr {

using IndexSequence = std::function<double(std::uint64_t)>;
using RealSequence = std::function<double(std::uint64_t)>;

/// Window sequences alpha(n) <= beta(n).
struct AlphaBetaPair {
  IndexSequence alpha;
  IndexSequence beta;
  std::string name = "custom";

  /// The classical window [1, n].
  static AlphaBetaPair classical() {
    return {[](std::uint64_t) { return 1.0; }, [](std::uint64_t n) { return static_cast<double>(n); },
            "alpha=1,beta=n"};
  }

  /// Checks monotonicity, beta >= alpha and growth of beta - alpha on
  /// n = first..last.
  void validate(std::uint64_t first, std::uint64_t last) const {
    if (first < 1 || last < first) throw DomainError("probe range must satisfy 1 <= first <= last");
    double prev_a = alpha(first);
    double prev_b = beta(first);
    const double first_gap = prev_b - prev_a;
    double prev_gap = first_gap;
    for (std::uint64_t n = first; n <= last; ++n) {
      const double a = alpha(n);
      const double b = beta(n);
      if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("alpha/beta must be finite");
      if (a < prev_a || b < prev_b) throw DomainError("alpha and beta must be nondecreasing");
      if (b < a) throw DomainError("beta(n) must be >= alpha(n) at n = " + std::to_string(n));
      if (b - a < prev_gap) throw DomainError("beta - alpha must not decrease");
      prev_a = a;
      prev_b = b;
      prev_gap = b - a;
    }
    if (last > first && !(prev_gap > first_gap)) {
      throw DomainError("beta - alpha does not grow on the probed range");
    }
  }
};

struct IndexSet {
  std::function<bool(std::uint64_t)> contains;
  std::string name;

  static IndexSet empty() {
    return {[](std::uint64_t) { return false; }, "empty"};
  }
  static IndexSet squares() {
    return {[](std::uint64_t k) {
              auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(k)));
              while (r * r > k) --r;
              while ((r + 1) * (r + 1) <= k) ++r;
              return r * r == k;
            },
            "squares"};
  }
  static IndexSet multiples(std::uint64_t m) {
    if (m == 0) throw DomainError("multiples:m requires m >= 1");
    return {[m](std::uint64_t k) { return k % m == 0; }, "multiples:" + std::to_string(m)};
  }
  static IndexSet primes() {
    return {[](std::uint64_t k) {
              if (k < 2) return false;
              if (k % 2 == 0) return k == 2;
              for (std::uint64_t d = 3; d * d <= k; d += 2) {
                if (k % d == 0) return false;
              }
              return true;
            },
            "primes"};
  }

  /// squares | primes | multiples:m | empty. expr:... is reserved.
  static IndexSet parse(std::string_view text) {
    if (text == "squares") return squares();
    if (text == "primes") return primes();
    if (text == "empty") return empty();
    if (text.starts_with("multiples:")) {
      const auto v = detail::parse_real(text.substr(10));
      if (!v || *v < 1 || *v != std::floor(*v)) throw DomainError("bad modulus in '" + std::string(text) + "'");
      return multiples(static_cast<std::uint64_t>(*v));
    }
    if (text.starts_with("expr:")) throw DomainError("expr: index sets are not supported");
    throw DomainError("unknown index set '" + std::string(text) + "'");
  }
};

struct DensityQuery {
  AlphaBetaPair pair;
  double gamma = 1.0;
  IndexSet set = IndexSet::empty();

  void validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  }
};

struct WeightSequence {
  RealSequence s;

  static WeightSequence unit() {
    return {[](std::uint64_t) { return 1.0; }};
  }
};

/// Integers in [ceil(alpha(n)), floor(beta(n))].
struct IntegerInterval {
  std::uint64_t lo;
  std::uint64_t hi;

  [[nodiscard]] std::uint64_t size() const { return hi - lo + 1; }
};

inline IntegerInterval window(const AlphaBetaPair& pair, std::uint64_t n) {
  if (n < 1) throw DomainError("window index n must be >= 1");
  const double a = std::ceil(pair.alpha(n));
  const double b = std::floor(pair.beta(n));
  if (!(a >= 0.0) || !(b >= a)) {
    throw DomainError("empty window at n = " + std::to_string(n));
  }
  return {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)};
}

namespace detail {

inline double window_normaliser(const AlphaBetaPair& pair, std::uint64_t n, double gamma) {
  return std::pow(pair.beta(n) - pair.alpha(n) + 1.0, gamma);
}

template <typename Pred>
std::uint64_t count_in_window(const IntegerInterval& w, Pred&& pred) {
  std::uint64_t count = 0;
  for (std::uint64_t k = w.lo;; ++k) {
    if (pred(k)) ++count;
    if (k == w.hi) break;
  }
  return count;
}

}  // namespace detail

/// |K ∩ P_n| / (beta(n) - alpha(n) + 1)^gamma.
inline double empirical_density(const DensityQuery& query, std::uint64_t n) {
  query.validate();
  const IntegerInterval w = window(query.pair, n);
  const std::uint64_t count = detail::count_in_window(w, query.set.contains);
  return static_cast<double>(count) / detail::window_normaliser(query.pair, n, query.gamma);
}

/// Density of the exceedance set {k : |x_k - ell| >= eps} at each n.
inline std::vector<double> ab_stat_trajectory(const RealSequence& x, double ell, double eps,
                                              const AlphaBetaPair& pair, double gamma,
                                              std::span<const std::uint64_t> n_list) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  DensityQuery query{pair, gamma,
                     {[&](std::uint64_t k) { return std::fabs(x(k) - ell) >= eps; }, "exceedance"}};
  std::vector<double> out;
  out.reserve(n_list.size());
  for (const std::uint64_t n : n_list) out.push_back(empirical_density(query, n));
  return out;
}

/// S_n = sum of s_k over P_n.
inline double weight_total(const WeightSequence& weights, const IntegerInterval& w) {
  CompensatedSum total;
  detail::count_in_window(w, [&](std::uint64_t k) {
    const double s = weights.s(k);
    if (!(s >= 0.0)) throw DomainError("weights must be nonnegative");
    total += s;
    return false;
  });
  return total.value();
}

/// |{k in P_n : s_k |x_k - ell| >= eps}| / S_n^gamma at each n.
inline std::vector<double> weighted_trajectory(const RealSequence& x, double ell, double eps,
                                               const AlphaBetaPair& pair, double gamma,
                                               const WeightSequence& weights,
                                               std::span<const std::uint64_t> n_list) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  if (!(weights.s(0) > 0.0)) throw DomainError("weights must satisfy s_0 > 0");
  std::vector<double> out;
  out.reserve(n_list.size());
  for (const std::uint64_t n : n_list) {
    const IntegerInterval w = window(pair, n);
    const double total = weight_total(weights, w);
    if (!(total > 0.0)) throw DomainError("S_n = 0 at n = " + std::to_string(n));
    const std::uint64_t count = detail::count_in_window(
        w, [&](std::uint64_t k) { return weights.s(k) * std::fabs(x(k) - ell) >= eps; });
    out.push_back(static_cast<double>(count) / std::pow(total, gamma));
  }
  return out;
}

/// z_n^gamma(x) = S_n^{-gamma} sum_{k in P_n} s_k x_k.
inline double weighted_mean(const RealSequence& x, const WeightSequence& weights,
                            const AlphaBetaPair& pair, double gamma, std::uint64_t n) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  const IntegerInterval w = window(pair, n);
  const double total = weight_total(weights, w);
  if (!(total > 0.0)) throw DomainError("S_n = 0 at n = " + std::to_string(n));
  CompensatedSum sum;
  detail::count_in_window(w, [&](std::uint64_t k) {
    sum += weights.s(k) * x(k);
    return false;
  });
  return sum.value() / std::pow(total, gamma);
}

/// q_n = a^{1/n}: q_n -> 1, q_n^n = a and 1/[n]_{q_n} -> 0.
inline QParam qn_sequence(double a, std::uint64_t n) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("a must lie in (0, 1)");
  if (n < 1) throw DomainError("n must be >= 1");
  return QParam(std::pow(a, 1.0 / static_cast<double>(n)));
}

struct KorovkinConfig {
  double a = 0.5;
  StancuParams stancu{};
  std::vector<std::uint64_t> n_list{50, 100, 200, 400, 800};
  std::vector<double> grid;
  std::vector<double> eps_list{0.1, 0.01};
  AlphaBetaPair pair = AlphaBetaPair::classical();
  double gamma = 1.0;
  WeightSequence weights = WeightSequence::unit();
  TruncationPolicy policy{};
};

struct KorovkinRow {
  std::uint64_t n;
  double q;
  double e[3];  ///< sup over grid of |D_{n,q_n}(t^i) - x^i|, i = 0, 1, 2
};

struct KorovkinTrajectory {
  int i;
  double eps;
  std::vector<double> values;  ///< one per entry of n_list
};

struct KorovkinReport {
  std::vector<KorovkinRow> rows;
  std::vector<KorovkinTrajectory> trajectories;
};

/// sup over the grid of |closed-form D_{n,q_n}(t^i; x) - x^i|.
inline double korovkin_error_closed_form(double a, const StancuParams& stancu, std::uint64_t n, int i,
                                         std::span<const double> grid) {
  const OperatorSpec spec{Order::finite(n), qn_sequence(a, n), stancu, {}};
  double e = 0.0;
  for (const double x : grid) e = std::max(e, std::fabs(finite_moment(spec, i, x) - std::pow(x, i)));
  return e;
}

/// Series-path errors e_i(n) along n_list and the weighted alpha-beta density
/// trajectories of {k : e_i(k) >= eps}. The per-k sequence inside each window
/// uses the closed-form moments, which are checked against the series path
/// elsewhere.
inline KorovkinReport korovkin_harness(const KorovkinConfig& cfg) {
  if (cfg.grid.empty()) throw DomainError("grid must not be empty");
  if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
      std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end()) {
    throw DomainError("n_list must be strictly increasing");
  }
  KorovkinReport report;
  for (const std::uint64_t n : cfg.n_list) {
    const QParam q = qn_sequence(cfg.a, n);
    const OperatorSpec spec{Order::finite(n), q, cfg.stancu, cfg.policy};
    spec.validate();
    KorovkinRow row{n, q.value(), {0.0, 0.0, 0.0}};
    for (int i = 0; i <= 2; ++i) {
      const FiniteOperator op(spec, [i](double t) { return std::pow(t, i); });
      for (const double x : cfg.grid) {
        row.e[i] = std::max(row.e[i], std::fabs(op(x) - std::pow(x, i)));
      }
    }
    report.rows.push_back(row);
  }
  for (int i = 0; i <= 2; ++i) {
    auto memo = std::make_shared<std::map<std::uint64_t, double>>();
    const RealSequence seq = [&cfg, i, memo](std::uint64_t k) {
      if (k == 0) return std::numeric_limits<double>::infinity();
      const auto it = memo->find(k);
      if (it != memo->end()) return it->second;
      const double e = korovkin_error_closed_form(cfg.a, cfg.stancu, k, i, cfg.grid);
      memo->emplace(k, e);
      return e;
    };
    for (const double eps : cfg.eps_list) {
      report.trajectories.push_back(
          {i, eps, weighted_trajectory(seq, 0.0, eps, cfg.pair, cfg.gamma, cfg.weights, cfg.n_list)});
    }
  }
  return report;
}

}  // namespace qdurr
