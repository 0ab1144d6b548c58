#pragma once

// Column-oriented tables with CSV and JSON writers, plus the conversions
// from each experiment report. CSV: header row, comma separated, '\n' line
// endings, '#' metadata lines first, reals printed with 17 significant
// digits. JSON: {"metadata": {...}, "columns": {name: [values...]}}.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qdurr/analysis.hpp"
#include "qdurr/error.hpp"
#include "qdurr/moments.hpp"
#include "qdurr/statconv.hpp"

namespace qdurr {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_metadata(std::string key, std::string value) {
    metadata_.emplace_back(std::move(key), std::move(value));
  }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw DomainError("row width does not match table columns");
    rows_.push_back(std::move(row));
  }

  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& metadata() const {
    return metadata_;
  }

  void write_csv(std::ostream& out) const {
    for (const auto& [key, value] : metadata_) out << "# " << key << ": " << value << '\n';
    for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
      out << '\n';
    }
  }

  [[nodiscard]] nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : metadata_) meta[key] = value;
    nlohmann::ordered_json cols = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      nlohmann::ordered_json values = nlohmann::ordered_json::array();
      for (const auto& row : rows_) values.push_back(cell_json(row[c]));
      cols[columns_[c]] = std::move(values);
    }
    nlohmann::ordered_json doc;
    doc["metadata"] = std::move(meta);
    doc["columns"] = std::move(cols);
    return doc;
  }

  void write_json(std::ostream& out) const { out << to_json().dump(2) << '\n'; }

  static std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  static std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, std::monostate>) {
            return "";
          } else if constexpr (std::is_same_v<V, double>) {
            return format_real(v);
          } else if constexpr (std::is_same_v<V, std::int64_t>) {
            return std::to_string(v);
          } else {
            return v;
          }
        },
        cell);
  }

  static nlohmann::ordered_json cell_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, std::monostate>) {
            return nullptr;
          } else if constexpr (std::is_same_v<V, double>) {
            if (!std::isfinite(v)) return nullptr;
            return v;
          } else {
            return v;
          }
        },
        cell);
  }

  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::vector<Cell>> rows_;
};

inline Cell order_cell(Order n) {
  if (n.is_infinite()) return std::string("inf");
  return static_cast<std::int64_t>(n.value());
}

inline Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

inline Table to_table(const MomentReport& report) {
  Table t({"n", "q", "varpi", "vartheta", "x", "j", "closed", "series", "abs_dev"});
  for (const auto& r : report.rows) {
    t.add_row({order_cell(r.n), r.q, r.varpi, r.vartheta, r.x, static_cast<std::int64_t>(r.j), r.closed,
               r.series, r.abs_dev});
  }
  return t;
}

inline Table to_table(const RateReport& report) {
  Table t({"n", "q", "varpi", "vartheta", "sup_diff", "omega", "ratio"});
  for (const auto& r : report.rows) {
    t.add_row({static_cast<std::int64_t>(r.n), report.q, report.stancu.varpi, report.stancu.vartheta,
               r.sup_diff, r.omega, optional_cell(r.ratio)});
  }
  return t;
}

inline Table to_table(const std::vector<QToOneRow>& rows, const StancuParams& stancu) {
  Table t({"q", "varpi", "vartheta", "sup_diff"});
  for (const auto& r : rows) t.add_row({r.q, stancu.varpi, stancu.vartheta, r.sup_diff});
  return t;
}

/// Density trajectory rows: n, window_lo, window_hi, gamma, value.
inline Table density_table(const AlphaBetaPair& pair, double gamma, std::span<const std::uint64_t> n_list,
                           std::span<const double> values) {
  Table t({"n", "window_lo", "window_hi", "gamma", "value"});
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const IntegerInterval w = window(pair, n_list[i]);
    t.add_row({static_cast<std::int64_t>(n_list[i]), static_cast<std::int64_t>(w.lo),
               static_cast<std::int64_t>(w.hi), gamma, values[i]});
  }
  return t;
}

inline Table to_table(const KorovkinReport& report, const KorovkinConfig& cfg) {
  Table t({"n", "q", "varpi", "vartheta", "e0", "e1", "e2"});
  for (const auto& r : report.rows) {
    t.add_row({static_cast<std::int64_t>(r.n), r.q, cfg.stancu.varpi, cfg.stancu.vartheta, r.e[0], r.e[1],
               r.e[2]});
  }
  return t;
}

/// Weighted density trajectories of the Korovkin errors, one row per
/// (i, eps, n).
inline Table korovkin_density_table(const KorovkinReport& report, const KorovkinConfig& cfg) {
  Table t({"i", "eps", "n", "window_lo", "window_hi", "gamma", "value"});
  for (const auto& tr : report.trajectories) {
    for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
      const IntegerInterval w = window(cfg.pair, cfg.n_list[k]);
      t.add_row({static_cast<std::int64_t>(tr.i), tr.eps, static_cast<std::int64_t>(cfg.n_list[k]),
                 static_cast<std::int64_t>(w.lo), static_cast<std::int64_t>(w.hi), cfg.gamma,
                 tr.values[k]});
    }
  }
  return t;
}

}  // namespace qdurr
