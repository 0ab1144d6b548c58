#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdurr/qdurr.hpp"

namespace {

using namespace qdurr;

enum Exit : int { kOk = 0, kThreshold = 1, kConfig = 2, kNumeric = 3 };

struct Common {
  std::string out;
  std::string format = "csv";
};

struct Outcome {
  Table table;
  bool passed = true;
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

TruncationPolicy policy_from_env() {
  TruncationPolicy p;
  if (const char* env = std::getenv("QAPPROX_MAX_TERMS")) {
    const auto v = detail::parse_real(env);
    if (!v || *v < 1 || *v != std::floor(*v) || *v > 1e15) {
      throw DomainError(std::string("QAPPROX_MAX_TERMS must be a positive integer, got '") + env + "'");
    }
    p.max_terms = static_cast<std::size_t>(*v);
  }
  return p;
}

// Every option of the subcommand except --out and --help, in declaration
// order, as given or as defaulted.
void echo_config(const CLI::App& sub, Table& table, const TruncationPolicy& policy) {
  table.add_metadata("tool", std::string("qapprox ") + version);
  table.add_metadata("command", sub.get_name());
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names[0] == "help" || names[0] == "out") continue;
    std::string value;
    if (opt->count() > 0) {
      value = opt->get_expected_max() == 0 ? "true" : join(opt->results(), ",");
    } else {
      value = opt->get_expected_max() == 0 ? "false" : opt->get_default_str();
    }
    table.add_metadata(names[0], value);
  }
  table.add_metadata("rel_eps", Table::format_real(policy.rel_eps));
  table.add_metadata("max_terms", std::to_string(policy.max_terms));
}

void write(const Table& table, const Common& common) {
  std::ostringstream buf;
  if (common.format == "json") {
    table.write_json(buf);
  } else {
    table.write_csv(buf);
  }
  if (common.out.empty() || common.out == "-") {
    std::cout << buf.str();
    return;
  }
  std::ofstream file(common.out, std::ios::binary | std::ios::trunc);
  if (!file) throw DomainError("cannot open output file '" + common.out + "'");
  file << buf.str();
  if (!file) throw DomainError("failed writing '" + common.out + "'");
}

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--out", common.out, "output path, stdout when omitted");
  sub->add_option("--format", common.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_stancu(CLI::App* sub, StancuParams& s) {
  sub->add_option("--varpi", s.varpi, "numerator shift")->capture_default_str();
  sub->add_option("--vartheta", s.vartheta, "denominator shift")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Durrmeyer-Stancu operator experiments"};
  app.set_version_flag("--version", std::string("qapprox ") + version);
  app.require_subcommand(1);

  Common common;
  std::function<Outcome(const TruncationPolicy&)> run;

  // eval
  struct {
    std::uint64_t n = 5;
    bool limit = false;
    double q = 0.8;
    StancuParams stancu;
    std::string f = "id";
    std::size_t grid = 101;
  } ev;
  auto* eval = app.add_subcommand("eval", "operator values on a uniform grid");
  eval->add_option("--n", ev.n, "degree")->capture_default_str();
  eval->add_flag("--limit", ev.limit, "use the limit operator");
  eval->add_option("--q", ev.q)->capture_default_str();
  add_stancu(eval, ev.stancu);
  eval->add_option("--f", ev.f, "builtin name or expression in t")->capture_default_str();
  eval->add_option("--grid", ev.grid, "grid points")->capture_default_str();
  eval->callback([&] {
    run = [&](const TruncationPolicy& p) {
      const RealFunction f = make_function(ev.f);
      const OperatorSpec spec = ev.limit ? OperatorSpec::limit(ev.q, ev.stancu, p)
                                         : OperatorSpec::finite(ev.n, ev.q, ev.stancu, p);
      const auto xs = GridSpec{ev.grid}.nodes();
      const auto ys = apply_on_points(spec, f, xs);
      Table t({"x", "value"});
      for (std::size_t i = 0; i < xs.size(); ++i) t.add_row({xs[i], ys[i]});
      return Outcome{std::move(t)};
    };
  });

  // moments-verify
  struct {
    double tol = 1e-9;
    std::vector<std::string> n;
    std::vector<double> q, x;
    std::optional<double> varpi, vartheta;
  } mv;
  auto* moments = app.add_subcommand("moments-verify", "closed-form moments against the series path");
  moments->add_option("--tol", mv.tol, "maximum allowed deviation")->capture_default_str();
  moments->add_option("--n", mv.n, "degrees (integers or inf), default grid when omitted")->delimiter(',');
  moments->add_option("--q", mv.q, "q values")->delimiter(',');
  moments->add_option("--x", mv.x, "evaluation points")->delimiter(',');
  moments->add_option("--varpi", mv.varpi, "single numerator shift");
  moments->add_option("--vartheta", mv.vartheta, "single denominator shift");
  moments->callback([&] {
    run = [&](const TruncationPolicy& p) {
      MomentGrid g = MomentGrid::defaults();
      g.policy = p;
      if (!mv.n.empty()) {
        g.degrees.clear();
        for (const auto& s : mv.n) {
          if (s == "inf") {
            g.degrees.push_back(Order::infinite());
            continue;
          }
          const auto v = detail::parse_real(s);
          if (!v || *v < 1 || *v != std::floor(*v)) throw DomainError("bad degree '" + s + "'");
          g.degrees.push_back(Order::finite(static_cast<std::uint64_t>(*v)));
        }
      }
      if (!mv.q.empty()) g.qs = mv.q;
      if (!mv.x.empty()) g.xs = mv.x;
      if (mv.varpi || mv.vartheta) g.shifts = {{mv.varpi.value_or(0.0), mv.vartheta.value_or(0.0)}};
      const MomentReport report = verify_moments(g);
      Outcome o{to_table(report)};
      o.table.add_metadata("max_abs_dev", Table::format_real(report.max_abs_dev));
      o.table.add_metadata("max_rel_dev", Table::format_real(report.max_rel_dev));
      o.passed = report.max_abs_dev <= mv.tol;
      return o;
    };
  });

  // rate
  struct {
    double q = 0.9;
    StancuParams stancu;
    std::string f = "absdev:0.5";
    std::vector<std::uint64_t> n_list;
    std::size_t grid = 1001;
    std::optional<double> tol;
  } rt;
  for (std::uint64_t n = 5; n <= 40; ++n) rt.n_list.push_back(n);
  auto* rate = app.add_subcommand("rate", "finite-to-limit distance against omega(f, q^n)");
  rate->add_option("--q", rt.q)->capture_default_str();
  add_stancu(rate, rt.stancu);
  rate->add_option("--f", rt.f)->capture_default_str();
  rate->add_option("--n-list", rt.n_list)->delimiter(',')->capture_default_str();
  rate->add_option("--grid", rt.grid)->capture_default_str();
  rate->add_option("--tol", rt.tol, "fail when the last sup_diff exceeds this");
  rate->callback([&] {
    run = [&](const TruncationPolicy& p) {
      const RealFunction f = make_function(rt.f);
      const RateReport report = rate_experiment(f, rt.q, rt.stancu, rt.n_list, GridSpec{rt.grid}, p);
      Outcome o{to_table(report)};
      o.table.add_metadata("estimated_constant", Table::format_real(report.estimated_constant));
      if (rt.tol && !report.rows.empty()) o.passed = report.rows.back().sup_diff <= *rt.tol;
      return o;
    };
  });

  // q1
  struct {
    std::vector<double> q_list{0.9, 0.99, 0.999};
    StancuParams stancu;
    std::string f = "square";
    std::size_t grid = 1001;
    std::optional<double> tol;
  } q1;
  auto* qone = app.add_subcommand("q1", "limit operator against f as q -> 1");
  qone->add_option("--q-list", q1.q_list)->delimiter(',')->capture_default_str();
  add_stancu(qone, q1.stancu);
  qone->add_option("--f", q1.f)->capture_default_str();
  qone->add_option("--grid", q1.grid)->capture_default_str();
  qone->add_option("--tol", q1.tol, "fail when the last sup_diff exceeds this");
  qone->callback([&] {
    run = [&](const TruncationPolicy& p) {
      const RealFunction f = make_function(q1.f);
      const auto rows = q_to_one_experiment(f, q1.stancu, q1.q_list, GridSpec{q1.grid}, p);
      Outcome o{to_table(rows, q1.stancu)};
      if (q1.tol && !rows.empty()) o.passed = rows.back().sup_diff <= *q1.tol;
      return o;
    };
  });

  // fixed
  struct {
    double q = 0.5;
    StancuParams stancu;
    std::string f = "id";
    std::size_t grid = 1001;
  } fx;
  auto* fixed = app.add_subcommand("fixed", "distance of the limit operator from the identity on f");
  fixed->add_option("--q", fx.q)->capture_default_str();
  add_stancu(fixed, fx.stancu);
  fixed->add_option("--f", fx.f)->capture_default_str();
  fixed->add_option("--grid", fx.grid)->capture_default_str();
  fixed->callback([&] {
    run = [&](const TruncationPolicy& p) {
      const RealFunction f = make_function(fx.f);
      const double d = fixed_point_check(f, fx.q, fx.stancu, GridSpec{fx.grid}, p);
      Table t({"q", "varpi", "vartheta", "sup_diff"});
      t.add_row({fx.q, fx.stancu.varpi, fx.stancu.vartheta, d});
      return Outcome{std::move(t)};
    };
  });

  // ineq
  struct {
    std::uint64_t n_max = 15;
    std::vector<double> q{0.5, 0.8};
    std::size_t grid = 101;
    double tol = 1e-12;
  } iq;
  auto* ineq = app.add_subcommand("ineq", "finite against limit basis comparison inequality");
  ineq->add_option("--n", iq.n_max, "largest degree")->capture_default_str();
  ineq->add_option("--q", iq.q)->delimiter(',')->capture_default_str();
  ineq->add_option("--grid", iq.grid)->capture_default_str();
  ineq->add_option("--tol", iq.tol, "allowed excess")->capture_default_str();
  ineq->callback([&] {
    run = [&](const TruncationPolicy& p) {
      Outcome o{Table({"n", "q", "max_excess"})};
      for (const double q : iq.q) {
        for (std::uint64_t n = 1; n <= iq.n_max; ++n) {
          const double excess = basis_inequality_check(n, q, GridSpec{iq.grid}, p);
          o.table.add_row({static_cast<std::int64_t>(n), q, excess});
          if (excess > iq.tol) o.passed = false;
        }
      }
      return o;
    };
  });

  // density
  struct {
    std::string set = "squares";
    double gamma = 1.0;
    std::vector<std::uint64_t> n{10000};
  } dn;
  auto* density = app.add_subcommand("density", "alpha-beta density of an index set");
  density->add_option("--set", dn.set, "squares | primes | multiples:m | empty")->capture_default_str();
  density->add_option("--gamma", dn.gamma)->capture_default_str();
  density->add_option("--n,--n-list", dn.n)->delimiter(',')->capture_default_str();
  density->callback([&] {
    run = [&](const TruncationPolicy&) {
      const DensityQuery query{AlphaBetaPair::classical(), dn.gamma, IndexSet::parse(dn.set)};
      std::vector<double> values;
      for (const std::uint64_t n : dn.n) values.push_back(empirical_density(query, n));
      return Outcome{density_table(query.pair, dn.gamma, dn.n, values)};
    };
  });

  // korovkin
  struct {
    double a = 0.5;
    StancuParams stancu;
    std::vector<std::uint64_t> n_list{50, 100, 200, 400, 800};
    std::vector<double> eps{0.1, 0.01};
    double gamma = 1.0;
    std::size_t grid = 101;
    bool trajectories = false;
  } kv;
  auto* korovkin = app.add_subcommand("korovkin", "Korovkin test-function errors with q_n = a^(1/n)");
  korovkin->add_option("--a", kv.a)->capture_default_str();
  add_stancu(korovkin, kv.stancu);
  korovkin->add_option("--n-list", kv.n_list)->delimiter(',')->capture_default_str();
  korovkin->add_option("--eps", kv.eps)->delimiter(',')->capture_default_str();
  korovkin->add_option("--gamma", kv.gamma)->capture_default_str();
  korovkin->add_option("--grid", kv.grid)->capture_default_str();
  korovkin->add_flag("--trajectories", kv.trajectories, "write the density trajectories instead");
  korovkin->callback([&] {
    run = [&](const TruncationPolicy& p) {
      KorovkinConfig cfg;
      cfg.a = kv.a;
      cfg.stancu = kv.stancu;
      cfg.n_list = kv.n_list;
      cfg.eps_list = kv.eps;
      cfg.gamma = kv.gamma;
      cfg.grid = GridSpec{kv.grid}.nodes();
      cfg.policy = p;
      const KorovkinReport report = korovkin_harness(cfg);
      return Outcome{kv.trajectories ? korovkin_density_table(report, cfg) : to_table(report, cfg)};
    };
  });

  for (auto* sub : {eval, moments, rate, qone, fixed, ineq, density, korovkin}) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const TruncationPolicy policy = policy_from_env();
    Outcome outcome = run(policy);
    const CLI::App* sub = app.get_subcommands().front();
    Table table({});
    echo_config(*sub, table, policy);
    for (const auto& [k, v] : outcome.table.metadata()) table.add_metadata(k, v);
    Table full(outcome.table.columns());
    for (const auto& [k, v] : table.metadata()) full.add_metadata(k, v);
    for (const auto& row : outcome.table.rows()) full.add_row(row);
    write(full, common);
    if (!outcome.passed) {
      std::cerr << "qapprox: threshold not met\n";
      return kThreshold;
    }
    return kOk;
  } catch (const NumericError& e) {
    std::cerr << "qapprox: numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "qapprox: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "qapprox: " << e.what() << '\n';
    return kNumeric;
  }
}
