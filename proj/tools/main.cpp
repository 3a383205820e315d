// conperc: classical and concurrence percolation on (U,V) flowers and
// edge-list topologies. Subcommands mirror the library modules; output is
// CSV (default) or JSON with the resolved configuration echoed as metadata.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "conperc/asymptotics.hpp"
#include "conperc/calculus.hpp"
#include "conperc/detour.hpp"
#include "conperc/flower.hpp"
#include "conperc/network.hpp"
#include "conperc/strength.hpp"
#include "conperc/weights.hpp"

using namespace conperc;
using nlohmann::json;

namespace {

using Cell = std::variant<std::string, double, long long>;

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Cell>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> warnings;
};

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const double x = std::get<double>(c);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  const double x = std::get<double>(c);
  // JSON has no infinities; keep them readable instead of null
  if (!std::isfinite(x)) return cell_text(c);
  return x;
}

void write_csv(const Report& rep, std::ostream& out) {
  for (const auto& [k, v] : rep.config) {
    out << "# " << k << "=" << cell_text(v) << "\n";
  }
  for (const auto& w : rep.warnings) out << "# warning: " << w << "\n";
  for (std::size_t i = 0; i < rep.columns.size(); ++i) {
    out << (i ? "," : "") << rep.columns[i];
  }
  out << "\n";
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << cell_text(row[i]);
    }
    out << "\n";
  }
}

void write_json(const Report& rep, std::ostream& out) {
  json doc;
  doc["command"] = rep.command;
  json cfg = json::object();
  for (const auto& [k, v] : rep.config) cfg[k] = cell_json(v);
  doc["config"] = cfg;
  doc["columns"] = rep.columns;
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[rep.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(obj);
  }
  doc["rows"] = rows;
  doc["warnings"] = rep.warnings;
  out << doc.dump(2) << "\n";
}

void emit(const Report& rep, const std::string& format,
          const std::string& output) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!output.empty()) {
    std::filesystem::path path(output);
    if (path.is_relative()) {
      if (const char* dir = std::getenv("CONPERC_OUTPUT_DIR")) {
        path = std::filesystem::path(dir) / path;
      }
    }
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + output);
    out = &file;
  }
  if (format == "json") {
    write_json(rep, *out);
  } else {
    write_csv(rep, *out);
  }
}

std::vector<Calculus> parse_calculi(const std::string& name) {
  if (name == "classical") return {Calculus::Classical};
  if (name == "quantum") return {Calculus::Quantum};
  if (name == "both") return {Calculus::Classical, Calculus::Quantum};
  throw CLI::ValidationError("--calculus must be classical|quantum|both");
}

struct Sweep {
  double start, stop, step;
  std::vector<double> values() const {
    std::vector<double> out;
    // inclusive of both endpoints within half a step
    const int count = int((stop - start) / step + 0.5) + 1;
    for (int i = 0; i < count; ++i) {
      out.push_back(std::min(start + i * step, stop));
    }
    if (out.empty() || stop - out.back() > 0.5 * step) out.push_back(stop);
    return out;
  }
};

Sweep parse_sweep(const std::string& text) {
  Sweep s{};
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw CLI::ValidationError("--sweep expects start:stop:step");
  }
  s.start = std::stod(text.substr(0, c1));
  s.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  s.step = std::stod(text.substr(c2 + 1));
  if (s.step <= 0.0 || s.stop < s.start) {
    throw CLI::ValidationError("--sweep expects start <= stop and step > 0");
  }
  return s;
}

std::pair<int, int> parse_range(const std::string& text, const char* flag) {
  const auto c = text.find(':');
  if (c == std::string::npos) {
    throw CLI::ValidationError(std::string(flag) + " expects A:B");
  }
  const int a = std::stoi(text.substr(0, c));
  const int b = std::stoi(text.substr(c + 1));
  if (b < a) throw CLI::ValidationError(std::string(flag) + ": B >= A");
  return {a, b};
}

double theta_of(Calculus cal, double w) {
  return cal == Calculus::Classical ? p_to_theta(w) : c_to_theta(w);
}

Report run_threshold(const std::vector<Calculus>& cals, int u, int v, int n,
                     double target) {
  Report rep;
  rep.command = "threshold";
  rep.columns = {"calculus", "u", "v", "kind", "n", "target", "w_th",
                 "theta_th"};
  for (Calculus cal : cals) {
    const double wth = threshold_exact(cal, u, v);
    rep.rows.push_back({calculus_name(cal), (long long)u, (long long)v,
                        std::string("exact"), (long long)0, 0.0, wth,
                        theta_of(cal, wth)});
    if (n > 0) {
      const double fs = finite_size_threshold(cal, u, v, n, target);
      rep.rows.push_back({calculus_name(cal), (long long)u, (long long)v,
                          std::string("finite"), (long long)n, target, fs,
                          theta_of(cal, fs)});
    }
  }
  return rep;
}

Report run_exponents(const std::vector<Calculus>& cals, int u, int v,
                     double target, int n_lo, int n_hi) {
  Report rep;
  rep.command = "exponents";
  rep.columns = {"calculus", "quantity", "method", "value", "stderr"};
  for (Calculus cal : cals) {
    const char* name = calculus_name(cal);
    rep.rows.push_back({name, std::string("nu"), std::string("exact"),
                        nu_exact(cal, u, v), 0.0});
    const ScalingFit nu = nu_fit(cal, u, v, n_lo, n_hi, target);
    rep.rows.push_back(
        {name, std::string("nu"), std::string("fit"), nu.exponent,
         nu.stderr_});
    const ScalingFit beta_op = beta_fit(cal, u, v, BetaMethod::OrderParameter);
    rep.rows.push_back({name, std::string("beta"),
                        std::string("order_parameter"), beta_op.exponent,
                        beta_op.stderr_});
    const ScalingFit beta_sl = beta_fit(cal, u, v, BetaMethod::Slope);
    rep.rows.push_back({name, std::string("beta"), std::string("slope"),
                        beta_sl.exponent, beta_sl.stderr_});
    const double ratio = critical_ratio(cal, u, v);
    const double d = dimension(u, v);
    const double df_ratio =
        d * (1.0 + std::log(ratio) / std::log(double(u + v)));
    rep.rows.push_back(
        {name, std::string("d_f"), std::string("ratio"), df_ratio, 0.0});
    const ScalingFit df = fractal_dimension_fit(cal, u, v);
    rep.rows.push_back(
        {name, std::string("d_f"), std::string("fit"), df.exponent,
         df.stderr_});
    rep.rows.push_back({name, std::string("hyperscaling"),
                        std::string("residual"),
                        hyperscaling_residual(cal, u, v), 0.0});
  }
  return rep;
}

Report run_strength(const std::vector<Calculus>& cals, int u, int v, int n,
                    const Sweep& sweep, TransferVariant variant) {
  Report rep;
  rep.command = "strength";
  rep.columns = {"calculus", "w", "ln_strength", "n"};
  for (Calculus cal : cals) {
    for (double w : sweep.values()) {
      rep.rows.push_back({calculus_name(cal), w,
                          strength_iterate(cal, u, v, n, w, variant),
                          (long long)n});
    }
  }
  return rep;
}

Report run_asymptotics(int u, std::optional<double> v,
                       std::optional<double> lnv) {
  Report rep;
  rep.command = "asymptotics";
  rep.columns = {"quantity", "value"};
  const double ln_v = lnv ? *lnv : std::log(*v);
  auto row = [&](const std::string& q, double val) {
    rep.rows.push_back({q, val});
  };
  row("A", a_const(u));
  row("m", m_solve(u, ln_v));
  const Table1Limits t = table1_exponents(u, ln_v);
  row("nu_classical_limit", t.nu_classical);
  row("d_minus_df_classical_limit", t.d_minus_df_classical);
  row("beta_classical_limit", t.beta_classical);
  row("nu_quantum_leading", t.nu_quantum);
  row("d_minus_df_quantum_leading", t.d_minus_df_quantum);
  row("beta_quantum_leading", t.beta_quantum);
  row("lambda_tier1", lambda_tier1(u, ln_v));
  row("lambda_tier2", lambda_tier2(u, ln_v));
  row("lambda_tier3", lambda_tier3(ln_v));
  if (v) {
    row("pth_asymptotic", pth_asymptotic(u, *v));
    row("cth_asymptotic", cth_asymptotic(u, *v));
    row("pth_exact", 1.0 - threshold_gap(Calculus::Classical, u, *v) / *v);
    row("cth_exact", 1.0 - threshold_gap(Calculus::Quantum, u, *v) / *v);
    const auto [pv, cv] = long_path_crossing(u, *v);
    row("long_path_classical", pv);
    row("long_path_quantum", cv);
    row("nu_classical_exact", nu_exact_large_v(Calculus::Classical, u, *v));
    row("nu_quantum_exact", nu_exact_large_v(Calculus::Quantum, u, *v));
  }
  return rep;
}

Report run_decompose(int u, int v, int n, int q) {
  Report rep;
  rep.command = "decompose";
  rep.columns = {"length", "multiplicity"};
  const PathEnsemble ens =
      q > 1 ? flower_detour_ensemble(u, v, n, q) : decompose_paths(u, v, n);
  for (const auto& e : ens.entries) {
    rep.rows.push_back({(long long)e.length, (long long)e.multiplicity});
  }
  return rep;
}

Report run_detour_graph(const std::string& input, int q_min, int q_max,
                        std::uint64_t seed, const DetourOptions& opts) {
  Report rep;
  rep.command = "detour";
  rep.columns = {"q", "calculus", "theta_mean", "theta_stderr", "A",
                 "samples"};
  const EdgeListGraph g = load_edge_list(input);
  if (g.self_loops_skipped) {
    rep.warnings.push_back(std::to_string(g.self_loops_skipped) +
                           " self-loop(s) skipped");
  }
  rep.config.emplace_back("nodes", (long long)g.node_count());
  rep.config.emplace_back("edges", (long long)g.edge_count());
  const ResilienceCurve curve =
      real_network_resilience(g, q_min, q_max, seed, opts);
  for (const auto& w : curve.warnings) rep.warnings.push_back(w);
  for (const auto& pt : curve.points) {
    rep.rows.push_back({(long long)pt.q, calculus_name(pt.cal), pt.theta_mean,
                        pt.theta_stderr, pt.a_factor, (long long)pt.samples});
  }
  return rep;
}

Report run_detour_flower(int u, int v, int q_min, int q_max) {
  Report rep;
  rep.command = "detour";
  rep.columns = {"q", "calculus", "theta_mean", "theta_stderr", "A",
                 "samples"};
  for (int q = q_min; q <= q_max; ++q) {
    const FlowerDetourPoint pt = flower_detour_theory(u, v, double(q));
    const double qv = double(q) * v;
    // theta_mean reports the detoured threshold itself
    const double theta_p = std::numbers::pi / 4.0 - pt.a_p / qv;
    const double theta_c = std::numbers::pi / 4.0 - pt.a_c / qv;
    rep.rows.push_back({(long long)q, std::string("classical"), theta_p, 0.0,
                        pt.a_p, (long long)1});
    rep.rows.push_back({(long long)q, std::string("quantum"), theta_c, 0.0,
                        pt.a_c, (long long)1});
  }
  return rep;
}

Report run_reduce(const std::string& input, long term_a, long term_b,
                  const std::vector<Calculus>& cals, double weight) {
  Report rep;
  rep.command = "reduce";
  rep.columns = {"calculus", "weight", "value"};
  const EdgeListGraph g = load_edge_list(input);
  TwoTerminalNetwork net;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    for (int j : g.neighbors(int(i))) {
      if (int(i) < j) net.add_edge(int(i), j, weight);
    }
  }
  net.a = g.index_of(term_a);
  net.b = g.index_of(term_b);
  for (Calculus cal : cals) {
    rep.rows.push_back(
        {calculus_name(cal), weight, reduce_two_terminal(cal, net)});
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "classical and concurrence percolation on hierarchical (U,V) flowers "
      "and real edge-list topologies"};
  app.require_subcommand(1);

  std::string calculus = "both", format = "csv", output, sweep_text, input;
  std::string qrange_text, transfer = "closed";
  int u = 2, v = 2, n = 0, q_single = 1;
  double target = 0.8, lnv_flag = 0.0, weight = 0.5;
  std::uint64_t seed = 1;
  std::vector<long> terminals;
  DetourOptions dopts;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--calculus", calculus,
                    "classical|quantum|both (default both)");
    cmd->add_option("--format", format, "csv|json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", output,
                    "output path (default stdout; relative paths resolve "
                    "under $CONPERC_OUTPUT_DIR)");
  };
  auto add_uv = [&](CLI::App* cmd) {
    cmd->add_option("--uv",
                    [&u, &v](const std::vector<std::string>& xs) {
                      u = std::stoi(xs[0]);
                      v = std::stoi(xs[1]);
                      return true;
                    },
                    "flower scales U V")
        ->expected(2);
  };

  auto* threshold_cmd =
      app.add_subcommand("threshold", "exact and finite-size thresholds");
  add_uv(threshold_cmd);
  threshold_cmd->add_option("--n", n, "generation for the finite-size value");
  threshold_cmd->add_option("--target", target,
                            "sponge-crossing target (default 0.8)");
  add_common(threshold_cmd);

  auto* exponents_cmd = app.add_subcommand(
      "exponents",
      "nu (exact + fit), beta (both estimators), d_f, hyperscaling residual");
  add_uv(exponents_cmd);
  exponents_cmd->add_option("--target", target,
                            "finite-size fit target (default 0.8)");
  std::string nrange_text = "1:13";
  exponents_cmd->add_option("--nrange", nrange_text,
                            "generations A:B for the nu fit (default 1:13)");
  add_common(exponents_cmd);

  auto* strength_cmd =
      app.add_subcommand("strength", "percolating strength sweep (log scale)");
  add_uv(strength_cmd);
  strength_cmd->add_option("--n", n, "layer count")->required();
  strength_cmd->add_option("--sweep", sweep_text, "weights start:stop:step")
      ->required();
  strength_cmd
      ->add_option("--transfer", transfer, "closed|graph route composition")
      ->check(CLI::IsMember({"closed", "graph"}));
  add_common(strength_cmd);

  auto* asym_cmd = app.add_subcommand(
      "asymptotics", "V -> infinity expansions and Table-1 limits");
  asym_cmd->add_option("--u", u, "shorter scale U")->required();
  auto* vopt = asym_cmd->add_option("--v", v, "longer scale V");
  auto* lnvopt =
      asym_cmd->add_option("--lnv", lnv_flag, "ln V (for very large V)");
  add_common(asym_cmd);

  auto* decompose_cmd = app.add_subcommand(
      "decompose", "edge-disjoint path decomposition of a flower");
  add_uv(decompose_cmd);
  decompose_cmd->add_option("--n", n, "generation")->required();
  decompose_cmd->add_option("--q", q_single,
                            "detour factor (default 1 = undetoured)");
  add_common(decompose_cmd);

  auto* detour_cmd = app.add_subcommand(
      "detour", "anomalous resilience factors A_x(q); reads an edge list or, "
                "with --uv, evaluates the flower theory curve");
  detour_cmd->add_option("--input", input, "edge-list file");
  add_uv(detour_cmd);
  detour_cmd->add_option("--q", qrange_text, "detour factors a:b")->required();
  detour_cmd->add_option("--target", dopts.target,
                         "crossing target (default 0.99)");
  detour_cmd->add_option("--seed", seed, "master seed (default 1)");
  detour_cmd->add_option("--samples", dopts.samples,
                         "rerouted subgraphs per pair (default 20)");
  detour_cmd->add_option("--pairs", dopts.pair_count, "hub pairs (default 10)");
  detour_cmd->add_option("--min-degree", dopts.min_degree,
                         "hub degree cutoff (default 7)");
  detour_cmd->add_flag("--vertex-disjoint", dopts.vertex_disjoint,
                       "forbid shared interior nodes too");
  add_common(detour_cmd);

  auto* reduce_cmd = app.add_subcommand(
      "reduce", "two-terminal reduction of an edge-list network");
  reduce_cmd->add_option("--input", input, "edge-list file")->required();
  reduce_cmd->add_option("--terminals", terminals, "terminal node labels")
      ->expected(2)
      ->required();
  reduce_cmd->add_option("--weight", weight, "uniform link weight")
      ->required();
  add_common(reduce_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    Report rep;
    bool have_lnv = false;
    if (app.got_subcommand(threshold_cmd)) {
      rep = run_threshold(parse_calculi(calculus), u, v, n, target);
    } else if (app.got_subcommand(exponents_cmd)) {
      const auto [na, nb] = parse_range(nrange_text, "--nrange");
      rep = run_exponents(parse_calculi(calculus), u, v, target, na, nb);
    } else if (app.got_subcommand(strength_cmd)) {
      rep = run_strength(parse_calculi(calculus), u, v, n,
                         parse_sweep(sweep_text),
                         transfer == "graph" ? TransferVariant::ReductionGraph
                                             : TransferVariant::ClosedForm);
    } else if (app.got_subcommand(asym_cmd)) {
      have_lnv = lnvopt->count() > 0;
      if (!vopt->count() && !have_lnv) {
        throw CLI::ValidationError("asymptotics needs --v or --lnv");
      }
      rep = run_asymptotics(
          u, vopt->count() ? std::optional<double>(double(v)) : std::nullopt,
          have_lnv ? std::optional<double>(lnv_flag) : std::nullopt);
    } else if (app.got_subcommand(decompose_cmd)) {
      rep = run_decompose(u, v, n, q_single);
    } else if (app.got_subcommand(detour_cmd)) {
      const auto [qa, qb] = parse_range(qrange_text, "--q");
      rep = input.empty() ? run_detour_flower(u, v, qa, qb)
                          : run_detour_graph(input, qa, qb, seed, dopts);
    } else if (app.got_subcommand(reduce_cmd)) {
      rep = run_reduce(input, terminals[0], terminals[1],
                       parse_calculi(calculus), weight);
    }

    rep.config.emplace_back("command", rep.command);
    rep.config.emplace_back("calculus", calculus);
    const bool flower_based =
        rep.command != "reduce" && !(rep.command == "detour" && !input.empty());
    if (flower_based) {
      rep.config.emplace_back("u", (long long)u);
      if (have_lnv) {
        rep.config.emplace_back("lnv", lnv_flag);
      } else {
        rep.config.emplace_back("v", (long long)v);
      }
    }
    if (n > 0) rep.config.emplace_back("n", (long long)n);
    if (!sweep_text.empty()) rep.config.emplace_back("sweep", sweep_text);
    if (!qrange_text.empty()) rep.config.emplace_back("q", qrange_text);
    if (!input.empty()) rep.config.emplace_back("input", input);
    if (rep.command == "detour") {
      rep.config.emplace_back("seed", (long long)seed);
      rep.config.emplace_back("target", dopts.target);
      rep.config.emplace_back("samples", (long long)dopts.samples);
      rep.config.emplace_back("pairs", (long long)dopts.pair_count);
      rep.config.emplace_back("min_degree", (long long)dopts.min_degree);
    } else if (rep.command == "threshold" || rep.command == "exponents") {
      rep.config.emplace_back("target", target);
    } else if (rep.command == "reduce") {
      rep.config.emplace_back("weight", weight);
      rep.config.emplace_back("terminals", std::to_string(terminals[0]) + " " +
                                               std::to_string(terminals[1]));
    } else if (rep.command == "strength") {
      rep.config.emplace_back("transfer", transfer);
    }
    emit(rep, format, output);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
