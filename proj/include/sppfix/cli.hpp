#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sppfix/geometry.hpp"
#include "sppfix/json_io.hpp"
#include "sppfix/sppfix_core.hpp"

namespace sppfix {

// Exit codes: 0 success, 1 input or iteration error, 2 certification target
// not reached within the iteration budget.

struct RunConfig {
  Method method = Method::newton;
  bool rational = false;
  long float_bits = 256;
  long max_iters = 100;
  std::optional<long> target_bits;
  bool json = false;
  bool emit_trace = false;
};

namespace cli_detail {

inline Method parse_method(const std::string& s) {
  if (s == "kleene") return Method::kleene;
  if (s == "newton") return Method::newton;
  if (s == "dnm") return Method::dnm;
  if (s == "tangent") return Method::tangent;
  raise(errc::invalid_argument, "unknown method '" + s + "'");
}

inline void parse_scalar(const std::string& s, RunConfig& cfg) {
  if (s == "rational") {
    cfg.rational = true;
    return;
  }
  if (s == "float") {
    cfg.rational = false;
    cfg.float_bits = 256;
    return;
  }
  if (s.rfind("float:", 0) == 0) {
    cfg.rational = false;
    cfg.float_bits = std::stol(s.substr(6));
    if (cfg.float_bits < 64) raise(errc::invalid_argument, "float precision must be >= 64 bits");
    return;
  }
  raise(errc::invalid_argument, "unknown scalar mode '" + s + "' (rational | float:<bits>)");
}

inline std::string scalar_name(const RunConfig& cfg) {
  return cfg.rational ? "rational" : "float:" + std::to_string(cfg.float_bits);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct LoadedSystem {
  SppSystem system;
  std::vector<PpdaLegendEntry> legend;  // nonempty for pPDA inputs
  bool from_model = false;
};

inline LoadedSystem load_system(const std::string& path) {
  LoadedSystem loaded;
  std::string text = read_file(path);
  bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (!is_json) {
    loaded.system = parse_system(text);
    return loaded;
  }
  Json j = Json::parse(text, nullptr, true, true);
  switch (detect_model_kind(j)) {
    case ModelKind::system:
      loaded.system = system_from_json(j);
      break;
    case ModelKind::back_button:
      loaded.system = back_button_to_spp(back_button_from_json(j));
      loaded.from_model = true;
      break;
    case ModelKind::ppda: {
      auto tr = ppda_to_spp(ppda_from_json(j));
      loaded.system = std::move(tr.system);
      loaded.legend = std::move(tr.legend);
      loaded.from_model = true;
      break;
    }
  }
  return loaded;
}

template <class S>
struct SolveReport {
  long iterations = 0;
  std::vector<S> solution;
  S residual;
  Json trace;
};

template <class S>
SolveReport<S> run_method(const SppSystem& sys, const RunConfig& cfg,
                          const scalar_config_t<S>& scfg) {
  SolveReport<S> report{0, {}, scalar_traits<S>::zero(scfg), Json()};
  StopRule stop = StopRule::iterations(cfg.max_iters);
  switch (cfg.method) {
    case Method::kleene: {
      auto trace = kleene_run<S>(sys, stop, scfg);
      report.iterations = trace.steps();
      report.solution = trace.last();
      report.residual = trace.residuals.back();
      if (cfg.emit_trace) report.trace = trace_to_json(trace);
      break;
    }
    case Method::newton: {
      auto trace = newton_run<S>(sys, stop, scfg);
      report.iterations = trace.steps();
      report.solution = trace.last();
      report.residual = trace.residuals.back();
      if (cfg.emit_trace) report.trace = trace_to_json(trace);
      break;
    }
    case Method::tangent: {
      auto trace = tangent_run<S>(sys, stop, scfg);
      report.iterations = trace.steps();
      report.solution = trace.last();
      report.residual = trace.residuals.back();
      if (cfg.emit_trace) report.trace = trace_to_json(trace);
      break;
    }
    case Method::dnm: {
      auto result = dnm_run<S>(sys, cfg.max_iters, scfg);
      report.iterations = result.newton_steps;
      report.solution = result.value;
      auto fx = sys.eval(result.value, scfg);
      report.residual = detail::residual_inf(sys, result.value, fx, scfg);
      break;
    }
  }
  return report;
}

template <class S>
int emit_solve(const SppSystem& cleaned, const std::vector<std::string>& removed,
               const RunConfig& cfg, const scalar_config_t<S>& scfg, std::ostream& out) {
  auto report = run_method<S>(cleaned, cfg, scfg);
  if (cfg.json) {
    Json j;
    j["method"] = method_name(cfg.method);
    j["scalar"] = scalar_name(cfg);
    j["iterations"] = report.iterations;
    j["residual"] = scalar_traits<S>::print(report.residual);
    Json sol = Json::object();
    for (size_t i = 0; i < cleaned.size(); ++i)
      sol[cleaned.variables[i]] = scalar_traits<S>::print(report.solution[i]);
    for (const auto& name : removed) sol[name] = "0";
    j["solution"] = sol;
    j["removed"] = removed;
    if (cfg.emit_trace) j["trace"] = report.trace;
    out << j.dump(2) << "\n";
  } else {
    out << "method: " << method_name(cfg.method) << "\n";
    out << "scalar: " << scalar_name(cfg) << "\n";
    out << "iterations: " << report.iterations << "\n";
    out << "residual: " << scalar_traits<S>::print(report.residual) << "\n";
    for (size_t i = 0; i < cleaned.size(); ++i)
      out << cleaned.variables[i] << " = " << scalar_traits<S>::print(report.solution[i]) << "\n";
    for (const auto& name : removed) out << name << " = 0 (removed by cleaning)\n";
  }
  return 0;
}

template <class S>
int emit_certify(const SppSystem& cleaned, const RunConfig& cfg, const scalar_config_t<S>& scfg,
                 std::ostream& out) {
  long target = cfg.target_bits.value_or(10);
  auto outcome = decomposed_certify<S>(cleaned, target, cfg.max_iters, scfg);
  const auto& red = outcome.reduction;
  if (cfg.json) {
    Json j;
    j["scalar"] = scalar_name(cfg);
    j["target_bits"] = target;
    j["auxiliary_variables"] = red.reduced.size() - red.original_size;
    Json sccs = Json::array();
    for (const auto& entry : outcome.sccs) {
      if (entry.variable_names.empty()) continue;  // auxiliary-only component
      Json e;
      e["variables"] = entry.variable_names;
      e["iterations"] = entry.iterations;
      e["reached_target"] = entry.reached_target;
      Certificate<S> projected;
      projected.justification = entry.certificate.justification;
      projected.params = entry.certificate.params;
      for (size_t pos : entry.local_positions) {
        projected.lower.push_back(entry.certificate.lower[pos]);
        projected.upper.push_back(entry.certificate.upper[pos]);
      }
      projected.certified_bits = entry.certificate.certified_bits;
      e["certificate"] = certificate_to_json(projected);
      sccs.push_back(e);
    }
    j["sccs"] = sccs;
    Json global;
    Json lower = Json::object(), upper = Json::object();
    for (size_t i = 0; i < red.original_size; ++i) {
      lower[red.reduced.variables[i]] = scalar_traits<S>::print(outcome.lower[i]);
      upper[red.reduced.variables[i]] = scalar_traits<S>::print(outcome.upper[i]);
    }
    global["lower"] = lower;
    global["upper"] = upper;
    global["bits"] = outcome.certified_bits;
    global["certified"] = outcome.globally_certified;
    if (!outcome.globally_certified)
      global["note"] =
          "multiple components: per-component certificates do not track cross-component "
          "error propagation; the composition is NOT certified";
    j["global"] = global;
    out << j.dump(2) << "\n";
  } else {
    out << "scalar: " << scalar_name(cfg) << "\n";
    out << "target bits: " << target << "\n";
    for (const auto& entry : outcome.sccs) {
      if (entry.variable_names.empty()) continue;
      out << "component {";
      for (size_t i = 0; i < entry.variable_names.size(); ++i)
        out << (i ? ", " : " ") << entry.variable_names[i];
      out << " }: " << entry.certificate.certified_bits << " bits after " << entry.iterations
          << " iterations" << (entry.reached_target ? "" : " (target missed)") << "\n";
      for (size_t i = 0; i < entry.variable_names.size(); ++i) {
        size_t pos = entry.local_positions[i];
        out << "  " << entry.variable_names[i] << " in ["
            << scalar_traits<S>::print(entry.certificate.lower[pos]) << ", "
            << scalar_traits<S>::print(entry.certificate.upper[pos]) << "]\n";
      }
    }
    out << "certified bits (min): " << outcome.certified_bits << "\n";
    out << "global enclosure: "
        << (outcome.globally_certified ? "certified (single component)"
                                       : "UNCERTIFIED composition of per-component bounds")
        << "\n";
  }
  return outcome.target_reached ? 0 : 2;
}

inline int emit_decompose(const SppSystem& cleaned, const RunConfig& cfg, std::ostream& out) {
  auto d = scc_decompose(cleaned);
  if (cfg.json) {
    Json j;
    Json sccs = Json::array();
    for (size_t s = 0; s < d.sccs.size(); ++s) {
      Json e;
      e["id"] = s;
      Json members = Json::array();
      for (int v : d.sccs[s]) members.push_back(cleaned.variables[static_cast<size_t>(v)]);
      e["members"] = members;
      e["depth"] = d.depth[s];
      e["trivial"] = static_cast<bool>(d.trivial[s]);
      sccs.push_back(e);
    }
    j["sccs"] = sccs;
    Json edges = Json::array();
    for (auto& [a, b] : d.edges) edges.push_back(Json::array({a, b}));
    j["edges"] = edges;
    j["height"] = d.height;
    j["width"] = d.width;
    out << j.dump(2) << "\n";
  } else {
    for (size_t s = 0; s < d.sccs.size(); ++s) {
      out << "scc " << s << " (depth " << d.depth[s] << (d.trivial[s] ? ", trivial" : "") << "):";
      for (int v : d.sccs[s]) out << " " << cleaned.variables[static_cast<size_t>(v)];
      out << "\n";
    }
    out << "edges:";
    for (auto& [a, b] : d.edges) out << " " << a << "->" << b;
    out << "\nheight: " << d.height << "\nwidth: " << d.width << "\n";
  }
  return 0;
}

inline int emit_convert(const std::string& path, std::ostream& out) {
  std::string text = read_file(path);
  Json j = Json::parse(text, nullptr, true, true);
  switch (detect_model_kind(j)) {
    case ModelKind::back_button:
      out << print_system(back_button_to_spp(back_button_from_json(j)));
      break;
    case ModelKind::ppda: {
      auto tr = ppda_to_spp(ppda_from_json(j));
      for (const auto& e : tr.legend)
        if (e.removed)
          out << "# removed by cleaning: [" << e.from_state << " " << e.symbol << " "
              << e.to_state << "]\n";
        else
          out << "# " << e.variable << " = [" << e.from_state << " " << e.symbol << " "
              << e.to_state << "]\n";
      out << print_system(tr.system);
      break;
    }
    case ModelKind::system:
      out << print_system(system_from_json(j));
      break;
  }
  return 0;
}

inline int emit_bench(int n, int k_max, const RunConfig& cfg, std::ostream& out) {
  auto sys = worst_case_family(n);
  Json rows = Json::array();
  for (int k = 1; k <= k_max; ++k) {
    long iters = static_cast<long>(k) * (1L << (n - 1));
    Json row;
    row["k"] = k;
    row["iterations"] = iters;
    try {
      std::vector<Rational> last;
      if (cfg.rational) {
        auto trace = newton_run<Rational>(sys, StopRule::iterations(iters), {});
        last = trace.last();
      } else {
        scalar_config_t<BigFloat> scfg{static_cast<mpfr_prec_t>(cfg.float_bits)};
        auto trace = newton_run<BigFloat>(sys, StopRule::iterations(iters), scfg);
        last = to_rational_vector(trace.last());
      }
      Rational err = Rational(1) - last[static_cast<size_t>(n - 1)];
      Rational worst(0);
      for (const auto& v : last) {
        Rational gap = Rational(1) - v;
        if (gap > worst) worst = gap;
      }
      std::ostringstream approx;
      approx.precision(6);
      approx << err.get_d();
      row["last_component_error"] = approx.str();
      row["threshold"] = fraction_string(pow2(-k));
      row["error_exceeds_threshold"] = err > pow2(-k);
      row["valid_bits"] = worst > 1 ? 0 : (worst == 0 ? -1 : floor_log2(Rational(1) / worst));
    } catch (const Error& e) {
      if (e.code() != errc::exact_size_exceeded) throw;
      row["skipped"] = "exact iterate size guard exceeded; rerun with --scalar float:<bits>";
    }
    rows.push_back(row);
  }
  if (cfg.json) {
    Json j;
    j["family_size"] = n;
    j["scalar"] = scalar_name(cfg);
    j["rows"] = rows;
    out << j.dump(2) << "\n";
  } else {
    out << "family n=" << n << ", scalar " << scalar_name(cfg) << "\n";
    for (const auto& row : rows) {
      if (row.contains("skipped")) {
        out << "k=" << row["k"] << ": " << row["skipped"].get<std::string>() << "\n";
        continue;
      }
      out << "k=" << row["k"] << " iterations=" << row["iterations"]
          << " last-component error=" << row["last_component_error"].get<std::string>()
          << " (> 2^-k: " << (row["error_exceeds_threshold"].get<bool>() ? "yes" : "no")
          << ", valid bits " << row["valid_bits"] << ")\n";
    }
  }
  return 0;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"least fixed points of monotone polynomial equation systems"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string method_str = "newton", scalar_str = "float:256", file;
  int bench_n = 3, bench_k = 3;

  auto add_common = [&](CLI::App* sub, bool with_file = true) {
    if (with_file) sub->add_option("file", file, "input system (.spp DSL or .json)")->required();
    sub->add_option("--method", method_str, "kleene | newton | dnm | tangent");
    sub->add_option("--scalar", scalar_str, "rational | float:<bits>");
    sub->add_option("--max-iters", cfg.max_iters,
                    "iteration budget (for dnm: the precision parameter i)");
    sub->add_flag("--json", cfg.json, "machine-readable output");
    sub->add_flag("--trace", cfg.emit_trace, "include the full iterate trace (json only)");
  };

  auto* solve = app.add_subcommand("solve", "approximate the least fixed point");
  add_common(solve);
  auto* certify = app.add_subcommand("certify", "two-sided enclosure with valid-bit count");
  add_common(certify);
  long target_bits = 10;
  certify->add_option("--target-bits", target_bits, "certified bits to reach (exit 2 if missed)");
  auto* decompose = app.add_subcommand("decompose", "dependence components and depths");
  add_common(decompose);
  auto* convert = app.add_subcommand("convert", "stochastic model JSON -> equation DSL");
  convert->add_option("file", file, "model .json")->required();
  auto* bench = app.add_subcommand("bench", "slow-convergence family measurements");
  bench->add_option("--n", bench_n, "family size")->check(CLI::Range(1, 20));
  bench->add_option("--k-max", bench_k, "measure k = 1..k_max")->check(CLI::Range(1, 16));
  bench->add_option("--scalar", scalar_str, "rational | float:<bits>");
  bench->add_flag("--json", cfg.json, "machine-readable output");

  std::vector<const char*> argv;
  argv.push_back("sppfix");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    cfg.method = parse_method(method_str);
    parse_scalar(scalar_str, cfg);
    cfg.target_bits = target_bits;

    if (bench->parsed()) {
      if (scalar_str == "float:256" && !bench->count("--scalar")) cfg.rational = true;
      return emit_bench(bench_n, bench_k, cfg, out);
    }
    if (convert->parsed()) return emit_convert(file, out);

    auto loaded = load_system(file);
    auto cleaned = clean(loaded.system);
    if (cleaned.system.size() == 0) {
      err << "error: system empty after cleaning\n";
      return 1;
    }
    if (decompose->parsed()) return emit_decompose(cleaned.system, cfg, out);
    if (certify->parsed()) {
      if (cfg.rational)
        return emit_certify<Rational>(cleaned.system, cfg, {}, out);
      return emit_certify<BigFloat>(cleaned.system, cfg, {cfg.float_bits}, out);
    }
    if (cfg.rational)
      return emit_solve<Rational>(cleaned.system, cleaned.removed, cfg, {}, out);
    return emit_solve<BigFloat>(cleaned.system, cleaned.removed, cfg, {cfg.float_bits}, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sppfix
