#include "wmopt/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wmopt/construct_a.hpp"
#include "wmopt/construct_b.hpp"
#include "wmopt/errors.hpp"
#include "wmopt/lp.hpp"
#include "wmopt/metrics.hpp"
#include "wmopt/scheme_io.hpp"
#include "wmopt/sim.hpp"

namespace wmopt::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  bool as_json = false;
  std::uint64_t enum_cap = kDefaultEnumerationCap;
  std::string px;
  std::string alpha;
  int t = 0;
  std::string method = "a";
  bool force_pseudo = false;
  std::string keyset = "reduced";
  std::string scheme_path;
  std::string out_path;
  std::string export_lp_path;
  std::string format = "csv";
  std::string qx;
  int m = 1;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t var_cap = kDefaultVariableCap;
  int length = 0;
};

std::string both(const Rational& r) {
  const std::string exact = r.str();
  const std::string dec = r.decimal();
  if (dec == exact) return exact;
  if (dec.find('/') == std::string::npos) return exact + " (" + dec + ")";
  std::ostringstream os;
  os << exact << " (~" << std::setprecision(12) << r.to_double() << ")";
  return os.str();
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ParameterError("cannot write " + path);
  f << text;
}

struct Inputs {
  TokenDistribution px;
  Rational alpha;
};

Inputs parse_inputs(const RunConfig& c) {
  if (c.px.empty()) throw ParameterError("--px is required");
  if (c.alpha.empty()) throw ParameterError("--alpha is required");
  return {TokenDistribution::parse(c.px), Rational::parse(c.alpha)};
}

int summarize(const WatermarkScheme& scheme, const RunConfig& c, std::ostream& out, bool include_scheme) {
  const PropertyReport props = check_scheme(scheme);
  const ErrorReport errs = error_report(scheme);
  const bool ok = props.all_passed() && errs.gap.is_zero() && errs.worst_false_alarm <= scheme.alpha();
  if (c.as_json) {
    json j = {{"method", scheme.provenance().method},
              {"n", scheme.n()},
              {"t", scheme.t()},
              {"alpha", scheme.alpha().str()},
              {"errors", to_json(errs)},
              {"key_support", scheme.key_support()},
              {"keyset_size", scheme.keyset().size()},
              {"properties", to_json(props)},
              {"ok", ok}};
    if (include_scheme) j["scheme"] = scheme_to_json(scheme);
    emit(out, j);
  } else {
    out << "method             " << scheme.provenance().method << "\n";
    out << "N                  " << scheme.n() << "\n";
    out << "T                  " << scheme.t() << "\n";
    out << "alpha              " << both(scheme.alpha()) << "\n";
    for (std::size_t m = 0; m < errs.beta.size(); ++m) {
      const std::string label = "beta_" + std::to_string(m + 1);
      out << label << std::string(19 - label.size(), ' ') << both(errs.beta[m]) << "\n";
    }
    out << "optimum            " << both(errs.optimal_value) << "\n";
    out << "gap                " << both(errs.gap) << "\n";
    out << "worst false alarm  " << both(errs.worst_false_alarm) << "\n";
    out << "key support        " << scheme.key_support() << " of " << scheme.keyset().size() << "\n";
    for (const auto& r : props.results) {
      out << "property " << r.name << ": " << (r.passed ? "pass" : "FAIL") << "\n";
    }
  }
  return ok ? kOk : kPropertyFailure;
}

int cmd_construct(const RunConfig& c, std::ostream& out) {
  const Inputs in = parse_inputs(c);
  WatermarkScheme scheme = [&] {
    if (c.method == "a") return construct_a(in.px, in.alpha, c.t);
    if (c.method == "b") return construct_b(in.px, in.alpha, c.t, c.force_pseudo);
    throw ParameterError("--method must be a or b");
  }();
  if (!c.out_path.empty()) save_scheme_file(scheme, c.out_path);
  return summarize(scheme, c, out, c.out_path.empty());
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const WatermarkScheme scheme = load_scheme_file(c.scheme_path);
  return summarize(scheme, c, out, false);
}

int cmd_optimal(const RunConfig& c, std::ostream& out) {
  const Inputs in = parse_inputs(c);
  const Rational v = optimal_value(in.px, in.alpha, c.t);
  if (c.as_json) {
    emit(out, {{"optimal_value", v.str()}, {"decimal", v.to_double()}});
  } else {
    out << both(v) << "\n";
  }
  return kOk;
}

int cmd_lp(const RunConfig& c, std::ostream& out) {
  const Inputs in = parse_inputs(c);
  const int n = static_cast<int>(in.px.size());
  KeySet keyset = c.keyset == "bijective" ? bijective_keyset(n, c.t)
                  : c.keyset == "reduced" ? enumerate_reduced_keyset(n, c.t, c.enum_cap)
                                          : throw ParameterError("--keyset must be reduced or bijective");
  const LpProblem lp = build_primal(in.px, in.alpha, c.t, keyset, c.var_cap, c.enum_cap);
  if (!c.export_lp_path.empty()) write_text(c.export_lp_path, export_lp(lp));
  const LpSolution sol = solve(lp);
  const Rational formula = optimal_value(in.px, in.alpha, c.t);
  std::optional<DualCheck> dual;
  if (sol.status == LpStatus::optimal) dual = check_dual(lp, sol.dual);

  if (c.as_json) {
    json j = to_json(sol);
    j["keyset"] = c.keyset;
    j["keys"] = keyset.size();
    j["variables"] = lp.num_vars();
    j["inequalities"] = lp.inequalities.size();
    j["equalities"] = lp.equalities.size();
    j["formula_optimum"] = formula.str();
    if (sol.status == LpStatus::optimal) {
      j["gap_to_formula"] = (sol.objective - formula).str();
      j["dual_feasible"] = dual->feasible;
      j["dual_objective"] = dual->objective.str();
    }
    emit(out, j);
  } else {
    out << "key set            " << c.keyset << " (" << keyset.size() << " keys)\n";
    out << "variables          " << lp.num_vars() << "\n";
    out << "rows               " << lp.inequalities.size() << " inequality, " << lp.equalities.size() << " equality\n";
    out << "status             " << to_string(sol.status) << "\n";
    if (sol.status == LpStatus::optimal) {
      out << "LP optimum         " << both(sol.objective) << "\n";
      out << "formula optimum    " << both(formula) << "\n";
      out << "gap                " << both(sol.objective - formula) << "\n";
      out << "dual certificate   " << (dual->feasible ? "feasible" : "INFEASIBLE") << ", objective "
          << both(dual->objective) << "\n";
    }
  }
  if (sol.status != LpStatus::optimal || !dual->feasible || dual->objective != sol.objective) return kPropertyFailure;
  return kOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const WatermarkScheme scheme = load_scheme_file(c.scheme_path);
  std::optional<RationalVector> qx;
  if (!c.qx.empty()) qx = parse_rational_list(c.qx);
  const TrialReport r = monte_carlo(scheme, c.m, c.trials, c.seed, qx, c.workers);
  if (c.as_json) {
    emit(out, to_json(r));
  } else {
    out << "message            " << r.m << "\n";
    out << "trials             " << r.trials << "\n";
    out << "errors             " << r.errors << "\n";
    out << "estimate           " << std::setprecision(8) << r.estimate << " +/- " << r.std_error << "\n";
    out << "exact              " << both(r.exact) << "\n";
    out << "z-score            " << r.z_score << "\n";
  }
  return kOk;
}

int cmd_export(const RunConfig& c, std::ostream& out) {
  const WatermarkScheme scheme = load_scheme_file(c.scheme_path);
  std::string text;
  if (c.format == "csv") {
    text = export_csv(scheme);
  } else if (c.format == "json") {
    text = serialize_scheme(scheme);
  } else {
    throw ParameterError("--format must be csv or json");
  }
  if (c.out_path.empty()) {
    out << text;
  } else {
    write_text(c.out_path, text);
  }
  return kOk;
}

int cmd_keys(const RunConfig& c, std::ostream& out) {
  const KeySet ks = enumerate_reduced_keyset(c.length, c.t, c.enum_cap);
  const auto keys = ks.keys(c.enum_cap);
  if (c.as_json) {
    json arr = json::array();
    for (const auto& k : keys) arr.push_back(k.entries());
    emit(out, {{"length", c.length}, {"t", c.t}, {"keys", arr}});
  } else {
    for (std::size_t i = 0; i < keys.size(); ++i) out << i << " " << keys[i].str() << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Optimal multi-bit watermark scheme construction and verification"};
  app.name("wmopt");
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML key = value file");
  app.add_flag("--json", c.as_json, "Emit machine-readable JSON");
  app.add_option("--enum-cap", c.enum_cap, std::string("Enumeration cap (default from ") + kEnumerationCapEnv + ")");

  auto add_dist = [&](CLI::App* sub) {
    sub->add_option("--px", c.px, "Token distribution, comma separated exact decimals or p/q")->required();
    sub->add_option("--alpha", c.alpha, "False-alarm level in [0,1)")->required();
    sub->add_option("--t", c.t, "Number of messages T")->required();
  };

  CLI::App* construct = app.add_subcommand("construct", "Build a scheme and report its errors");
  add_dist(construct);
  construct->add_option("--method", c.method, "a or b")->check(CLI::IsMember({"a", "b"}));
  construct->add_flag("--force-pseudo", c.force_pseudo, "Construction B: use pseudo tokens even when not needed");
  construct->add_option("--out", c.out_path, "Write the scheme document here");

  CLI::App* verify = app.add_subcommand("verify", "Check the structural properties of a scheme document");
  verify->add_option("scheme", c.scheme_path, "Scheme document")->required();

  CLI::App* optimal = app.add_subcommand("optimal", "Closed-form optimal miss-detection error");
  add_dist(optimal);

  CLI::App* lp = app.add_subcommand("lp", "Solve the primal LP exactly over a key set");
  add_dist(lp);
  lp->add_option("--keyset", c.keyset, "reduced or bijective")->check(CLI::IsMember({"reduced", "bijective"}));
  lp->add_option("--export", c.export_lp_path, "Write the LP in CPLEX LP format");
  lp->add_option("--var-cap", c.var_cap, "Maximum number of table variables");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of an error probability");
  simulate->add_option("scheme", c.scheme_path, "Scheme document")->required();
  simulate->add_option("--m", c.m, "Message (0 for false alarm)");
  simulate->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", c.seed, "Seed");
  simulate->add_option("--qx", c.qx, "Token law for m = 0 (default P_X)");
  simulate->add_option("--workers", c.workers, "Worker threads");

  CLI::App* exporter = app.add_subcommand("export", "Export a scheme as CSV or canonical JSON");
  exporter->add_option("scheme", c.scheme_path, "Scheme document")->required();
  exporter->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  exporter->add_option("--out", c.out_path, "Output path (default stdout)");

  CLI::App* keys = app.add_subcommand("keys", "List the reduced key set in index order");
  keys->add_option("--length", c.length, "Key length L")->required();
  keys->add_option("--t", c.t, "T")->required();

  for (CLI::App* sub : {construct, verify, optimal, lp, simulate, exporter, keys}) sub->fallthrough();

  try {
    c.enum_cap = enumeration_cap_from_env();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*construct) return cmd_construct(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*optimal) return cmd_optimal(c, out);
    if (*lp) return cmd_lp(c, out);
    if (*simulate) return cmd_simulate(c, out);
    if (*exporter) return cmd_export(c, out);
    if (*keys) return cmd_keys(c, out);
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacityError;
  } catch (const InvariantError& e) {
    err << "internal invariant failed: " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kPropertyFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace wmopt::cli
