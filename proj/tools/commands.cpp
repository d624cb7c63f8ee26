#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "bonusruin/analytics.hpp"
#include "bonusruin/importance.hpp"
#include "bonusruin/oracle.hpp"
#include "bonusruin/simulation.hpp"

namespace bonusruin::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string> with_model(std::vector<std::string> keys) {
  for (auto& k : model_keys()) keys.push_back(k);
  return keys;
}

std::uint64_t resolve_seed(RunConfig& config, Json& metadata) {
  if (!config.has("seed")) {
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    config.set("seed", std::to_string(s));
    metadata["seed_generated"] = true;
  }
  return config.count("seed");
}

std::uint64_t paths(const RunConfig& config, std::uint64_t fallback) {
  const std::uint64_t n = config.count_or("n", fallback);
  if (n == 0) throw ConfigError("n", "n must be at least 1");
  return n;
}

StateLabel initial_state(const RunConfig& config) {
  const std::string s = config.text_or("initial_state", "long");
  if (s == "long" || s == "long_gap" || s == "2") return StateLabel::long_gap;
  if (s == "short" || s == "short_gap" || s == "1") return StateLabel::short_gap;
  throw ConfigError("initial_state", "initial_state must be long or short");
}

CrudeOptions crude_options(const RunConfig& config, const RunOptions& options) {
  CrudeOptions o;
  o.horizon = config.number_or("horizon", o.horizon);
  if (config.has("escape_margin")) o.escape_margin = config.number("escape_margin");
  o.initial_state = initial_state(config);
  o.threads = options.threads;
  return o;
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json estimate_fields(const RuinEstimate& e) {
  return Json{{"estimate", e.estimate},     {"std_error", e.std_error},
              {"ci_lo", e.ci_lo},           {"ci_hi", e.ci_hi},
              {"n_ruined", e.n_ruined},     {"low_information", e.low_information},
              {"horizon", opt(e.horizon)}};
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

void stamp(Table& table, Json seed, Json n, const std::string& estimator, double runtime_ms) {
  for (auto& row : table.rows) {
    row["seed"] = seed;
    row["n"] = n;
    if (row["estimator"].is_null()) row["estimator"] = estimator;
    row["runtime_ms"] = runtime_ms;
  }
}

const std::vector<std::string> kTrailer = {"seed", "n", "estimator", "runtime_ms"};

std::vector<std::string> columns(std::vector<std::string> head) {
  for (const auto& c : kTrailer) {
    if (std::find(head.begin(), head.end(), c) == head.end()) head.push_back(c);
  }
  return head;
}

// --- commands -------------------------------------------------------------

void cmd_check(RunConfig& config, const RunOptions&, CommandOutput& out) {
  config.check_known(with_model({"n", "seed"}));
  const ModelParams params = model_from_config(config);
  const auto start = Clock::now();
  out.table.columns = columns({"npc_holds", "npc_margin", "mean_x1", "mu", "pi1", "pi2", "p11",
                               "p12", "p21", "p22", "mc_mean_x1", "mc_std_error", "mc_sign_agrees"});
  const double margin = npc_margin(params);
  const double mean = mean_cycle_increment(params);
  const SteadyState ss = steady_state(params);
  const TransitionMatrix tm = transition_matrix(params);
  Json row{{"npc_holds", margin < 0.0}, {"npc_margin", margin}, {"mean_x1", mean},
           {"mu", drift_mu(params)},   {"pi1", ss.pi1},         {"pi2", ss.pi2},
           {"p11", tm.p11},            {"p12", tm.p12},         {"p21", tm.p21},
           {"p22", tm.p22}};
  Json seed = nullptr;
  Json n = nullptr;
  if (config.has("n")) {
    const std::uint64_t s = resolve_seed(config, out.metadata);
    const std::uint64_t count = paths(config, 1);
    const auto [mc, se] = mc_mean_x1(params, count, s);
    row["mc_mean_x1"] = mc;
    row["mc_std_error"] = se;
    row["mc_sign_agrees"] = (mc < 0.0) == (mean < 0.0);
    seed = s;
    n = count;
  }
  out.table.add(row);
  stamp(out.table, seed, n, "analytic", elapsed_ms(start));
  std::ostringstream os;
  os << "net profit condition: " << (margin < 0.0 ? "holds" : "fails") << "\n"
     << "margin: " << format_double(margin) << "\n"
     << "E[X1]: " << format_double(mean) << "\n"
     << "pi1: " << format_double(ss.pi1) << "  pi2: " << format_double(ss.pi2) << "\n";
  out.report = os.str();
}

void cmd_kappa(RunConfig& config, const RunOptions& options, CommandOutput& out) {
  config.check_known(model_keys());
  const ModelParams params = model_from_config(config);
  const auto start = Clock::now();
  out.table.columns = columns({"kappa", "v1", "v2", "eigen_residual", "k_tilde", "phi_prime",
                               "kappa_printed_form"});
  const double kappa = solve_kappa(params);
  const EigenPair v = adjustment_eigenvector(params, kappa);
  const KernelMatrix f = map_kernel_mgf(params, kappa);
  const double residual = std::max(std::abs(f.f11 * v.v1 + f.f12 * v.v2 - v.v1),
                                   std::abs(f.f21 * v.v1 + f.f22 * v.v2 - v.v2));
  Json row{{"kappa", kappa}, {"v1", v.v1}, {"v2", v.v2}, {"eigen_residual", residual}};
  try {
    row["k_tilde"] = cramer_upper_constant(params, kappa);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::bound_undefined) throw;
  }
  const AsymptoticReport report = asymptotic_report(params);
  row["phi_prime"] = opt(report.phi_prime_at_kappa);
  if (options.paper_variant) row["kappa_printed_form"] = solve_kappa(params, MgfForm::printed);
  out.table.add(row);
  stamp(out.table, nullptr, nullptr, "analytic", elapsed_ms(start));
  std::ostringstream os;
  os << "kappa: " << format_double(kappa) << "\n"
     << "v: (" << format_double(v.v1) << ", " << format_double(v.v2) << ")\n"
     << "K~: " << (row["k_tilde"].is_null() ? std::string("undefined") : row["k_tilde"].dump())
     << "\n";
  out.report = os.str();
}

void cmd_simulate(RunConfig& config, const RunOptions& options, CommandOutput& out) {
  config.check_known(with_model({"x", "n", "seed", "horizon", "escape_margin", "initial_state"}));
  const ModelParams params = model_from_config(config);
  const std::vector<double> xs = config.numbers("x");
  const std::uint64_t n = paths(config, 100000);
  const std::uint64_t seed = resolve_seed(config, out.metadata);
  const CrudeOptions crude = crude_options(config, options);
  const auto start = Clock::now();
  out.table.columns = columns({"x", "estimate", "std_error", "ci_lo", "ci_hi", "n_ruined",
                               "low_information", "horizon"});
  const auto estimates = crude_mc_ruin_grid(params, xs, n, seed, crude);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Json row{{"x", xs[i]}};
    merge(row, estimate_fields(estimates[i]));
    out.table.add(row);
  }
  stamp(out.table, seed, n, "crude", elapsed_ms(start));
}

void cmd_importance(RunConfig& config, const RunOptions& options, CommandOutput& out) {
  config.check_known(with_model({"x", "n", "seed", "estimator", "step_cap"}));
  const ModelParams params = model_from_config(config);
  const std::vector<double> xs = config.numbers("x");
  const std::uint64_t n = paths(config, 100000);
  const std::uint64_t seed = resolve_seed(config, out.metadata);
  const std::string which = config.text_or("estimator", "both");
  if (which != "map" && which != "macro" && which != "both") {
    throw ConfigError("estimator", "estimator must be map, macro or both");
  }
  ImportanceOptions is;
  is.threads = options.threads;
  is.step_cap = config.count_or("step_cap", kDefaultStepCap);
  const auto start = Clock::now();
  out.table.columns = columns({"x", "estimator", "estimate", "std_error", "ci_lo", "ci_hi",
                               "n_ruined", "kappa", "v1", "v2"});
  const TiltedModel tilt = build_tilted_model(params, solve_kappa(params));
  for (double x : xs) {
    for (const std::string name : {"macro", "map"}) {
      if (which != "both" && which != name) continue;
      const RuinEstimate e = name == "map" ? map_is_ruin(tilt, x, n, seed, is)
                                           : macro_is_ruin(tilt, x, n, seed, is);
      Json row{{"x", x}, {"estimator", name}};
      merge(row, estimate_fields(e));
      row.erase("horizon");
      row.erase("low_information");
      row["kappa"] = tilt.theta;
      row["v1"] = tilt.eigen.v1;
      row["v2"] = tilt.eigen.v2;
      out.table.add(row);
    }
  }
  stamp(out.table, seed, n, "map", elapsed_ms(start));
}

void cmd_oracle(RunConfig& config, const RunOptions&, CommandOutput& out) {
  config.check_known(with_model({"x", "h", "tol", "x_max", "max_iter"}));
  const ModelParams params = model_from_config(config);
  const std::vector<double> xs = config.numbers("x");
  double x_top = 0.0;
  for (double x : xs) {
    if (!(x >= 0.0)) throw ConfigError("x", "x must be nonnegative");
    x_top = std::max(x_top, x);
  }
  const double h = config.number_or("h", default_oracle_step(params));
  const double x_max = config.number_or("x_max", default_oracle_x_max(params, x_top));
  if (x_max < x_top) throw ConfigError("x_max", "x_max must cover every x");
  OracleOptions oo;
  oo.max_iter = config.count_or("max_iter", oo.max_iter);
  const auto start = Clock::now();
  const GridFunction g = solve_integral_equations(params, x_max, h, config.number_or("tol", 1e-10), oo);
  out.table.columns = columns({"x", "psi1", "psi2", "residual", "iterations", "classical"});
  const auto* exp_claims = std::get_if<ExponentialClaims>(&params.claims);
  for (double x : xs) {
    Json row{{"x", x}, {"psi1", g.psi1_at(x)}, {"psi2", g.psi2_at(x)}, {"residual", g.residual},
             {"iterations", g.iterations}};
    if (exp_claims != nullptr && params.lambda1 == params.lambda2) {
      row["classical"] = classical_ruin(params.lambda1, exp_claims->beta, x);
    }
    out.table.add(row);
  }
  stamp(out.table, nullptr, g.grid.size(), "oracle", elapsed_ms(start));
}

void cmd_sweep(RunConfig& config, const RunOptions& options, CommandOutput& out) {
  config.check_known(
      with_model({"x", "xis", "n", "seed", "horizon", "escape_margin", "initial_state"}));
  const std::vector<double> xis = config.numbers("xis");
  if (!config.has("xi")) config.set("xi", format_double(xis.front()));
  const ModelParams params = model_from_config(config);
  const std::vector<double> xs = config.numbers("x");
  const std::uint64_t n = paths(config, 100000);
  const std::uint64_t seed = resolve_seed(config, out.metadata);
  const CrudeOptions crude = crude_options(config, options);
  const auto start = Clock::now();
  const SweepResult sweep = xi_sweep(params, xs, xis, n, seed, crude);
  out.table.columns = columns({"x", "xi", "estimate", "std_error", "ci_lo", "ci_hi", "n_ruined",
                               "low_information", "horizon"});
  for (const SweepRow& r : sweep.rows) {
    Json row{{"x", r.x}, {"xi", r.xi}};
    merge(row, estimate_fields(r.estimate));
    out.table.add(row);
  }
  stamp(out.table, seed, n, "crude_crn", elapsed_ms(start));
}

void cmd_compare(RunConfig& config, const RunOptions& options, CommandOutput& out) {
  config.check_known(
      with_model({"x", "n", "seed", "horizon", "escape_margin", "initial_state", "oracle"}));
  const ModelParams params = model_from_config(config);
  const std::vector<double> xs = config.numbers("x");
  const std::uint64_t n = paths(config, 100000);
  const std::uint64_t seed = resolve_seed(config, out.metadata);
  const CrudeOptions crude = crude_options(config, options);
  const bool with_oracle = config.text_or("oracle", "0") == "1";
  const auto start = Clock::now();
  out.table.columns = columns({"x", "curve", "lambda", "value", "std_error"});
  if (const auto* e = std::get_if<ExponentialClaims>(&params.claims)) {
    const std::pair<const char*, double> curves[] = {
        {"classical_lambda1", params.lambda1},
        {"classical_lambda2", params.lambda2},
        {"classical_mean", 0.5 * (params.lambda1 + params.lambda2)}};
    for (const auto& [name, lambda] : curves) {
      for (double x : xs) {
        const double v = lambda < e->beta ? classical_ruin(lambda, e->beta, x) : 1.0;
        out.table.add(Json{{"x", x}, {"curve", name}, {"lambda", lambda}, {"value", v},
                           {"estimator", "analytic"}});
      }
    }
  }
  const auto estimates = crude_mc_ruin_grid(params, xs, n, seed, crude);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.table.add(Json{{"x", xs[i]}, {"curve", "model"}, {"value", estimates[i].estimate},
                       {"std_error", estimates[i].std_error}, {"estimator", "crude"}});
  }
  if (with_oracle) {
    double x_top = 0.0;
    for (double x : xs) x_top = std::max(x_top, x);
    const GridFunction g = solve_integral_equations(
        params, default_oracle_x_max(params, x_top), default_oracle_step(params), 1e-10);
    for (double x : xs) {
      out.table.add(Json{{"x", x}, {"curve", "oracle"}, {"value", g.psi2_at(x)},
                         {"estimator", "oracle"}});
    }
  }
  stamp(out.table, seed, n, "crude", elapsed_ms(start));
}

using Handler = std::function<void(RunConfig&, const RunOptions&, CommandOutput&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> table = {
      {"check", cmd_check},       {"kappa", cmd_kappa},   {"simulate", cmd_simulate},
      {"importance", cmd_importance}, {"oracle", cmd_oracle}, {"sweep", cmd_sweep},
      {"compare", cmd_compare}};
  return table;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& field, int code,
                  const std::string& message) {
  Json e{{"record", "error"}, {"kind", kind}, {"exit", code}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  err << "bonusruin: " << message << "\n" << e.dump() << "\n";
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter:
    case ErrorKind::degenerate_parameter:
      return kExitConfig;
    case ErrorKind::wrong_regime:
    case ErrorKind::no_adjustment_coefficient:
    case ErrorKind::domain_exhausted:
    case ErrorKind::mgf_domain:
    case ErrorKind::bound_undefined:
      return kExitRegime;
    default:
      return kExitNumerical;
  }
}

std::vector<std::string> command_names() {
  std::vector<std::string> names;
  for (const auto& [name, h] : handlers()) names.push_back(name);
  return names;
}

CommandOutput run_command(const std::string& name, RunConfig config, const RunOptions& options) {
  for (const auto& [command, handler] : handlers()) {
    if (command != name) continue;
    CommandOutput out;
    out.metadata = Json::object();
    out.metadata["record"] = "metadata";
    out.metadata["command"] = name;
    out.metadata["version"] = kVersion;
    if (options.paper_variant) out.metadata["paper_variant"] = true;
    handler(config, options, out);
    Json echo = Json::object();
    for (const auto& [k, v] : config.entries()) echo[k] = v;
    out.metadata["config"] = echo;
    out.metadata["columns"] = out.table.columns;
    return out;
  }
  throw ConfigError("command", "unknown command: " + name);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ruin probabilities for a two-level bonus risk process", "bonusruin"};
  app.require_subcommand(1);
  std::string config_path;
  std::string format_name = "csv";
  std::string output_path;
  unsigned threads = 0;
  bool paper_variant = false;
  std::vector<std::string> overrides;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--format", format_name, "csv or jsonl");
    sub->add_option("--output", output_path, "write rows here instead of stdout");
    sub->add_option("--threads", threads, "worker threads (default BONUSRUIN_THREADS or 1)");
    sub->add_flag("--paper-variant", paper_variant, "also solve with the printed phi form");
    sub->add_option("overrides", overrides, "key=value overrides");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", "", kExitConfig, e.what());
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const Format format = parse_format(format_name);
    RunConfig config;
    if (!config_path.empty()) config.load_file(config_path);
    for (const auto& token : overrides) config.assign(token);
    RunOptions options;
    options.threads = threads;
    options.paper_variant = paper_variant;
    const CommandOutput result = run_command(command, std::move(config), options);
    if (!result.report.empty()) err << result.report;
    if (output_path.empty()) {
      write_table(out, format, result.metadata, result.table);
    } else {
      std::ofstream file(output_path);
      if (!file) throw ConfigError("output", "cannot write " + output_path);
      write_table(file, format, result.metadata, result.table);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    report_error(err, "config", e.field(), kExitConfig, e.what());
    return kExitConfig;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report_error(err, to_string(e.kind()), "", code, e.what());
    return code;
  }
}

}  // namespace bonusruin::cli
