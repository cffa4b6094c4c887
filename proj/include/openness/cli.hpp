#pragma once

// Command-line front end: configuration parsing and the five commands
// (solve, sweep, indifference, pareto, baseline).
//
// Settings come from three layers, later ones winning: built-in defaults, a
// config file (flat `key = value` lines plus an optional [sweep] section), and
// command-line flags.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "openness/bargaining.hpp"
#include "openness/core_model.hpp"
#include "openness/errors.hpp"
#include "openness/regulation.hpp"
#include "openness/serialization.hpp"

namespace openness::cli {

enum class Command { kSolve, kSweep, kIndifference, kPareto, kBaseline };
enum class OutputFormat { kCsv, kJson };

inline constexpr std::string_view kCommandList =
    "solve|sweep|indifference|pareto|baseline";

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::kSolve:
      return "solve";
    case Command::kSweep:
      return "sweep";
    case Command::kIndifference:
      return "indifference";
    case Command::kPareto:
      return "pareto";
    case Command::kBaseline:
      return "baseline";
  }
  return "unknown";
}

inline Command parse_command(std::string_view text) {
  for (auto c : {Command::kSolve, Command::kSweep, Command::kIndifference,
                 Command::kPareto, Command::kBaseline}) {
    if (to_string(c) == text) return c;
  }
  throw UsageError("unknown command '" + std::string(text) +
                   "'; expected one of " + std::string(kCommandList));
}

struct RunConfig {
  Command command = Command::kSolve;
  GameParams params;
  Regulation reg;
  BargainingRule rule = BargainingRule::kNash;
  SweepSpec sweep;
  std::string output_path = "-";
  OutputFormat format = OutputFormat::kCsv;
  // indifference / pareto
  double p_max = 1.0;
  double tol_p = 1e-4;
  std::size_t theta_steps = 21;
  std::size_t weight_steps = 10;
  std::vector<Objective> objectives{Objective::kOmega, Objective::kAlpha1,
                                    Objective::kUG, Objective::kUD};
};

inline SweepSpec default_sweep(Command command) {
  SweepSpec spec;
  if (command == Command::kBaseline) {
    spec.x = {SweepParam::kAlpha0, 0.01, 1.0, 101};
    spec.y = {SweepParam::kEps, 0.0, 1.0, 101};
  }
  return spec;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Keys accepted at the top level of a config file.
inline const std::vector<std::string>& top_level_keys() {
  static const std::vector<std::string> keys{
      "alpha0",  "eps",   "c_omega", "omega_min",   "delta_step",
      "tol",     "theta", "penalty", "rule",        "format",
      "out",     "threads", "p_max", "tol_p",       "theta_steps",
      "weight_steps", "objectives"};
  return keys;
}

inline const std::vector<std::string>& sweep_keys() {
  static const std::vector<std::string> keys{
      "x_param", "x_min", "x_max", "x_steps",
      "y_param", "y_min", "y_max", "y_steps"};
  return keys;
}

inline bool contains(const std::vector<std::string>& keys,
                     const std::string& key) {
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

inline double to_double(const std::string& key, const std::string& value) {
  try {
    return parse_number(value);
  } catch (const ValidationError&) {
    throw ValidationError(key + ": expected a number, got '" + value + "'");
  }
}

inline std::size_t to_count(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ValidationError(key + ": expected a non-negative integer, got '" +
                          value + "'");
  }
  return static_cast<std::size_t>(v);
}

// "name:min:max:steps" -> the four [sweep] keys for axis `prefix`.
inline void expand_axis(const std::string& prefix, const std::string& spec,
                        std::map<std::string, std::string>& settings) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 4) {
    throw UsageError("--" + prefix +
                     "-axis expects name:min:max:steps, got '" + spec + "'");
  }
  settings["sweep." + prefix + "_param"] = parts[0];
  settings["sweep." + prefix + "_min"] = parts[1];
  settings["sweep." + prefix + "_max"] = parts[2];
  settings["sweep." + prefix + "_steps"] = parts[3];
}

}  // namespace detail

/// Parses `key = value` config text. Keys inside [sweep] are returned with a
/// "sweep." prefix. Unknown sections or keys raise UsageError.
inline std::map<std::string, std::string> parse_config_text(
    std::string_view text) {
  std::map<std::string, std::string> out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = raw.substr(0, raw.find_first_of("#;"));
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw UsageError("config line " + std::to_string(lineno) +
                         ": malformed section header");
      }
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "sweep") {
        throw UsageError("config line " + std::to_string(lineno) +
                         ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    }
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value =
        detail::trim(std::string_view(line).substr(eq + 1));
    const bool known = section.empty() ? detail::contains(detail::top_level_keys(), key)
                                       : detail::contains(detail::sweep_keys(), key);
    if (!known) {
      throw UsageError("config line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
    out[section.empty() ? key : section + "." + key] = value;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Builds a RunConfig from command-line arguments (without the program name)
/// and optional config text. When config_text is empty and --config is given,
/// the file is read from disk.
inline RunConfig parse_config(const std::vector<std::string>& args,
                              std::optional<std::string> config_text = {}) {
  if (args.empty()) {
    throw UsageError("missing command; usage: openness-eq <" +
                     std::string(kCommandList) +
                     "> [flags] [--config FILE] [--out PATH] "
                     "[--format csv|json]");
  }

  CLI::App app{"openness-eq"};
  app.set_help_flag();
  std::string command_text;
  app.add_option("command", command_text)->required();
  std::map<std::string, std::string> flags;
  const auto flag = [&](const std::string& name, const std::string& key) {
    app.add_option_function<std::string>(
        "--" + name, [&flags, key](const std::string& v) { flags[key] = v; });
  };
  for (const auto& [name, key] :
       std::vector<std::pair<std::string, std::string>>{
           {"alpha0", "alpha0"},
           {"eps", "eps"},
           {"c-omega", "c_omega"},
           {"omega-min", "omega_min"},
           {"delta-step", "delta_step"},
           {"tol", "tol"},
           {"theta", "theta"},
           {"penalty", "penalty"},
           {"rule", "rule"},
           {"format", "format"},
           {"out", "out"},
           {"threads", "threads"},
           {"p-max", "p_max"},
           {"tol-p", "tol_p"},
           {"theta-steps", "theta_steps"},
           {"weight-steps", "weight_steps"},
           {"objectives", "objectives"}}) {
    flag(name, key);
  }
  std::string x_axis;
  std::string y_axis;
  std::string config_path;
  app.add_option("--x-axis", x_axis);
  app.add_option("--y-axis", y_axis);
  app.add_option("--config", config_path);

  // CLI11 wants argv order reversed when given a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  cfg.command = parse_command(command_text);
  cfg.sweep = default_sweep(cfg.command);
  if (cfg.command == Command::kBaseline) cfg.reg = {};

  if (!config_text && !config_path.empty()) config_text = read_file(config_path);
  std::map<std::string, std::string> settings;
  if (config_text) settings = parse_config_text(*config_text);
  if (!x_axis.empty()) detail::expand_axis("x", x_axis, flags);
  if (!y_axis.empty()) detail::expand_axis("y", y_axis, flags);
  for (const auto& [k, v] : flags) settings[k] = v;

  for (const auto& [key, value] : settings) {
    if (key == "alpha0") cfg.params.alpha0 = detail::to_double(key, value);
    else if (key == "eps") cfg.params.eps = detail::to_double(key, value);
    else if (key == "c_omega") cfg.params.c_omega = detail::to_double(key, value);
    else if (key == "omega_min") cfg.params.omega_min = detail::to_double(key, value);
    else if (key == "delta_step") cfg.params.delta_step = detail::to_double(key, value);
    else if (key == "tol") cfg.params.tol = detail::to_double(key, value);
    else if (key == "theta") cfg.reg.theta = detail::to_double(key, value);
    else if (key == "penalty") cfg.reg.penalty = detail::to_double(key, value);
    else if (key == "rule") cfg.rule = parse_rule(value);
    else if (key == "format") {
      if (value == "csv") cfg.format = OutputFormat::kCsv;
      else if (value == "json") cfg.format = OutputFormat::kJson;
      else throw ValidationError("format must be csv|json, got '" + value + "'");
    } else if (key == "out") cfg.output_path = value;
    else if (key == "threads") cfg.sweep.threads = static_cast<unsigned>(detail::to_count(key, value));
    else if (key == "p_max") cfg.p_max = detail::to_double(key, value);
    else if (key == "tol_p") cfg.tol_p = detail::to_double(key, value);
    else if (key == "theta_steps") cfg.theta_steps = detail::to_count(key, value);
    else if (key == "weight_steps") cfg.weight_steps = detail::to_count(key, value);
    else if (key == "objectives") {
      cfg.objectives.clear();
      std::stringstream ss(value);
      for (std::string item; std::getline(ss, item, ',');) {
        cfg.objectives.push_back(parse_objective(detail::trim(item)));
      }
    } else if (key == "sweep.x_param") cfg.sweep.x.param = parse_sweep_param(value);
    else if (key == "sweep.x_min") cfg.sweep.x.min = detail::to_double(key, value);
    else if (key == "sweep.x_max") cfg.sweep.x.max = detail::to_double(key, value);
    else if (key == "sweep.x_steps") cfg.sweep.x.steps = detail::to_count(key, value);
    else if (key == "sweep.y_param") cfg.sweep.y.param = parse_sweep_param(value);
    else if (key == "sweep.y_min") cfg.sweep.y.min = detail::to_double(key, value);
    else if (key == "sweep.y_max") cfg.sweep.y.max = detail::to_double(key, value);
    else if (key == "sweep.y_steps") cfg.sweep.y.steps = detail::to_count(key, value);
    else throw UsageError("unknown setting '" + key + "'");
  }

  cfg.params.validate();
  cfg.reg.validate();
  cfg.sweep.params = cfg.params;
  cfg.sweep.reg = cfg.reg;
  cfg.sweep.rule = cfg.rule;
  if (cfg.command == Command::kSweep || cfg.command == Command::kPareto ||
      cfg.command == Command::kBaseline) {
    cfg.sweep.validate();
  }
  if (!(cfg.p_max > 0.0)) throw ValidationError("p_max must be > 0");
  if (!(cfg.tol_p > 0.0)) throw ValidationError("tol_p must be > 0");
  if (cfg.theta_steps < 2) throw ValidationError("theta_steps must be >= 2");
  if (cfg.weight_steps < 2) throw ValidationError("weight_steps must be >= 2");
  if (cfg.objectives.empty()) throw ValidationError("objectives must be nonempty");
  return cfg;
}

// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json params_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["command"] = std::string(to_string(cfg.command));
  j["rule"] = std::string(openness::to_string(cfg.rule));
  j["alpha0"] = quantize(cfg.params.alpha0);
  j["eps"] = quantize(cfg.params.eps);
  j["c_omega"] = quantize(cfg.params.c_omega);
  j["omega_min"] = quantize(cfg.params.omega_min);
  j["delta_step"] = quantize(cfg.params.delta_step);
  j["tol"] = quantize(cfg.params.tol);
  j["theta"] = quantize(cfg.reg.theta);
  j["penalty"] = quantize(cfg.reg.penalty);
  return j;
}

inline nlohmann::ordered_json axis_json(const Axis& a) {
  nlohmann::ordered_json j;
  j["param"] = std::string(to_string(a.param));
  j["min"] = quantize(a.min);
  j["max"] = quantize(a.max);
  j["steps"] = a.steps;
  return j;
}

inline std::vector<ResultRow> table_rows(const SweepTable& table) {
  std::vector<ResultRow> rows;
  rows.reserve(table.cells.size());
  for (const auto& cell : table.cells) {
    rows.push_back(make_row(cell.params, cell.reg, cell.eq));
  }
  return rows;
}

struct Artifact {
  std::string text;
  std::string summary;
};

inline Artifact solve_artifact(const RunConfig& cfg) {
  Equilibrium eq = solve_bargain(cfg.params, cfg.reg, cfg.rule);
  eq.region = classify_cell(eq, cfg.reg, solve_baseline(cfg.params, cfg.rule));
  const ResultRow row = make_row(cfg.params, cfg.reg, eq);
  std::ostringstream os;
  if (cfg.format == OutputFormat::kCsv) {
    write_csv(os, {row});
  } else {
    nlohmann::ordered_json j;
    j["spec"] = params_json(cfg);
    j["rows"] = nlohmann::ordered_json::array({to_json(row)});
    os << j.dump(2) << '\n';
  }
  std::ostringstream summary;
  summary << "solve: delta*=" << format_number(eq.profile.delta)
          << " omega*=" << (eq.profile.omega ? format_number(*eq.profile.omega) : "abstain")
          << " u_g=" << format_number(eq.u_g) << " u_d=" << format_number(eq.u_d)
          << " region=" << openness::to_string(*eq.region);
  return {os.str(), summary.str()};
}

inline Artifact sweep_artifact(const RunConfig& cfg) {
  const SweepTable table = run_sweep(cfg.sweep);
  const auto rows = table_rows(table);
  std::ostringstream os;
  if (cfg.format == OutputFormat::kCsv) {
    write_csv(os, rows);
  } else {
    nlohmann::ordered_json j;
    j["spec"] = params_json(cfg);
    j["spec"]["x_axis"] = axis_json(table.spec.x);
    j["spec"]["y_axis"] = axis_json(table.spec.y);
    j["spec"]["baseline"] = to_json(make_row(cfg.params, {}, table.baseline));
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) j["rows"].push_back(to_json(r));
    os << j.dump(2) << '\n';
  }
  std::map<Region, std::size_t> counts;
  for (const auto& cell : table.cells) ++counts[cell.region()];
  std::ostringstream summary;
  summary << to_string(cfg.command) << ": " << rows.size() << " cells";
  for (const auto& [region, n] : counts) {
    summary << ' ' << openness::to_string(region) << '=' << n;
  }
  return {os.str(), summary.str()};
}

inline Artifact indifference_artifact(const RunConfig& cfg) {
  struct Point {
    double theta;
    std::optional<double> p_numeric;
    std::optional<double> delta_ref;
    std::optional<double> alpha1_ref;
    std::optional<double> p_closed_form;
  };
  std::vector<Point> points;
  const Axis thetas{SweepParam::kTheta, 0.0, 1.0, cfg.theta_steps};
  for (std::size_t i = 0; i < cfg.theta_steps; ++i) {
    Point pt{.theta = thetas.value(i)};
    pt.p_numeric = indifference_boundary_numeric(cfg.params, cfg.rule, pt.theta,
                                                 cfg.p_max, cfg.tol_p);
    // Reference (delta, alpha1) is the compliant equilibrium at the boundary.
    const Regulation at{pt.theta, pt.p_numeric.value_or(cfg.p_max)};
    const Equilibrium eq = solve_bargain(cfg.params, at, cfg.rule);
    if (eq.profile.alpha1) {
      pt.delta_ref = eq.profile.delta;
      pt.alpha1_ref = eq.profile.alpha1;
      pt.p_closed_form =
          indifference_penalty(pt.theta, eq.profile.delta, cfg.params.alpha0,
                               *eq.profile.alpha1, cfg.params.eps,
                               cfg.params.c_omega);
    }
    points.push_back(pt);
  }
  std::ostringstream os;
  if (cfg.format == OutputFormat::kCsv) {
    os << "alpha0,eps,c_omega,rule,theta,p_numeric,delta_ref,alpha1_ref,"
          "p_closed_form\n";
    for (const auto& pt : points) {
      os << format_number(cfg.params.alpha0) << ',' << format_number(cfg.params.eps)
         << ',' << format_number(cfg.params.c_omega) << ','
         << openness::to_string(cfg.rule) << ',' << format_number(pt.theta) << ','
         << openness::detail::field(pt.p_numeric) << ',' << openness::detail::field(pt.delta_ref) << ','
         << openness::detail::field(pt.alpha1_ref) << ',' << openness::detail::field(pt.p_closed_form) << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["spec"] = params_json(cfg);
    j["spec"]["p_max"] = quantize(cfg.p_max);
    j["spec"]["tol_p"] = quantize(cfg.tol_p);
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& pt : points) {
      nlohmann::ordered_json r;
      r["theta"] = quantize(pt.theta);
      r["p_numeric"] = openness::detail::json_number(pt.p_numeric);
      r["delta_ref"] = openness::detail::json_number(pt.delta_ref);
      r["alpha1_ref"] = openness::detail::json_number(pt.alpha1_ref);
      r["p_closed_form"] = openness::detail::json_number(pt.p_closed_form);
      j["rows"].push_back(r);
    }
    os << j.dump(2) << '\n';
  }
  std::size_t reachable = 0;
  for (const auto& pt : points) reachable += pt.p_numeric.has_value();
  std::ostringstream summary;
  summary << "indifference: " << points.size() << " thresholds, " << reachable
          << " with a compliance-inducing penalty <= "
          << format_number(cfg.p_max);
  return {os.str(), summary.str()};
}

inline Artifact pareto_artifact(const RunConfig& cfg) {
  const SweepTable table = run_sweep(cfg.sweep);
  const auto optimal =
      pareto_optimal_policies(table, cfg.weight_steps, cfg.objectives);
  std::vector<bool> is_optimal(table.cells.size(), false);
  for (const auto& pt : optimal) {
    is_optimal[pt.iy * table.spec.x.steps + pt.ix] = true;
  }
  std::vector<std::pair<ResultRow, bool>> rows;
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    const auto& cell = table.cells[i];
    const bool pareto = cell.region() == Region::kParetoImproving;
    flagged += pareto;
    if (pareto || is_optimal[i]) {
      rows.emplace_back(make_row(cell.params, cell.reg, cell.eq), is_optimal[i]);
    }
  }
  std::ostringstream os;
  if (cfg.format == OutputFormat::kCsv) {
    os << kCsvHeader << ",pareto_optimal\n";
    for (const auto& [row, opt] : rows) {
      write_csv_row(os, row);
      os << ',' << (opt ? 1 : 0) << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["spec"] = params_json(cfg);
    j["spec"]["x_axis"] = axis_json(table.spec.x);
    j["spec"]["y_axis"] = axis_json(table.spec.y);
    j["spec"]["weight_steps"] = cfg.weight_steps;
    nlohmann::ordered_json objs = nlohmann::ordered_json::array();
    for (auto o : cfg.objectives) objs.push_back(std::string(to_string(o)));
    j["spec"]["objectives"] = objs;
    j["spec"]["baseline"] = to_json(make_row(cfg.params, {}, table.baseline));
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& [row, opt] : rows) {
      auto r = to_json(row);
      r["pareto_optimal"] = opt;
      j["rows"].push_back(r);
    }
    os << j.dump(2) << '\n';
  }
  std::ostringstream summary;
  summary << "pareto: " << flagged << " PARETO_IMPROVING cells, "
          << optimal.size() << " Pareto-optimal policies";
  return {os.str(), summary.str()};
}

}  // namespace detail

/// Executes one command, writing its artifact to cfg.output_path ("-" means
/// `out`) and a one-line summary to `log`. Returns the process exit status.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  detail::Artifact artifact;
  switch (cfg.command) {
    case Command::kSolve:
      artifact = detail::solve_artifact(cfg);
      break;
    case Command::kSweep:
    case Command::kBaseline:
      artifact = detail::sweep_artifact(cfg);
      break;
    case Command::kIndifference:
      artifact = detail::indifference_artifact(cfg);
      break;
    case Command::kPareto:
      artifact = detail::pareto_artifact(cfg);
      break;
  }
  if (cfg.output_path == "-") {
    out << artifact.text;
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write '" + cfg.output_path + "'");
    file << artifact.text;
    if (!file) throw IoError("failed writing '" + cfg.output_path + "'");
  }
  log << artifact.summary << '\n';
  return 0;
}

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitIo = 4,
};

/// parse_config + run with errors mapped onto exit codes.
inline int main_entry(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& log) {
  std::string context = args.empty() ? std::string("openness-eq") : args.front();
  try {
    const RunConfig cfg = parse_config(args);
    return run(cfg, out, log);
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    log << "validation error (" << context << "): " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    log << "I/O error (" << context << "): " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    log << "error (" << context << "): " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace openness::cli
