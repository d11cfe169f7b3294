#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "covertsim/allocation.hpp"
#include "covertsim/channel.hpp"
#include "covertsim/config.hpp"
#include "covertsim/design.hpp"
#include "covertsim/detection.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/monte_carlo.hpp"
#include "covertsim/search.hpp"

namespace covertsim::harness {

inline constexpr std::string_view kToolVersion = "covertsim 0.1.0";

enum class Command {
  kSolve,
  kSolveEnergy,
  kSweepDepGamma,
  kSweepDepK,
  kSweepThroughputR,
  kSweepEtaEpsilon,
  kSweepPaKEpsilon,
  kCompareEnergy,
  kMcVerify,
};

inline constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::kSolve, "solve"},
    {Command::kSolveEnergy, "solve-energy"},
    {Command::kSweepDepGamma, "sweep-dep-gamma"},
    {Command::kSweepDepK, "sweep-dep-k"},
    {Command::kSweepThroughputR, "sweep-throughput-r"},
    {Command::kSweepEtaEpsilon, "sweep-eta-epsilon"},
    {Command::kSweepPaKEpsilon, "sweep-pa-k-epsilon"},
    {Command::kCompareEnergy, "compare-energy"},
    {Command::kMcVerify, "mc-verify"},
};

inline std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

inline std::string_view command_name(Command cmd) {
  for (const auto& [c, n] : kCommandNames) {
    if (c == cmd) return n;
  }
  return "?";
}

enum class Format { kCsv, kJson };

struct Range {
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;
};

/// Per-figure knobs; every field has a default matching the reference
/// experiments.
struct SweepParams {
  std::optional<double> P_a;
  std::vector<double> P_a_values;
  std::vector<Count> K_values;
  Count K_max = 100;
  std::optional<Range> R_grid;
  std::optional<Range> epsilon_grid;
  std::vector<Count> M_values;
};

struct ConfigDocument {
  SystemConfig system;
  SimulationParams simulation;
  SweepParams sweep;
};

struct ExperimentSpec {
  Command command = Command::kSolve;
  ConfigDocument config;
  std::filesystem::path output_path;
  Format format = Format::kCsv;
};

// ---------------------------------------------------------------------------
// Config ingestion

namespace detail {

inline double as_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

inline Count as_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<Count>();
}

inline Range as_range(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number_integer() || v[2].get<Count>() < 2) {
    throw ConfigError("config key '" + key + "' must be [min, max, points] with points >= 2");
  }
  Range r{v[0].get<double>(), v[1].get<double>(), v[2].get<std::size_t>()};
  if (!(r.min < r.max)) throw ConfigError("config key '" + key + "' needs min < max");
  return r;
}

template <typename T, typename Get>
std::vector<T> as_list(const nlohmann::json& v, const std::string& key, Get get) {
  if (!v.is_array() || v.empty()) throw ConfigError("config key '" + key + "' must be a non-empty array");
  std::vector<T> out;
  for (const auto& item : v) out.push_back(get(item, key));
  return out;
}

}  // namespace detail

/// Parses the flat JSON config object. Unknown keys are rejected.
inline ConfigDocument parse_config(const nlohmann::json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  ConfigDocument c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "M") c.system.M = as_count(v, key);
    else if (key == "P_max") c.system.P_max = as_number(v, key);
    else if (key == "sigma_b2") c.system.sigma_b2 = as_number(v, key);
    else if (key == "sigma_w2") c.system.sigma_w2 = as_number(v, key);
    else if (key == "lambda_b") c.system.lambda_b = as_number(v, key);
    else if (key == "lambda_w") c.system.lambda_w = as_number(v, key);
    else if (key == "epsilon") c.system.epsilon = as_number(v, key);
    else if (key == "h_ab2") c.system.h_ab2 = as_number(v, key);
    else if (key == "trials") c.simulation.trials = as_count(v, key);
    else if (key == "gamma_grid") {
      const Range r = as_range(v, key);
      c.simulation.gamma_grid = GammaGrid{r.min, r.max, r.points};
    } else if (key == "finite_N") c.simulation.finite_N = as_count(v, key);
    else if (key == "P_a") c.sweep.P_a = as_number(v, key);
    else if (key == "P_a_values") c.sweep.P_a_values = as_list<double>(v, key, as_number);
    else if (key == "K_values") c.sweep.K_values = as_list<Count>(v, key, as_count);
    else if (key == "K_max") c.sweep.K_max = as_count(v, key);
    else if (key == "R_grid") c.sweep.R_grid = as_range(v, key);
    else if (key == "epsilon_grid") c.sweep.epsilon_grid = as_range(v, key);
    else if (key == "M_values") c.sweep.M_values = as_list<Count>(v, key, as_count);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  validate(c.system);
  validate(c.simulation);
  if (c.sweep.P_a && !(*c.sweep.P_a > 0.0 && *c.sweep.P_a <= c.system.P_max)) {
    throw ConfigError("P_a must lie in (0, P_max]");
  }
  for (double p : c.sweep.P_a_values) {
    if (!(p > 0.0 && p <= c.system.P_max)) throw ConfigError("P_a_values must lie in (0, P_max]");
  }
  for (Count k : c.sweep.K_values) {
    if (k < 1) throw ConfigError("K_values must be >= 1");
  }
  for (Count m : c.sweep.M_values) {
    if (m < 1) throw ConfigError("M_values must be >= 1");
  }
  if (c.sweep.K_max < 1) throw ConfigError("K_max must be >= 1");
  if (c.sweep.epsilon_grid &&
      !(c.sweep.epsilon_grid->min > 0.0 && c.sweep.epsilon_grid->max < 0.25)) {
    throw ConfigError("epsilon_grid must lie inside (0, 0.25)");
  }
  if (c.sweep.R_grid && !(c.sweep.R_grid->min > 0.0)) throw ConfigError("R_grid must start above 0");
  return c;
}

inline ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

/// Effective configuration (defaults filled in) as a JSON object.
inline nlohmann::json to_json(const ConfigDocument& c) {
  nlohmann::json j = {
      {"M", c.system.M},
      {"P_max", c.system.P_max},
      {"sigma_b2", c.system.sigma_b2},
      {"sigma_w2", c.system.sigma_w2},
      {"lambda_b", c.system.lambda_b},
      {"lambda_w", c.system.lambda_w},
      {"epsilon", c.system.epsilon},
      {"h_ab2", c.system.h_ab2},
      {"trials", c.simulation.trials},
      {"K_max", c.sweep.K_max},
  };
  auto range = [](double lo, double hi, std::size_t n) { return nlohmann::json::array({lo, hi, n}); };
  if (c.simulation.gamma_grid) {
    j["gamma_grid"] = range(c.simulation.gamma_grid->min, c.simulation.gamma_grid->max,
                            c.simulation.gamma_grid->points);
  }
  if (c.simulation.finite_N) j["finite_N"] = *c.simulation.finite_N;
  if (c.sweep.P_a) j["P_a"] = *c.sweep.P_a;
  if (!c.sweep.P_a_values.empty()) j["P_a_values"] = c.sweep.P_a_values;
  if (!c.sweep.K_values.empty()) j["K_values"] = c.sweep.K_values;
  if (c.sweep.R_grid) j["R_grid"] = range(c.sweep.R_grid->min, c.sweep.R_grid->max, c.sweep.R_grid->points);
  if (c.sweep.epsilon_grid) {
    j["epsilon_grid"] =
        range(c.sweep.epsilon_grid->min, c.sweep.epsilon_grid->max, c.sweep.epsilon_grid->points);
  }
  if (!c.sweep.M_values.empty()) j["M_values"] = c.sweep.M_values;
  return j;
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string config_hash(const ConfigDocument& c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json(c).dump())));
  return buf;
}

// ---------------------------------------------------------------------------
// Tabular output

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match columns");
    rows.push_back(std::move(row));
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string quoted = "\"";
      for (char ch : v) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      return quoted + "\"";
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

inline std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (const auto& [key, value] : table.metadata) out << "# " << key << ": " << value << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << "\n";
  }
  return out.str();
}

inline nlohmann::json cell_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

/// Solve-style commands put their single row under "solution"; sweeps
/// emit "rows" as an array of objects.
inline std::string to_json_text(const Table& table, const ConfigDocument& config, bool single) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [key, value] : table.metadata) meta[key] = value;
  nlohmann::json doc = {{"metadata", meta}, {"config", to_json(config)}, {"columns", table.columns}};
  auto row_object = [&](const std::vector<Cell>& row) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    return obj;
  };
  if (single && table.rows.size() == 1) {
    doc["solution"] = row_object(table.rows.front());
  } else {
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) doc["rows"].push_back(row_object(row));
  }
  return doc.dump(2) + "\n";
}

/// Writes `content` to a sibling temp file, then renames it over `path`.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("output path '" + path.string() + "' is not writable");
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path.string() + "'");
  }
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

/// Simulation parameters with the substream window shifted by `block`
/// blocks so independent sweep points never share draws.
inline SimulationParams shifted(const SimulationParams& p, std::uint64_t block) {
  SimulationParams out = p;
  out.substream_base = p.substream_base + block * (std::uint64_t{1} << 24);
  return out;
}

inline std::vector<double> epsilon_values(const ConfigDocument& c, Range fallback) {
  const Range r = c.sweep.epsilon_grid.value_or(fallback);
  return linspace(r.min, r.max, r.points);
}

inline SystemConfig with_epsilon(SystemConfig s, double epsilon) {
  s.epsilon = epsilon;
  return s;
}

inline GammaGrid default_gamma_grid(Count K, const SystemConfig& s) {
  return {s.sigma_w2, s.sigma_w2 + 3.0 * static_cast<double>(K) * s.P_max * s.lambda_w, 200};
}

inline Table solve_table(const ConfigDocument& c, DesignObjective objective) {
  const DesignSolution sol = optimize_pa(c.system, objective);
  RandomStream stream(c.simulation.seed, c.simulation.substream_base);
  const ChannelDraw draw = sample_channel_draw(c.system, stream);
  const double tau = activation_threshold(draw.gains_mb, sol.K_min);
  const ThroughputResult t = max_throughput(sol.P_a_star, c.system, true);

  Table table;
  table.columns = {"P_a_star", "K_min", "tau_policy", "tau_rank", "tau_sample", "gamma_star",
                   "zeta_min", "zeta_min_approximate", "R_max", "eta_max", "connection_at_rmax",
                   "E_eff", "total_power", "method_P_a", "method_R_max", "objective"};
  table.add_row({sol.P_a_star, sol.K_min, std::string("kth_smallest_gain_to_bob"), sol.K_min, tau,
                 sol.gamma_star, sol.zeta_min, sol.zeta_min_approximate, sol.R_max, sol.eta_max,
                 t.connection_at_rmax, sol.E_eff, sol.total_power, sol.method_tags.at("P_a_star"),
                 sol.method_tags.at("R_max"), sol.method_tags.at("objective")});
  return table;
}

inline Table sweep_dep_gamma(const ConfigDocument& c) {
  const SystemConfig& s = c.system;
  const std::vector<Count> Ks = c.sweep.K_values.empty() ? std::vector<Count>{15, 25} : c.sweep.K_values;
  const double P_a = c.sweep.P_a.value_or(s.P_max);
  Table table;
  table.columns = {"K", "P_a", "gamma", "zeta_analytic", "zeta_mc", "zeta_mc_std_error"};
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    const Count K = Ks[i];
    const GammaGrid g = c.simulation.gamma_grid.value_or(default_gamma_grid(K, s));
    const DetectorSamples samples = sample_detector_statistics(K, P_a, s, shifted(c.simulation, i));
    for (double gamma : linspace(g.min, g.max, g.points)) {
      const auto [zeta, se] = samples.zeta_at(gamma);
      table.add_row({K, P_a, gamma,
                     dep_analytic(gamma, K, P_a * s.lambda_w, s.P_max * s.lambda_w, s.sigma_w2), zeta, se});
    }
  }
  return table;
}

inline Table sweep_dep_k(const ConfigDocument& c) {
  const SystemConfig& s = c.system;
  const std::vector<double> pas =
      c.sweep.P_a_values.empty() ? std::vector<double>{0.67, 0.83} : c.sweep.P_a_values;
  Table table;
  table.columns = {"P_a", "K", "zeta_min_closed", "zeta_min_exact", "approximate", "meets_constraint",
                   "zeta_min_mc", "zeta_min_mc_std_error"};
  std::uint64_t block = 0;
  for (double P_a : pas) {
    table.metadata.emplace_back("k_min[P_a=" + format_double(P_a) + "]",
                                std::to_string(k_min(P_a, s.P_max, s.epsilon)));
    for (Count K = 1; K <= c.sweep.K_max; ++K) {
      const MinDep md = min_dep(K, P_a, s.P_max);
      SimulationParams p = shifted(c.simulation, block++);
      p.gamma_grid = c.simulation.gamma_grid.value_or(default_gamma_grid(K, s));
      const MinDepEstimate mc = simulate_min_dep(K, P_a, s, p);
      table.add_row({P_a, K, md.zeta, min_dep_exact(K, P_a, s.P_max), md.approximate,
                     md.zeta >= 1.0 - s.epsilon, mc.zeta_hat, mc.std_error});
    }
  }
  return table;
}

inline Table sweep_throughput_r(const ConfigDocument& c) {
  const double P_a = c.sweep.P_a.value_or(0.83);
  Table table;
  table.columns = {"epsilon", "K_min", "R", "connection_analytic", "eta_analytic", "connection_mc",
                   "eta_mc", "eta_mc_std_error", "R_max_closed"};
  const auto eps = epsilon_values(c, Range{c.system.epsilon, c.system.epsilon, 1});
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const SystemConfig s = with_epsilon(c.system, eps[i]);
    const ThroughputResult t = max_throughput(P_a, s, true);
    const Range rg = c.sweep.R_grid.value_or(Range{t.R_max / 50.0, 3.0 * t.R_max, 150});
    const auto grid = linspace(rg.min, rg.max, rg.points);
    const auto curve = simulate_throughput_curve(P_a, t.K_min, s, grid, shifted(c.simulation, i));
    for (const auto& pt : curve) {
      const double pc = connection_probability(pt.R, P_a, t.K_min, s);
      table.add_row({eps[i], t.K_min, pt.R, pc, pt.R * pc, pt.connection_hat, pt.eta_hat, pt.std_error,
                     t.R_max});
    }
  }
  return table;
}

inline Table sweep_eta_epsilon(const ConfigDocument& c) {
  const std::vector<Count> Ms =
      c.sweep.M_values.empty() ? std::vector<Count>{200, 500, 1000} : c.sweep.M_values;
  const auto eps = epsilon_values(c, Range{0.02, 0.12, 21});
  Table table;
  table.columns = {"M", "epsilon", "covert_constraint", "P_a_star", "K_min", "R_max", "eta_max",
                   "eta_mc", "eta_mc_std_error"};
  std::uint64_t block = 0;
  for (Count M : Ms) {
    for (double e : eps) {
      SystemConfig s = with_epsilon(c.system, e);
      s.M = M;
      const DesignSolution sol = optimize_pa_throughput(s);
      const McEstimate mc = simulate_connection(sol.R_max, sol.P_a_star, sol.K_min, s,
                                                shifted(c.simulation, block++), OrderSampler::kRenyi);
      table.add_row({M, e, 1.0 - e, sol.P_a_star, sol.K_min, sol.R_max, sol.eta_max,
                     sol.R_max * mc.estimate, sol.R_max * mc.std_error});
    }
  }
  return table;
}

inline Table sweep_pa_k_epsilon(const ConfigDocument& c) {
  const auto eps = epsilon_values(c, Range{0.02, 0.12, 21});
  Table table;
  table.metadata.emplace_back("cross_point_xi", format_double(cross_point(c.system)));
  table.columns = {"epsilon", "covert_constraint", "P_a_star", "K_min", "eta_max", "P_a_closed_form",
                   "K_closed_form", "upsilon", "c_epsilon", "cross_point_xi"};
  for (double e : eps) {
    const SystemConfig s = with_epsilon(c.system, e);
    const DesignSolution sol = optimize_pa_throughput(s);
    table.add_row({e, 1.0 - e, sol.P_a_star, sol.K_min, sol.eta_max, pa_star_closed_form(s),
                   k_star_closed_form(s), upsilon(s), c_epsilon(e), cross_point(s)});
  }
  return table;
}

inline Table compare_energy(const ConfigDocument& c) {
  const auto eps = epsilon_values(c, Range{0.02, 0.1, 17});
  Table table;
  table.columns = {"epsilon", "covert_constraint", "design", "P_a_star", "K_min", "eta_max", "E_eff",
                   "total_power"};
  for (double e : eps) {
    const SystemConfig s = with_epsilon(c.system, e);
    for (auto objective : {DesignObjective::kThroughput, DesignObjective::kEnergyEfficiency}) {
      const DesignSolution sol = optimize_pa(s, objective);
      table.add_row({e, 1.0 - e,
                     std::string(objective == DesignObjective::kThroughput ? "throughput" : "energy"),
                     sol.P_a_star, sol.K_min, sol.eta_max, sol.E_eff, sol.total_power});
    }
  }
  return table;
}

inline Table mc_verify(const ConfigDocument& c) {
  const SystemConfig& s = c.system;
  const double P_a = c.sweep.P_a ? *c.sweep.P_a : optimize_pa_throughput(s).P_a_star;
  const ThroughputResult t = max_throughput(P_a, s, true);
  const Count K = t.K_min;
  Table table;
  table.metadata.emplace_back("P_a", format_double(P_a));
  table.metadata.emplace_back("K_min", std::to_string(K));
  table.columns = {"check", "analytic", "monte_carlo", "std_error", "abs_diff", "tolerance", "pass"};
  auto add = [&](const std::string& name, double analytic, double mc, double se, double tol) {
    const double diff = std::abs(analytic - mc);
    table.add_row({name, analytic, mc, se, diff, tol, diff <= tol});
  };

  const double gamma_star = optimal_threshold(K, s.P_max * s.lambda_w, s.sigma_w2);
  SimulationParams p = shifted(c.simulation, 0);
  p.gamma_grid = c.simulation.gamma_grid.value_or(default_gamma_grid(K, s));
  const DetectorSamples det = sample_detector_statistics(K, P_a, s, p);
  const auto [zeta, zeta_se] = det.zeta_at(gamma_star);
  add("dep_at_gamma_star", dep_analytic(gamma_star, K, P_a * s.lambda_w, s.P_max * s.lambda_w, s.sigma_w2),
      zeta, zeta_se, std::max(0.01, 4.0 * zeta_se));

  const MinDepEstimate md = simulate_min_dep(K, P_a, s, p);
  add("min_dep", min_dep(K, P_a, s.P_max).zeta, md.zeta_hat, md.std_error,
      std::max(0.01, 4.0 * md.std_error));
  // The empirical curve is flat near its minimum, so gamma* is judged by the
  // excess error it costs rather than by its distance to the empirical argmin.
  table.metadata.emplace_back("gamma_hat", format_double(md.gamma_hat));
  add("dep_excess_at_gamma_star", 0.0, zeta - md.zeta_hat, zeta_se, std::max(0.01, 4.0 * zeta_se));

  const McEstimate pc = simulate_connection(t.R_max, P_a, K, s, shifted(c.simulation, 1));
  add("connection_at_rmax", t.connection_at_rmax, pc.estimate, pc.std_error,
      std::max(0.01, 4.0 * pc.std_error));
  add("throughput_at_rmax", t.eta_max, t.R_max * pc.estimate, t.R_max * pc.std_error,
      std::max(0.01 * t.R_max, 4.0 * t.R_max * pc.std_error));
  return table;
}

inline Table build_table(const ExperimentSpec& spec) {
  switch (spec.command) {
    case Command::kSolve: return solve_table(spec.config, DesignObjective::kThroughput);
    case Command::kSolveEnergy: return solve_table(spec.config, DesignObjective::kEnergyEfficiency);
    case Command::kSweepDepGamma: return sweep_dep_gamma(spec.config);
    case Command::kSweepDepK: return sweep_dep_k(spec.config);
    case Command::kSweepThroughputR: return sweep_throughput_r(spec.config);
    case Command::kSweepEtaEpsilon: return sweep_eta_epsilon(spec.config);
    case Command::kSweepPaKEpsilon: return sweep_pa_k_epsilon(spec.config);
    case Command::kCompareEnergy: return compare_energy(spec.config);
    case Command::kMcVerify: return mc_verify(spec.config);
  }
  throw std::logic_error("unhandled command");
}

}  // namespace detail

/// Renders the experiment's output document (CSV or JSON) without writing it.
inline std::string render(const ExperimentSpec& spec) {
  validate(spec.config.system);
  validate(spec.config.simulation);
  Table table = detail::build_table(spec);
  std::vector<std::pair<std::string, std::string>> meta = {
      {"tool", std::string(kToolVersion)},
      {"command", std::string(command_name(spec.command))},
      {"seed", std::to_string(spec.config.simulation.seed)},
      {"trials", std::to_string(spec.config.simulation.trials)},
      {"config_hash", config_hash(spec.config)},
  };
  meta.insert(meta.end(), table.metadata.begin(), table.metadata.end());
  table.metadata = std::move(meta);
  const bool single = spec.command == Command::kSolve || spec.command == Command::kSolveEnergy;
  return spec.format == Format::kCsv ? to_csv(table) : to_json_text(table, spec.config, single);
}

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitDomain = 4,
};

/// Runs one experiment and writes its output file; returns the exit status.
inline int run(const ExperimentSpec& spec, std::ostream& err = std::cerr) {
  try {
    write_atomically(spec.output_path, render(spec));
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleCover& e) {
    err << "infeasible cover: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NoSolution& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace covertsim::harness
