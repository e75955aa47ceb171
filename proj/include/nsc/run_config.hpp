#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nsc/criterion.hpp"
#include "nsc/solver.hpp"

namespace nsc {

enum class SnapshotPolicy { none, final, all };

inline const char* to_string(SnapshotPolicy p) {
  switch (p) {
    case SnapshotPolicy::none: return "none";
    case SnapshotPolicy::final: return "final";
    case SnapshotPolicy::all: return "all";
  }
  return "?";
}

inline SnapshotPolicy parse_snapshot_policy(const std::string& s) {
  if (s == "none") return SnapshotPolicy::none;
  if (s == "final") return SnapshotPolicy::final;
  if (s == "all") return SnapshotPolicy::all;
  throw InvalidArgument("snapshots must be none, final or all (got '" + s + "')");
}

/// Everything a simulate run depends on. Randomness comes only from `seed`.
struct RunConfig {
  SolverConfig solver;
  std::vector<CriterionSpec> criteria{CriterionSpec{}};
  std::vector<double> alphas;
  double c_hat = 1.0;
  std::uint64_t seed = 0;
  SnapshotPolicy snapshots = SnapshotPolicy::none;

  /// Pushes the run seed into a random initial condition.
  void apply_seed() {
    if (auto* r = std::get_if<RandomSolenoidalInit>(&solver.initial_condition)) r->params.seed = seed;
  }

  void validate() const {
    solver.validate();
    for (const auto& c : criteria) c.validate();
    for (double a : alphas) require(a >= 1.0 && std::isfinite(a), "monitor alphas must be finite and >= 1");
    require(c_hat > 0.0 && std::isfinite(c_hat), "c_hat must be finite and > 0");
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

inline double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return infinity;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  require(ec == std::errc() && p == t.data() + t.size() && !t.empty(),
          key + ": expected a number, got '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  require(ec == std::errc() && p == t.data() + t.size() && !t.empty(),
          key + ": expected an integer, got '" + text + "'");
  return v;
}

inline const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"n", "n1", "n2", "n3", "length"}},
      {"solver", {"nu", "t_end", "cfl", "output_interval", "dt_max"}},
      {"initial", {"type", "spectrum_slope", "k_peak", "amplitude", "path"}},
      {"monitor", {"criteria", "alphas", "c_hat"}},
      {"run", {"seed", "snapshots"}},
  };
  return keys;
}

}  // namespace detail

/// Parses a sectioned key=value configuration. Unknown sections or keys are errors.
/// Relative snapshot paths resolve against `base_dir`.
inline RunConfig parse_run_config(std::istream& is, const std::filesystem::path& base_dir = {}) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }

  const auto& known = detail::known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    require(it != known.end(), "config: unknown section or top-level key '" + section + "'");
    for (const auto& [key, value] : body) {
      require(it->second.count(key) == 1, "config: unknown key '" + key + "' in [" + section + "]");
      require(value.empty(), "config: nested keys are not supported");
    }
  }

  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };

  RunConfig rc;
  auto& s = rc.solver;
  if (auto v = get("grid.n")) {
    const int n = int(detail::parse_integer("grid.n", *v));
    s.grid.n1 = s.grid.n2 = s.grid.n3 = n;
  }
  if (auto v = get("grid.n1")) s.grid.n1 = int(detail::parse_integer("grid.n1", *v));
  if (auto v = get("grid.n2")) s.grid.n2 = int(detail::parse_integer("grid.n2", *v));
  if (auto v = get("grid.n3")) s.grid.n3 = int(detail::parse_integer("grid.n3", *v));
  if (auto v = get("grid.length")) s.grid.length = detail::parse_double("grid.length", *v);

  if (auto v = get("solver.nu")) s.nu = detail::parse_double("solver.nu", *v);
  if (auto v = get("solver.t_end")) s.t_end = detail::parse_double("solver.t_end", *v);
  if (auto v = get("solver.cfl")) s.cfl = detail::parse_double("solver.cfl", *v);
  if (auto v = get("solver.output_interval"))
    s.output_interval = detail::parse_double("solver.output_interval", *v);
  if (auto v = get("solver.dt_max")) s.dt_max = detail::parse_double("solver.dt_max", *v);

  const std::string type = detail::trim(get("initial.type").value_or("taylor_green"));
  if (type == "taylor_green") {
    s.initial_condition = TaylorGreenInit{};
  } else if (type == "random") {
    RandomSolenoidalParams p;
    if (auto v = get("initial.spectrum_slope")) p.spectrum_slope = detail::parse_double("initial.spectrum_slope", *v);
    if (auto v = get("initial.k_peak")) p.k_peak = detail::parse_double("initial.k_peak", *v);
    if (auto v = get("initial.amplitude")) p.amplitude = detail::parse_double("initial.amplitude", *v);
    s.initial_condition = RandomSolenoidalInit{p};
  } else if (type == "file") {
    const auto v = get("initial.path");
    require(v.has_value() && !detail::trim(*v).empty(), "config: initial.type = file needs initial.path");
    std::filesystem::path p(detail::trim(*v));
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    s.initial_condition = FileInit{p.lexically_normal().string()};
  } else {
    throw InvalidArgument("config: initial.type must be taylor_green, random or file (got '" + type + "')");
  }

  if (auto v = get("monitor.criteria")) {
    rc.criteria.clear();
    for (const auto& item : detail::split_list(*v)) rc.criteria.push_back(parse_criterion(item));
  }
  if (auto v = get("monitor.alphas")) {
    for (const auto& item : detail::split_list(*v))
      rc.alphas.push_back(to_double(parse_rational(item)));
  }
  if (auto v = get("monitor.c_hat")) rc.c_hat = detail::parse_double("monitor.c_hat", *v);

  if (auto v = get("run.seed")) {
    const long long seed = detail::parse_integer("run.seed", *v);
    require(seed >= 0, "run.seed must be >= 0");
    rc.seed = std::uint64_t(seed);
  }
  if (auto v = get("run.snapshots")) rc.snapshots = parse_snapshot_policy(detail::trim(*v));

  rc.apply_seed();
  rc.validate();
  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open config file: " + path);
  return parse_run_config(is, std::filesystem::absolute(path).parent_path());
}

// ---------------------------------------------------------------------------
// JSON form, used by the run manifest. Doubles round-trip exactly.

inline nlohmann::json to_json(const RunConfig& rc) {
  using nlohmann::json;
  const auto& s = rc.solver;
  json j;
  j["grid"] = {{"n1", s.grid.n1}, {"n2", s.grid.n2}, {"n3", s.grid.n3}, {"length", s.grid.length}};
  j["solver"] = {{"nu", s.nu},
                 {"t_end", s.t_end},
                 {"cfl", s.cfl},
                 {"output_interval", s.output_interval},
                 {"dt_max", std::isinf(s.dt_max) ? json(nullptr) : json(s.dt_max)}};
  std::visit(
      [&](const auto& ic) {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, TaylorGreenInit>) {
          j["initial"] = {{"type", "taylor_green"}};
        } else if constexpr (std::is_same_v<T, RandomSolenoidalInit>) {
          j["initial"] = {{"type", "random"},
                          {"spectrum_slope", ic.params.spectrum_slope},
                          {"k_peak", ic.params.k_peak},
                          {"amplitude", ic.params.amplitude}};
        } else {
          j["initial"] = {{"type", "file"}, {"path", ic.path}};
        }
      },
      s.initial_condition);
  json crit = json::array();
  for (const auto& c : rc.criteria) crit.push_back(format_criterion(c));
  j["monitor"] = {{"criteria", crit}, {"alphas", rc.alphas}, {"c_hat", rc.c_hat}};
  j["run"] = {{"seed", rc.seed}, {"snapshots", to_string(rc.snapshots)}};
  return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  try {
    RunConfig rc;
    auto& s = rc.solver;
    const auto& g = j.at("grid");
    s.grid = GridSpec{g.at("n1").get<int>(), g.at("n2").get<int>(), g.at("n3").get<int>(),
                      g.at("length").get<double>()};
    const auto& sv = j.at("solver");
    s.nu = sv.at("nu").get<double>();
    s.t_end = sv.at("t_end").get<double>();
    s.cfl = sv.at("cfl").get<double>();
    s.output_interval = sv.at("output_interval").get<double>();
    s.dt_max = sv.at("dt_max").is_null() ? infinity : sv.at("dt_max").get<double>();
    const auto& ic = j.at("initial");
    const auto type = ic.at("type").get<std::string>();
    if (type == "taylor_green") {
      s.initial_condition = TaylorGreenInit{};
    } else if (type == "random") {
      RandomSolenoidalParams p;
      p.spectrum_slope = ic.at("spectrum_slope").get<double>();
      p.k_peak = ic.at("k_peak").get<double>();
      p.amplitude = ic.at("amplitude").get<double>();
      s.initial_condition = RandomSolenoidalInit{p};
    } else if (type == "file") {
      s.initial_condition = FileInit{ic.at("path").get<std::string>()};
    } else {
      throw InvalidArgument("manifest: unknown initial type '" + type + "'");
    }
    const auto& m = j.at("monitor");
    rc.criteria.clear();
    for (const auto& c : m.at("criteria")) rc.criteria.push_back(parse_criterion(c.get<std::string>()));
    rc.alphas = m.at("alphas").get<std::vector<double>>();
    rc.c_hat = m.at("c_hat").get<double>();
    rc.seed = j.at("run").at("seed").get<std::uint64_t>();
    rc.snapshots = parse_snapshot_policy(j.at("run").at("snapshots").get<std::string>());
    rc.apply_seed();
    rc.validate();
    return rc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("manifest: ") + e.what());
  }
}

}  // namespace nsc
