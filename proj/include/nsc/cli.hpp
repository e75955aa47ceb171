#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsc/criterion.hpp"
#include "nsc/inequality_lab.hpp"
#include "nsc/run_config.hpp"
#include "nsc/snapshot.hpp"
#include "nsc/solver.hpp"

namespace nsc::cli {

inline constexpr const char* version = "1.0.0";

enum ExitCode : int { ok = 0, config_error = 1, breakdown = 2, not_admissible = 3 };

/// Worker threads: the request (0 = hardware) capped by NSC_THREADS when set.
inline unsigned thread_budget(unsigned requested = 0) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NSC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min(n, unsigned(cap));
  }
  return n;
}

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

inline void write_csv_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_number(values[i]);
  os << '\n';
}

namespace detail {

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec || !std::filesystem::is_directory(p))
    throw InvalidArgument("cannot create output directory: " + dir);
  return p;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + p.string());
  return os;
}

inline std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u_%06zu.nscf", index);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string config_path;
  std::string manifest_path;
  std::string out_dir = "nsc_out";
  std::optional<std::uint64_t> seed;
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  std::string source;
  try {
    if (!opt.manifest_path.empty()) {
      std::ifstream is(opt.manifest_path);
      if (!is) throw InvalidArgument("cannot open manifest: " + opt.manifest_path);
      nlohmann::json j;
      try {
        is >> j;
      } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("manifest: ") + e.what());
      }
      if (!j.contains("config")) throw InvalidArgument("manifest has no config section");
      rc = run_config_from_json(j.at("config"));
      source = opt.manifest_path;
    } else {
      require(!opt.config_path.empty(), "simulate needs --config or --manifest");
      rc = load_run_config(opt.config_path);
      source = opt.config_path;
    }
    if (opt.seed) {
      rc.seed = *opt.seed;
      rc.apply_seed();
    }
  } catch (const InvalidArgument& e) {
    err << "nsc simulate: " << e.what() << '\n';
    return config_error;
  }

  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = detail::utc_now();
  try {
    const auto dir = detail::prepare_out_dir(opt.out_dir);
    if (rc.snapshots == SnapshotPolicy::all) std::filesystem::create_directories(dir / "snapshots");

    CriterionMonitor monitor(rc.criteria, rc.alphas, rc.c_hat);
    auto csv = detail::open_out(dir / "series.csv");
    write_csv_row(csv, monitor.columns());

    std::size_t index = 0;
    const OutputObserver observer = [&](const SolverState& s, const MonitorRecord& rec) {
      write_csv_row(csv, monitor.row(rec));
      if (rc.snapshots == SnapshotPolicy::all)
        write_snapshot((dir / "snapshots" / detail::snapshot_name(index)).string(), inverse(s.u_hat), s.t);
      ++index;
    };

    const RunResult result = run(rc.solver, monitor, observer);
    csv.flush();
    if (!csv) throw InvalidArgument("failed writing series.csv");

    if (rc.snapshots != SnapshotPolicy::none && !result.failure)
      write_snapshot((dir / "final.nscf").string(), inverse(result.final_state.u_hat), result.final_state.t);
    if (result.failure) {
      // Last finite state, for post-mortem inspection.
      write_snapshot((dir / "breakdown.nscf").string(), inverse(result.final_state.u_hat),
                     result.final_state.t);
    }

    const auto audit = audit_energy(result.records);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json m;
    m["tool"] = "nsc";
    m["version"] = version;
    m["source"] = std::filesystem::absolute(source).lexically_normal().string();
    m["out_dir"] = std::filesystem::absolute(dir).lexically_normal().string();
    m["seed"] = rc.seed;
    m["config"] = to_json(rc);
    m["wall_clock"] = {{"started_utc", started_utc}, {"finished_utc", detail::utc_now()}, {"seconds", seconds}};
    m["result"] = {{"status", result.failure ? "breakdown" : "ok"},
                   {"records", result.records.size()},
                   {"steps", result.final_state.step_count},
                   {"final_time", result.final_state.t},
                   {"max_abs_energy_residual", audit.max_abs_residual}};
    if (result.failure) {
      m["result"]["breakdown_time"] = result.failure->t;
      m["result"]["breakdown_reason"] = result.failure->message;
    }
    auto mf = detail::open_out(dir / "manifest.json");
    mf << m.dump(2) << '\n';

    if (result.failure) {
      err << "nsc simulate: numerical breakdown at t = " << format_number(result.failure->t) << ": "
          << result.failure->message << '\n';
      return breakdown;
    }
    out << "wrote " << result.records.size() << " records to " << (dir / "series.csv").string() << '\n';
    return ok;
  } catch (const InvalidArgument& e) {
    err << "nsc simulate: " << e.what() << '\n';
    return config_error;
  }
}

// ---------------------------------------------------------------------------
// lab

struct LabOptions {
  std::string kind = "lemma1";
  std::vector<double> r;
  std::size_t samples = 200;
  int n = 32;
  int kmax = 4;
  double decay = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_dir = "nsc_out";
};

inline int cmd_lab(const LabOptions& opt, std::ostream& out, std::ostream& err) {
  SweepResult result;
  InequalityKind kind{};
  try {
    kind = parse_inequality_kind(opt.kind);
    SweepOptions so;
    so.grid = GridSpec::cube(opt.n);
    so.family.kmax = opt.kmax;
    so.family.decay = opt.decay;
    so.n_samples = opt.samples;
    so.seed = opt.seed;
    so.threads = thread_budget(opt.threads);
    result = sweep_constants(kind, opt.r, so);
  } catch (const InvalidArgument& e) {
    err << "nsc lab: " << e.what() << '\n';
    return config_error;
  }

  try {
    const auto dir = detail::prepare_out_dir(opt.out_dir);
    auto csv = detail::open_out(dir / "lab.csv");
    write_csv_row(csv, std::vector<std::string>{"kind", "r", "seed", "lhs", "rhs_factor", "ratio"});
    for (const auto& c : result.cases) {
      write_csv_row(csv, std::vector<std::string>{to_string(c.kind), format_number(c.r), std::to_string(c.seed),
                                                  format_number(c.report.lhs),
                                                  format_number(c.report.rhs_factor),
                                                  format_number(c.report.ratio)});
    }
    auto sum = detail::open_out(dir / "lab_summary.csv");
    write_csv_row(sum, std::vector<std::string>{"kind", "r", "count", "degenerate", "min_ratio",
                                                "median_ratio", "max_ratio"});
    for (const auto& s : result.summary) {
      write_csv_row(sum, std::vector<std::string>{to_string(s.kind), format_number(s.r), std::to_string(s.count),
                                                  std::to_string(s.degenerate), format_number(s.min_ratio),
                                                  format_number(s.median_ratio), format_number(s.max_ratio)});
      out << to_string(s.kind) << " r=" << format_number(s.r) << " count=" << s.count
          << " degenerate=" << s.degenerate << " min=" << format_number(s.min_ratio)
          << " median=" << format_number(s.median_ratio) << " max=" << format_number(s.max_ratio) << '\n';
    }
  } catch (const InvalidArgument& e) {
    err << "nsc lab: " << e.what() << '\n';
    return config_error;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// admissible

inline int cmd_admissible(const std::string& alpha_text, const std::string& beta_text,
                          const std::string& entry, std::ostream& out, std::ostream& err) {
  try {
    const CriterionSpec spec = parse_criterion(entry + ":" + alpha_text + ":" + beta_text);
    const auto v = is_admissible(spec.alpha, spec.beta, spec.kind());
    out << "entry=" << spec.entry_label() << " kind=" << to_string(v.kind) << " alpha=" << to_string(v.alpha)
        << " beta=" << to_string(v.beta) << " weak=" << (v.satisfied_weak ? "yes" : "no")
        << " strict=" << (v.satisfied_strict ? "yes" : "no") << " beta_min=" << to_string(v.beta_min)
        << " gronwall_exponent=" << to_string(v.gronwall_exponent) << '\n';
    return v.satisfied_weak ? ok : not_admissible;
  } catch (const InvalidArgument& e) {
    err << "nsc admissible: " << e.what() << '\n';
    return config_error;
  }
}

// ---------------------------------------------------------------------------
// audit

/// Rebuilds the energy fields of monitor records from a series CSV, by column name.
inline std::vector<MonitorRecord> read_series_energy(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "series CSV is empty");
  std::map<std::string, std::size_t> col;
  {
    std::stringstream ss(line);
    std::string name;
    for (std::size_t i = 0; std::getline(ss, name, ','); ++i) col[::nsc::detail::trim(name)] = i;
  }
  for (const char* need : {"t", "energy", "dissipation_integral"})
    require(col.count(need) == 1, std::string("series CSV lacks column '") + need + "'");

  std::vector<MonitorRecord> records;
  for (std::size_t row = 2; std::getline(is, line); ++row) {
    if (::nsc::detail::trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() == col.size(), "series CSV row " + std::to_string(row) + " has the wrong width");
    auto at = [&](const char* name) {
      const std::string& c = cells[col.at(name)];
      const std::string t = ::nsc::detail::trim(c);
      if (t == "nan" || t == "-nan") return std::numeric_limits<double>::quiet_NaN();
      return ::nsc::detail::parse_double(name, c);
    };
    MonitorRecord r;
    r.t = at("t");
    r.energy = at("energy");
    r.dissipation_integral = at("dissipation_integral");
    records.push_back(r);
  }
  return records;
}

inline int cmd_audit(const std::string& csv_path, double tolerance, std::ostream& out, std::ostream& err) {
  std::vector<MonitorRecord> records;
  try {
    require(tolerance >= 0.0, "tolerance must be >= 0");
    std::ifstream is(csv_path);
    if (!is) throw InvalidArgument("cannot open " + csv_path);
    records = read_series_energy(is);
  } catch (const InvalidArgument& e) {
    err << "nsc audit: " << e.what() << '\n';
    return config_error;
  }
  const auto audit = audit_energy(records, tolerance);
  out << "records=" << records.size() << " flagged=" << audit.flagged
      << " max_abs_residual=" << format_number(audit.max_abs_residual) << '\n';
  for (const auto& e : audit.entries)
    if (e.flagged)
      out << "flagged t=" << format_number(e.t) << " residual=" << format_number(e.residual)
          << " inequality_excess=" << format_number(e.inequality_excess) << '\n';
  return audit.ok() ? ok : breakdown;
}

// ---------------------------------------------------------------------------
// dispatch

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  CLI::App app{"Periodic Navier-Stokes solver with regularity-criterion diagnostics", "nsc"};
  app.set_version_flag("--version", version);
  app.require_subcommand(1);

  SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "integrate a configuration and write series.csv + manifest.json");
  auto* cfg_opt = simulate->add_option("--config", sim.config_path, "key=value configuration file");
  auto* man_opt = simulate->add_option("--manifest", sim.manifest_path, "rerun from a manifest.json");
  cfg_opt->excludes(man_opt);
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->capture_default_str();
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "override the run seed");

  LabOptions lab;
  auto* labc = app.add_subcommand("lab", "sweep inequality ratios over seeded band-limited inputs");
  labc->add_option("--kind", lab.kind, "lemma1, lemma2 or ladyzhenskaya")->capture_default_str();
  labc->add_option("--r", lab.r, "exponents, comma separated")->delimiter(',');
  labc->add_option("--samples", lab.samples, "cases per r")->capture_default_str();
  labc->add_option("--n", lab.n, "grid points per axis")->capture_default_str();
  labc->add_option("--kmax", lab.kmax, "band limit of the inputs")->capture_default_str();
  labc->add_option("--decay", lab.decay, "amplitude decay exponent")->capture_default_str();
  labc->add_option("--seed", lab.seed, "base seed")->capture_default_str();
  labc->add_option("--threads", lab.threads, "worker threads (0 = hardware, capped by NSC_THREADS)");
  labc->add_option("--out-dir", lab.out_dir, "output directory")->capture_default_str();

  std::string alpha, beta, entry = "31";
  auto* adm = app.add_subcommand("admissible", "check an (alpha, beta) pair for one gradient entry");
  adm->add_option("--alpha", alpha, "spatial exponent, e.g. 9 or 5/2")->required();
  adm->add_option("--beta", beta, "time exponent")->required();
  adm->add_option("--entry", entry, "entry jk, e.g. 31 or 33")->capture_default_str();

  std::string csv_path;
  double tolerance = 1e-6;
  auto* aud = app.add_subcommand("audit", "re-run the energy audit on a series.csv");
  aud->add_option("csv", csv_path, "series CSV")->required();
  aud->add_option("--tolerance", tolerance, "relative tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << version << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return ok;
    err << "nsc: " << e.what() << '\n';
    if (app.got_subcommand(simulate)) err << simulate->help();
    return config_error;
  }

  if (simulate->parsed()) {
    if (seed_opt->count()) sim.seed = sim_seed;
    return cmd_simulate(sim, out, err);
  }
  if (labc->parsed()) return cmd_lab(lab, out, err);
  if (adm->parsed()) return cmd_admissible(alpha, beta, entry, out, err);
  return cmd_audit(csv_path, tolerance, out, err);
}

}  // namespace nsc::cli
