#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "lcris/ao.hpp"
#include "lcris/config.hpp"

namespace lcris {

struct ResultRow {
  std::string scheme;
  int trial = 0;
  std::string param = "none";
  double param_value = 0.0;
  double min_sinr_db = 0.0;
  int outer_iters = 0;
  double runtime_ms = 0.0;   // excluded from determinism guarantees
  std::string status = "ok";
};

enum class SweepParam { RisElements, TemperatureC, PowerDbm, Users };

inline const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::RisElements: return "ris_elements";
    case SweepParam::TemperatureC: return "temperature_c";
    case SweepParam::PowerDbm: return "power_dbm";
    case SweepParam::Users: return "users";
  }
  return "?";
}

inline SweepParam sweep_param_from_name(const std::string& name) {
  if (name == "ris_elements") return SweepParam::RisElements;
  if (name == "temperature_c") return SweepParam::TemperatureC;
  if (name == "power_dbm") return SweepParam::PowerDbm;
  if (name == "users") return SweepParam::Users;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

namespace detail {

// Stream map per (seed, trial): fork 1 drives the channels (further split by
// component inside generate_channel_set), fork 2 is the optimizer stream that
// every scheme receives as an identical copy.
inline SplitMix64 trial_rng(std::uint64_t seed, int trial) {
  return SplitMix64(seed).fork(100, static_cast<std::uint64_t>(trial));
}

inline const std::vector<Scheme>& canonical_scheme_order() {
  static const std::vector<Scheme> order = {Scheme::Proposed, Scheme::TempNeglecting,
                                            Scheme::RandomPhase, Scheme::WithoutRis,
                                            Scheme::UpperBound};
  return order;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

/// One Monte Carlo cell: per trial, draw one ChannelSet and run every
/// requested scheme on it (schemes always execute and report in canonical
/// enum order). Solver failures become rows with a failure status and the
/// sentinel SINR of -999 dB; the run continues.
inline std::vector<ResultRow> run_experiment_rows(const ExperimentConfig& cfg,
                                                  const std::vector<Scheme>& schemes,
                                                  const std::string& param_label = "none",
                                                  double param_value = 0.0,
                                                  int threads = 1) {
  cfg.validate();
  std::vector<Scheme> ordered;
  for (Scheme s : detail::canonical_scheme_order())
    for (Scheme r : schemes)
      if (r == s) {
        ordered.push_back(s);
        break;
      }
  if (ordered.empty()) throw ConfigError("run_experiment: no schemes requested");

  const LcCellModel lc = cfg.lc_model();
  const SolveContext ctx = cfg.solve_context();
  const double t_kelvin = cfg.t_kelvin();
  const int per_trial = static_cast<int>(ordered.size());
  std::vector<ResultRow> rows(static_cast<size_t>(cfg.trials) * per_trial);

  auto run_trial = [&](int trial) {
    SplitMix64 base = detail::trial_rng(cfg.seed, trial);
    ChannelSet ch = generate_channel_set(cfg, base.fork(1));
    SplitMix64 opt = base.fork(2);
    for (int si = 0; si < per_trial; ++si) {
      ResultRow& row = rows[static_cast<size_t>(trial) * per_trial + si];
      row.scheme = scheme_name(ordered[static_cast<size_t>(si)]);
      row.trial = trial;
      row.param = param_label;
      row.param_value = param_value;
      auto t0 = std::chrono::steady_clock::now();
      try {
        SchemeResult res =
            run_scheme(ordered[static_cast<size_t>(si)], ch, ctx, lc, t_kelvin, opt);
        row.min_sinr_db = res.report.min_db;
        row.outer_iters = res.outer_iters;
      } catch (const std::exception& e) {
        row.min_sinr_db = -999.0;
        row.outer_iters = 0;
        row.status = std::string("failed: ") + e.what();
      }
      auto t1 = std::chrono::steady_clock::now();
      row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
  };

  if (threads <= 1) {
    for (int t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1)) run_trial(t);
    };
    std::vector<std::thread> pool;
    int n = std::min(threads, cfg.trials);
    pool.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

struct SummaryEntry {
  std::string scheme;
  double param_value = 0.0;
  double mean_db = 0.0;
  double std_db = 0.0;
  int count = 0;
};

/// Mean and sample standard deviation of min_sinr_db per (scheme, param_value),
/// over rows with status "ok".
inline std::vector<SummaryEntry> summarize(const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, double>, std::vector<double>> buckets;
  for (const auto& r : rows)
    if (r.status == "ok") buckets[{r.scheme, r.param_value}].push_back(r.min_sinr_db);
  std::vector<SummaryEntry> out;
  for (const auto& [key, vals] : buckets) {
    SummaryEntry e;
    e.scheme = key.first;
    e.param_value = key.second;
    e.count = static_cast<int>(vals.size());
    double sum = 0.0;
    for (double v : vals) sum += v;
    e.mean_db = sum / e.count;
    double ss = 0.0;
    for (double v : vals) ss += (v - e.mean_db) * (v - e.mean_db);
    e.std_db = e.count > 1 ? std::sqrt(ss / (e.count - 1)) : 0.0;
    out.push_back(e);
  }
  return out;
}

/// CSV layout: fixed header, one row per (param cell, trial, scheme) sorted by
/// (param_value, trial, scheme order), 6 significant digits, LF endings, then
/// a '#'-prefixed summary block derived from the data rows.
inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "scheme,trial,param,param_value,min_sinr_db,outer_iters,runtime_ms,status\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.trial << ',' << r.param << ','
        << detail::format_double(r.param_value) << ','
        << detail::format_double(r.min_sinr_db) << ',' << r.outer_iters << ','
        << detail::format_double(r.runtime_ms) << ',' << r.status << '\n';
  }
  out << "# summary,scheme,param_value,mean_min_sinr_db,std_min_sinr_db,count\n";
  for (const auto& e : summarize(rows)) {
    out << "# summary," << e.scheme << ',' << detail::format_double(e.param_value) << ','
        << detail::format_double(e.mean_db) << ',' << detail::format_double(e.std_db)
        << ',' << e.count << '\n';
  }
}

inline void write_csv_file(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_csv(rows, out);
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

inline void run_experiment(const ExperimentConfig& cfg, const std::vector<Scheme>& schemes,
                           const std::string& out_path, int threads = 1) {
  write_csv_file(run_experiment_rows(cfg, schemes, "none", 0.0, threads), out_path);
}

inline ExperimentConfig apply_sweep_value(const ExperimentConfig& base, SweepParam param,
                                          double value) {
  ExperimentConfig cfg = base;
  switch (param) {
    case SweepParam::RisElements: {
      int total = static_cast<int>(value);
      if (static_cast<double>(total) != value || total < 1)
        throw ConfigError("ris_elements sweep values must be positive integers");
      int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(total))));
      if (side * side != total)
        throw ConfigError("ris_elements sweep values must be perfect squares (square RIS)");
      cfg.ris_nx = side;
      cfg.ris_nz = side;
      break;
    }
    case SweepParam::TemperatureC:
      cfg.temperature_c = value;
      break;
    case SweepParam::PowerDbm:
      cfg.power_dbm = value;
      break;
    case SweepParam::Users: {
      int users = static_cast<int>(value);
      if (static_cast<double>(users) != value || users < 1)
        throw ConfigError("users sweep values must be positive integers");
      cfg.users = users;
      break;
    }
  }
  cfg.validate();
  return cfg;
}

/// One CSV covering every sweep cell; the base seed is shared, so trials are
/// paired across cells wherever the swept parameter does not change the
/// channel dimensions.
inline std::vector<ResultRow> run_sweep_rows(const ExperimentConfig& base, SweepParam param,
                                             const std::vector<double>& values,
                                             const std::vector<Scheme>& schemes,
                                             int threads = 1) {
  if (values.empty()) throw ConfigError("run_sweep: empty value list");
  std::vector<ResultRow> all;
  for (double v : values) {
    ExperimentConfig cfg = apply_sweep_value(base, param, v);
    auto rows = run_experiment_rows(cfg, schemes, sweep_param_name(param), v, threads);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

inline void run_sweep(const ExperimentConfig& base, SweepParam param,
                      const std::vector<double>& values, const std::vector<Scheme>& schemes,
                      const std::string& out_path, int threads = 1) {
  write_csv_file(run_sweep_rows(base, param, values, schemes, threads), out_path);
}

/// Temperature diagnostic: theta_max and birefringence over a Celsius sweep.
/// Without a configured cell gap the birefringence column is normalized to
/// its reference value (delta_n / delta_n0).
inline void write_thermal_csv(const ExperimentConfig& cfg, std::ostream& out,
                              double t_min_c, double t_max_c, double t_step_c) {
  if (!(t_step_c > 0.0)) throw ConfigError("thermal sweep: step must be > 0");
  if (t_max_c < t_min_c) throw ConfigError("thermal sweep: t_max below t_min");
  LcCellModel lc = cfg.lc_model();
  out << "t_celsius,theta_max_rad,delta_n\n";
  for (double t = t_min_c; t <= t_max_c + 1e-9; t += t_step_c) {
    double tk = celsius_to_kelvin(t);
    if (tk > lc.t_clear) break;
    double dn = lc.delta_n0() ? birefringence(lc, tk)
                              : std::pow(1.0 - tk / lc.t_clear, lc.alpha);
    out << detail::format_double(t) << ',' << detail::format_double(theta_max(lc, tk))
        << ',' << detail::format_double(dn) << '\n';
  }
}

inline void write_thermal_csv_file(const ExperimentConfig& cfg, const std::string& path,
                                   double t_min_c, double t_max_c, double t_step_c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_thermal_csv(cfg, out, t_min_c, t_max_c, t_step_c);
}

}  // namespace lcris
