// Command-line driver: Monte Carlo runs, parameter sweeps, and the thermal
// diagnostic, all emitting CSV.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcris/experiment.hpp"

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<lcris::Scheme> parse_schemes(const std::string& csv) {
  using lcris::Scheme;
  std::vector<Scheme> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string name = lower(item);
    if (name.empty()) continue;
    if (name == "all")
      return {Scheme::Proposed, Scheme::TempNeglecting, Scheme::RandomPhase,
              Scheme::WithoutRis, Scheme::UpperBound};
    else if (name == "proposed") out.push_back(Scheme::Proposed);
    else if (name == "tempneglecting" || name == "temp_neglecting")
      out.push_back(Scheme::TempNeglecting);
    else if (name == "randomphase" || name == "random_phase")
      out.push_back(Scheme::RandomPhase);
    else if (name == "withoutris" || name == "without_ris")
      out.push_back(Scheme::WithoutRis);
    else if (name == "upperbound" || name == "upper_bound")
      out.push_back(Scheme::UpperBound);
    else
      throw lcris::ConfigError("unknown scheme '" + item + "'");
  }
  if (out.empty()) throw lcris::ConfigError("no schemes given");
  return out;
}

// Full-scale runs (reference-sized arrays) take hours; require an explicit
// opt-in so a default config does not accidentally start one.
void check_scale(const lcris::ExperimentConfig& cfg, bool full_scale) {
  if (full_scale) return;
  if (cfg.ris_elements() > 256 || cfg.m_antennas > 16)
    throw lcris::ConfigError(
        "scenario exceeds desk scale (N <= 256, M <= 16); pass --full-scale to run it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temperature-aware RIS max-min SINR simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, schemes_csv = "all", param_name, values_csv;
  int trials_override = -1;
  long long seed_override = -1;
  int threads = 1;
  bool full_scale = false;
  double t_min_c = 0.0, t_max_c = -1.0, t_step_c = 1.0;

  auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--config", config_path, "flat key=value config file");
    auto* out = cmd->add_option("--out", out_path, "output CSV path");
    if (needs_out) out->required();
    cmd->add_option("--threads", threads, "worker threads over trials");
    cmd->add_flag("--full-scale", full_scale, "allow reference-sized scenarios");
  };

  CLI::App* run = app.add_subcommand("run", "Monte Carlo run of the requested schemes");
  add_common(run, true);
  run->add_option("--trials", trials_override, "override trial count");
  run->add_option("--seed", seed_override, "override RNG seed");
  run->add_option("--schemes", schemes_csv,
                  "comma list: Proposed,TempNeglecting,RandomPhase,WithoutRis,UpperBound or 'all'");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep, one CSV for all cells");
  add_common(sweep, true);
  sweep->add_option("--param", param_name, "ris_elements | temperature_c | power_dbm | users")
      ->required();
  sweep->add_option("--values", values_csv, "comma-separated sweep values")->required();
  sweep->add_option("--trials", trials_override, "override trial count");
  sweep->add_option("--seed", seed_override, "override RNG seed");
  sweep->add_option("--schemes", schemes_csv, "schemes to run");

  CLI::App* thermal = app.add_subcommand("thermal", "theta_max/birefringence sweep CSV");
  add_common(thermal, true);
  thermal->add_option("--t-min", t_min_c, "sweep start, Celsius (default 0)");
  thermal->add_option("--t-max", t_max_c, "sweep end, Celsius (default: clearing point)");
  thermal->add_option("--t-step", t_step_c, "sweep step, Celsius (default 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    lcris::ExperimentConfig cfg =
        config_path.empty() ? lcris::ExperimentConfig{} : lcris::parse_config(config_path);
    if (trials_override > 0) cfg.trials = trials_override;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    cfg.validate();

    if (run->parsed()) {
      check_scale(cfg, full_scale);
      lcris::run_experiment(cfg, parse_schemes(schemes_csv), out_path, threads);
      std::printf("wrote %s (%d trials)\n", out_path.c_str(), cfg.trials);
    } else if (sweep->parsed()) {
      lcris::SweepParam param = lcris::sweep_param_from_name(param_name);
      std::vector<double> values;
      {
        std::stringstream ss(values_csv);
        std::string item;
        while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
      }
      for (double v : values)
        check_scale(lcris::apply_sweep_value(cfg, param, v), full_scale);
      lcris::run_sweep(cfg, param, values, parse_schemes(schemes_csv), out_path, threads);
      std::printf("wrote %s (%zu cells x %d trials)\n", out_path.c_str(), values.size(),
                  cfg.trials);
    } else if (thermal->parsed()) {
      double hi = t_max_c >= t_min_c ? t_max_c : cfg.t_clear_k - 273.15;
      lcris::write_thermal_csv_file(cfg, out_path, t_min_c, hi, t_step_c);
      std::printf("wrote %s\n", out_path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
