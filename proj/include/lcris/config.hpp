#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lcris/ao.hpp"
#include "lcris/channel.hpp"
#include "lcris/common.hpp"
#include "lcris/geometry.hpp"
#include "lcris/temperature.hpp"

namespace lcris {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full scenario description. Defaults reproduce the reference mmWave setup:
/// 28 GHz carrier, 40 dBm budget, -80 dBm noise, 64-antenna base station,
/// 40 x 40 RIS, two users, 10 dB Rician factors everywhere, exponent-2
/// pathloss with -61 dB at 1 m, reference/clearing temperatures 300/400 K,
/// ambient 55 C.
struct ExperimentConfig {
  // Scenario
  double frequency_hz = 28e9;
  double power_dbm = 40.0;
  double noise_dbm = -80.0;
  int m_antennas = 64;
  int ris_nx = 40;
  int ris_nz = 40;
  int users = 2;
  double t_ref_k = 300.0;
  double t_clear_k = 400.0;
  double alpha = 0.25;
  double temperature_c = 55.0;
  Eigen::Vector3d bs_pos{0.0, 20.0, 4.0};
  Eigen::Vector3d ris_pos{0.0, 0.0, 4.0};
  Eigen::Vector3d ue_region_lo{-5.0, 5.0, 1.5};
  Eigen::Vector3d ue_region_hi{5.0, 15.0, 1.5};
  double rician_bs_ris_db = 10.0;
  double rician_ris_ue_db = 10.0;
  double rician_bs_ue_db = 10.0;
  double pathloss_exponent = 2.0;
  double c0_db = -61.0;
  double d0_m = 1.0;
  double direct_extra_loss_db = 10.0;

  // Solvers and experiment control
  double epsilon = 1e-3;
  int i_max = 20;
  int restarts = 1;
  int trials = 50;
  std::uint64_t seed = 1;
  double precoder_sinr_tol = 1e-4;
  double precoder_fp_tol = 1e-10;
  int precoder_fp_max_iters = 500;
  double sca_trust_init = 0.3;
  double sca_trust_min = 1e-4;
  double sca_shrink = 0.5;
  int sca_max_iters = 100;
  double sca_improve_tol = 1e-6;
  bool random_phase_mrt = false;
  double lc_cell_gap = 0.0;  // m; 0 leaves the absolute birefringence undefined

  int ris_elements() const { return ris_nx * ris_nz; }
  double wavelength() const { return kSpeedOfLight / frequency_hz; }
  double t_kelvin() const { return celsius_to_kelvin(temperature_c); }
  double power_watts() const { return dbm_to_watts(power_dbm); }
  double noise_watts() const { return dbm_to_watts(noise_dbm); }

  void validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
      throw ConfigError("config key '" + key + "': " + why);
    };
    if (!(frequency_hz > 0.0)) fail("frequency_hz", "must be > 0");
    if (m_antennas < 1) fail("m_antennas", "must be >= 1");
    if (ris_nx < 1) fail("ris_nx", "must be >= 1");
    if (ris_nz < 1) fail("ris_nz", "must be >= 1");
    if (users < 1) fail("users", "must be >= 1");
    if (!(t_ref_k > 0.0) || !(t_clear_k > t_ref_k))
      fail("t_ref_k/t_clear_k", "need 0 < t_ref_k < t_clear_k");
    if (!(alpha > 0.0)) fail("alpha", "must be > 0");
    if (!(d0_m > 0.0)) fail("d0_m", "must be > 0");
    if (pathloss_exponent < 0.0) fail("pathloss_exponent", "must be >= 0");
    if (direct_extra_loss_db < 0.0) fail("direct_extra_loss_db", "must be >= 0");
    if (!(epsilon > 0.0)) fail("epsilon", "must be > 0");
    if (i_max < 1) fail("i_max", "must be >= 1");
    if (restarts < 1) fail("restarts", "must be >= 1");
    if (trials < 1) fail("trials", "must be >= 1");
    if (lc_cell_gap < 0.0) fail("lc_cell_gap", "must be >= 0");
    for (int i = 0; i < 3; ++i)
      if (ue_region_lo[i] > ue_region_hi[i]) fail("ue_region", "empty placement region");
  }

  ChannelParams channel_params() const {
    return ChannelParams{frequency_hz,      rician_bs_ris_db, rician_ris_ue_db,
                         rician_bs_ue_db,   pathloss_exponent, c0_db,
                         d0_m,              direct_extra_loss_db};
  }

  ChannelScenario scenario() const {
    double spacing = wavelength() / 2.0;
    return ChannelScenario{ArrayGeometry::ula_x(m_antennas, spacing, bs_pos),
                           ArrayGeometry::upa_xz(ris_nx, ris_nz, spacing, ris_pos),
                           UePlacementBox{ue_region_lo, ue_region_hi}, users};
  }

  LcCellModel lc_model() const {
    LcCellModel m(t_ref_k, t_clear_k, alpha, /*allow_alpha_out_of_range=*/true);
    if (lc_cell_gap > 0.0) {
      m.wavelength = wavelength();
      m.cell_gap = lc_cell_gap;
    }
    return m;
  }

  SolveContext solve_context() const {
    SolveContext ctx;
    ctx.power = power_watts();
    ctx.noise = Eigen::VectorXd::Constant(users, noise_watts());
    ctx.ao = AoOptions{epsilon, i_max, restarts};
    ctx.sca = ScaOptions{sca_trust_init, sca_trust_min, sca_shrink, sca_max_iters,
                         sca_improve_tol};
    ctx.precoder = PrecoderOptions{precoder_sinr_tol, precoder_fp_max_iters,
                                   precoder_fp_tol};
    ctx.random_phase_mrt = random_phase_mrt;
    return ctx;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_numbers(const std::string& value, size_t count,
                                         int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != item.size())
      throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                        "': bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.size() != count)
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "': expected " +
                      std::to_string(count) + " comma-separated values");
  return out;
}

inline double parse_double(const std::string& value, int line, const std::string& key) {
  return parse_numbers(value, 1, line, key)[0];
}

inline long long parse_int(const std::string& value, int line, const std::string& key) {
  double v = parse_double(value, line, key);
  long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': expected an integer");
  return i;
}

inline bool parse_bool(const std::string& value, int line, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                    "': expected true/false");
}

}  // namespace detail

/// Flat `key = value` format, one pair per line, '#' starts a comment.
/// Missing keys keep their defaults; unknown keys are errors.
inline ExperimentConfig parse_config_stream(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    std::string key = detail::trim(s.substr(0, eq));
    std::string value = detail::trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");

    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_numbers;

    if (key == "frequency_hz") cfg.frequency_hz = parse_double(value, line, key);
    else if (key == "power_dbm") cfg.power_dbm = parse_double(value, line, key);
    else if (key == "noise_dbm") cfg.noise_dbm = parse_double(value, line, key);
    else if (key == "m_antennas") cfg.m_antennas = static_cast<int>(parse_int(value, line, key));
    else if (key == "ris_nx") cfg.ris_nx = static_cast<int>(parse_int(value, line, key));
    else if (key == "ris_nz") cfg.ris_nz = static_cast<int>(parse_int(value, line, key));
    else if (key == "users") cfg.users = static_cast<int>(parse_int(value, line, key));
    else if (key == "t_ref_k") cfg.t_ref_k = parse_double(value, line, key);
    else if (key == "t_clear_k") cfg.t_clear_k = parse_double(value, line, key);
    else if (key == "alpha") cfg.alpha = parse_double(value, line, key);
    else if (key == "temperature_c") cfg.temperature_c = parse_double(value, line, key);
    else if (key == "bs_pos") {
      auto v = parse_numbers(value, 3, line, key);
      cfg.bs_pos = Eigen::Vector3d(v[0], v[1], v[2]);
    } else if (key == "ris_pos") {
      auto v = parse_numbers(value, 3, line, key);
      cfg.ris_pos = Eigen::Vector3d(v[0], v[1], v[2]);
    } else if (key == "ue_region") {
      // xmin,xmax,ymin,ymax,zmin,zmax
      auto v = parse_numbers(value, 6, line, key);
      cfg.ue_region_lo = Eigen::Vector3d(v[0], v[2], v[4]);
      cfg.ue_region_hi = Eigen::Vector3d(v[1], v[3], v[5]);
    }
    else if (key == "rician_bs_ris_db") cfg.rician_bs_ris_db = parse_double(value, line, key);
    else if (key == "rician_ris_ue_db") cfg.rician_ris_ue_db = parse_double(value, line, key);
    else if (key == "rician_bs_ue_db") cfg.rician_bs_ue_db = parse_double(value, line, key);
    else if (key == "pathloss_exponent") cfg.pathloss_exponent = parse_double(value, line, key);
    else if (key == "c0_db") cfg.c0_db = parse_double(value, line, key);
    else if (key == "d0_m") cfg.d0_m = parse_double(value, line, key);
    else if (key == "direct_extra_loss_db")
      cfg.direct_extra_loss_db = parse_double(value, line, key);
    else if (key == "epsilon") cfg.epsilon = parse_double(value, line, key);
    else if (key == "i_max") cfg.i_max = static_cast<int>(parse_int(value, line, key));
    else if (key == "restarts") cfg.restarts = static_cast<int>(parse_int(value, line, key));
    else if (key == "trials") cfg.trials = static_cast<int>(parse_int(value, line, key));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, line, key));
    else if (key == "precoder_sinr_tol") cfg.precoder_sinr_tol = parse_double(value, line, key);
    else if (key == "precoder_fp_tol") cfg.precoder_fp_tol = parse_double(value, line, key);
    else if (key == "precoder_fp_max_iters")
      cfg.precoder_fp_max_iters = static_cast<int>(parse_int(value, line, key));
    else if (key == "sca_trust_init") cfg.sca_trust_init = parse_double(value, line, key);
    else if (key == "sca_trust_min") cfg.sca_trust_min = parse_double(value, line, key);
    else if (key == "sca_shrink") cfg.sca_shrink = parse_double(value, line, key);
    else if (key == "sca_max_iters")
      cfg.sca_max_iters = static_cast<int>(parse_int(value, line, key));
    else if (key == "sca_improve_tol") cfg.sca_improve_tol = parse_double(value, line, key);
    else if (key == "random_phase_mrt") cfg.random_phase_mrt = parse_bool(value, line, key);
    else if (key == "lc_cell_gap") cfg.lc_cell_gap = parse_double(value, line, key);
    else
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config_stream(in);
}

inline ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config_stream(in);
}

/// Spec'd assembly entry point: channels for one trial of this configuration.
inline ChannelSet generate_channel_set(const ExperimentConfig& cfg, const SplitMix64& rng) {
  cfg.validate();
  return generate_channel_set(cfg.scenario(), cfg.channel_params(), rng);
}

}  // namespace lcris
