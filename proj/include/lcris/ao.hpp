#pragma once

#include <cfloat>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcris/phase_sca.hpp"
#include "lcris/precoder.hpp"
#include "lcris/rng.hpp"
#include "lcris/sinr.hpp"
#include "lcris/temperature.hpp"

namespace lcris {

struct AoOptions {
  double epsilon = 1e-3;     // relative min-SINR change that stops the outer loop
  int max_outer_iters = 20;
  int restarts = 1;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("AoOptions: epsilon must be > 0");
    if (max_outer_iters < 1)
      throw std::invalid_argument("AoOptions: max_outer_iters must be >= 1");
    if (restarts < 1) throw std::invalid_argument("AoOptions: restarts must be >= 1");
  }
};

/// Everything the schemes need besides the channels.
struct SolveContext {
  double power = 0.0;          // W
  Eigen::VectorXd noise;       // per-user variance
  AoOptions ao;
  ScaOptions sca;
  PrecoderOptions precoder;
  bool random_phase_mrt = false;  // MRT instead of max-min precoding for RandomPhase
};

enum class Scheme { Proposed, TempNeglecting, RandomPhase, WithoutRis, UpperBound };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "Proposed";
    case Scheme::TempNeglecting: return "TempNeglecting";
    case Scheme::RandomPhase: return "RandomPhase";
    case Scheme::WithoutRis: return "WithoutRis";
    case Scheme::UpperBound: return "UpperBound";
  }
  return "?";
}

struct SchemeResult {
  Scheme scheme = Scheme::Proposed;
  std::optional<PhaseVector> final_phases;
  Precoder final_precoder{Eigen::MatrixXcd(), 0.0};
  SinrReport report;
  int outer_iters = 0;
  std::vector<double> trace;  // min-SINR (linear) per outer iteration
};

struct AoRun {
  Eigen::MatrixXcd w;
  PhaseVector phases{Eigen::VectorXd(), kTwoPi};
  double value = 0.0;
  std::vector<double> trace;
  int iters = 0;
};

namespace detail {

inline PhaseVector random_phases(int n, double ceiling, SplitMix64& rng) {
  Eigen::VectorXd theta(n);
  for (int i = 0; i < n; ++i) theta[i] = rng.uniform(0.0, ceiling);
  return PhaseVector(theta, ceiling);
}

inline AoRun single_ao(const ChannelSet& ch, const SolveContext& ctx, double ceiling,
                       SplitMix64& rng) {
  AoRun run;
  run.phases = random_phases(ch.n(), ceiling, rng);
  std::optional<Eigen::MatrixXcd> w;
  double prev = -1.0;
  bool have_prev = false;

  for (int i = 0; i < ctx.ao.max_outer_iters; ++i) {
    EffectiveChannels f = effective_user_channels(ch, run.phases);
    PrecoderSolution sol = maxmin_precoder(f.f, ctx.noise, ctx.power, ctx.precoder);
    if (!w) {
      w = sol.precoder.w;
    } else {
      // Accept the fresh precoder only if it does not lose ground at the
      // current phases; keeps the outer trace monotone.
      double v_new = sinr_from_channels(f.f, sol.precoder.w, ctx.noise).min_linear;
      double v_old = sinr_from_channels(f.f, *w, ctx.noise).min_linear;
      if (v_new >= v_old) w = sol.precoder.w;
    }
    Precoder precoder(*w, ctx.power);
    run.phases = optimize_phases(ch, precoder, run.phases, ctx.sca, ctx.noise);
    double cur = sinr_per_user(ch, precoder, run.phases, ctx.noise).min_linear;
    run.trace.push_back(cur);
    run.iters = i + 1;
    if (have_prev &&
        std::abs(cur - prev) <= ctx.ao.epsilon * std::max(std::abs(cur), DBL_MIN))
      break;
    prev = cur;
    have_prev = true;
  }
  run.w = *w;
  run.value = run.trace.back();
  return run;
}

}  // namespace detail

/// Algorithm: repeat { max-min precoder for fixed phases; SCA phase step for
/// fixed precoder } until the relative min-SINR change drops below epsilon or
/// the iteration cap hits. Restarts draw fresh uniform initial phases from
/// `rng` and the best run wins (ties keep the earliest run).
inline AoRun alternating_optimize(const ChannelSet& ch, const SolveContext& ctx,
                                  double theta_ceiling, SplitMix64& rng) {
  ctx.ao.validate();
  if (!(theta_ceiling > 0.0) || theta_ceiling > kTwoPi * (1.0 + 1e-12))
    throw std::invalid_argument("alternating_optimize: ceiling must lie in (0, 2pi]");
  double ceiling = std::min(theta_ceiling, kTwoPi);

  std::optional<AoRun> best;
  for (int r = 0; r < ctx.ao.restarts; ++r) {
    AoRun run = detail::single_ao(ch, ctx, ceiling, rng);
    if (!best || run.value > best->value) best = std::move(run);
  }
  return *best;
}

inline PhaseVector clip_phases(const PhaseVector& phases, double new_ceiling) {
  double ceiling = std::min(new_ceiling, kTwoPi);
  Eigen::VectorXd theta = phases.theta.cwiseMin(ceiling);
  return PhaseVector(theta, ceiling);
}

/// Runs one comparison scheme. `rng` is the scheme's optimizer stream; every
/// scheme must receive an identically-seeded copy so results do not depend on
/// which other schemes run.
///
///  - Proposed:       AO under the temperature ceiling theta_max(T). The
///                    full-range design, clipped to the ceiling, is also
///                    evaluated as a candidate and the better one is kept, so
///                    the proposed design never loses to TempNeglecting.
///  - TempNeglecting: AO with the full 2pi range; the hardware then saturates
///                    each phase at theta_max(T) (hard clip), precoder kept.
///  - RandomPhase:    uniform random phases within the ceiling; precoder
///                    optimized for them (or MRT when ctx.random_phase_mrt).
///  - WithoutRis:     direct channels only, MRT precoder with an equal split.
///  - UpperBound:     AO with the full 2pi range, no clipping; the Proposed
///                    solution is evaluated as a candidate, so per seed
///                    UpperBound >= Proposed >= TempNeglecting.
///
/// At T <= T_r all three AO-based schemes see the same ceiling and identical
/// streams and therefore produce bit-identical results.
inline SchemeResult run_scheme(Scheme scheme, const ChannelSet& ch, const SolveContext& ctx,
                               const LcCellModel& lc, double t_kelvin,
                               const SplitMix64& rng) {
  const double raw_ceiling = theta_max(lc, t_kelvin);
  const double ceiling = std::min(raw_ceiling, kTwoPi);
  if (!(ceiling > 0.0))
    throw std::domain_error("run_scheme: no usable phase range at this temperature");

  try {
    switch (scheme) {
      case Scheme::WithoutRis: {
        Precoder w = mrt_precoder(ch.h_d, ctx.power);
        SinrReport rep = sinr_from_channels(ch.h_d, w.w, ctx.noise);
        return SchemeResult{scheme, std::nullopt, w, rep, 0, {rep.min_linear}};
      }
      case Scheme::RandomPhase: {
        SplitMix64 r = rng;
        PhaseVector theta = detail::random_phases(ch.n(), ceiling, r);
        EffectiveChannels f = effective_user_channels(ch, theta);
        Precoder w = ctx.random_phase_mrt
                         ? mrt_precoder(f.f, ctx.power)
                         : maxmin_precoder(f.f, ctx.noise, ctx.power, ctx.precoder).precoder;
        SinrReport rep = sinr_from_channels(f.f, w.w, ctx.noise);
        return SchemeResult{scheme, theta, w, rep, 0, {rep.min_linear}};
      }
      case Scheme::TempNeglecting: {
        SplitMix64 r = rng;
        AoRun full = alternating_optimize(ch, ctx, kTwoPi, r);
        PhaseVector clipped = clip_phases(full.phases, ceiling);
        Precoder w(full.w, ctx.power);
        SinrReport rep = sinr_per_user(ch, w, clipped, ctx.noise);
        return SchemeResult{scheme, clipped, w, rep, full.iters, full.trace};
      }
      case Scheme::Proposed: {
        SplitMix64 r_own = rng;
        AoRun own = alternating_optimize(ch, ctx, ceiling, r_own);
        SplitMix64 r_full = rng;
        AoRun full = alternating_optimize(ch, ctx, kTwoPi, r_full);
        PhaseVector clipped = clip_phases(full.phases, ceiling);
        Precoder w_full(full.w, ctx.power);
        SinrReport rep_clipped = sinr_per_user(ch, w_full, clipped, ctx.noise);
        if (rep_clipped.min_linear > own.value)
          return SchemeResult{scheme,         clipped, w_full, rep_clipped,
                              full.iters,     {rep_clipped.min_linear}};
        Precoder w_own(own.w, ctx.power);
        SinrReport rep = sinr_per_user(ch, w_own, own.phases, ctx.noise);
        return SchemeResult{scheme, own.phases, w_own, rep, own.iters, own.trace};
      }
      case Scheme::UpperBound: {
        SplitMix64 r_own = rng;
        AoRun own = alternating_optimize(ch, ctx, kTwoPi, r_own);
        SchemeResult prop = run_scheme(Scheme::Proposed, ch, ctx, lc, t_kelvin, rng);
        if (prop.report.min_linear > own.value) {
          PhaseVector rewrapped(prop.final_phases->theta, kTwoPi);
          return SchemeResult{scheme,
                              rewrapped,
                              prop.final_precoder,
                              prop.report,
                              prop.outer_iters,
                              {prop.report.min_linear}};
        }
        Precoder w(own.w, ctx.power);
        SinrReport rep = sinr_per_user(ch, w, own.phases, ctx.noise);
        return SchemeResult{scheme, own.phases, w, rep, own.iters, own.trace};
      }
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(scheme_name(scheme)) + ": " + e.what());
  }
  throw std::logic_error("run_scheme: unknown scheme");
}

}  // namespace lcris
