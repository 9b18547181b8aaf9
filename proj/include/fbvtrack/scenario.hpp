#pragma once

// Run configurations: model selection, initial data, solver and functional
// parameters, plus the shipped scenario builders.  The shipped scenarios are
// built programmatically (deterministically) so the test suites and the CLI
// agree on every byte.

#include <string>
#include <vector>

#include "fbvtrack/model.hpp"
#include "fbvtrack/pvar.hpp"
#include "fbvtrack/tracking.hpp"

namespace fbv::scenario {

using model::ModelSystem;
using pvar::StepFn2;

struct RunConfig {
  std::string name;  // scenario label (optional)
  // model
  std::string model_name = "p_system";  // "p_system" | "degenerate_system"
  double gamma = 2.0;
  Vec2 base{1.0, 0.0};
  double radius = 0.4;
  // solver
  double nu = 0.02;
  double c_star = 0.0;  // <= 0: calibrate at run start
  double horizon = kInf;
  long max_events = 1'000'000;
  // analysis defaults
  double p = 1.25;
  double C1 = 8.0, C2 = 8.0;
  std::string curve_mode = "default";  // "default" | "exhaustive"
  // initial data (explicit step function in state space)
  StepFn2 initial;
};

inline ModelSystem make_model(const RunConfig& cfg) {
  if (cfg.model_name == "p_system") return ModelSystem::p_system(cfg.gamma, cfg.base, cfg.radius);
  if (cfg.model_name == "degenerate_system")
    return ModelSystem::degenerate_system(cfg.base, cfg.radius);
  throw InvalidInputError("unknown model name: " + cfg.model_name);
}

/// Warnings for configurations outside the regime the analysis targets.
inline std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> warnings;
  const auto m = make_model(cfg);
  if (!(cfg.p >= 1.0 && cfg.p <= 1.5))
    throw InvalidInputError("run config: p must lie in [1, 1.5] for simulation runs");
  if (!(cfg.nu > 0.0 && cfg.nu <= m.nu0()))
    throw InvalidInputError("run config: nu must lie in (0, nu0]");
  if (!(cfg.C1 >= 1.0 && cfg.C2 >= 1.0))
    throw InvalidInputError("run config: C1 and C2 must be >= 1");
  cfg.initial.validate();
  const double vp0 = pvar::vector_p_variation(cfg.initial, cfg.p, m);
  if (vp0 > 0.25)
    warnings.push_back("initial p-variation " + std::to_string(vp0) +
                       " is above the small-data regime; decay monitors may report violations");
  return warnings;
}

inline tracking::SimulationTrace run_config(const RunConfig& cfg) {
  const auto m = make_model(cfg);
  tracking::RunConfigLite lite;
  lite.nu = cfg.nu;
  lite.c_star = cfg.c_star;
  lite.horizon = cfg.horizon;
  lite.max_events = cfg.max_events;
  lite.scenario = cfg.name;
  const auto u0 = tracking::approximate_initial(cfg.initial, m, cfg.nu);
  return tracking::run(m, u0, lite);
}

// ---------------------------------------------------------------------------
// shipped scenarios

struct WaveTemplate {
  int family;
  riemann::Branch branch;
  double size;  // in units of the global scale
};

/// Initial step function composed of pure elementary waves at given positions.
inline StepFn2 compose_waves(const ModelSystem& m, const std::vector<WaveTemplate>& waves,
                             const std::vector<double>& xs, double scale) {
  StepFn2 f;
  Vec2 u = m.base();
  f.values.push_back(u);
  for (std::size_t k = 0; k < waves.size(); ++k) {
    u = riemann::eval_branch(m, waves[k].family, waves[k].branch, waves[k].size * scale, u);
    f.xs.push_back(xs[k]);
    f.values.push_back(u);
  }
  return f;
}

/// Scale a wave template so the initial data has the requested p-variation.
inline StepFn2 compose_waves_with_vp(const ModelSystem& m, const std::vector<WaveTemplate>& waves,
                                     const std::vector<double>& xs, double p, double vp_target) {
  double size_sum = 0.0;
  for (const auto& w : waves) size_sum += std::abs(w.size);
  double scale = vp_target / size_sum;  // starting guess
  double lo = 0.0, hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double vp = pvar::vector_p_variation(compose_waves(m, waves, xs, scale), p, m);
    if (std::abs(vp - vp_target) <= 1e-11 * vp_target) break;
    if (vp < vp_target) lo = scale;
    else hi = scale;
    if (hi == 0.0) scale *= 1.5;
    else if (lo == 0.0) scale *= 0.75;
    else scale = 0.5 * (lo + hi);
  }
  return compose_waves(m, waves, xs, scale);
}

/// A left-moving group of 2-waves against a right-moving group of 1-waves:
/// every pair of opposite-family fronts crosses, neighbors inside each group
/// merge, one rarefaction is wide enough to split into a fan.
inline std::vector<WaveTemplate> mixed_wave_template() {
  using riemann::Branch;
  return {
      // family-2 group (placed on the left, traveling right)
      {2, Branch::Lax, -3.0},
      {2, Branch::Rarefaction, 1.0},
      {2, Branch::Lax, -1.5},
      {2, Branch::Rarefaction, 0.8},
      {2, Branch::Lax, -0.9},
      {2, Branch::Rarefaction, 0.6},
      // family-1 group (placed on the right, traveling left)
      {1, Branch::Rarefaction, 4.0},
      {1, Branch::Lax, -3.0},
      {1, Branch::Rarefaction, 1.0},
      {1, Branch::Lax, -1.2},
      {1, Branch::Rarefaction, 0.7},
      {1, Branch::Lax, -0.8},
  };
}

inline std::vector<double> mixed_wave_positions() {
  return {-4.8, -4.0, -3.2, -2.4, -1.6, -0.8, 0.8, 1.6, 2.4, 3.2, 4.0, 4.8};
}

/// Sign-alternating template for large-amplitude runs: merges mostly cancel,
/// so individual strengths stay inside the Newton radius.
inline std::vector<WaveTemplate> alternating_wave_template() {
  using riemann::Branch;
  return {
      {2, Branch::Lax, -1.0},
      {2, Branch::Rarefaction, 1.0},
      {2, Branch::Lax, -1.0},
      {2, Branch::Rarefaction, 1.0},
      {1, Branch::Rarefaction, 1.0},
      {1, Branch::Lax, -1.0},
      {1, Branch::Rarefaction, 1.0},
      {1, Branch::Lax, -1.0},
  };
}

inline std::vector<double> alternating_wave_positions() {
  return {-4.0, -3.2, -2.4, -1.6, 1.6, 2.4, 3.2, 4.0};
}

/// The flagship configuration: V_p(u0) = 0.05, nu = 0.02, p = 1.25, C1 = C2 = 8.
inline RunConfig psystem_small() {
  RunConfig cfg;
  cfg.name = "psystem-small";
  cfg.c_star = 4.0;  // calibrated bound for the gamma = 2 system, safety included
  const auto m = make_model(cfg);
  cfg.initial =
      compose_waves_with_vp(m, mixed_wave_template(), mixed_wave_positions(), cfg.p, 0.05);
  return cfg;
}

/// Same shape scaled to an arbitrary initial p-variation (sweeps).
inline RunConfig psystem_sweep(double vp_target) {
  RunConfig cfg;
  cfg.name = "psystem-sweep";
  cfg.c_star = 4.0;
  const auto m = make_model(cfg);
  cfg.initial =
      compose_waves_with_vp(m, mixed_wave_template(), mixed_wave_positions(), cfg.p, vp_target);
  return cfg;
}

/// Adversarial large-data configuration (outside the small-data regime).
inline RunConfig psystem_large() {
  RunConfig cfg;
  cfg.name = "psystem-large";
  cfg.c_star = 4.0;
  cfg.base = Vec2{2.0, 0.0};  // flatter sound-speed profile leaves room for big waves
  cfg.radius = 1.2;
  const auto m = make_model(cfg);
  cfg.initial = compose_waves_with_vp(m, alternating_wave_template(),
                                      alternating_wave_positions(), cfg.p, 0.8);
  return cfg;
}

/// Scenario on the degenerate (monotone, not GNL) built-in model.
inline RunConfig degenerate_small() {
  RunConfig cfg;
  cfg.name = "degenerate-small";
  cfg.model_name = "degenerate_system";
  cfg.c_star = 4.0;
  const auto m = make_model(cfg);
  cfg.initial =
      compose_waves_with_vp(m, mixed_wave_template(), mixed_wave_positions(), cfg.p, 0.05);
  return cfg;
}

inline RunConfig builtin_scenario(const std::string& name) {
  if (name == "psystem-small") return psystem_small();
  if (name == "psystem-large") return psystem_large();
  if (name == "degenerate-small") return degenerate_small();
  throw InvalidInputError("unknown builtin scenario: " + name);
}

}  // namespace fbv::scenario
