#pragma once

// Riemann problems and front interactions for 2x2 monotone systems.
//
// Wave vocabulary: SW (shock, sigma <= 0 on the Lax branch), RW (rarefaction,
// sigma >= 0 on the rarefaction branch), CW (compression, sigma <= 0 on the
// rarefaction branch), plus zero-strength trivial fronts.
//
// solve_riemann solves u_r = U_2(s2; U_1(s1; u_l)) for the four combinations
// U_i in {rarefaction branch, Lax branch} by damped Newton in (s1, s2); pure
// rarefaction-branch problems are exact in Riemann coordinates and skip the
// iteration.  interact_opposite / interact_same apply the front-tracking
// branch-selection rules and extract the interaction coefficients used by the
// oracle functionals.

#include <array>
#include <string>
#include <vector>

#include "fbvtrack/common.hpp"
#include "fbvtrack/model.hpp"

namespace fbv::riemann {

using model::ModelSystem;

enum class WaveNature { Shock, Rarefaction, Compression, Trivial };
enum class Branch { Rarefaction, Lax };

inline const char* to_string(WaveNature n) {
  switch (n) {
    case WaveNature::Shock: return "SW";
    case WaveNature::Rarefaction: return "RW";
    case WaveNature::Compression: return "CW";
    default: return "trivial";
  }
}

/// Branch a wave of this nature lives on.
inline Branch branch_of(WaveNature n) {
  return n == WaveNature::Shock ? Branch::Lax : Branch::Rarefaction;
}

/// sigma_* convention: sigma for shocks, 0 otherwise.
inline double sigma_star(double sigma, WaveNature n) {
  return n == WaveNature::Shock ? sigma : 0.0;
}

/// Nature of a wave of strength sigma on a given branch.  |sigma| below
/// `triv_tol` is snapped to an exact zero (trivial wave).
inline WaveNature classify(Branch b, double& sigma, double triv_tol = 0.0) {
  if (std::abs(sigma) <= triv_tol) {
    sigma = 0.0;
    return WaveNature::Trivial;
  }
  if (b == Branch::Lax) return sigma < 0.0 ? WaveNature::Shock : WaveNature::Rarefaction;
  return sigma < 0.0 ? WaveNature::Compression : WaveNature::Rarefaction;
}

inline Vec2 eval_branch(const ModelSystem& m, int fam, Branch b, double s, Vec2 u0) {
  return b == Branch::Rarefaction ? m.rarefaction_curve(fam, s, u0) : m.lax_curve(fam, s, u0);
}

// ---------------------------------------------------------------------------
// Riemann solver

struct RiemannSolution {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  Vec2 u_mid;
  Branch variant1 = Branch::Rarefaction;
  Branch variant2 = Branch::Rarefaction;
  double residual = 0.0;  // chart-space reconstruction residual
  int iterations = 0;
};

inline RiemannSolution solve_riemann(const ModelSystem& m, Vec2 ul, Vec2 ur, Branch b1, Branch b2) {
  if (!m.in_ball(ul) || !m.in_ball(ur))
    throw ModelDomainError("solve_riemann: states outside the admissible ball");

  const Vec2 wl = m.to_riemann(ul), wr = m.to_riemann(ur);
  RiemannSolution sol;
  sol.variant1 = b1;
  sol.variant2 = b2;
  sol.sigma1 = wr[0] - wl[0];
  sol.sigma2 = wr[1] - wl[1];

  // pure rarefaction-branch composition is exact in Riemann coordinates;
  // the same holds whenever the Lax branch is only used with s >= 0
  auto effective = [&](Branch b, double s) { return b == Branch::Lax && s < 0.0; };
  if (!effective(b1, sol.sigma1) && !effective(b2, sol.sigma2)) {
    sol.u_mid = m.rarefaction_curve(1, sol.sigma1, ul);
    sol.residual = 0.0;
    return sol;
  }

  auto shoot = [&](double s1, double s2) {
    return m.to_riemann(eval_branch(m, 2, b2, s2, eval_branch(m, 1, b1, s1, ul))) - wr;
  };
  Vec2 F = shoot(sol.sigma1, sol.sigma2);
  const double scale = std::max(1.0, wr.norm() + wl.norm());
  int it = 0;
  for (; it < 50; ++it) {
    if (F.norm() <= 1e-13 * scale) break;
    // finite-difference Jacobian (kink-free away from s = 0 crossings)
    const double e1 = 1e-7 * std::max(1.0, std::abs(sol.sigma1));
    const double e2 = 1e-7 * std::max(1.0, std::abs(sol.sigma2));
    const Vec2 F1 = shoot(sol.sigma1 + e1, sol.sigma2);
    const Vec2 F2 = shoot(sol.sigma1, sol.sigma2 + e2);
    const Mat2 J{(F1[0] - F[0]) / e1, (F2[0] - F[0]) / e2,
                 (F1[1] - F[1]) / e1, (F2[1] - F[1]) / e2};
    const Vec2 step = J.solve(-1.0 * F);
    double damp = 1.0;
    for (int bt = 0; bt < 40; ++bt) {
      const double s1n = sol.sigma1 + damp * step[0];
      const double s2n = sol.sigma2 + damp * step[1];
      Vec2 Fn;
      bool ok = true;
      try {
        Fn = shoot(s1n, s2n);
      } catch (const ModelDomainError&) {
        ok = false;
      }
      if (ok && (Fn.norm() < F.norm() || damp < 1e-8)) {
        sol.sigma1 = s1n;
        sol.sigma2 = s2n;
        F = Fn;
        break;
      }
      damp *= 0.5;
    }
    if (std::abs(damp * step.norm()) < 1e-16) break;
  }
  if (F.norm() > 1e-10 * scale)
    throw ConvergenceError("solve_riemann: Newton failed to converge");
  sol.iterations = it;
  sol.residual = F.norm();
  sol.u_mid = eval_branch(m, 1, b1, sol.sigma1, ul);
  return sol;
}

// ---------------------------------------------------------------------------
// interaction coefficient extraction
//
// C^1(u_m; 0, s2) and C^2(u_m; s1, 0) of the crossing relations
//   s1' = s1 (1 + C^1 (s2)_*^3),   s2' = s2 (1 + C^2 (s1)_*^3)
// obtained by probing the interaction with +-eps rarefaction test waves and
// averaging the two one-sided quotients.  Only shock opposite waves carry a
// nonzero (sigma)_*, so extraction is defined for shock arguments.

inline constexpr double kCoefProbe = 1e-4;

/// C^1(u_m; 0, sigma2) for a 2-shock (u_l -> u_m) of strength sigma2 < 0.
inline double extract_c1(const ModelSystem& m, Vec2 ul, Vec2 um, double sigma2) {
  if (sigma2 == 0.0) return 0.0;
  double acc = 0.0;
  for (double eps : {kCoefProbe, -kCoefProbe}) {
    const Vec2 ur = m.rarefaction_curve(1, eps, um);
    const auto out = solve_riemann(m, ul, ur, Branch::Rarefaction, Branch::Lax);
    acc += (out.sigma1 / eps - 1.0) / cube(sigma2);
  }
  return 0.5 * acc;
}

/// C^2(u_m; sigma1, 0) for a 1-shock (u_m -> u_r) of strength sigma1 < 0.
inline double extract_c2(const ModelSystem& m, Vec2 um, Vec2 ur, double sigma1) {
  if (sigma1 == 0.0) return 0.0;
  double acc = 0.0;
  for (double eps : {kCoefProbe, -kCoefProbe}) {
    const Vec2 ul = m.rarefaction_curve(2, -eps, um);
    const auto out = solve_riemann(m, ul, ur, Branch::Lax, Branch::Rarefaction);
    acc += (out.sigma2 / eps - 1.0) / cube(sigma1);
  }
  return 0.5 * acc;
}

// ---------------------------------------------------------------------------
// interactions

struct InteractionOutcome {
  double sigma_out1 = 0.0;  // outgoing family-1 strength
  double sigma_out2 = 0.0;  // outgoing family-2 strength
  WaveNature nature_out1 = WaveNature::Trivial;
  WaveNature nature_out2 = WaveNature::Trivial;
  Vec2 u_mid;               // state between the outgoing 1- and 2-waves
  double c1 = 0.0, c2 = 0.0;  // coefficient values at this interaction
  // diagnostics
  double same_family_error = 0.0;   // sigma_out_i - (sigma + sigma') for same-family events
  double opposite_error = 0.0;      // max strength perturbation for crossings
};

/// Crossing of a 2-wave (u_l -> u_m, on the left) with a 1-wave (u_m -> u_r).
/// Outgoing waves keep the incoming natures; no fan splitting here.
inline InteractionOutcome interact_opposite(const ModelSystem& m, Vec2 ul, Vec2 um, Vec2 ur,
                                            WaveNature left2, WaveNature right1) {
  const Vec2 wl = m.to_riemann(ul), wm = m.to_riemann(um), wr = m.to_riemann(ur);
  const double sigma2 = wm[1] - wl[1];
  const double sigma1 = wr[0] - wm[0];
  if ((left2 == WaveNature::Shock && sigma2 > 1e-12) ||
      (right1 == WaveNature::Shock && sigma1 > 1e-12) ||
      (left2 == WaveNature::Rarefaction && sigma2 < -1e-12) ||
      (right1 == WaveNature::Rarefaction && sigma1 < -1e-12) ||
      (left2 == WaveNature::Compression && sigma2 > 1e-12) ||
      (right1 == WaveNature::Compression && sigma1 > 1e-12))
    throw PreconditionError("interact_opposite: natures inconsistent with the given states");

  InteractionOutcome out;
  const Branch b1 = branch_of(right1), b2 = branch_of(left2);
  const auto sol = solve_riemann(m, ul, ur, b1, b2);
  out.sigma_out1 = sol.sigma1;
  out.sigma_out2 = sol.sigma2;
  out.u_mid = sol.u_mid;
  // natures are preserved across opposite-family crossings
  out.nature_out1 = right1;
  out.nature_out2 = left2;
  if (right1 != WaveNature::Trivial && std::abs(sigma1) > 1e-12 && out.sigma_out1 * sigma1 < 0.0)
    throw ConvergenceError("interact_opposite: outgoing strength changed sign");
  if (left2 != WaveNature::Trivial && std::abs(sigma2) > 1e-12 && out.sigma_out2 * sigma2 < 0.0)
    throw ConvergenceError("interact_opposite: outgoing strength changed sign");
  out.c1 = left2 == WaveNature::Shock ? extract_c1(m, ul, um, sigma2) : 0.0;
  out.c2 = right1 == WaveNature::Shock ? extract_c2(m, um, ur, sigma1) : 0.0;
  out.opposite_error =
      std::max(std::abs(out.sigma_out1 - sigma1), std::abs(out.sigma_out2 - sigma2));
  return out;
}

/// Interaction of two fronts of family `fam`: (u_l -> u_m) of strength sigma
/// and (u_m -> u_r) of strength sigma'.  Branch selection:
///   * family fam outgoing on the Lax branch if an incoming wave is a shock, or
///     if sigma sigma' > 0 with sigma + sigma' <= -2 nu (strong compression);
///     rarefaction branch otherwise;
///   * family 3-fam outgoing on the Lax branch iff
///     c_star |sigma sigma'| (|sigma| + |sigma'|) >= nu.
inline InteractionOutcome interact_same(const ModelSystem& m, int fam, Vec2 ul, Vec2 um, Vec2 ur,
                                        WaveNature left, WaveNature right, double nu,
                                        double c_star) {
  if (fam != 1 && fam != 2) throw PreconditionError("interact_same: family must be 1 or 2");
  const Vec2 wl = m.to_riemann(ul), wm = m.to_riemann(um), wr = m.to_riemann(ur);
  const double sig = wm[fam - 1] - wl[fam - 1];
  const double sigp = wr[fam - 1] - wm[fam - 1];

  InteractionOutcome out;
  const double triv_tol = 1e-13 * std::max(1.0, std::abs(sig) + std::abs(sigp));

  // pass-through when one incoming front is trivial
  if (left == WaveNature::Trivial || right == WaveNature::Trivial) {
    double s_own = sig + sigp;
    const WaveNature live = left == WaveNature::Trivial ? right : left;
    const Branch b = live == WaveNature::Trivial ? Branch::Rarefaction : branch_of(live);
    if (fam == 1) {
      out.sigma_out1 = s_own;
      out.nature_out1 = classify(b, out.sigma_out1, triv_tol);
      out.u_mid = ur;
    } else {
      out.sigma_out2 = s_own;
      out.nature_out2 = classify(b, out.sigma_out2, triv_tol);
      out.u_mid = ul;
    }
    return out;
  }

  const bool incoming_shock = left == WaveNature::Shock || right == WaveNature::Shock;
  const bool strong_compression = sig * sigp > 0.0 && sig + sigp <= -2.0 * nu;
  const Branch b_own = (incoming_shock || strong_compression) ? Branch::Lax : Branch::Rarefaction;
  const Branch b_other =
      c_star * std::abs(sig * sigp) * (std::abs(sig) + std::abs(sigp)) >= nu ? Branch::Lax
                                                                             : Branch::Rarefaction;

  double s_own, s_other;
  Vec2 u_mid;
  if (b_own == Branch::Rarefaction && left != WaveNature::Shock && right != WaveNature::Shock) {
    // two rarefaction-branch waves merge exactly in Riemann coordinates
    s_own = sig + sigp;
    s_other = 0.0;
    u_mid = fam == 1 ? m.rarefaction_curve(1, s_own, ul) : ul;
  } else {
    const Branch b1 = fam == 1 ? b_own : b_other;
    const Branch b2 = fam == 1 ? b_other : b_own;
    const auto sol = solve_riemann(m, ul, ur, b1, b2);
    s_own = fam == 1 ? sol.sigma1 : sol.sigma2;
    s_other = fam == 1 ? sol.sigma2 : sol.sigma1;
    u_mid = sol.u_mid;
  }

  if (fam == 1) {
    out.sigma_out1 = s_own;
    out.sigma_out2 = s_other;
    out.nature_out1 = classify(b_own, out.sigma_out1, triv_tol);
    out.nature_out2 = classify(b_other, out.sigma_out2, triv_tol);
  } else {
    out.sigma_out2 = s_own;
    out.sigma_out1 = s_other;
    out.nature_out2 = classify(b_own, out.sigma_out2, triv_tol);
    out.nature_out1 = classify(b_other, out.sigma_out1, triv_tol);
  }
  out.u_mid = u_mid;
  out.same_family_error = s_own - (sig + sigp);
  out.opposite_error = std::abs(s_other);
  return out;
}

// ---------------------------------------------------------------------------
// empirical bound C_* for the coefficients and the same-family O(1) ratios

struct CStarSampleSpec {
  int n_samples = 400;
  double sigma_min = 0.01;
  double sigma_max = 0.08;
  double region_factor = 0.5;  // sample states within region_factor * radius
  std::uint64_t seed = 777;
};

inline double calibrate_c_star(const ModelSystem& m, const CStarSampleSpec& spec = {}) {
  DetRng rng(spec.seed);
  double worst = 0.0;
  const double r = spec.region_factor * m.radius();
  auto sample_state = [&]() {
    Vec2 u;
    do {
      u = m.base() + Vec2{r * (2 * rng.uniform01() - 1), r * (2 * rng.uniform01() - 1)};
    } while (!m.in_ball(u));
    return u;
  };
  for (int k = 0; k < spec.n_samples; ++k) {
    const Vec2 um = sample_state();
    const double s2 = -rng.uniform(spec.sigma_min, spec.sigma_max);
    const double s1 = -rng.uniform(spec.sigma_min, spec.sigma_max);
    try {
      const Vec2 ul2 = m.hugoniot_curve(2, -s2, um).state;  // um = S_2(s2; ul2)^-1 probe
      worst = std::max(worst, std::abs(extract_c1(m, ul2, um, s2)));
      const Vec2 ur1 = m.hugoniot_curve(1, s1, um).state;
      worst = std::max(worst, std::abs(extract_c2(m, um, ur1, s1)));
    } catch (const ConvergenceError&) {
      continue;  // skip numerically awkward probes
    }
    // same-family cubic ratio for the opposite-family output
    const int fam = 1 + (k % 2);
    const Vec2 ul = sample_state();
    try {
      const Vec2 umm = m.lax_curve(fam, s1, ul);
      const Vec2 ur = m.lax_curve(fam, s2, umm);
      const auto sol = solve_riemann(m, ul, ur, Branch::Lax, Branch::Lax);
      const double other = fam == 1 ? sol.sigma2 : sol.sigma1;
      const double denom = std::abs(s1 * s2) * (std::abs(s1) + std::abs(s2));
      if (denom > 1e-12) worst = std::max(worst, std::abs(other) / denom);
    } catch (const ConvergenceError&) {
      continue;
    } catch (const ModelDomainError&) {
      continue;
    }
  }
  return 2.0 * worst;  // safety factor
}

}  // namespace fbv::riemann
