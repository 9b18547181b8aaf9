#pragma once

// 2x2 model systems with monotone characteristic fields.
//
// Both built-in systems are p-systems
//
//     v_t - u_x = 0,   u_t + p(v)_x = 0,          state (v, u), v > 0
//
// with a pluggable pressure law:
//   * gamma-law  p(v) = v^-gamma (gamma > 1): genuinely nonlinear fields;
//   * cubic-degenerate  p'(v) = -1 + (v-1)^3/3: p'' = (v-1)^2 >= 0 with a
//     second-order zero at v = 1, so r_i . grad(lambda_i) >= 0 with one
//     interior zero (monotone, not GNL).
//
// Riemann coordinates: with c(v) = sqrt(-p'(v)) and h(v) = int_{vbar}^{v} c,
//     w_1 = (u - ubar_u) + h(v),   w_2 = (u - ubar_u) - h(v),
// so 1-rarefactions shift w_1 and keep w_2 and vice versa; the normalized
// eigenvector fields r_i = du/dw_i commute by construction.  Wave strengths
// throughout the library are jumps of the own-family Riemann coordinate.

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fbvtrack/common.hpp"

namespace fbv::model {

// ---------------------------------------------------------------------------
// pressure laws

struct PressureLaw {
  std::string name;    // "gamma" or "cubic_degenerate"
  double gamma = 0.0;  // used by the gamma law only

  double p(double v) const {
    if (name == "gamma") return std::pow(v, -gamma);
    // p(v) = 1 - (v-1) + (v-1)^4/12, so p' = -1 + (v-1)^3/3
    const double t = v - 1.0;
    return 1.0 - t + t * t * t * t / 12.0;
  }
  double dp(double v) const {
    if (name == "gamma") return -gamma * std::pow(v, -gamma - 1.0);
    const double t = v - 1.0;
    return -1.0 + t * t * t / 3.0;
  }
  double d2p(double v) const {
    if (name == "gamma") return gamma * (gamma + 1.0) * std::pow(v, -gamma - 2.0);
    return sqr(v - 1.0);
  }
  /// admissible v-range where p' < 0 holds comfortably
  bool v_ok(double v) const {
    if (name == "gamma") return v > 0.0;
    return std::abs(v - 1.0) < 1.2;  // keeps -p' >= 1 - 1.2^3/3 > 0.4
  }
};

inline PressureLaw gamma_law(double gamma) { return PressureLaw{"gamma", gamma}; }
inline PressureLaw cubic_degenerate_law() { return PressureLaw{"cubic_degenerate", 0.0}; }

// ---------------------------------------------------------------------------
// model system

class ModelSystem;

struct HugoniotPoint {
  Vec2 state;
  double shock_speed;
  int iterations;
};

class ModelSystem {
public:
  ModelSystem() = default;

  static ModelSystem p_system(double gamma, Vec2 base, double radius = 0.4) {
    if (!(gamma > 1.0)) throw PreconditionError("builtin_p_system: gamma must exceed 1");
    if (!(base[0] > 0.0)) throw ModelDomainError("builtin_p_system: base state needs v > 0");
    return ModelSystem(gamma_law(gamma), base, radius, "p_system");
  }

  static ModelSystem degenerate_system(Vec2 base, double radius = 0.4) {
    PressureLaw law = cubic_degenerate_law();
    if (!law.v_ok(base[0]))
      throw ModelDomainError("builtin_degenerate_system: base v outside validity range");
    return ModelSystem(law, base, radius, "degenerate_system");
  }

  const std::string& name() const { return name_; }
  const PressureLaw& pressure() const { return law_; }
  Vec2 base() const { return base_; }
  double radius() const { return radius_; }
  double newton_radius() const { return 0.25 * radius_; }
  double nu0() const { return 0.05; }
  double lambda1_max() const { return lambda1_max_; }
  double lambda2_min() const { return lambda2_min_; }
  double galilean_shift() const { return shift_; }

  bool in_domain(Vec2 u) const { return u.finite() && law_.v_ok(u[0]); }
  bool in_ball(Vec2 u) const { return in_domain(u) && (u - base_).norm() <= radius_ * (1 + 1e-9); }

  double sound_speed(Vec2 u) const { return std::sqrt(-law_.dp(u[0])); }

  Vec2 flux(Vec2 u) const {
    // Galilean-shifted flux f(u) - shift*u
    return {-u[1] - shift_ * u[0], law_.p(u[0]) - shift_ * u[1]};
  }
  Mat2 flux_jacobian(Vec2 u) const { return Mat2{-shift_, -1.0, law_.dp(u[0]), -shift_}; }

  double eigenvalue(int fam, Vec2 u) const {
    const double c = sound_speed(u);
    return (fam == 1 ? -c : c) - shift_;
  }
  /// chart-normalized eigenvector r_i = du/dw_i
  Vec2 eigvec(int fam, Vec2 u) const {
    const double c = sound_speed(u);
    return fam == 1 ? Vec2{0.5 / c, 0.5} : Vec2{-0.5 / c, 0.5};
  }
  /// dual basis l_i = grad(w_i); l_i . r_j = delta_ij
  Vec2 dual(int fam, Vec2 u) const {
    const double c = sound_speed(u);
    return fam == 1 ? Vec2{c, 1.0} : Vec2{-c, 1.0};
  }

  // ---- Riemann chart ------------------------------------------------------

  Vec2 to_riemann(Vec2 u) const {
    if (!in_domain(u)) throw ModelDomainError("to_riemann: state outside chart domain");
    const double h = integral_h(u[0]);
    const double du = u[1] - base_[1];
    return {du + h, du - h};
  }
  Vec2 from_riemann(Vec2 w) const {
    const double h = 0.5 * (w[0] - w[1]);
    const double v = inverse_h(h);
    return {v, base_[1] + 0.5 * (w[0] + w[1])};
  }

  // ---- wave curves --------------------------------------------------------

  /// i-rarefaction curve in Riemann coordinates: shifts w_i by s (both signs).
  Vec2 rarefaction_curve(int fam, double s, Vec2 u0) const {
    if (s == 0.0) return u0;
    Vec2 w = to_riemann(u0);
    w[fam - 1] += s;
    Vec2 u = from_riemann(w);
    if (!in_domain(u)) throw ModelDomainError("rarefaction_curve: left chart domain");
    return u;
  }

  /// Point of the i-Hugoniot locus at chart parameter s (w_i jump), with its
  /// Rankine-Hugoniot speed.  Damped Newton from the rarefaction point.
  HugoniotPoint hugoniot_curve(int fam, double s, Vec2 u0) const {
    if (std::abs(s) > newton_radius() * (1 + 1e-12))
      throw ModelDomainError("hugoniot_curve: |s| exceeds the Newton radius");
    if (s == 0.0) return {u0, eigenvalue(fam, u0), 0};

    const Vec2 w0 = to_riemann(u0);
    const int other = 3 - fam;
    auto state_of = [&](double tau) {
      Vec2 w = w0;
      w[fam - 1] += s;
      w[other - 1] += tau;
      return from_riemann(w);
    };

    double tau = 0.0;
    Vec2 u = state_of(tau);
    double sigma = rankine_hugoniot_speed(fam, u0, u);
    auto residual = [&](double tt, double ss) {
      const Vec2 ut = state_of(tt);
      return flux(ut) - flux(u0) - ss * (ut - u0);
    };
    Vec2 F = residual(tau, sigma);
    const double scale = std::max(1.0, (u - u0).norm());
    int it = 0;
    for (; it < 50; ++it) {
      if (F.norm() <= 1e-13 * scale) break;
      // analytic Jacobian: dF/dtau = (Df(u) - sigma I) r_other(u), dF/dsigma = -(u - u0)
      const Vec2 dtau = flux_jacobian(u) * eigvec(other, u) - sigma * eigvec(other, u);
      const Vec2 dsig = -1.0 * (u - u0);
      const Mat2 J{dtau[0], dsig[0], dtau[1], dsig[1]};
      const Vec2 step = J.solve(-1.0 * F);
      double damp = 1.0;
      for (int bt = 0; bt < 40; ++bt) {
        const double tau_n = tau + damp * step[0];
        const double sig_n = sigma + damp * step[1];
        const Vec2 Fn = residual(tau_n, sig_n);
        if (Fn.norm() < F.norm() || damp < 1e-8) {
          tau = tau_n;
          sigma = sig_n;
          F = Fn;
          u = state_of(tau);
          break;
        }
        damp *= 0.5;
      }
      if (std::abs(damp * step[0]) + std::abs(damp * step[1]) < 1e-15) break;
    }
    if (F.norm() > 1e-10 * scale)
      throw ConvergenceError("hugoniot_curve: Newton failed to reach the residual tolerance");
    return {u, sigma, it};
  }

  /// Lax i-curve: rarefaction branch for s >= 0, Hugoniot branch for s <= 0.
  Vec2 lax_curve(int fam, double s, Vec2 u0) const {
    return s >= 0.0 ? rarefaction_curve(fam, s, u0) : hugoniot_curve(fam, s, u0).state;
  }

  // ---- speeds -------------------------------------------------------------

  /// l_i(u-) . (f(u+)-f(u-)) / l_i(u-) . (u+ - u-); exact RH speed for shocks.
  double shock_speed(int fam, Vec2 um, Vec2 up) const {
    if (um == up) return eigenvalue(fam, um);
    return rankine_hugoniot_speed(fam, um, up);
  }

  /// shock speed + nu (w_i[u+] - w_i[ubar])
  double modified_speed(int fam, Vec2 um, Vec2 up, double nu) const {
    return shock_speed(fam, um, up) + nu * to_riemann(up)[fam - 1];
  }

private:
  ModelSystem(PressureLaw law, Vec2 base, double radius, std::string name)
      : law_(std::move(law)), base_(base), radius_(radius), name_(std::move(name)) {
    // Galilean normalization: subtract the midpoint speed at the base point.
    // For p-systems the spectrum is symmetric, so the shift vanishes.
    const double c0 = std::sqrt(-law_.dp(base_[0]));
    shift_ = 0.5 * ((-c0) + c0);
    // speed bands over the closed ball, with headroom for the nu-modification
    double cmin = kInf;
    double wmax = 0.0;
    for (int k = 0; k <= 64; ++k) {
      const double v = base_[0] - radius_ + 2.0 * radius_ * k / 64.0;
      if (!law_.v_ok(v)) continue;
      cmin = std::min(cmin, std::sqrt(-law_.dp(v)));
      wmax = std::max(wmax, std::abs(integral_h(v)) + radius_);
    }
    lambda1_max_ = -cmin - shift_ + nu0() * wmax;
    lambda2_min_ = cmin - shift_ - nu0() * wmax;
    if (!(lambda1_max_ < 0.0 && lambda2_min_ > 0.0))
      throw ModelDomainError("ModelSystem: speed separation fails on the admissible ball");
  }

  double rankine_hugoniot_speed(int fam, Vec2 um, Vec2 up) const {
    const Vec2 l = dual(fam, um);
    const double den = l.dot(up - um);
    if (std::abs(den) < 1e-14) {
      if ((up - um).norm() < 1e-14) return eigenvalue(fam, um);
      throw ModelDomainError("shock_speed: degenerate jump (denominator below 1e-14)");
    }
    return l.dot(flux(up) - flux(um)) / den;
  }

  // h(v) = int_{vbar}^{v} sqrt(-p'(s)) ds; closed form for the gamma law,
  // Gauss-Legendre for the cubic-degenerate law (smooth integrand).
  double integral_h(double v) const {
    if (law_.name == "gamma") {
      const double g = law_.gamma;
      const double e = -(g - 1.0) / 2.0;
      return (2.0 * std::sqrt(g) / (g - 1.0)) * (std::pow(base_[0], e) - std::pow(v, e));
    }
    return gauss_integral(base_[0], v);
  }
  double inverse_h(double h) const {
    if (law_.name == "gamma") {
      const double g = law_.gamma;
      const double e = -(g - 1.0) / 2.0;
      const double t = std::pow(base_[0], e) - h * (g - 1.0) / (2.0 * std::sqrt(g));
      if (!(t > 0.0)) throw ModelDomainError("from_riemann: coordinates leave the chart domain");
      return std::pow(t, 1.0 / e);
    }
    // Newton on h(v) = h; h' = c > 0.4 on the validity range
    double v = base_[0];
    for (int it = 0; it < 60; ++it) {
      const double f = gauss_integral(base_[0], v) - h;
      const double step = f / std::sqrt(-law_.dp(v));
      v -= step;
      if (!law_.v_ok(v)) v = std::clamp(v, 1.0 - 1.19, 1.0 + 1.19);
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(v))) return v;
    }
    throw ConvergenceError("from_riemann: Newton inversion of the chart failed");
  }

  double gauss_integral(double a, double b) const {
    // composite 16-point Gauss-Legendre on [a,b]
    static const double xg[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double wg[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    const int cells = 4;
    const double hcell = (b - a) / cells;
    double total = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double mid = a + (c + 0.5) * hcell, half = 0.5 * hcell;
      double s = 0.0;
      for (int k = 0; k < 8; ++k) {
        const double xp = mid + half * xg[k], xm = mid - half * xg[k];
        s += wg[k] * (std::sqrt(-law_.dp(xp)) + std::sqrt(-law_.dp(xm)));
      }
      total += s * half;
    }
    return total;
  }

  PressureLaw law_;
  Vec2 base_;
  double radius_ = 0.4;
  std::string name_;
  double shift_ = 0.0;
  double lambda1_max_ = 0.0;
  double lambda2_min_ = 0.0;
};

inline ModelSystem builtin_p_system(double gamma, Vec2 base) {
  return ModelSystem::p_system(gamma, base);
}
inline ModelSystem builtin_degenerate_system(Vec2 base) {
  return ModelSystem::degenerate_system(base);
}

// ---------------------------------------------------------------------------
// admissibility checks

struct LiuReport {
  bool monotone = true;
  double worst_violation = 0.0;  // max decrease of s -> shock speed along the grid
  std::vector<double> speeds;
};

/// Verifies s -> shock_speed(u0, S_i(s;u0)) is non-decreasing on a negative grid.
inline LiuReport liu_condition_check(const ModelSystem& m, int fam, Vec2 u0,
                                     std::span<const double> s_grid, double tol = 1e-9) {
  LiuReport rep;
  std::vector<double> grid(s_grid.begin(), s_grid.end());
  std::sort(grid.begin(), grid.end());
  for (double s : grid) {
    if (s > 0.0) throw PreconditionError("liu_condition_check: grid must be non-positive");
    rep.speeds.push_back(s == 0.0 ? m.eigenvalue(fam, u0)
                                  : m.hugoniot_curve(fam, s, u0).shock_speed);
  }
  for (std::size_t i = 0; i + 1 < rep.speeds.size(); ++i) {
    const double drop = rep.speeds[i] - rep.speeds[i + 1];
    if (drop > rep.worst_violation) rep.worst_violation = drop;
  }
  rep.monotone = rep.worst_violation <= tol;
  return rep;
}

struct MonotonicityReport {
  bool strictly_hyperbolic = true;
  bool monotone = true;
  double min_gap = kInf;        // min over samples of lambda_2 - lambda_1
  double min_directional = kInf;  // min over samples/families of r_i . grad(lambda_i)
};

/// Samples the closed admissible ball; directional derivatives by central
/// finite differences along the normalized eigenvector fields.
inline MonotonicityReport monotonicity_check(const ModelSystem& m, int n_samples = 1000,
                                             double tol = 1e-10, std::uint64_t seed = 12345) {
  MonotonicityReport rep;
  DetRng rng(seed);
  const double eps = 1e-6;
  for (int k = 0; k < n_samples; ++k) {
    Vec2 u;
    do {
      u = m.base() + Vec2{m.radius() * (2.0 * rng.uniform01() - 1.0),
                          m.radius() * (2.0 * rng.uniform01() - 1.0)};
    } while (!m.in_ball(u));
    rep.min_gap = std::min(rep.min_gap, m.eigenvalue(2, u) - m.eigenvalue(1, u));
    for (int fam : {1, 2}) {
      const Vec2 r = m.eigvec(fam, u);
      const double lp = m.eigenvalue(fam, u + eps * r);
      const double lm = m.eigenvalue(fam, u - eps * r);
      rep.min_directional = std::min(rep.min_directional, (lp - lm) / (2.0 * eps));
    }
  }
  rep.strictly_hyperbolic = rep.min_gap > 0.0;
  rep.monotone = rep.min_directional >= -tol;
  return rep;
}

// ---------------------------------------------------------------------------
// convex-function inequality (used by the Hugoniot construction analysis)

struct ConvexLemmaReport {
  double lhs;
  double rhs;
  bool holds;
};

/// For a convex W^{2,1} table h on [-1,1] and s in [-1,1], checks
///   | int_0^s t |h'(t) - (h(s)-h(0))/s| dt |  <=  (s^2/2) |h'(s) - (h(s)-h(0))/s|.
/// `ts` must be a sorted uniform grid containing 0 and s; h' is taken by
/// central differences and the integral by composite Simpson.
inline ConvexLemmaReport convex_lemma_check(std::span<const double> ts, std::span<const double> hs,
                                            double s, double tol = 1e-8) {
  if (ts.size() != hs.size() || ts.size() < 9)
    throw PreconditionError("convex_lemma_check: need a table of matching size >= 9");
  const std::size_t n = ts.size();
  const double dt = ts[1] - ts[0];
  // convexity of the table (second differences)
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (hs[i + 1] - 2.0 * hs[i] + hs[i - 1] < -1e-10 * std::max(1.0, std::abs(hs[i])))
      throw PreconditionError("convex_lemma_check: table is not convex");
  auto index_of = [&](double t) {
    const double k = (t - ts[0]) / dt;
    const auto i = static_cast<std::size_t>(std::llround(k));
    if (i >= n || std::abs(ts[i] - t) > 1e-9)
      throw PreconditionError("convex_lemma_check: grid must contain 0 and s");
    return i;
  };
  auto deriv = [&](std::size_t i) {
    if (i == 0) return (-3.0 * hs[0] + 4.0 * hs[1] - hs[2]) / (2.0 * dt);
    if (i + 1 == n) return (3.0 * hs[n - 1] - 4.0 * hs[n - 2] + hs[n - 3]) / (2.0 * dt);
    return (hs[i + 1] - hs[i - 1]) / (2.0 * dt);
  };
  const std::size_t i0 = index_of(0.0), is = index_of(s);
  if (i0 == is) return {0.0, 0.0, true};
  const double slope = (hs[is] - hs[i0]) / s;
  auto integrand = [&](std::size_t i) { return ts[i] * std::abs(deriv(i) - slope); };
  // composite Simpson between i0 and is (signed orientation)
  const std::size_t lo = std::min(i0, is), hi = std::max(i0, is);
  std::size_t cells = hi - lo;
  double integral = 0.0;
  std::size_t i = lo;
  if (cells % 2 == 1) {  // one trapezoid cell, then Simpson pairs
    integral += 0.5 * dt * (integrand(i) + integrand(i + 1));
    ++i;
  }
  for (; i + 2 <= hi; i += 2)
    integral += dt / 3.0 * (integrand(i) + 4.0 * integrand(i + 1) + integrand(i + 2));
  if (is < i0) integral = -integral;
  const double lhs = std::abs(integral);
  const double rhs = 0.5 * s * s * std::abs(deriv(is) - slope);
  return {lhs, rhs, lhs <= rhs + tol * (1.0 + std::abs(rhs))};
}

}  // namespace fbv::model
