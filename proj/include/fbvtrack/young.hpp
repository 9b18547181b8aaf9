#pragma once

// The 3x3 linearly degenerate system showing that uniform p-variation bounds
// fail for n >= 3:
//
//     f2(u, v, w) = ( w + 2uv,  0,  u (1 - 4 v^2) - 2 v w ),
//
// strictly hyperbolic with constant eigenvalues {-1, 0, +1}, all fields
// linearly degenerate.  The 1- and 3-fields have v constant along their
// integral curves (straight lines in (u, w)); 2-curves are the level sets of
// the flux.  A 4 dx-periodic eight-state pattern with contact strengths
// (alpha, beta) reproduces itself every 2 dx of time with
// alpha_k = ((1+beta)/(1-beta))^k alpha, beta_k = beta, which drives the
// p-variation growth v_p ~ exp(2 eps n^{1-1/p}) from initial data of size eps.

#include <array>
#include <string>
#include <vector>

#include "fbvtrack/common.hpp"
#include "fbvtrack/pvar.hpp"

namespace fbv::young {

struct Vec3 {
  double a[3]{0, 0, 0};
  constexpr double operator[](int i) const { return a[i]; }
  constexpr double& operator[](int i) { return a[i]; }
  friend constexpr Vec3 operator+(Vec3 x, Vec3 y) {
    return {x[0] + y[0], x[1] + y[1], x[2] + y[2]};
  }
  friend constexpr Vec3 operator-(Vec3 x, Vec3 y) {
    return {x[0] - y[0], x[1] - y[1], x[2] - y[2]};
  }
  friend constexpr Vec3 operator*(double c, Vec3 x) { return {c * x[0], c * x[1], c * x[2]}; }
  double norm() const { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }
  constexpr Vec3(double u = 0, double v = 0, double w = 0) : a{u, v, w} {}
};

using LDState3 = Vec3;

/// default validity region: keeps 1 - 4 v^2 away from zero
inline bool in_validity_box(Vec3 s) {
  return std::abs(s[1]) <= 0.3 && std::abs(s[0]) <= 1.0 && std::abs(s[2]) <= 1.0;
}

inline Vec3 flux_f2(Vec3 s) {
  const double u = s[0], v = s[1], w = s[2];
  return {w + 2.0 * u * v, 0.0, u * (1.0 - 4.0 * v * v) - 2.0 * v * w};
}

/// rows of Df2
inline std::array<Vec3, 3> flux_f2_jacobian(Vec3 s) {
  const double u = s[0], v = s[1], w = s[2];
  return {Vec3{2.0 * v, 2.0 * u, 1.0}, Vec3{0.0, 0.0, 0.0},
          Vec3{1.0 - 4.0 * v * v, -8.0 * u * v - 2.0 * w, -2.0 * v}};
}

/// eigenvector fields, normalized so the curve parameter is the u-jump for
/// families 1/3 and the v-jump for family 2
inline Vec3 eigvec_ld(int fam, Vec3 s) {
  const double u = s[0], v = s[1], w = s[2];
  if (fam == 1) return {1.0, 0.0, -1.0 - 2.0 * v};
  if (fam == 3) return {1.0, 0.0, 1.0 - 2.0 * v};
  const double m = w + 2.0 * u * v;  // first flux component, constant on 2-curves
  return {2.0 * m, 1.0, -4.0 * v * m - 2.0 * u};
}

constexpr double ld_speed(int fam) { return fam == 1 ? -1.0 : (fam == 2 ? 0.0 : 1.0); }

/// RK4 flow along the fam-th eigenvector field
inline Vec3 integral_curve(int fam, double span, Vec3 s0, int min_steps = 8) {
  const int steps = std::max(min_steps, static_cast<int>(std::ceil(std::abs(span) / 0.005)));
  const double h = span / steps;
  Vec3 s = s0;
  for (int k = 0; k < steps; ++k) {
    const Vec3 k1 = eigvec_ld(fam, s);
    const Vec3 k2 = eigvec_ld(fam, s + 0.5 * h * k1);
    const Vec3 k3 = eigvec_ld(fam, s + 0.5 * h * k2);
    const Vec3 k4 = eigvec_ld(fam, s + h * k3);
    s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

// ---------------------------------------------------------------------------
// spectrum check

struct LDEigenReport {
  bool spectrum_ok = true;
  double max_char_residual = 0.0;  // max |det(Df - lambda I)| over {-1,0,1}
  double max_directional = 0.0;    // max |grad(lambda_i) . r_i| (finite differences)
};

inline double det3(const std::array<Vec3, 3>& rows) {
  return rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1]) -
         rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0]) +
         rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
}

/// polish an eigenvalue of Df2 near lambda0 by Newton on the characteristic polynomial
inline double polished_eigenvalue(Vec3 s, double lambda0) {
  auto charpoly = [&](double lam) {
    auto rows = flux_f2_jacobian(s);
    for (int i = 0; i < 3; ++i) rows[i][i] -= lam;
    return det3(rows);
  };
  double lam = lambda0;
  for (int it = 0; it < 20; ++it) {
    const double f = charpoly(lam);
    const double fp = (charpoly(lam + 1e-7) - charpoly(lam - 1e-7)) / 2e-7;
    if (std::abs(fp) < 1e-14) break;
    const double step = f / fp;
    lam -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return lam;
}

inline LDEigenReport ld_eigencheck(int n_samples = 200, double box_scale = 1.0,
                                   std::uint64_t seed = 4321, double tol = 1e-9) {
  LDEigenReport rep;
  DetRng rng(seed);
  for (int k = 0; k < n_samples; ++k) {
    const Vec3 s{box_scale * rng.uniform(-0.8, 0.8), box_scale * rng.uniform(-0.25, 0.25),
                 box_scale * rng.uniform(-0.8, 0.8)};
    for (double lam : {-1.0, 0.0, 1.0}) {
      auto rows = flux_f2_jacobian(s);
      for (int i = 0; i < 3; ++i) rows[i][i] -= lam;
      rep.max_char_residual = std::max(rep.max_char_residual, std::abs(det3(rows)));
    }
    // linear degeneracy: directional derivative of each eigenvalue along r_i
    const double eps = 1e-5;
    for (int fam : {1, 2, 3}) {
      const Vec3 r = eigvec_ld(fam, s);
      const double scale = std::max(1.0, r.norm());
      const Vec3 sp = s + (eps / scale) * r, sm = s - (eps / scale) * r;
      const double lp = polished_eigenvalue(sp, ld_speed(fam));
      const double lm = polished_eigenvalue(sm, ld_speed(fam));
      rep.max_directional = std::max(rep.max_directional, std::abs(lp - lm) / (2 * eps / scale));
    }
  }
  rep.spectrum_ok = rep.max_char_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Riemann problem

struct LDRiemannSolution {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;  // contact strengths (u-, v-, u-jumps)
  Vec3 mid1, mid2;                      // intermediate states
  double residual = 0.0;
};

/// Solve u_r as the composition of the three integral curves by damped Newton.
inline LDRiemannSolution riemann_ld(Vec3 ul, Vec3 ur) {
  LDRiemannSolution sol;
  // v changes only along the 2-curve
  sol.s2 = ur[1] - ul[1];
  auto shoot = [&](double s1, double s2, double s3) {
    return integral_curve(3, s3, integral_curve(2, s2, integral_curve(1, s1, ul))) - ur;
  };
  Vec3 F = shoot(sol.s1, sol.s2, sol.s3);
  const double scale = std::max(1.0, ul.norm() + ur.norm());
  for (int it = 0; it < 60; ++it) {
    if (F.norm() <= 1e-12 * scale) break;
    // finite-difference Jacobian, 3x3 solved by Cramer
    const double e = 1e-7;
    const Vec3 F1 = shoot(sol.s1 + e, sol.s2, sol.s3);
    const Vec3 F2 = shoot(sol.s1, sol.s2 + e, sol.s3);
    const Vec3 F3 = shoot(sol.s1, sol.s2, sol.s3 + e);
    const std::array<Vec3, 3> Jrows{
        Vec3{(F1[0] - F[0]) / e, (F2[0] - F[0]) / e, (F3[0] - F[0]) / e},
        Vec3{(F1[1] - F[1]) / e, (F2[1] - F[1]) / e, (F3[1] - F[1]) / e},
        Vec3{(F1[2] - F[2]) / e, (F2[2] - F[2]) / e, (F3[2] - F[2]) / e}};
    const double d = det3(Jrows);
    if (std::abs(d) < 1e-300) throw ConvergenceError("riemann_ld: singular Jacobian");
    auto replace_col = [&](int col, Vec3 b) {
      auto rows = Jrows;
      for (int i = 0; i < 3; ++i) rows[i][col] = b[i];
      return rows;
    };
    const Vec3 rhs = -1.0 * F;
    const Vec3 step{det3(replace_col(0, rhs)) / d, det3(replace_col(1, rhs)) / d,
                    det3(replace_col(2, rhs)) / d};
    double damp = 1.0;
    for (int bt = 0; bt < 30; ++bt) {
      const Vec3 Fn = shoot(sol.s1 + damp * step[0], sol.s2 + damp * step[1],
                            sol.s3 + damp * step[2]);
      if (Fn.norm() < F.norm() || damp < 1e-6) {
        sol.s1 += damp * step[0];
        sol.s2 += damp * step[1];
        sol.s3 += damp * step[2];
        F = Fn;
        break;
      }
      damp *= 0.5;
    }
  }
  if (F.norm() > 1e-9 * scale) throw ConvergenceError("riemann_ld: Newton failed to converge");
  sol.residual = F.norm();
  sol.mid1 = integral_curve(1, sol.s1, ul);
  sol.mid2 = integral_curve(2, sol.s2, sol.mid1);
  return sol;
}

// ---------------------------------------------------------------------------
// the periodic pattern

/// Eight states of one 4 dx period: 0..7 with jump strengths around the period
/// (0,1)=alpha, (1,2)=beta, (2,3)=alpha, (3,4)=-beta, (4,5)=-alpha, (5,6)=beta,
/// (6,7)=-alpha, (7,0)=-beta (families 3,2,1,2,3,2,1,2 respectively).
struct YoungPattern {
  double dx = 0.25;
  double alpha = 0.1, beta = 0.1;
  std::array<Vec3, 8> states;  // indexed by the labels 0..7
  double closure_error = 0.0;

  static YoungPattern build(Vec3 base1, double alpha, double beta, double dx) {
    YoungPattern p;
    p.dx = dx;
    p.alpha = alpha;
    p.beta = beta;
    auto& st = p.states;
    st[1] = base1;
    st[2] = integral_curve(2, beta, st[1]);
    st[3] = integral_curve(1, alpha, st[2]);
    st[4] = integral_curve(2, -beta, st[3]);
    st[5] = integral_curve(3, -alpha, st[4]);
    st[6] = integral_curve(2, beta, st[5]);
    st[7] = integral_curve(1, -alpha, st[6]);
    st[0] = integral_curve(2, -beta, st[7]);
    p.closure_error = (integral_curve(3, alpha, st[0]) - st[1]).norm();
    for (const auto& s : st)
      if (!in_validity_box(s))
        throw ModelDomainError("YoungPattern: states leave the validity box");
    return p;
  }

  /// piecewise-constant values 1,2,5,6 over one period [x0, x0 + 4 dx)
  std::array<Vec3, 4> period_values() const {
    return {states[1], states[2], states[5], states[6]};
  }
};

// ---------------------------------------------------------------------------
// constant-speed front tracker (speeds exactly -1, 0, +1)

struct LDWave {
  int family = 0;  // 1, 2, 3
  double born_t = 0.0, born_x = 0.0;
  Vec3 left, right;

  double speed() const { return ld_speed(family); }
  double x_at(double t) const { return born_x + speed() * (t - born_t); }
  double strength() const { return family == 2 ? right[1] - left[1] : right[0] - left[0]; }
};

class LDTracker {
public:
  LDTracker(const std::vector<double>& xs, const std::vector<Vec3>& values) {
    for (std::size_t j = 0; j < xs.size(); ++j)
      emit_waves(waves_, values[j], values[j + 1], 0.0, xs[j]);
    leftmost_ = values.front();
    sort_waves();
  }

  const std::vector<LDWave>& waves() const { return waves_; }
  Vec3 leftmost() const { return leftmost_; }
  double time() const { return now_; }
  long event_count() const { return events_; }

  /// advance to time T, resolving (possibly multi-wave) collisions
  void run_until(double T) {
    const double tol = 1e-9;
    while (true) {
      double t_next = kInf;
      for (std::size_t i = 0; i + 1 < waves_.size(); ++i) {
        const auto& A = waves_[i];
        const auto& B = waves_[i + 1];
        if (!(A.speed() > B.speed())) continue;
        const double t = (B.x_at(now_) - A.x_at(now_)) / (A.speed() - B.speed()) + now_;
        if (t < t_next) t_next = t;
      }
      if (t_next > T - tol) break;
      resolve_time(t_next, tol);
      if (events_ > 2'000'000) throw ResourceError("LDTracker: event cap exceeded");
    }
    now_ = T;
    sort_waves();
  }

  /// family-separated p-sum of strengths, optionally restricted to a window
  double vp(double p, double lo = -kInf, double hi = kInf) const {
    double total = 0.0;
    for (int fam : {1, 2, 3}) {
      std::vector<double> sigs;
      for (const auto& w : waves_) {
        const double x = w.x_at(now_);
        if (w.family == fam && x >= lo && x <= hi) sigs.push_back(w.strength());
      }
      total += pvar::max_p_sum_pow(sigs, p);
    }
    return std::pow(total, 1.0 / p);
  }

private:
  std::vector<LDWave> waves_;  // ordered left to right at time now_
  Vec3 leftmost_;
  double now_ = 0.0;
  long events_ = 0;

  static void emit_waves(std::vector<LDWave>& out, Vec3 l, Vec3 r, double t, double x) {
    if ((r - l).norm() < 1e-13) return;
    const auto sol = riemann_ld(l, r);
    const double snap =
        1e-12 * std::max(1.0, std::abs(sol.s1) + std::abs(sol.s2) + std::abs(sol.s3));
    Vec3 prev = l;
    if (std::abs(sol.s1) > snap) {
      out.push_back({1, t, x, prev, sol.mid1});
      prev = sol.mid1;
    }
    if (std::abs(sol.s2) > snap) {
      out.push_back({2, t, x, prev, sol.mid2});
      prev = sol.mid2;
    }
    if (std::abs(sol.s3) > snap) out.push_back({3, t, x, prev, r});
  }

  void sort_waves() {
    std::sort(waves_.begin(), waves_.end(), [&](const LDWave& a, const LDWave& b) {
      const double xa = a.x_at(now_), xb = b.x_at(now_);
      if (xa != xb) return xa < xb;
      return a.speed() < b.speed();
    });
  }

  void resolve_time(double t_star, double tol) {
    now_ = t_star;
    std::vector<LDWave> next;
    next.reserve(waves_.size());
    std::size_t i = 0;
    while (i < waves_.size()) {
      // maximal run of waves meeting at one point at this instant
      std::size_t j = i;
      while (j + 1 < waves_.size() &&
             std::abs(waves_[j + 1].x_at(t_star) - waves_[j].x_at(t_star)) < tol &&
             waves_[j].speed() > waves_[j + 1].speed())
        ++j;
      if (j == i) {
        next.push_back(waves_[i]);
      } else {
        ++events_;
        emit_waves(next, waves_[i].left, waves_[j].right, t_star, waves_[i].x_at(t_star));
      }
      i = j + 1;
    }
    waves_ = std::move(next);
    sort_waves();
  }
};

// ---------------------------------------------------------------------------
// period evolution and the growth law

/// three periods of the pattern on (0, 12 dx], state 1 outside
inline void build_three_periods(const YoungPattern& pat, std::vector<double>& xs,
                                std::vector<Vec3>& vals) {
  xs.clear();
  vals.clear();
  const auto pv = pat.period_values();  // 1, 2, 5, 6
  vals.push_back(pv[0]);                // state 1 extends to -inf
  for (int period = 0; period < 3; ++period) {
    const double x0 = 4.0 * pat.dx * period;
    // jumps at x0 + dx, 2dx, 3dx, 4dx reach states 2, 5, 6, then 1 again
    for (int j = 0; j < 4; ++j) {
      xs.push_back(x0 + pat.dx * (j + 1));
      vals.push_back(j < 3 ? pv[j + 1] : pv[0]);
    }
  }
}

struct PeriodSample {
  double alpha = 0.0;
  double beta = 0.0;
  double vp = 0.0;  // family-separated p-sum over the measured period
};

/// Evolve the pattern k times by 2 dx of time each, simulating three periods
/// and measuring the middle one, then rebuilding.  Throws when the eight-state
/// structure degrades beyond `structure_tol`.
inline std::vector<PeriodSample> evolve_period(const YoungPattern& start, int k, double p = 1.25,
                                               double structure_tol = 1e-7) {
  std::vector<PeriodSample> out;
  YoungPattern pat = start;

  // the middle period, shifted half a cell so in-flight waves stay inside
  auto window_lo = [&] { return 4.5 * pat.dx; };
  auto window_hi = [&] { return 8.5 * pat.dx; };

  auto measure = [&](const LDTracker& trk) {
    PeriodSample ps;
    ps.vp = trk.vp(p, window_lo(), window_hi());
    std::vector<double> a1, a2, a3;
    for (const auto& w : trk.waves()) {
      const double x = w.x_at(trk.time());
      if (x < window_lo() || x > window_hi()) continue;
      const double s = std::abs(w.strength());
      if (s < 1e-11) continue;
      (w.family == 1 ? a1 : w.family == 2 ? a2 : a3).push_back(s);
    }
    if (a1.empty() || a2.empty() || a3.empty())
      throw ConvergenceError("evolve_period: pattern lost its wave structure");
    auto uniform = [&](const std::vector<double>& v) {
      double mx = 0.0, mn = kInf;
      for (double s : v) {
        mx = std::max(mx, s);
        mn = std::min(mn, s);
      }
      if (mx - mn > structure_tol * (1.0 + mx))
        throw ConvergenceError("evolve_period: wave strengths lost the periodic structure");
      return 0.5 * (mx + mn);
    };
    ps.alpha = uniform(a1);
    if (std::abs(ps.alpha - uniform(a3)) > structure_tol * (1.0 + ps.alpha))
      throw ConvergenceError("evolve_period: 1- and 3-strengths diverged");
    ps.beta = uniform(a2);
    return ps;
  };

  std::vector<double> xs;
  std::vector<Vec3> vals;
  {
    PeriodSample first;
    first.alpha = pat.alpha;
    first.beta = pat.beta;
    build_three_periods(pat, xs, vals);
    LDTracker trk(xs, vals);
    first.vp = trk.vp(p, window_lo(), window_hi());
    out.push_back(first);
  }
  for (int step = 0; step < k; ++step) {
    build_three_periods(pat, xs, vals);
    LDTracker trk(xs, vals);
    trk.run_until((2.0 + 0.25) * pat.dx);  // just past the pattern-recurrence time
    const auto ps = measure(trk);
    out.push_back(ps);
    pat = YoungPattern::build(pat.states[1], ps.alpha, ps.beta, pat.dx);
  }
  return out;
}

struct VpGrowthReport {
  double vp_initial = 0.0;
  double vp_final = 0.0;
  double lower_bound = 0.0;  // eps * exp(2 eps n^{1 - 1/p})
  double alpha = 0.0, beta = 0.0;
  int n = 0;
  long events = 0;
};

/// Truncated periodic data evolved through t = 2: p-variation growth against
/// the exponential lower bound.
inline VpGrowthReport vp_growth_report(double eps, int n, double p) {
  if (n < 1) throw PreconditionError("vp_growth_report: n >= 1");
  VpGrowthReport rep;
  rep.n = n;
  const double dx = 1.0 / n;
  rep.alpha = rep.beta = eps * std::pow(static_cast<double>(n), -1.0 / p);
  rep.lower_bound = eps * std::exp(2.0 * eps * std::pow(static_cast<double>(n), 1.0 - 1.0 / p));
  const auto pat = YoungPattern::build(Vec3{0, 0, 0}, rep.alpha, rep.beta, dx);

  // periodic data restricted to [-2, 3), base state outside; the pattern cell
  // containing x carries the value 1, 2, 5 or 6 by its index mod 4
  const auto pv = pat.period_values();
  std::vector<double> xs;
  std::vector<Vec3> vals;
  const long k_lo = -2 * static_cast<long>(n), k_hi = 3 * static_cast<long>(n);
  vals.push_back(pat.states[1]);
  for (long kk = k_lo; kk <= k_hi; ++kk) {
    xs.push_back(static_cast<double>(kk) * dx);
    if (kk == k_hi) {
      vals.push_back(pat.states[1]);
    } else {
      const long cell = ((kk % 4) + 4) % 4;  // value on [kk dx, (kk+1) dx)
      vals.push_back(pv[static_cast<std::size_t>(cell)]);
    }
  }

  LDTracker trk(xs, vals);
  rep.vp_initial = trk.vp(p);
  trk.run_until(2.0 + 0.25 * dx);  // strengths at t = 2 persist until the next collision
  rep.vp_final = trk.vp(p);
  rep.events = trk.event_count();
  return rep;
}

}  // namespace fbv::young
