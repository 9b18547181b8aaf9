#pragma once

// Acceptance suite: one function per criterion, each printing a pass/fail
// line.  Tolerances and thresholds are fixed here; no criterion defers to
// later calibration.  Shared traces are built once and reused.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fbvtrack/functionals.hpp"
#include "fbvtrack/io.hpp"
#include "fbvtrack/scenario.hpp"
#include "fbvtrack/young.hpp"

namespace fbv::acceptance {

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline double fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]), ly = std::log(std::abs(ys[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<double> random_seq(DetRng& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(lo, hi);
  return x;
}

struct Shared {
  scenario::RunConfig small_cfg = scenario::psystem_small();
  std::unique_ptr<tracking::SimulationTrace> small_trace;

  const tracking::SimulationTrace& small() {
    if (!small_trace)
      small_trace =
          std::make_unique<tracking::SimulationTrace>(scenario::run_config(small_cfg));
    return *small_trace;
  }
};

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace detail

// 1. dynamic program equals exhaustive enumeration
inline Criterion criterion_psum_oracle() {
  Criterion c{"1 p-sum oracle equivalence", true, "", 0.0};
  DetRng rng(101);
  double worst = 0.0;
  int count = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const auto x = detail::random_seq(rng, rng.uniform_int(1, 12));
    for (double p : {1.0, 1.2, 1.5, 2.0}) {
      const double dp = pvar::max_p_sum(x, p);
      const double bf = pvar::brute_force_p_sum(x, p);
      worst = std::max(worst, std::abs(dp - bf) / (1.0 + bf));
      ++count;
    }
  }
  c.pass = worst <= 1e-12;
  c.detail = std::to_string(count) + " comparisons, worst relative gap " + detail::fmt(worst);
  return c;
}

// 2. elementary property suite
inline Criterion criterion_property_suite() {
  Criterion c{"2 elementary s_p/v_p property suite", true, "", 0.0};
  using namespace pvar;
  DetRng rng(202);
  int failures = 0;
  auto expect = [&](bool ok) { failures += ok ? 0 : 1; };

  // the exact non-monotonicity pair
  expect(std::abs(max_p_sum(std::vector<double>{5, -2, 5}, 2.0) - 8.0) < 1e-12);
  expect(std::abs(max_p_sum(std::vector<double>{5, -1, 5}, 2.0) - 9.0) < 1e-12);

  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(1, 9);
    const auto a = detail::random_seq(rng, n);
    const auto b = detail::random_seq(rng, n);
    const double p = rng.uniform(1.0, 2.2);
    const double pp = p + rng.uniform(0.0, 1.2);
    // (1) monotone in p
    expect(max_p_sum(a, pp) <= max_p_sum(a, p) * (1 + 1e-12) + 1e-14);
    // (2) subadditive
    {
      std::vector<double> s(n);
      for (int i = 0; i < n; ++i) s[i] = a[i] + b[i];
      expect(max_p_sum(s, p) <= max_p_sum(a, p) + max_p_sum(b, p) + 1e-12);
    }
    // (4) merging adjacent entries
    if (n >= 2) {
      auto aa = a;
      const int j = rng.uniform_int(0, n - 2);
      std::vector<double> merged;
      for (int i = 0; i < n; ++i) {
        if (i == j) merged.push_back(aa[j] + aa[j + 1]);
        else if (i != j + 1) merged.push_back(aa[i]);
      }
      expect(max_p_sum(merged, p) <= max_p_sum(aa, p) * (1 + 1e-12) + 1e-14);
      if (same_sign_weak(aa[j], aa[j + 1]))
        expect(std::abs(max_p_sum(merged, p) - max_p_sum(aa, p)) < 1e-12);
    }
    // (5) concatenation superadditivity
    expect(max_p_sum_pow(a, p) + max_p_sum_pow(b, p) <=
           max_p_sum_pow([&] {
             std::vector<double> cat(a);
             cat.insert(cat.end(), b.begin(), b.end());
             return cat;
           }(), p) + 1e-12);
    // (6) interleaving
    {
      std::vector<double> inter;
      std::size_t ia = 0, ib = 0;
      while (ia < a.size() || ib < b.size()) {
        const bool ta = ib == b.size() || (ia < a.size() && rng.uniform01() < 0.5);
        inter.push_back(ta ? a[ia++] : b[ib++]);
      }
      expect(p_variation_seq(a, p) <= p_variation_seq(inter, p) + 1e-12);
      expect(std::abs(max_p_sum(a, p) - max_p_sum(b, p)) <= max_p_sum(inter, p) + 1e-12);
      expect(max_p_sum(inter, p) <= max_p_sum(a, p) + max_p_sum(b, p) + 1e-12);
    }
    // (7) repetition
    {
      std::vector<double> repd;
      for (double vv : a)
        for (int r = rng.uniform_int(1, 3); r-- > 0;) repd.push_back(vv);
      expect(p_variation_seq(repd, p) <= p_variation_seq(a, p) + 1e-12);
    }
    // (8) prepended zero
    {
      std::vector<double> z{0.0};
      z.insert(z.end(), a.begin(), a.end());
      expect(p_variation_seq(z, p) <= std::abs(a[0]) + p_variation_seq(a, p) + 1e-12);
    }
    // (9) Lipschitz composition (x -> x^2 on [1/2, 2], Lip = 4)
    {
      std::vector<double> pos(n), sq(n);
      for (int i = 0; i < n; ++i) {
        pos[i] = rng.uniform(0.5, 2.0);
        sq[i] = pos[i] * pos[i];
      }
      expect(p_variation_seq(sq, p) <= 4.0 * p_variation_seq(pos, p) + 1e-12);
    }
    // (10) products
    {
      std::vector<double> prod(n);
      double ainf = 0.0, binf = 0.0;
      for (int i = 0; i < n; ++i) {
        prod[i] = a[i] * b[i];
        ainf = std::max(ainf, std::abs(a[i]));
        binf = std::max(binf, std::abs(b[i]));
      }
      expect(p_variation_seq(prod, p) <=
             p_variation_seq(a, p) * binf + p_variation_seq(b, p) * ainf + 1e-12);
    }
    // (2.2-1) endpoint convexity and monotonicity
    {
      auto sp_with = [&](double t) {
        std::vector<double> xt(a);
        xt.push_back(t);
        return max_p_sum_pow(xt, p);
      };
      const double t0 = rng.uniform(-2, 2), t1 = rng.uniform(-2, 2);
      expect(sp_with(0.5 * (t0 + t1)) <= 0.5 * (sp_with(t0) + sp_with(t1)) + 1e-12);
      const double lo = rng.uniform(0, 2), hi = lo + rng.uniform(0, 1);
      expect(sp_with(lo) <= sp_with(hi) + 1e-12);
      expect(sp_with(-hi) >= sp_with(-lo) - 1e-12);
    }
    // (2.2-2) and (2.2-3) endpoint increments, both ends
    {
      const double xe = rng.uniform(-1, 1);
      const double base = max_p_sum_pow(a, p);
      std::vector<double> right(a);
      right.push_back(xe);
      const double gr = max_p_sum_pow(right, p);
      expect(gr - base >= pow_abs(xe, p) - 1e-12);
      if (same_sign_weak(a.back(), xe))
        expect(gr - base >= p * pow_abs(a.back(), p - 1.0) * std::abs(xe) - 1e-12);
      std::vector<double> left{xe};
      left.insert(left.end(), a.begin(), a.end());
      const double gl = max_p_sum_pow(left, p);
      expect(gl - base >= pow_abs(xe, p) - 1e-12);
      if (same_sign_weak(a.front(), xe))
        expect(gl - base >= p * pow_abs(a.front(), p - 1.0) * std::abs(xe) - 1e-12);
    }
  }
  c.pass = failures == 0;
  c.detail = failures == 0 ? "12 invariants x 1000 instances, plus the (5,-2,5)/(5,-1,5) pair"
                           : std::to_string(failures) + " failed assertions";
  return c;
}

// 3. Love-Young inequality on random draws
inline Criterion criterion_love_young() {
  Criterion c{"3 discrete Love-Young inequality", true, "", 0.0};
  DetRng rng(303);
  int violations = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(1, 16);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    if (!pvar::love_young_check(x, y, 1.4, 1.4).holds) ++violations;
  }
  c.pass = violations == 0;
  c.detail = "1000 Gaussian draws at p = q = 1.4, " + std::to_string(violations) + " violations";
  return c;
}

// 4. interaction-order fits
inline Criterion criterion_interaction_fits() {
  Criterion c{"4 interaction-order exponent fits", true, "", 0.0};
  const auto m = model::ModelSystem::p_system(2.0, {1.0, 0.0}, 0.9);
  const std::vector<double> sizes{0.1, 0.05, 0.025};
  // opposite family: rarefaction strength perturbation vs the shock size
  std::vector<double> per;
  for (double s2 : sizes) {
    const Vec2 um = m.lax_curve(2, -s2, m.base());
    const Vec2 ur = m.rarefaction_curve(1, 0.05, um);
    const auto out = riemann::interact_opposite(m, m.base(), um, ur, riemann::WaveNature::Shock,
                                                riemann::WaveNature::Rarefaction);
    per.push_back(std::abs(out.sigma_out1 - 0.05));
  }
  const double e_opp = detail::fit_exponent(sizes, per);
  // same family: opposite-family output vs |sigma sigma'| (|sigma| + |sigma'|)
  std::vector<double> outs;
  for (double s : sizes) {
    const Vec2 um = m.lax_curve(1, -s, m.base());
    const Vec2 ur = m.lax_curve(1, -s, um);
    const auto out = riemann::interact_same(m, 1, m.base(), um, ur, riemann::WaveNature::Shock,
                                            riemann::WaveNature::Shock, 1e-6, 4.0);
    outs.push_back(out.sigma_out2);
  }
  const double e_same = detail::fit_exponent(sizes, outs);
  c.pass = e_opp >= 2.7 && std::abs(e_same - 3.0) <= 0.3;
  c.detail = "opposite-family exponent " + detail::fmt(e_opp) + " (>= 2.7), same-family " +
             detail::fmt(e_same) + " (3 +- 0.3)";
  return c;
}

// 5. Glimm decay on psystem-small
inline Criterion criterion_glimm_decay(detail::Shared& sh) {
  Criterion c{"5 oracle Glimm decay on psystem-small", true, "", 0.0};
  const auto& tr = sh.small();
  if (tr.events.size() < 50) {
    c.pass = false;
    c.detail = "scenario produced only " + std::to_string(tr.events.size()) + " events";
    return c;
  }
  const auto v = functionals::build_horizon(tr, tr.end_time, sh.small_cfg.p);
  const auto curves = functionals::default_curve_family(v);
  const auto rep = functionals::monitor_decay(v, sh.small_cfg.C1, sh.small_cfg.C2, curves);
  c.pass = rep.violations.empty();
  c.detail = std::to_string(tr.events.size()) + " events, " + std::to_string(curves.size()) +
             " curves, " + std::to_string(rep.violations.size()) + " violations";
  return c;
}

// 6. uniform-in-time p-variation bound over the sweep
inline Criterion criterion_sweep_bound(std::vector<tracking::SimulationTrace>& sweep,
                                       std::vector<double>& vp0s, double p) {
  Criterion c{"6 uniform V_p bound over the initial-size sweep", true, "", 0.0};
  std::vector<double> excesses;
  double big_c = 0.0;
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    const auto& tr = sweep[k];
    const auto v = functionals::build_horizon(tr, tr.end_time, p);
    double max_vp_pow = 0.0;
    for (const auto& ev : tr.events) {
      const auto prof = tracking::solution_at(tr, ev.time, +1);
      max_vp_pow = std::max(max_vp_pow, std::pow(pvar::vector_p_variation(prof, p, tr.model), p));
    }
    const double excess = std::max(0.0, max_vp_pow - std::pow(vp0s[k], p));
    excesses.push_back(excess);
    big_c = std::max(big_c, excess / std::pow(vp0s[k], 2.0 * p));
  }
  bool positive = true;
  for (double e : excesses) positive = positive && e > 0.0;
  const double slope = positive ? detail::fit_exponent(vp0s, excesses) : 0.0;
  c.pass = positive && big_c <= 1e3 && slope >= 2.0 * p - 0.3;
  c.detail = "excess slope " + detail::fmt(slope) + " (>= " + detail::fmt(2.0 * p - 0.3) +
             "), sweep-wide C = " + detail::fmt(big_c);
  return c;
}

// 7. new-wave production scaling
inline Criterion criterion_new_waves(std::vector<tracking::SimulationTrace>& sweep,
                                     std::vector<double>& vp0s, double p) {
  Criterion c{"7 new-wave production scaling", true, "", 0.0};
  std::vector<double> totals;
  for (const auto& tr : sweep) totals.push_back(functionals::new_wave_production(tr));
  bool positive = true;
  for (double t : totals) positive = positive && t > 0.0;
  const double slope = positive ? detail::fit_exponent(vp0s, totals) : 0.0;
  c.pass = positive && slope >= 2.0 * p - 0.3;
  c.detail = "production slope " + detail::fmt(slope) + " (>= " + detail::fmt(2.0 * p - 0.3) +
             "), totals " + detail::fmt(totals.front()) + " .. " + detail::fmt(totals.back());
  return c;
}

// 8. time regularity
inline Criterion criterion_time_regularity(detail::Shared& sh,
                                           const std::vector<tracking::SimulationTrace>& sweep) {
  Criterion c{"8 time-regularity bound", true, "", 0.0};
  const double p = sh.small_cfg.p;
  DetRng rng(808);
  double big_c = 0.0;
  int runs = 0;
  auto probe = [&](const tracking::SimulationTrace& tr) {
    const double vp0p = std::pow(pvar::vector_p_variation(tr.initial, p, tr.model), p);
    for (int k = 0; k < 20; ++k) {
      double s = rng.uniform(0.0, tr.end_time);
      double t = rng.uniform(0.0, tr.end_time);
      if (s > t) std::swap(s, t);
      if (t - s < 1e-6) t = s + 1e-3;
      const double val = tracking::time_regularity(tr, s, t, p);
      big_c = std::max(big_c, val / ((t - s) * vp0p));
    }
    ++runs;
  };
  probe(sh.small());
  for (const auto& tr : sweep) probe(tr);
  c.pass = big_c <= 1e3;
  c.detail = "20 random pairs on each of " + std::to_string(runs) +
             " runs, recorded constant " + detail::fmt(big_c) + " (<= 1e3)";
  return c;
}

// 9. entropy residuals across nu
inline Criterion criterion_entropy(detail::Shared& sh) {
  Criterion c{"9 entropy residual across nu", true, "", 0.0};
  const std::vector<double> nus{1e-2, 5e-3, 2.5e-3};
  std::vector<double> cs, defects;
  for (double nu : nus) {
    auto cfg = sh.small_cfg;
    cfg.nu = nu;
    const auto tr = scenario::run_config(cfg);
    const auto v = functionals::build_horizon(tr, tr.end_time, cfg.p);
    double max_vt = 0.0;
    for (const auto& ev : tr.events) {
      if (ev.time > 6.0) break;  // the active window of the scenario
      max_vt = std::max(max_vt, functionals::modified_vp(v, ev.time));
    }
    const auto energy = tracking::energy_entropy(tr.model);
    double worst_c = 0.0;
    double defect = 0.0;
    const std::vector<tracking::TestFunction> phis{
        tracking::bump_test_function(0.05, 2.5, -5.0, 5.0),
        tracking::bump_test_function(0.4, 1.6, -2.5, 2.5),
        tracking::bump_test_function(0.2, 3.0, -1.0, 4.5)};
    for (const auto& phi : phis) {
      const double res = tracking::entropy_residual(tr, energy, phi);
      if (res < 0.0) worst_c = std::max(worst_c, -res / (nu * max_vt * max_vt));
      defect =
          std::max(defect, std::abs(tracking::entropy_residual(
                       tr, tracking::linear_entropy(tr.model, 1, 1.0), phi)));
    }
    cs.push_back(worst_c);
    defects.push_back(defect);
  }
  double cmax = 0.0;
  for (double x : cs) cmax = std::max(cmax, x);
  // stable: a single modest constant works across the sweep and the finest
  // run needs no more than the coarsest
  const bool stable = cmax <= 100.0 && cs.back() <= 2.0 * cs.front() + 0.01;
  const bool defect_decreases = defects.back() < defects.front();
  c.pass = stable && defect_decreases;
  c.detail = "energy-residual constants " + detail::fmt(cs[0]) + ", " + detail::fmt(cs[1]) +
             ", " + detail::fmt(cs[2]) + "; weak defect " + detail::fmt(defects.front()) +
             " -> " + detail::fmt(defects.back());
  return c;
}

// 10. rarefaction/compression smallness
inline Criterion criterion_rw_smallness(detail::Shared& sh) {
  Criterion c{"10 rarefaction/compression fronts stay O(nu)", true, "", 0.0};
  auto max_rwcw_over_nu = [&](double nu) {
    auto cfg = sh.small_cfg;
    cfg.nu = nu;
    const auto tr = scenario::run_config(cfg);
    double mx = 0.0;
    for (const auto& f : tr.fronts)
      if (f.nature == riemann::WaveNature::Rarefaction ||
          f.nature == riemann::WaveNature::Compression)
        mx = std::max(mx, std::abs(f.sigma));
    return mx / nu;
  };
  const double k1 = max_rwcw_over_nu(0.02);
  const double k2 = max_rwcw_over_nu(0.01);
  c.pass = k1 <= 10.0 && k2 <= 10.0 && k2 <= 2.0 * k1;
  c.detail = "K(nu) = " + detail::fmt(k1) + ", K(nu/2) = " + detail::fmt(k2);
  return c;
}

// 11. the 3x3 growth example
inline Criterion criterion_young() {
  Criterion c{"11 linearly degenerate growth example", true, "", 0.0};
  const double beta = 0.2, alpha = 1e-5;  // alpha grows 1.5x per period
  const auto pat = young::YoungPattern::build({0, 0, 0}, alpha, beta, 0.25);
  const auto samples = young::evolve_period(pat, 20, 1.25);
  const double ratio = (1.0 + beta) / (1.0 - beta);
  bool recursion_ok = true, beta_ok = true;
  for (std::size_t j = 1; j < samples.size(); ++j) {
    recursion_ok = recursion_ok &&
                   std::abs(samples[j].alpha / samples[j - 1].alpha - ratio) <= 1e-8 * ratio;
    beta_ok = beta_ok && std::abs(samples[j].beta - beta) <= 1e-8;
  }
  const auto growth = young::vp_growth_report(0.1, 16, 1.25);
  const bool growth_ok = growth.vp_final >= growth.lower_bound;
  c.pass = recursion_ok && beta_ok && growth_ok;
  c.detail = "alpha-ratio exact over 20 periods: " + std::string(recursion_ok ? "yes" : "NO") +
             "; v_p(2) = " + detail::fmt(growth.vp_final) + " >= bound " +
             detail::fmt(growth.lower_bound);
  return c;
}

// 12. admissibility checks
inline Criterion criterion_admissibility() {
  Criterion c{"12 Liu condition, monotonicity, convex lemma", true, "", 0.0};
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(-0.1 + 0.1 * k / 20.0);
  bool ok = true;
  std::string why;
  for (auto mdl : {model::builtin_p_system(2.0, {1.0, 0.0}),
                   model::builtin_degenerate_system({1.0, 0.0})}) {
    for (int fam : {1, 2})
      if (!model::liu_condition_check(mdl, fam, mdl.base(), grid).monotone) {
        ok = false;
        why += " Liu(" + mdl.name() + ")";
      }
    const auto mono = model::monotonicity_check(mdl, 1000);
    if (!mono.strictly_hyperbolic || !mono.monotone) {
      ok = false;
      why += " monotonicity(" + mdl.name() + ")";
    }
  }
  const int N = 8001;
  auto table = [&](auto&& h) {
    std::vector<double> ts(N), hs(N);
    for (int i = 0; i < N; ++i) {
      ts[i] = -1.0 + 2.0 * i / (N - 1);
      hs[i] = h(ts[i]);
    }
    return std::pair{ts, hs};
  };
  const std::vector<std::function<double(double)>> funcs{
      [](double t) { return t * t; }, [](double t) { return std::exp(t); },
      [](double t) { return std::abs(t * t * t); }};
  for (const auto& h : funcs) {
    auto [ts, hs] = table(h);
    for (double s : {-1.0, -0.5, 0.5, 1.0})
      if (!model::convex_lemma_check(ts, hs, s).holds) {
        ok = false;
        why += " convex-lemma";
      }
  }
  c.pass = ok;
  c.detail = ok ? "both models, 20-point grids; lemma for t^2, e^t, |t|^3 at s in {+-0.5, +-1}"
                : "failed:" + why;
  return c;
}

// 13. modified vs plain p-variation
inline Criterion criterion_vvtilde(detail::Shared& sh) {
  Criterion c{"13 cubic closeness of modified and plain p-variation", true, "", 0.0};
  const auto& tr = sh.small();
  const auto v = functionals::build_horizon(tr, tr.end_time, sh.small_cfg.p);
  double big_c = 0.0;
  auto probe = [&](double t) {
    const auto prof = tracking::solution_at(tr, t, +1);
    const double vp = pvar::vector_p_variation(prof, sh.small_cfg.p, tr.model);
    const double vt = functionals::modified_vp(v, t);
    const double mn = std::min(vp, vt);
    if (mn > 1e-300) big_c = std::max(big_c, std::abs(vp - vt) / cube(mn));
  };
  probe(0.0);
  for (const auto& ev : tr.events) probe(ev.time);
  c.pass = big_c < 1e3;
  c.detail = "recorded constant " + detail::fmt(big_c) + " (< 1e3)";
  return c;
}

// 14. determinism
inline Criterion criterion_determinism(detail::Shared& sh) {
  Criterion c{"14 byte-identical reruns", true, "", 0.0};
  const auto a = io::trace_to_string(sh.small());
  const auto again = scenario::run_config(sh.small_cfg);
  const auto b = io::trace_to_string(again);
  c.pass = a == b;
  c.detail = c.pass ? std::to_string(a.size()) + " bytes, identical"
                    : "serialized traces differ";
  return c;
}

inline std::vector<Criterion> run_all(std::ostream& os, bool quick = false) {
  using clock = std::chrono::steady_clock;
  std::vector<Criterion> results;
  detail::Shared sh;

  auto timed = [&](std::function<Criterion()> f, double limit = 0.0) {
    const auto start = clock::now();
    Criterion c = f();
    c.seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (limit > 0.0 && c.seconds > limit) {
      c.pass = false;
      c.detail += " [exceeded the " + detail::fmt(limit) + " s budget]";
    }
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << detail::fmt(c.seconds)
       << " s)  " << c.detail << "\n";
    results.push_back(c);
    return c.pass;
  };

  timed([] { return criterion_psum_oracle(); }, 10.0);
  timed([] { return criterion_property_suite(); });
  timed([] { return criterion_love_young(); });
  timed([] { return criterion_interaction_fits(); });
  timed([&] { return criterion_glimm_decay(sh); }, 60.0);

  // the sweep shared by criteria 6, 7 and 8
  std::vector<tracking::SimulationTrace> sweep;
  std::vector<double> vp0s{0.02, 0.04, 0.08};
  if (!quick) {
    for (double target : vp0s) sweep.push_back(scenario::run_config(scenario::psystem_sweep(target)));
    timed([&] { return criterion_sweep_bound(sweep, vp0s, sh.small_cfg.p); });
    timed([&] { return criterion_new_waves(sweep, vp0s, sh.small_cfg.p); });
  }
  timed([&] { return criterion_time_regularity(sh, sweep); });
  if (!quick) timed([&] { return criterion_entropy(sh); });
  timed([&] { return criterion_rw_smallness(sh); });
  timed([] { return criterion_young(); }, 30.0);
  timed([] { return criterion_admissibility(); });
  timed([&] { return criterion_vvtilde(sh); });
  timed([&] { return criterion_determinism(sh); });
  return results;
}

}  // namespace fbv::acceptance
