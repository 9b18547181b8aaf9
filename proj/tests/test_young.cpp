#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fbvtrack/young.hpp"

using namespace fbv;
using namespace fbv::young;
using Catch::Approx;

namespace {

/// closed-form 2-curve: m = w + 2uv is constant, u is linear in v, and
/// w(v) integrates dw/dv = -4 v m - 2 u(v) exactly (quadratic integrand)
Vec3 curve2_closed_form(Vec3 s0, double dv) {
  const double u0 = s0[0], v0 = s0[1], w0 = s0[2];
  const double m = w0 + 2.0 * u0 * v0;
  const double v1 = v0 + dv;
  const double u1 = u0 + 2.0 * m * dv;
  const double w1 = w0 - 2.0 * m * (v1 * v1 - v0 * v0) - 2.0 * u0 * dv - 2.0 * m * dv * dv;
  return {u1, v1, w1};
}

}  // namespace

TEST_CASE("flux values", "[young]") {
  CHECK((flux_f2({0, 0, 0}) - Vec3{0, 0, 0}).norm() == 0.0);
  CHECK((flux_f2({1, 0, 0}) - Vec3{0, 0, 1}).norm() == 0.0);
  CHECK((flux_f2({1, 1, 1}) - Vec3{3, 0, -5}).norm() == 0.0);
}

TEST_CASE("spectrum is constant {-1, 0, 1} and linearly degenerate", "[young]") {
  const auto rep = ld_eigencheck(200);
  CHECK(rep.spectrum_ok);
  CHECK(rep.max_char_residual < 1e-9);
  CHECK(rep.max_directional < 1e-6);
  // spot value at the origin
  for (double lam : {-1.0, 0.0, 1.0})
    CHECK(polished_eigenvalue({0, 0, 0}, lam) == Approx(lam).margin(1e-12));
}

TEST_CASE("integral curves against closed forms", "[young][oracle]") {
  const Vec3 s0{0.05, 0.1, -0.02};
  // families 1 and 3 are straight lines with v fixed
  for (int fam : {1, 3}) {
    const double du = 0.07;
    const Vec3 s1 = integral_curve(fam, du, s0);
    CHECK(s1[1] == Approx(s0[1]).margin(1e-14));
    CHECK(s1[0] - s0[0] == Approx(du).margin(1e-12));
    const double slope = (fam == 1 ? -1.0 : 1.0) - 2.0 * s0[1];
    CHECK(s1[2] - s0[2] == Approx(slope * du).margin(1e-10));
    // contact: Rankine-Hugoniot holds exactly at speed +-1
    const Vec3 rh = flux_f2(s1) - flux_f2(s0) - ld_speed(fam) * (s1 - s0);
    CHECK(rh.norm() < 1e-10);
  }
  // family 2 against the quadratic closed form; flux constant along the curve
  for (double dv : {0.12, -0.2}) {
    const Vec3 s1 = integral_curve(2, dv, s0);
    CHECK((s1 - curve2_closed_form(s0, dv)).norm() < 1e-11);
    CHECK((flux_f2(s1) - flux_f2(s0)).norm() < 1e-11);
  }
}

TEST_CASE("riemann_ld", "[young]") {
  const Vec3 ul{0.02, -0.05, 0.03};
  // coinciding states
  {
    const auto sol = riemann_ld(ul, ul);
    CHECK(std::abs(sol.s1) + std::abs(sol.s2) + std::abs(sol.s3) < 1e-12);
  }
  // a state on the middle curve gives a single 2-wave
  {
    const Vec3 ur = integral_curve(2, 0.15, ul);
    const auto sol = riemann_ld(ul, ur);
    CHECK(std::abs(sol.s1) < 1e-10);
    CHECK(sol.s2 == Approx(0.15).margin(1e-10));
    CHECK(std::abs(sol.s3) < 1e-10);
  }
  // generic composition recovers its strengths
  {
    const Vec3 ur = integral_curve(3, -0.11, integral_curve(2, 0.07, integral_curve(1, 0.09, ul)));
    const auto sol = riemann_ld(ul, ur);
    CHECK(sol.s1 == Approx(0.09).margin(1e-9));
    CHECK(sol.s2 == Approx(0.07).margin(1e-9));
    CHECK(sol.s3 == Approx(-0.11).margin(1e-9));
  }
}

TEST_CASE("eight-state pattern closes", "[young]") {
  const auto pat = YoungPattern::build({0, 0, 0}, 0.1, 0.1, 0.25);
  CHECK(pat.closure_error < 1e-9);
  // the (2,5) jump decomposes as (alpha, -beta, -alpha)
  const auto sol = riemann_ld(pat.states[2], pat.states[5]);
  CHECK(sol.s1 == Approx(0.1).margin(1e-9));
  CHECK(sol.s2 == Approx(-0.1).margin(1e-9));
  CHECK(sol.s3 == Approx(-0.1).margin(1e-9));
  // and the (6,1) jump as (-alpha, -beta, alpha)
  const auto sol2 = riemann_ld(pat.states[6], pat.states[1]);
  CHECK(sol2.s1 == Approx(-0.1).margin(1e-9));
  CHECK(sol2.s2 == Approx(-0.1).margin(1e-9));
  CHECK(sol2.s3 == Approx(0.1).margin(1e-9));
}

TEST_CASE("period evolution follows the exact recursion", "[young]") {
  const double beta = 0.2, alpha = 0.002;  // alpha grows by x1.5 per step
  const auto pat = YoungPattern::build({0, 0, 0}, alpha, beta, 0.25);
  const auto samples = evolve_period(pat, 6, 1.25);
  REQUIRE(samples.size() == 7);
  CHECK(samples[0].alpha == Approx(alpha));
  const double ratio = (1.0 + beta) / (1.0 - beta);
  for (std::size_t j = 1; j < samples.size(); ++j) {
    CHECK(samples[j].beta == Approx(beta).margin(1e-8));
    CHECK(samples[j].alpha / samples[j - 1].alpha == Approx(ratio).epsilon(1e-8));
    CHECK(samples[j].vp > samples[j - 1].vp);  // monotone growth
  }
  // direct check of the closed form at j = 3
  CHECK(samples[3].alpha == Approx(alpha * ratio * ratio * ratio).epsilon(1e-6));
  // k = 0 returns the initial strengths only
  const auto none = evolve_period(pat, 0, 1.25);
  REQUIRE(none.size() == 1);
  CHECK(none[0].alpha == Approx(alpha));
  CHECK(none[0].beta == Approx(beta));
}

TEST_CASE("vp growth beats the exponential lower bound", "[young]") {
  const auto rep = vp_growth_report(0.1, 16, 1.25);
  CHECK(rep.lower_bound == Approx(0.1 * std::exp(2.0 * 0.1 * std::pow(16.0, 0.2))).epsilon(1e-12));
  CHECK(rep.vp_final >= rep.lower_bound);
  CHECK(rep.vp_final > rep.vp_initial);  // the point of the example

  // p = 1: the bound degenerates to eps e^{2 eps}, independent of n
  const auto rep1 = vp_growth_report(0.1, 8, 1.0);
  CHECK(rep1.lower_bound == Approx(0.1 * std::exp(0.2)).epsilon(1e-12));
  CHECK(rep1.vp_final >= rep1.lower_bound);

  // n = 1 degenerates to a single period; the report stays well-formed
  const auto repn1 = vp_growth_report(0.1, 1, 1.25);
  CHECK(repn1.vp_initial > 0.0);
  CHECK(std::isfinite(repn1.vp_final));
}
