#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fbvtrack/pvar.hpp"

using namespace fbv;
using namespace fbv::pvar;
using Catch::Approx;

namespace {

std::vector<double> random_seq(DetRng& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(lo, hi);
  return x;
}

}  // namespace

TEST_CASE("max_p_sum frozen values", "[pvar]") {
  // single entry: the only partition is the singleton
  CHECK(max_p_sum(std::vector<double>{-3.5}, 1.7) == Approx(3.5));
  // p = 1: triangle inequality makes the all-singletons partition optimal
  CHECK(max_p_sum(std::vector<double>{1, -2, 0.5, 3}, 1.0) == Approx(6.5));
  // the non-monotonicity pair: (5,-2,5) -> 8 but (5,-1,5) -> 9
  CHECK(max_p_sum(std::vector<double>{5, -2, 5}, 2.0) == Approx(8.0));
  CHECK(max_p_sum(std::vector<double>{5, -1, 5}, 2.0) == Approx(9.0));
  // alternating +-1: singletons win, 4 components of size 1
  CHECK(max_p_sum(std::vector<double>{1, -1, 1, -1}, 2.0) == Approx(2.0));
  // empty sequence
  CHECK(max_p_sum(std::vector<double>{}, 2.0) == 0.0);
}

TEST_CASE("brute force oracle frozen values", "[pvar]") {
  CHECK(brute_force_p_sum(std::vector<double>{}, 1.5) == 0.0);
  CHECK(brute_force_p_sum(std::vector<double>{3}, 1.5) == Approx(3.0));
  // same-sign merging dominates for p > 1
  CHECK(brute_force_p_sum(std::vector<double>{1, 1}, 2.0) == Approx(2.0));
  CHECK_THROWS_AS(brute_force_p_sum(std::vector<double>(21, 1.0), 2.0), PreconditionError);
}

TEST_CASE("DP equals exhaustive enumeration", "[pvar][oracle]") {
  DetRng rng(2024);
  for (double p : {1.0, 1.2, 1.5, 2.0}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto x = random_seq(rng, rng.uniform_int(0, 12));
      const double dp = max_p_sum(x, p);
      const double bf = brute_force_p_sum(x, p);
      REQUIRE(std::abs(dp - bf) <= 1e-12 * (1.0 + bf));
    }
  }
}

TEST_CASE("p_variation_seq", "[pvar]") {
  CHECK(p_variation_seq(std::vector<double>{4, 4, 4}, 1.3) == 0.0);
  CHECK(p_variation_seq(std::vector<double>{7}, 2.0) == 0.0);
  CHECK(p_variation_seq(std::vector<double>{0, 1, 0, 1}, 1.0) == Approx(3.0));
  // reduction to max_p_sum of the differences
  CHECK(p_variation_seq(std::vector<double>{0, 5, 3, 8}, 2.0) == Approx(8.0));
  CHECK_THROWS_AS(p_variation_seq(std::vector<double>{}, 2.0), InvalidInputError);
  CHECK_THROWS_AS(max_p_sum(std::vector<double>{1.0, std::nan("")}, 2.0), InvalidInputError);
}

TEST_CASE("step function p-variation", "[pvar]") {
  StepFn constant{{}, {1.0}};
  CHECK(p_variation_step(constant, 1.5) == 0.0);
  StepFn one_jump{{0.0}, {0.0, -2.5}};
  CHECK(p_variation_step(one_jump, 1.5) == Approx(2.5));
  StepFn f{{0.0, 1.0, 2.0}, {0.0, 5.0, 3.0, 8.0}};  // jumps 5, -2, 5
  CHECK(p_variation_step(f, 2.0) == Approx(8.0));
  // windows are monotone: sub-window cannot exceed the full-line value
  CHECK(p_variation_step(f, 2.0, Window{0.5, kInf}) <= p_variation_step(f, 2.0) + 1e-15);
  CHECK(p_variation_step(f, 2.0, Window{0.5, 1.5}) == Approx(2.0));
}

namespace {
struct IdentityChart {
  Vec2 to_riemann(Vec2 u) const { return u; }
  bool in_domain(Vec2) const { return true; }
};
}  // namespace

TEST_CASE("vector p-variation recomposes from the scalar oracle", "[pvar]") {
  IdentityChart chart;
  StepFn2 constant{{}, {Vec2{1, 2}}};
  CHECK(vector_p_variation(constant, 1.25, chart) == 0.0);

  // one pure coordinate-1 jump of size s: the other coordinate is flat
  StepFn2 pure{{0.0}, {Vec2{0, 0}, Vec2{0.3, 0}}};
  CHECK(vector_p_variation(pure, 1.25, chart) == Approx(0.3));

  DetRng rng(7);
  StepFn2 u;
  u.values.push_back({0, 0});
  for (int i = 0; i < 6; ++i) {
    u.xs.push_back(i);
    u.values.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  }
  std::vector<double> j1, j2;
  for (int i = 0; i < 6; ++i) {
    j1.push_back(u.values[i + 1][0] - u.values[i][0]);
    j2.push_back(u.values[i + 1][1] - u.values[i][1]);
  }
  const double p = 1.4;
  const double expect =
      std::pow(std::pow(max_p_sum(j1, p), p) + std::pow(max_p_sum(j2, p), p), 1.0 / p);
  CHECK(vector_p_variation(u, p, chart) == Approx(expect));
}

TEST_CASE("riemann zeta", "[pvar]") {
  // pi^2/6 and an independently computed reference for 4/3
  CHECK(riemann_zeta(2.0) == Approx(1.6449340668482264).epsilon(1e-11));
  // partial-sum oracle at s = 4/3 with a different truncation + tail
  const double s = 4.0 / 3.0;
  double ref = 0.0;
  const std::size_t N = 400'000;
  for (std::size_t n = N; n >= 1; --n) ref += std::pow(double(n), -s);
  ref += std::pow(double(N), 1.0 - s) / (s - 1.0) - 0.5 * std::pow(double(N), -s);
  CHECK(riemann_zeta(s) == Approx(ref).epsilon(1e-10));
  CHECK_THROWS_AS(riemann_zeta(1.0), PreconditionError);
}

TEST_CASE("Love-Young inequality", "[pvar]") {
  // zero sequences: 0 <= 0
  auto z = love_young_check(std::vector<double>{0, 0, 0}, std::vector<double>{0, 0, 0}, 1.5, 1.5);
  CHECK(z.lhs == 0.0);
  CHECK(z.holds);

  // direct evaluation: x=(1,-1), y=(1,1): sum_{i<=j} x_i y_j = x1 y1 + x1 y2 + x2 y2 = 1
  auto r = love_young_check(std::vector<double>{1, -1}, std::vector<double>{1, 1}, 1.5, 1.5);
  CHECK(r.lhs == Approx(1.0));
  const double sp_x = max_p_sum(std::vector<double>{1, -1}, 1.5);
  const double sp_y = max_p_sum(std::vector<double>{1, 1}, 1.5);
  CHECK(r.rhs == Approx((1.0 + riemann_zeta(4.0 / 3.0)) * sp_x * sp_y));
  CHECK(r.holds);

  CHECK_THROWS_AS(
      love_young_check(std::vector<double>{1}, std::vector<double>{1}, 3.0, 3.0),
      PreconditionError);

  // property: holds on every random draw with 1/p + 1/q > 1
  DetRng rng(99);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(1, 14);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const auto res = love_young_check(x, y, 1.4, 1.4);
    REQUIRE(res.holds);
  }
}

TEST_CASE("multiplicative bound", "[pvar]") {
  // constant b = 1: product equals a, ratio <= 1
  {
    std::vector<double> a{0.3, -0.7, 0.1, 0.9}, b{1, 1, 1, 1};
    auto r = multiplicative_bound_check(a, b, 1.5);
    CHECK(r.lhs == Approx(max_p_sum(a, 1.5)));
    CHECK(r.ratio <= 1.0 + 1e-12);
  }
  // a = 0: lhs = 0
  {
    std::vector<double> a{0, 0, 0}, b{1, -2, 3};
    auto r = multiplicative_bound_check(a, b, 1.5);
    CHECK(r.lhs == 0.0);
    CHECK(r.ratio == 0.0);
  }
  CHECK_THROWS_AS(
      multiplicative_bound_check(std::vector<double>{1}, std::vector<double>{1}, 2.0),
      PreconditionError);

  // empirical constant is finite and stable under doubling the length
  DetRng rng(5);
  double worst_short = 0.0, worst_long = 0.0;
  for (int rep = 0; rep < 250; ++rep) {
    const auto a8 = random_seq(rng, 8);
    const auto b8 = random_seq(rng, 8);
    worst_short = std::max(worst_short, multiplicative_bound_check(a8, b8, 1.5).ratio);
    const auto a16 = random_seq(rng, 16);
    const auto b16 = random_seq(rng, 16);
    worst_long = std::max(worst_long, multiplicative_bound_check(a16, b16, 1.5).ratio);
  }
  CHECK(worst_short < 50.0);
  CHECK(worst_long < 50.0);
  CHECK(worst_long < 4.0 * worst_short + 1.0);
}

// ---------------------------------------------------------------------------
// elementary property suite (random instances, exact comparisons via the DP)

TEST_CASE("monotone in p", "[pvar][properties]") {
  DetRng rng(11);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto a = random_seq(rng, rng.uniform_int(1, 10));
    const double p = rng.uniform(1.0, 2.0), pp = p + rng.uniform(0.0, 1.5);
    CHECK(max_p_sum(a, pp) <= max_p_sum(a, p) * (1 + 1e-12) + 1e-14);
    CHECK(p_variation_seq(a, pp) <= p_variation_seq(a, p) * (1 + 1e-12) + 1e-14);
  }
}

TEST_CASE("subadditive in the sequence", "[pvar][properties]") {
  DetRng rng(12);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(1, 10);
    const auto a = random_seq(rng, n), b = random_seq(rng, n);
    std::vector<double> sum(n);
    for (int i = 0; i < n; ++i) sum[i] = a[i] + b[i];
    const double p = rng.uniform(1.0, 2.5);
    CHECK(max_p_sum(sum, p) <= max_p_sum(a, p) + max_p_sum(b, p) + 1e-12);
    CHECK(p_variation_seq(sum, p) <= p_variation_seq(a, p) + p_variation_seq(b, p) + 1e-12);
  }
}

TEST_CASE("merging adjacent entries", "[pvar][properties]") {
  DetRng rng(13);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(2, 10);
    auto a = random_seq(rng, n);
    const int j = rng.uniform_int(0, n - 2);
    const bool same_sign = rep % 2 == 0;
    if (same_sign) a[j + 1] = std::abs(a[j + 1]) * (a[j] >= 0 ? 1.0 : -1.0);
    else a[j + 1] = std::abs(a[j + 1]) * (a[j] >= 0 ? -1.0 : 1.0);
    std::vector<double> merged;
    for (int i = 0; i < n; ++i) {
      if (i == j) merged.push_back(a[j] + a[j + 1]);
      else if (i != j + 1) merged.push_back(a[i]);
    }
    const double p = rng.uniform(1.0, 2.5);
    const double sa = max_p_sum(a, p), sm = max_p_sum(merged, p);
    CHECK(sm <= sa * (1 + 1e-12) + 1e-14);          // merging never increases
    if (same_sign) CHECK(sm == Approx(sa).margin(1e-12));  // same-sign merge is neutral
  }
}

TEST_CASE("concatenation superadditivity", "[pvar][properties]") {
  DetRng rng(14);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto a = random_seq(rng, rng.uniform_int(0, 8));
    const auto b = random_seq(rng, rng.uniform_int(0, 8));
    std::vector<double> cat(a);
    cat.insert(cat.end(), b.begin(), b.end());
    const double p = rng.uniform(1.0, 2.5);
    CHECK(max_p_sum_pow(a, p) + max_p_sum_pow(b, p) <= max_p_sum_pow(cat, p) + 1e-12);
  }
}

TEST_CASE("interleaving", "[pvar][properties]") {
  DetRng rng(15);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto a = random_seq(rng, rng.uniform_int(1, 6));
    const auto b = random_seq(rng, rng.uniform_int(1, 6));
    // random interleaving preserving both orders
    std::vector<double> c;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() || ib < b.size()) {
      const bool take_a = ib == b.size() || (ia < a.size() && rng.uniform01() < 0.5);
      c.push_back(take_a ? a[ia++] : b[ib++]);
    }
    const double p = rng.uniform(1.0, 2.5);
    CHECK(p_variation_seq(a, p) <= p_variation_seq(c, p) + 1e-12);
    const double spa = max_p_sum(a, p), spb = max_p_sum(b, p), spc = max_p_sum(c, p);
    CHECK(std::abs(spa - spb) <= spc + 1e-12);
    CHECK(spc <= spa + spb + 1e-12);
  }
}

TEST_CASE("repetition never increases v_p", "[pvar][properties]") {
  DetRng rng(16);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto a = random_seq(rng, rng.uniform_int(1, 6));
    std::vector<double> b;
    for (double v : a) {
      const int k = rng.uniform_int(1, 3);
      for (int i = 0; i < k; ++i) b.push_back(v);
    }
    const double p = rng.uniform(1.0, 2.5);
    CHECK(p_variation_seq(b, p) <= p_variation_seq(a, p) + 1e-12);
  }
}

TEST_CASE("prepending zero", "[pvar][properties]") {
  DetRng rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto a = random_seq(rng, rng.uniform_int(1, 8));
    std::vector<double> z{0.0};
    z.insert(z.end(), a.begin(), a.end());
    const double p = rng.uniform(1.0, 2.5);
    CHECK(p_variation_seq(z, p) <= std::abs(a[0]) + p_variation_seq(a, p) + 1e-12);
  }
}

TEST_CASE("Lipschitz composition", "[pvar][properties]") {
  DetRng rng(18);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(1, 8);
    std::vector<double> a(n);
    for (auto& v : a) v = rng.uniform(0.5, 2.0);
    const double p = rng.uniform(1.0, 2.5);
    // f(x) = x^2 on [1/2, 2]: Lip = 4
    std::vector<double> fa(n), ga(n);
    for (int i = 0; i < n; ++i) {
      fa[i] = a[i] * a[i];
      ga[i] = 1.0 / a[i];  // Lip of 1/x on [1/2,2] is 4
    }
    CHECK(p_variation_seq(fa, p) <= 4.0 * p_variation_seq(a, p) + 1e-12);
    CHECK(p_variation_seq(ga, p) <= 4.0 * p_variation_seq(a, p) + 1e-12);
  }
}

TEST_CASE("product rule", "[pvar][properties]") {
  DetRng rng(19);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(1, 7);
    const int m = rng.uniform_int(2, 3);  // number of sequences
    std::vector<std::vector<double>> seqs(m);
    for (auto& s : seqs) s = random_seq(rng, n);
    std::vector<double> prod(n, 1.0);
    for (const auto& s : seqs)
      for (int i = 0; i < n; ++i) prod[i] *= s[i];
    const double p = rng.uniform(1.0, 2.5);
    double bound = 0.0;
    for (int j = 0; j < m; ++j) {
      double term = p_variation_seq(seqs[j], p);
      for (int k = 0; k < m; ++k) {
        if (k == j) continue;
        double inf = 0.0;
        for (double v : seqs[k]) inf = std::max(inf, std::abs(v));
        term *= inf;
      }
      bound += term;
    }
    CHECK(p_variation_seq(prod, p) <= bound + 1e-12);
  }
}

TEST_CASE("endpoint sensitivity: convexity and monotonicity in t", "[pvar][properties]") {
  DetRng rng(20);
  for (int rep = 0; rep < 1000; ++rep) {
    auto x = random_seq(rng, rng.uniform_int(1, 7));
    const double p = rng.uniform(1.0, 2.5);
    auto sp_with = [&](double t) {
      std::vector<double> xt(x);
      xt.push_back(t);
      return max_p_sum_pow(xt, p);
    };
    // midpoint convexity on a small grid
    const double t0 = rng.uniform(-2.0, 2.0), t1 = rng.uniform(-2.0, 2.0);
    CHECK(sp_with(0.5 * (t0 + t1)) <= 0.5 * (sp_with(t0) + sp_with(t1)) + 1e-12);
    // non-increasing on t <= 0, non-decreasing on t >= 0
    const double a = rng.uniform(0.0, 2.0), b = a + rng.uniform(0.0, 1.0);
    CHECK(sp_with(a) <= sp_with(b) + 1e-12);
    CHECK(sp_with(-b) >= sp_with(-a) - 1e-12);
  }
}

TEST_CASE("endpoint sensitivity: appended increment bounds", "[pvar][properties]") {
  DetRng rng(21);
  for (int rep = 0; rep < 1000; ++rep) {
    auto x = random_seq(rng, rng.uniform_int(2, 7));
    const double p = rng.uniform(1.0, 2.5);
    const double xe = rng.uniform(-1.0, 1.0);
    const double base = max_p_sum_pow(x, p);
    // append
    {
      std::vector<double> xt(x);
      xt.push_back(xe);
      const double grown = max_p_sum_pow(xt, p);
      CHECK(grown - base >= pow_abs(xe, p) - 1e-12);
      if (same_sign_weak(x.back(), xe))
        CHECK(grown - base >=
              p * pow_abs(x.back(), p - 1.0) * std::abs(xe) - 1e-12);
    }
    // mirror property at the left end
    {
      std::vector<double> xt;
      xt.push_back(xe);
      xt.insert(xt.end(), x.begin(), x.end());
      const double grown = max_p_sum_pow(xt, p);
      CHECK(grown - base >= pow_abs(xe, p) - 1e-12);
      if (same_sign_weak(x.front(), xe))
        CHECK(grown - base >=
              p * pow_abs(x.front(), p - 1.0) * std::abs(xe) - 1e-12);
    }
  }
}

TEST_CASE("empirical constant for the s_p expansion bound", "[pvar][properties]") {
  // s_p^p(a+b) <= s_p^p(a) + C s_p(a)^{p-1} s_p(b) + 2 s_p^p(b): certify a finite
  // empirical C over random draws (no specific value is pinned).
  DetRng rng(22);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = rng.uniform_int(1, 8);
    const auto a = random_seq(rng, n);
    auto b = random_seq(rng, n);
    for (auto& v : b) v *= 0.3;
    std::vector<double> sum(n);
    for (int i = 0; i < n; ++i) sum[i] = a[i] + b[i];
    const double p = rng.uniform(1.0, 1.9);
    const double spa = max_p_sum(a, p), spb = max_p_sum(b, p);
    if (spa < 1e-6 || spb < 1e-9) continue;
    const double excess =
        max_p_sum_pow(sum, p) - max_p_sum_pow(a, p) - 2.0 * std::pow(spb, p);
    if (excess > 0) worst = std::max(worst, excess / (std::pow(spa, p - 1.0) * spb));
  }
  CHECK(worst < 100.0);
  CHECK(worst > 0.0);
}

TEST_CASE("optimal partition is consistent with the DP value", "[pvar]") {
  DetRng rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_seq(rng, rng.uniform_int(1, 10));
    const double p = rng.uniform(1.0, 2.5);
    const auto part = optimal_partition(x, p);
    REQUIRE(part.cuts.front() == 0);
    REQUIRE(part.cuts.back() == x.size());
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < part.cuts.size(); ++j) {
      double comp = 0.0;
      for (std::size_t i = part.cuts[j]; i < part.cuts[j + 1]; ++i) comp += x[i];
      total += pow_abs(comp, p);
    }
    CHECK(std::pow(total, 1.0 / p) == Approx(max_p_sum(x, p)).margin(1e-12));
  }
}
