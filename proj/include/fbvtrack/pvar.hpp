#pragma once

// Maximal p-sums and p-variations of finite sequences and step functions.
//
// For a sequence x = (x_1,...,x_n) and p >= 1,
//
//   s_p(x) = ( sup over partitions 0=i_0<...<i_k=n of
//              sum_j | x_{i_j+1} + ... + x_{i_{j+1}} |^p )^{1/p},
//
// and v_p(x) = s_p of the successive differences of x.  s_p is computed by an
// exact dynamic program over prefix optima; an exponential enumerator is kept
// as an independent oracle.  The module also provides the discrete Love-Young
// inequality check and the multiplicative bound s_p(ab) <= C s_p(a)(|b|_inf +
// v_p(b)).

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "fbvtrack/common.hpp"

namespace fbv::pvar {

using RealSeq = std::vector<double>;

/// Partition of {1..n}: strictly increasing cut indices 0 = i_0 < ... < i_k = n.
struct Partition {
  std::vector<std::size_t> cuts;
};

inline void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInputError("p exponent must satisfy p >= 1");
}

inline void check_finite(std::span<const double> x, const char* who) {
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidInputError(std::string(who) + ": non-finite entry");
}

// ---------------------------------------------------------------------------
// maximal p-sum

/// All prefix optima of the dynamic program: out[j] = s_p^p(x_1..x_j), j = 0..n.
/// O(n^2).  out[0] = 0.
inline std::vector<double> max_p_sum_pow_prefixes(std::span<const double> x, double p) {
  check_p(p);
  check_finite(x, "max_p_sum");
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);  // prefix sums of x
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> best(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) {
    double b = -1.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] + pow_abs(prefix[j] - prefix[i], p);
      if (cand > b) b = cand;
    }
    best[j] = b;
  }
  return best;
}

/// s_p(x)^p
inline double max_p_sum_pow(std::span<const double> x, double p) {
  return max_p_sum_pow_prefixes(x, p).back();
}

/// s_p(x); 0 for the empty sequence.
inline double max_p_sum(std::span<const double> x, double p) {
  return std::pow(max_p_sum_pow(x, p), 1.0 / p);
}

/// Recover one optimal partition (for diagnostics and property tests).
inline Partition optimal_partition(std::span<const double> x, double p) {
  check_p(p);
  check_finite(x, "optimal_partition");
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> best(n + 1, 0.0);
  std::vector<std::size_t> from(n + 1, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    double b = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] + pow_abs(prefix[j] - prefix[i], p);
      if (cand > b) {
        b = cand;
        arg = i;
      }
    }
    best[j] = b;
    from[j] = arg;
  }
  Partition part;
  std::size_t j = n;
  while (true) {
    part.cuts.push_back(j);
    if (j == 0) break;
    j = from[j];
  }
  std::reverse(part.cuts.begin(), part.cuts.end());
  return part;
}

/// Exhaustive enumeration of all 2^(n-1) partitions.  Oracle only.
inline double brute_force_p_sum(std::span<const double> x, double p) {
  check_p(p);
  check_finite(x, "brute_force_p_sum");
  const std::size_t n = x.size();
  if (n > 20) throw PreconditionError("brute_force_p_sum: refusing length > 20");
  if (n == 0) return 0.0;
  double best = -1.0;
  const std::uint64_t masks = 1ULL << (n - 1);  // cut/no-cut at each internal gap
  for (std::uint64_t m = 0; m < masks; ++m) {
    double total = 0.0, comp = x[0];
    for (std::size_t i = 1; i < n; ++i) {
      if (m & (1ULL << (i - 1))) {
        total += pow_abs(comp, p);
        comp = x[i];
      } else {
        comp += x[i];
      }
    }
    total += pow_abs(comp, p);
    best = std::max(best, total);
  }
  return std::pow(best, 1.0 / p);
}

// ---------------------------------------------------------------------------
// p-variation of sequences

/// v_p(x) = s_p(x_2-x_1, ..., x_n-x_{n-1}); 0 for a single point.
inline double p_variation_seq(std::span<const double> x, double p) {
  if (x.empty()) throw InvalidInputError("p_variation_seq: empty sequence");
  check_finite(x, "p_variation_seq");
  std::vector<double> d(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  return max_p_sum(d, p);
}

inline double p_variation_seq_pow(std::span<const double> x, double p) {
  if (x.empty()) throw InvalidInputError("p_variation_seq: empty sequence");
  std::vector<double> d(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  return max_p_sum_pow(d, p);
}

// ---------------------------------------------------------------------------
// step functions

/// Piecewise-constant map R -> T with finitely many jumps.
/// values[i] on (xs[i-1], xs[i]); values.front() on (-inf, xs[0]),
/// values.back() on (xs[N-1], +inf).
template <class T>
struct StepFunction {
  std::vector<double> xs;  // strictly increasing breakpoints, size N
  std::vector<T> values;   // size N+1

  std::size_t jump_count() const { return xs.size(); }

  void validate() const {
    if (values.size() != xs.size() + 1)
      throw InvalidInputError("StepFunction: values must have one more entry than breakpoints");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (!(xs[i] < xs[i + 1])) throw InvalidInputError("StepFunction: breakpoints must increase");
  }

  T operator()(double x) const {
    // value on the open cell containing x; at a breakpoint returns the right value
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    return values[static_cast<std::size_t>(it - xs.begin())];
  }
};

using StepFn = StepFunction<double>;
using StepFn2 = StepFunction<Vec2>;

/// Window for restricted p-variation queries; endpoints may be +-inf.
struct Window {
  double lo = -kInf;
  double hi = kInf;
};

/// V_p of a scalar step function = s_p of its jump sequence, restricted to
/// jumps located in [window.lo, window.hi].
inline double p_variation_step(const StepFn& f, double p, std::optional<Window> window = {}) {
  f.validate();
  const double lo = window ? window->lo : -kInf;
  const double hi = window ? window->hi : kInf;
  std::vector<double> jumps;
  jumps.reserve(f.xs.size());
  for (std::size_t i = 0; i < f.xs.size(); ++i)
    if (f.xs[i] >= lo && f.xs[i] <= hi) jumps.push_back(f.values[i + 1] - f.values[i]);
  return max_p_sum(jumps, p);
}

/// Vector p-variation along Riemann coordinates:
/// ( V_p(w_1 o u)^p + V_p(w_2 o u)^p )^(1/p).
/// `chart` must provide Vec2 to_riemann(Vec2) and bool in_domain(Vec2).
template <class Chart>
inline double vector_p_variation(const StepFn2& u, double p, const Chart& chart,
                                 std::optional<Window> window = {}) {
  u.validate();
  check_p(p);
  const double lo = window ? window->lo : -kInf;
  const double hi = window ? window->hi : kInf;
  std::vector<Vec2> w(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (!chart.in_domain(u.values[i]))
      throw ModelDomainError("vector_p_variation: state outside chart domain");
    w[i] = chart.to_riemann(u.values[i]);
  }
  std::vector<double> j1, j2;
  j1.reserve(u.xs.size());
  j2.reserve(u.xs.size());
  for (std::size_t i = 0; i < u.xs.size(); ++i) {
    if (u.xs[i] < lo || u.xs[i] > hi) continue;
    j1.push_back(w[i + 1][0] - w[i][0]);
    j2.push_back(w[i + 1][1] - w[i][1]);
  }
  return std::pow(max_p_sum_pow(j1, p) + max_p_sum_pow(j2, p), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Riemann zeta (partial sums + integral tail), cached

/// zeta(s) for s > 1, accurate to well below 1e-10 for s >= 1.0005.
inline double riemann_zeta(double s) {
  if (!(s > 1.0)) throw PreconditionError("riemann_zeta: requires s > 1");
  static std::map<double, double> cache;
  static std::mutex mtx;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
  }
  const std::size_t N = 1'000'000;
  double sum = 0.0;
  for (std::size_t n = N; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  // integral tail with midpoint correction: sum_{n>N} n^-s ~ N^{1-s}/(s-1) - N^-s/2
  const double tail = std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0) -
                      0.5 * std::pow(static_cast<double>(N), -s);
  const double z = sum + tail;
  std::lock_guard<std::mutex> lock(mtx);
  cache.emplace(s, z);
  return z;
}

// ---------------------------------------------------------------------------
// Love-Young inequality

struct LoveYoungResult {
  double lhs;  // | sum_{i<=j} x_i y_j |
  double rhs;  // (1 + zeta(1/p + 1/q)) s_p(x) s_q(y)
  bool holds;
};

inline LoveYoungResult love_young_check(std::span<const double> x, std::span<const double> y,
                                        double p, double q) {
  if (x.size() != y.size()) throw PreconditionError("love_young_check: length mismatch");
  check_p(p);
  check_p(q);
  if (!(1.0 / p + 1.0 / q > 1.0))
    throw PreconditionError("love_young_check: requires 1/p + 1/q > 1");
  check_finite(x, "love_young_check");
  check_finite(y, "love_young_check");
  // sum_{1<=i<=j<=n} x_i y_j = sum_j y_j * (x_1 + ... + x_j)
  double lhs = 0.0, px = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    px += x[j];
    lhs += y[j] * px;
  }
  lhs = std::abs(lhs);
  const double rhs = (1.0 + riemann_zeta(1.0 / p + 1.0 / q)) * max_p_sum(x, p) * max_p_sum(y, q);
  // non-strict inequality; allow roundoff headroom
  const bool holds = lhs <= rhs * (1.0 + 1e-12) + 1e-300;
  return {lhs, rhs, holds};
}

// ---------------------------------------------------------------------------
// multiplicative bound s_p(ab) <= C s_p(a) (|b|_inf + v_p(b)), p < 2

struct MultiplicativeBoundResult {
  double lhs;    // s_p(pointwise product)
  double ratio;  // lhs / ( s_p(a) (|b|_inf + v_p(b)) ), 0 when the denominator vanishes
};

inline MultiplicativeBoundResult multiplicative_bound_check(std::span<const double> a,
                                                            std::span<const double> b, double p) {
  if (a.size() != b.size()) throw PreconditionError("multiplicative_bound_check: length mismatch");
  check_p(p);
  if (!(p < 2.0)) throw PreconditionError("multiplicative_bound_check: requires p < 2");
  std::vector<double> ab(a.size());
  double binf = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab[i] = a[i] * b[i];
    binf = std::max(binf, std::abs(b[i]));
  }
  const double lhs = max_p_sum(ab, p);
  const double vb = b.empty() ? 0.0 : p_variation_seq(b, p);
  const double denom = max_p_sum(a, p) * (binf + vb);
  return {lhs, denom > 0.0 ? lhs / denom : 0.0};
}

}  // namespace fbv::pvar
