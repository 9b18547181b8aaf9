#pragma once

// Small shared vocabulary for the library: 2-vectors/2x2 matrices, error
// types, float comparison helpers and a deterministic hash.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace fbv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// errors

/// Invalid argument values (non-finite entries, bad exponents, ...).
class InvalidInputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// States or parameters outside the admissible region of a model.
class ModelDomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An iterative solver failed to converge.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configured resource cap was exceeded.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// tiny dense linear algebra (2x2 is all the core systems need)

struct Vec2 {
  double a[2]{0.0, 0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x, double y) : a{x, y} {}

  constexpr double operator[](int i) const { return a[i]; }
  constexpr double& operator[](int i) { return a[i]; }

  friend constexpr Vec2 operator+(Vec2 u, Vec2 v) { return {u[0] + v[0], u[1] + v[1]}; }
  friend constexpr Vec2 operator-(Vec2 u, Vec2 v) { return {u[0] - v[0], u[1] - v[1]}; }
  friend constexpr Vec2 operator*(double c, Vec2 v) { return {c * v[0], c * v[1]}; }
  friend constexpr Vec2 operator*(Vec2 v, double c) { return c * v; }
  friend constexpr Vec2 operator/(Vec2 v, double c) { return {v[0] / c, v[1] / c}; }
  friend constexpr bool operator==(Vec2 u, Vec2 v) { return u[0] == v[0] && u[1] == v[1]; }

  constexpr double dot(Vec2 v) const { return a[0] * v[0] + a[1] * v[1]; }
  double norm() const { return std::hypot(a[0], a[1]); }
  constexpr double norm_inf() const {
    double x = a[0] < 0 ? -a[0] : a[0];
    double y = a[1] < 0 ? -a[1] : a[1];
    return x > y ? x : y;
  }
  bool finite() const { return std::isfinite(a[0]) && std::isfinite(a[1]); }
};

struct Mat2 {
  // row-major: [m00 m01; m10 m11]
  double m00{}, m01{}, m10{}, m11{};

  constexpr Vec2 operator*(Vec2 v) const {
    return {m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]};
  }
  constexpr double det() const { return m00 * m11 - m01 * m10; }

  /// Solve M x = b; throws on a singular matrix.
  Vec2 solve(Vec2 b) const {
    const double d = det();
    if (std::abs(d) < 1e-300) throw ConvergenceError("Mat2::solve: singular matrix");
    return {(m11 * b[0] - m01 * b[1]) / d, (-m10 * b[0] + m00 * b[1]) / d};
  }
};

// ---------------------------------------------------------------------------
// float helpers

/// |a-b| <= atol + rtol*max(|a|,|b|)
inline bool approx_eq(double a, double b, double rtol = 1e-12, double atol = 1e-14) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

inline double sqr(double x) { return x * x; }
inline double cube(double x) { return x * x * x; }
inline double pow_abs(double x, double p) { return std::pow(std::abs(x), p); }

/// sign with 0 treated as compatible with both signs
inline bool same_sign_weak(double x, double y) { return x * y >= 0.0; }

// ---------------------------------------------------------------------------
// deterministic hashing (speed micro-perturbations, sampling)

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// deterministic value in (0,1), identical across platforms
inline double hash_unit(std::uint64_t key) {
  const std::uint64_t h = splitmix64(key);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Tiny deterministic generator for tests and calibration sampling.
/// (std::mt19937 would do, but the distributions are not portable; this is.)
class DetRng {
public:
  explicit DetRng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x51a2b3c4d5e6f708ULL)) {}

  std::uint64_t next_u64() {
    state_ = splitmix64(state_);
    return state_;
  }
  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  /// standard normal via Box-Muller (deterministic)
  double normal() {
    const double u1 = uniform01(), u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

private:
  std::uint64_t state_;
};

}  // namespace fbv
