#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaugekit {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// --- error taxonomy -------------------------------------------------------
// ConfigError:  bad input / violated precondition (CLI exit code 2)
// NumericError: tolerance or convergence failure   (CLI exit code 3)

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- small vector algebra -------------------------------------------------

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// 2D identifies scalars with the 3rd axis of R^3:
//   v x w (vectors)      -> scalar  v1 w2 - v2 w1
//   v x b (vector,scalar)-> vector  (v2 b, -v1 b)
//   curl of vector field -> scalar  d1 A2 - d2 A1
//   curl of scalar field -> vector  (d2 b, -d1 b)
inline double cross(const Vec2& v, const Vec2& w) { return v[0] * w[1] - v[1] * w[0]; }
inline Vec2 cross(const Vec2& v, double b) { return {v[1] * b, -v[0] * b}; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }
// positively oriented normal, offset axis of a line with direction omega
inline Vec2 perp(const Vec2& omega) { return {-omega[1], omega[0]}; }

// --- C^2 quintic blend ------------------------------------------------------
// s(0)=0, s(1)=1, s'=s''=0 at both ends; antiderivative used for the adaptive
// gauge's periodic angle profile.
inline double smoothstep5(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
inline double smoothstep5_deriv(double t) {
  if (t <= 0 || t >= 1) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}
inline double smoothstep5_deriv2(double t) {
  if (t <= 0 || t >= 1) return 0.0;
  return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}
// int_0^t smoothstep5
inline double smoothstep5_antideriv(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return t - 0.5;
  double t4 = t * t * t * t;
  return t4 * (2.5 + t * (-3.0 + t));
}

// --- deterministic parallel map --------------------------------------------
// Chunked over [0, n); each index writes only its own outputs, so results are
// bit-identical for any thread count. GAUGEKIT_THREADS caps the pool.

std::size_t thread_budget();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// FNV-1a, used for report provenance hashes.
std::uint64_t fnv1a(const std::string& text);

}  // namespace gaugekit
