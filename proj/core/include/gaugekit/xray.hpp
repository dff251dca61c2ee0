#pragma once

#include <functional>
#include <vector>

#include "gaugekit/gauges.hpp"
#include "gaugekit/grid.hpp"

namespace gaugekit {

// Line-integral data sampled over (angle, offset).  The line at (theta, d)
// passes through d * (-sin theta, cos theta) with direction
// (cos theta, sin theta).  Values are row-major, angle-major.
struct Sinogram {
  int n_angles = 0;
  int n_offsets = 0;
  double angle_start = 0.0;
  double angle_step = 0.0;
  double offset_start = 0.0;
  double offset_step = 0.0;
  std::vector<double> values;
  std::vector<std::string> annotations;

  double angle(int i) const { return angle_start + i * angle_step; }
  double offset(int j) const { return offset_start + j * offset_step; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n_offsets + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n_offsets + j]; }
};

// a(omega, x) on a transverse offset lattice for one direction: the line
// integral of omega . A through x = d * perp(omega).
struct PotentialLineData {
  Vec2 omega{1.0, 0.0};
  double offset_start = 0.0;
  double offset_step = 0.0;
  std::vector<double> values;
};

// a(omega, x) = int omega . A(x + omega t) dt
double line_integral_a(const VectorPotential& A, const Vec2& omega, const Vec2& x,
                       QuadratureOptions opt = {});
// 3D variant (used for per-plane reconstruction)
double line_integral_a3(const VectorPotential& A, const Vec3& omega, const Vec3& x,
                        QuadratureOptions opt = {});

PotentialLineData potential_line_data(const VectorPotential& A, const Vec2& omega, int n_offsets,
                                      double offset_extent, QuadratureOptions opt = {});

// Scalar X-ray transform over an (angle, offset) lattice.
Sinogram xray_scalar_forward(const std::function<double(const Vec2&)>& f, int n_angles,
                             int n_offsets, double offset_extent, TailBound tail,
                             QuadratureOptions opt = {});

// (perp(omega) . grad) a(omega, .) by centered differences on the offset
// lattice: the X-ray transform of (perp(omega) X omega) . B = -B.
std::vector<double> derivative_to_xray(const PotentialLineData& data, double noise_tol = 0.1);

// Filtered backprojection: discrete ramp kernel with Hann apodization at the
// lattice Nyquist, linear interpolation in the backprojection.
SampledField fbp_invert(const Sinogram& s, int n_pixels = 0, double extent = 0.0);

// Full Prop.-Px-item-2 pipeline: transverse differentiation per direction,
// sinogram assembly, FBP.  Data must cover angles over [0, pi).
SampledField reconstruct_B(const std::vector<PotentialLineData>& dataset, int n_pixels,
                           double extent);

}  // namespace gaugekit
