#include "gaugekit/xray.hpp"

#include <algorithm>
#include <cmath>

#include "gaugekit/fft.hpp"

namespace gaugekit {

namespace {

// breakpoints in t where x + omega t crosses the circle of radius rj
void ray_circle_breakpoints(const Vec2& x, const Vec2& omega, double rj,
                            std::vector<double>& out) {
  double b = 2.0 * dot(x, omega);
  double c = dot(x, x) - rj * rj;
  double disc = b * b - 4.0 * c;
  if (disc <= 0.0) return;
  double sq = std::sqrt(disc);
  out.push_back((-b - sq) / 2.0);
  out.push_back((-b + sq) / 2.0);
}

}  // namespace

double line_integral_a(const VectorPotential& A, const Vec2& omega, const Vec2& x,
                       QuadratureOptions opt) {
  if (A.dim != 2) throw ConfigError("line_integral_a: 2D potential required");
  if (!A.medium_range || !A.line_decay.integrable())
    throw NumericError("line_integral_a: longitudinal tail not integrable (not medium-range)");
  // analytic gradient part contributes Lambda(omega) - Lambda(-omega) exactly
  double analytic = 0.0;
  if (A.grad_part) {
    double ang = std::atan2(omega[1], omega[0]);
    analytic = A.grad_part->sign *
               (A.grad_part->Lambda_of_angle(ang) - A.grad_part->Lambda_of_angle(ang + pi));
  }
  auto base = A.A2_base ? A.A2_base : A.A2;
  auto integrand = [&base, &omega, &x](double t) {
    return dot(omega, base({x[0] + omega[0] * t, x[1] + omega[1] * t}));
  };
  Vec2 foot = x - dot(x, omega) * omega;
  double d = norm(foot);
  TailBound tail{A.line_decay.K * (1.0 + d), A.line_decay.mu_line,
                 A.line_decay.R + std::abs(dot(x, omega))};
  QuadratureOptions o = opt;
  for (double rj : A.source_jump_radii) ray_circle_breakpoints(x, omega, rj, o.breakpoints);
  if (A.source_support_radius) ray_circle_breakpoints(x, omega, *A.source_support_radius, o.breakpoints);
  auto res = integrate_real_line(integrand, tail, o);
  require_converged(res, "line_integral_a");
  return res.value + analytic;
}

double line_integral_a3(const VectorPotential& A, const Vec3& omega, const Vec3& x,
                        QuadratureOptions opt) {
  if (A.dim != 3) throw ConfigError("line_integral_a3: 3D potential required");
  auto integrand = [&A, &omega, &x](double t) { return dot(omega, A.eval3(x + t * omega)); };
  Vec3 foot = x - dot(x, omega) * omega;
  TailBound tail{A.line_decay.K * (1.0 + norm(foot)), A.line_decay.mu_line,
                 A.line_decay.R + std::abs(dot(x, omega))};
  auto res = integrate_real_line(integrand, tail, opt);
  require_converged(res, "line_integral_a3");
  return res.value;
}

PotentialLineData potential_line_data(const VectorPotential& A, const Vec2& omega, int n_offsets,
                                      double offset_extent, QuadratureOptions opt) {
  PotentialLineData out;
  out.omega = omega;
  out.offset_step = 2.0 * offset_extent / (n_offsets - 1);
  out.offset_start = -offset_extent;
  out.values.resize(n_offsets);
  Vec2 tilde = perp(omega);
  parallel_for(n_offsets, [&](std::size_t j) {
    double d = out.offset_start + j * out.offset_step;
    out.values[j] = line_integral_a(A, omega, d * tilde, opt);
  });
  return out;
}

Sinogram xray_scalar_forward(const std::function<double(const Vec2&)>& f, int n_angles,
                             int n_offsets, double offset_extent, TailBound tail,
                             QuadratureOptions opt) {
  Sinogram s;
  s.n_angles = n_angles;
  s.n_offsets = n_offsets;
  s.angle_start = 0.0;
  s.angle_step = pi / n_angles;
  s.offset_step = 2.0 * offset_extent / (n_offsets - 1);
  s.offset_start = -offset_extent;
  s.values.resize(static_cast<std::size_t>(n_angles) * n_offsets);
  if (tail.mu <= 1.0) throw NumericError("xray_scalar_forward: integrand tail not integrable");
  parallel_for(n_angles, [&](std::size_t i) {
    double th = s.angle(static_cast<int>(i));
    Vec2 omega = unit_vector(th);
    Vec2 tilde = perp(omega);
    for (int j = 0; j < n_offsets; ++j) {
      Vec2 x = s.offset(j) * tilde;
      TailBound t = tail;
      t.C *= 1.0 + std::abs(s.offset(j));
      auto res = integrate_real_line(
          [&f, &x, &omega](double t1) { return f(x + t1 * omega); }, t, opt);
      s.at(static_cast<int>(i), j) = res.value;
    }
  });
  return s;
}

std::vector<double> derivative_to_xray(const PotentialLineData& data, double noise_tol) {
  const int n = static_cast<int>(data.values.size());
  if (n < 5) throw ConfigError("derivative_to_xray: need at least 5 offsets");
  const double h = data.offset_step;
  std::vector<double> d(n, 0.0);
  double max_mismatch = 0.0, scale = 0.0;
  for (int j = 0; j < n; ++j) {
    int jm = std::max(j - 1, 0), jp = std::min(j + 1, n - 1);
    d[j] = (data.values[jp] - data.values[jm]) / ((jp - jm) * h);
    scale = std::max(scale, std::abs(d[j]));
  }
  // O(h^2) noise estimate: compare the 2nd-order stencil with 4th order
  for (int j = 2; j + 2 < n; ++j) {
    double d4 = (-data.values[j + 2] + 8.0 * data.values[j + 1] - 8.0 * data.values[j - 1] +
                 data.values[j - 2]) /
                (12.0 * h);
    max_mismatch = std::max(max_mismatch, std::abs(d4 - d[j]));
    d[j] = d4;  // keep the sharper stencil in the interior
  }
  if (scale > 0.0 && max_mismatch > noise_tol * scale)
    throw NumericError("derivative_to_xray: offset lattice too coarse for stable differencing");
  return d;
}

SampledField fbp_invert(const Sinogram& s, int n_pixels, double extent) {
  if (n_pixels <= 0) n_pixels = s.n_offsets / 2;
  if (extent <= 0.0)
    extent = std::min(std::abs(s.offset_start), std::abs(s.offset(s.n_offsets - 1))) * 2.0 / std::sqrt(2.0);
  SampledField out = make_field(make_square_grid(2, n_pixels, extent), 1);
  if (s.n_angles < 90)
    out.annotations.push_back("warning: fewer than 90 angles, angular undersampling likely");

  const double dd = s.offset_step;
  int M = 1;
  while (M < 2 * s.n_offsets) M *= 2;
  // discrete band-limited ramp kernel (real space), even, wrapped
  std::vector<cplx> kern(M, 0.0);
  for (int j = 0; j < M; ++j) {
    int jj = std::min(j, M - j);
    if (jj == 0)
      kern[j] = 1.0 / (4.0 * dd * dd);
    else if (jj % 2 == 1)
      kern[j] = -1.0 / (pi * pi * jj * jj * dd * dd);
  }
  std::vector<int> dims{M};
  dft_forward(dims, kern);
  // Hann apodization at the offset Nyquist
  for (int m = 0; m < M; ++m) {
    double sig = dft_freq(m, M, dd);
    double w = 0.5 * (1.0 + std::cos(pi * std::clamp(sig / (pi / dd), -1.0, 1.0)));
    kern[m] *= w;
  }

  std::vector<double> filtered(static_cast<std::size_t>(s.n_angles) * s.n_offsets);
  parallel_for(s.n_angles, [&](std::size_t i) {
    std::vector<cplx> row(M, 0.0);
    for (int j = 0; j < s.n_offsets; ++j) row[j] = s.at(static_cast<int>(i), j);
    dft_forward(dims, row);
    for (int m = 0; m < M; ++m) row[m] *= kern[m];
    dft_inverse(dims, row);
    for (int j = 0; j < s.n_offsets; ++j)
      filtered[i * s.n_offsets + j] = row[j].real() * dd;
  });

  const GridSpec& g = out.grid;
  parallel_for(g.dims[0], [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    for (int j = 0; j < g.dims[1]; ++j) {
      Vec2 x = g.position2(i, j);
      double acc = 0.0;
      for (int ia = 0; ia < s.n_angles; ++ia) {
        double th = s.angle(ia);
        double d = -x[0] * std::sin(th) + x[1] * std::cos(th);  // x . perp(omega)
        double t = (d - s.offset_start) / dd;
        if (t < 0.0 || t > s.n_offsets - 1) continue;
        int j0 = std::min(static_cast<int>(t), s.n_offsets - 2);
        double fr = t - j0;
        acc += (1.0 - fr) * filtered[static_cast<std::size_t>(ia) * s.n_offsets + j0] +
               fr * filtered[static_cast<std::size_t>(ia) * s.n_offsets + j0 + 1];
      }
      out.values[g.flat(i, j)] = acc * pi / s.n_angles;
    }
  });
  return out;
}

SampledField reconstruct_B(const std::vector<PotentialLineData>& dataset, int n_pixels,
                           double extent) {
  if (dataset.empty()) throw ConfigError("reconstruct_B: empty dataset");
  const int n_offsets = static_cast<int>(dataset.front().values.size());
  Sinogram s;
  s.n_angles = static_cast<int>(dataset.size());
  s.n_offsets = n_offsets;
  s.offset_start = dataset.front().offset_start;
  s.offset_step = dataset.front().offset_step;
  s.angle_start = std::atan2(dataset.front().omega[1], dataset.front().omega[0]);
  s.angle_step = s.n_angles > 1
                     ? std::atan2(dataset[1].omega[1], dataset[1].omega[0]) - s.angle_start
                     : pi;
  s.values.resize(static_cast<std::size_t>(s.n_angles) * n_offsets);
  for (int i = 0; i < s.n_angles; ++i) {
    if (static_cast<int>(dataset[i].values.size()) != n_offsets)
      throw ConfigError("reconstruct_B: inconsistent offset lattices");
    // (perp X omega) = -1 under the 2D convention: the derivative gives the
    // X-ray transform of -B, so negate to assemble the sinogram of B
    auto deriv = derivative_to_xray(dataset[i]);
    for (int j = 0; j < n_offsets; ++j) s.at(i, j) = -deriv[j];
  }
  return fbp_invert(s, n_pixels, extent);
}

}  // namespace gaugekit
