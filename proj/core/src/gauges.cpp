#include "gaugekit/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaugekit/fft.hpp"

namespace gaugekit {

std::string to_string(GaugeKind k) {
  switch (k) {
    case GaugeKind::transversal: return "transversal";
    case GaugeKind::griesinger: return "griesinger";
    case GaugeKind::coulomb: return "coulomb";
    case GaugeKind::adaptive: return "adaptive";
    case GaugeKind::external: return "external";
  }
  return "?";
}

Mollifier make_bump_mollifier(int dim, double R_h) {
  if (R_h <= 0.0) throw ConfigError("mollifier radius must be positive");
  Mollifier h;
  h.dim = dim;
  h.R_h = R_h;
  // int (1-|z/R|^2)^4 dz = pi R^2 / 5 (2D), 512 pi R^3 / 3465 (3D)
  h.normalization = dim == 2 ? 5.0 / (pi * R_h * R_h) : 3465.0 / (512.0 * pi * R_h * R_h * R_h);
  return h;
}

namespace {

LineDecay line_decay_for(const FieldModel& B, GaugeKind kind) {
  LineDecay d;
  double flux_term = B.known_flux ? std::abs(*B.known_flux) / (2.0 * pi) : 1.0;
  d.K = 4.0 * (1.0 + flux_term + B.decay.C);
  d.R = std::max(2.0 * B.decay.R_decay, 10.0);
  if (B.support_radius) d.R = std::max(2.0 * *B.support_radius, 10.0);
  switch (kind) {
    case GaugeKind::transversal:
    case GaugeKind::griesinger:
    case GaugeKind::adaptive:
      // transversal structure: omega . A along a line falls off one power
      // faster than |A| ~ r^(1-mu) (or r^-1 when mu > 2)
      d.mu_line = std::min(2.0, B.decay.mu);
      break;
    case GaugeKind::coulomb:
      // far field (nuts): transversal flux term + O(r^-(mu-1)) remainder
      d.mu_line = B.decay.mu > 2.0 ? std::min(2.0, B.decay.mu - 1.0) : B.decay.mu - 1.0;
      break;
    case GaugeKind::external:
      d.mu_line = 2.0;
      break;
  }
  return d;
}

// breakpoints in s where |s x + (1-s) z| crosses radius rj
void jump_breakpoints(const Vec2& x, const Vec2& z, double rj, std::vector<double>& out) {
  Vec2 dxz = x - z;
  double a = dot(dxz, dxz);
  double b = 2.0 * dot(z, dxz);
  double c = dot(z, z) - rj * rj;
  if (a < 1e-30) return;
  double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return;
  double sq = std::sqrt(disc);
  for (double s : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
    if (s > 0.0 && s < 1.0) out.push_back(s);
}

}  // namespace

VectorPotential transversal_gauge(const FieldModel& B, QuadratureOptions opt) {
  VectorPotential A;
  A.dim = B.dim;
  A.kind = GaugeKind::transversal;
  A.label = "transversal(" + B.label + ")";
  A.source_decay = B.decay;
  A.source_flux = B.known_flux;
  A.source_support_radius = B.support_radius;
  A.source_jump_radii = B.jump_radii;
  A.line_decay = line_decay_for(B, GaugeKind::transversal);
  A.quad = opt;

  if (B.dim == 2) {
    auto field = B.B2;
    auto jumps = B.jump_radii;
    A.A2 = [field, jumps, opt](const Vec2& x) -> Vec2 {
      QuadratureOptions o = opt;
      double r = norm(x);
      if (r < 1e-300) return {0.0, 0.0};
      for (double rj : jumps)
        if (rj < r) o.breakpoints.push_back(rj / r);
      // dyadic panels toward s = 0: for large |x| the integrand mass sits
      // at scale s ~ 1/|x|
      for (double s = 0.5; s * r > 0.25; s *= 0.5) o.breakpoints.push_back(s);
      auto w = integrate([&field, &x](double s) { return s * field({s * x[0], s * x[1]}); }, 0.0,
                         1.0, o);
      require_converged(w, "transversal gauge");
      // A = -x X w  with  x X w = (x2 w, -x1 w)
      return {-x[1] * w.value, x[0] * w.value};
    };
    A.A2_base = A.A2;
  } else {
    auto field = B.B3;
    A.A3 = [field, opt](const Vec3& x) -> Vec3 {
      QuadratureOptions o = opt;
      double r = norm(x);
      for (double s = 0.5; s * r > 0.25; s *= 0.5) o.breakpoints.push_back(s);
      Vec3 W{0.0, 0.0, 0.0};
      for (int c = 0; c < 3; ++c) {
        auto rr = integrate([&field, &x, c](double s) {
          return s * field({s * x[0], s * x[1], s * x[2]})[c];
        }, 0.0, 1.0, o);
        require_converged(rr, "transversal gauge");
        W[c] = rr.value;
      }
      Vec3 c3 = cross(x, W);
      return Vec3{-c3[0], -c3[1], -c3[2]};
    };
  }
  return A;
}

VectorPotential griesinger_gauge(const FieldModel& B, const Mollifier& h, QuadratureOptions opt) {
  if (h.dim != B.dim) throw ConfigError("griesinger_gauge: mollifier dimension mismatch");
  VectorPotential A;
  A.dim = B.dim;
  A.kind = GaugeKind::griesinger;
  A.label = "griesinger(" + B.label + ")";
  A.source_decay = B.decay;
  A.source_flux = B.known_flux;
  A.source_support_radius = B.support_radius;
  A.source_jump_radii = B.jump_radii;
  A.line_decay = line_decay_for(B, GaugeKind::griesinger);
  A.quad = opt;

  // outer tensor rule over supp h; inner s-integral adaptive with the known
  // jump crossings as breakpoints and nodes graded toward s = 1 (the
  // averaging ball shrinks like (1-s))
  const bool has_jumps = !B.jump_radii.empty();
  QuadratureOptions inner = opt;
  inner.abs_tol = std::max(opt.abs_tol * 0.05, 1e-12);

  if (B.dim == 2) {
    const int nr = has_jumps ? 14 : 10, na = has_jumps ? 28 : 20;
    std::vector<double> rho, wr;
    gauss_legendre(nr, 0.0, h.R_h, rho, wr);
    auto field = B.B2;
    auto jumps = B.jump_radii;
    auto moll = h;
    A.A2 = [field, jumps, moll, inner, nr, na, rho, wr](const Vec2& x) -> Vec2 {
      Vec2 acc{0.0, 0.0};
      for (int i = 0; i < nr; ++i) {
        double r = rho[i];
        double hw = moll.eval(r * r) * wr[i] * r * (2.0 * pi / na);
        for (int j = 0; j < na; ++j) {
          double th = 2.0 * pi * (j + 0.5) / na;
          Vec2 z{r * std::cos(th), r * std::sin(th)};
          QuadratureOptions o = inner;
          std::vector<double> s_breaks;
          for (double rj : jumps) jump_breakpoints(x, z, rj, s_breaks);
          // jump crossings mapped into the substituted variable
          for (double s : s_breaks) o.breakpoints.push_back(1.0 - std::cbrt(1.0 - s));
          // graded substitution s = 1 - (1-v)^3 resolves the shrinking ball;
          // s ~ 3v near 0, so dyadic panels in v reach the 1/|x| mass scale
          double xr = norm(x);
          for (double v = 0.5; v * xr > 0.1; v *= 0.5) o.breakpoints.push_back(v);
          auto W = integrate(
              [&field, &x, &z](double v) {
                double om = 1.0 - v;
                double s = 1.0 - om * om * om;
                double jac = 3.0 * om * om;
                Vec2 y{s * x[0] + (1.0 - s) * z[0], s * x[1] + (1.0 - s) * z[1]};
                return jac * s * field(y);
              },
              0.0, 1.0, o);
          // -(x-z) X W = (-(x2-z2) W, (x1-z1) W)
          acc[0] -= hw * (x[1] - z[1]) * W.value;
          acc[1] += hw * (x[0] - z[0]) * W.value;
        }
      }
      return acc;
    };
    A.A2_base = A.A2;
  } else {
    const int nr = 6, nmu = 6, na = 10;
    std::vector<double> rho, wr, mu, wmu;
    gauss_legendre(nr, 0.0, h.R_h, rho, wr);
    gauss_legendre(nmu, -1.0, 1.0, mu, wmu);
    auto field = B.B3;
    auto moll = h;
    const int ns = 12;
    std::vector<double> sv, ws;
    gauss_legendre(ns, 0.0, 1.0, sv, ws);
    A.A3 = [field, moll, nr, nmu, na, ns, rho, wr, mu, wmu, sv, ws](const Vec3& x) -> Vec3 {
      Vec3 acc{0.0, 0.0, 0.0};
      for (int i = 0; i < nr; ++i) {
        double r = rho[i];
        double hv = moll.eval(r * r);
        if (hv == 0.0) continue;
        for (int k = 0; k < nmu; ++k) {
          double cphi = mu[k], sphi = std::sqrt(std::max(0.0, 1.0 - cphi * cphi));
          for (int j = 0; j < na; ++j) {
            double th = 2.0 * pi * (j + 0.5) / na;
            Vec3 z{r * sphi * std::cos(th), r * sphi * std::sin(th), r * cphi};
            double w = hv * wr[i] * wmu[k] * (2.0 * pi / na) * r * r;
            Vec3 W{0.0, 0.0, 0.0};
            for (int m = 0; m < ns; ++m) {
              double om = 1.0 - sv[m];
              double s = 1.0 - om * om * om;
              double jac = 3.0 * om * om * ws[m];
              Vec3 y = s * x + (1.0 - s) * z;
              Vec3 b = field(y);
              W = W + (jac * s) * b;
            }
            Vec3 d = x - z;
            acc = acc - w * cross(d, W);
          }
        }
      }
      return acc;
    };
  }
  return A;
}

namespace {

// effective radius outside which |B| is negligible for pointwise quadrature
double effective_radius(const FieldModel& B, double tol) {
  if (B.support_radius) return *B.support_radius;
  TailBound t{B.decay.C, B.decay.mu, B.decay.R_decay};
  return std::min(t.truncation_radius(tol), 1e9);
}

}  // namespace

VectorPotential coulomb_gauge_pointwise(const FieldModel& B, QuadratureOptions opt) {
  VectorPotential A;
  A.dim = B.dim;
  A.kind = GaugeKind::coulomb;
  A.label = "coulomb(" + B.label + ")";
  A.source_decay = B.decay;
  A.source_flux = B.known_flux;
  A.source_support_radius = B.support_radius;
  A.source_jump_radii = B.jump_radii;
  A.line_decay = line_decay_for(B, GaugeKind::coulomb);
  A.medium_range = B.decay.mu > 2.0 || B.support_radius.has_value();
  A.quad = opt;

  if (B.dim == 2) {
    auto field = B.B2;
    auto jumps = B.jump_radii;
    auto decay = B.decay;
    auto support = B.support_radius;
    double Reff = effective_radius(B, std::max(opt.abs_tol, 1e-10));
    A.A2 = [field, jumps, decay, support, Reff, opt](const Vec2& x) -> Vec2 {
      // x-centered polar: dA = -(1/2pi) (-sin phi, cos phi) B(x + rho e(phi))
      const double xr = norm(x);
      QuadratureOptions phi_opt = opt;
      phi_opt.abs_tol = opt.abs_tol * 0.5;
      double a_phi = 0.0, b_phi = 2.0 * pi;
      if (support && xr > *support) {
        // B lives in a disc not containing x: only a wedge of directions hits it
        double w = std::asin(std::min(1.0, *support / xr));
        double phi0 = std::atan2(-x[1], -x[0]);
        a_phi = phi0 - 1.05 * w;
        b_phi = phi0 + 1.05 * w;
      } else if (xr > 2.0 * Reff) {
        // mark the narrow wedge that sees the field, wrapped into [0, 2pi]
        double w = std::asin(std::min(1.0, Reff / xr));
        double phi0 = std::atan2(-x[1], -x[0]);
        for (double off : {-2.0 * w, -w, 0.0, w, 2.0 * w}) {
          double phi = std::fmod(phi0 + off, 2.0 * pi);
          if (phi < 0.0) phi += 2.0 * pi;
          phi_opt.breakpoints.push_back(phi);
        }
      }
      Vec2 acc{0.0, 0.0};
      for (int comp = 0; comp < 2; ++comp) {
        auto outer = integrate(
            [&](double phi) {
              Vec2 e{std::cos(phi), std::sin(phi)};
              QuadratureOptions ro = opt;
              ro.abs_tol = opt.abs_tol * 0.1;
              // radial breakpoints where the ray crosses jump circles
              for (double rj : jumps) {
                double b = 2.0 * dot(x, e);
                double c = dot(x, x) - rj * rj;
                double disc = b * b - 4.0 * c;
                if (disc > 0.0) {
                  double sq = std::sqrt(disc);
                  for (double rr : {(-b - sq) / 2.0, (-b + sq) / 2.0})
                    if (rr > 0.0) ro.breakpoints.push_back(rr);
                }
              }
              double kern = comp == 0 ? -(-std::sin(phi)) : -std::cos(phi);
              kern /= 2.0 * pi;
              auto inner = [&field, &x, &e](double rho) {
                return field({x[0] + rho * e[0], x[1] + rho * e[1]});
              };
              QuadratureResult rint;
              if (support) {
                double rmax = xr + *support + 1e-9;
                rint = integrate(inner, 0.0, rmax, ro);
              } else {
                TailBound tb{decay.C * std::pow(2.0, decay.mu), decay.mu,
                             std::max(2.0 * xr, 2.0 * decay.R_decay)};
                rint = integrate_half_line(inner, 0.0, tb, ro);
              }
              return kern * rint.value;
            },
            a_phi, b_phi, phi_opt);
        require_converged(outer, "coulomb gauge");
        acc[comp] = outer.value;
      }
      return acc;
    };
    A.A2_base = A.A2;
  } else {
    auto field = B.B3;
    auto decay = B.decay;
    double Reff = effective_radius(B, std::max(opt.abs_tol, 1e-10));
    A.A3 = [field, decay, Reff, opt](const Vec3& x) -> Vec3 {
      // x-centered spherical: dA = -(1/4pi) n X B(x + rho n) drho dOmega
      const int nmu = 24, na = 48;
      std::vector<double> mu, wmu;
      gauss_legendre(nmu, -1.0, 1.0, mu, wmu);
      Vec3 acc{0.0, 0.0, 0.0};
      double rmax = norm(x) + Reff;
      for (int k = 0; k < nmu; ++k) {
        double c = mu[k], s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < na; ++j) {
          double th = 2.0 * pi * (j + 0.5) / na;
          Vec3 n{s * std::cos(th), s * std::sin(th), c};
          QuadratureOptions ro = opt;
          ro.abs_tol = opt.abs_tol / (nmu * na);
          Vec3 I{0.0, 0.0, 0.0};
          for (int comp = 0; comp < 3; ++comp) {
            auto rr = integrate(
                [&field, &x, &n, comp](double rho) { return field(x + rho * n)[comp]; }, 0.0,
                rmax, ro);
            I[comp] = rr.value;
          }
          double w = wmu[k] * (2.0 * pi / na) / (4.0 * pi);
          acc = acc - w * cross(n, I);
        }
      }
      return acc;
    };
  }
  return A;
}

SampledField coulomb_gauge(const FieldModel& B, const GridSpec& grid) {
  SampledField Bs = sample_field(B, grid);
  // domain-coverage check: boundary values must be negligible
  double maxb = 0.0, edgeb = 0.0;
  if (B.dim == 2) {
    for (int i = 0; i < grid.dims[0]; ++i)
      for (int j = 0; j < grid.dims[1]; ++j) {
        double v = std::abs(Bs.values[grid.flat(i, j)]);
        maxb = std::max(maxb, v);
        if (i == 0 || j == 0 || i == grid.dims[0] - 1 || j == grid.dims[1] - 1)
          edgeb = std::max(edgeb, v);
      }
  } else {
    for (std::size_t n = 0; n < grid.node_count(); ++n)
      for (int c = 0; c < 3; ++c) maxb = std::max(maxb, std::abs(Bs.at(n, c)));
    for (int i = 0; i < grid.dims[0]; ++i)
      for (int j = 0; j < grid.dims[1]; ++j)
        for (int k = 0; k < grid.dims[2]; ++k)
          if (i == 0 || j == 0 || k == 0 || i == grid.dims[0] - 1 || j == grid.dims[1] - 1 ||
              k == grid.dims[2] - 1)
            for (int c = 0; c < 3; ++c)
              edgeb = std::max(edgeb, std::abs(Bs.at(grid.flat(i, j, k), c)));
  }
  if (maxb > 0.0 && edgeb > 1e-6 * maxb)
    throw ConfigError("coulomb_gauge: grid too small, field not negligible at the boundary");

  if (B.dim == 2) {
    // A1 = -(1/2pi) sum z2/|z|^2 B(x-z), A2 = +(1/2pi) sum z1/|z|^2 B(x-z)
    auto k1 = [](const std::vector<double>& z) {
      double r2 = z[0] * z[0] + z[1] * z[1];
      return r2 == 0.0 ? 0.0 : -z[1] / (2.0 * pi * r2);
    };
    auto k2 = [](const std::vector<double>& z) {
      double r2 = z[0] * z[0] + z[1] * z[1];
      return r2 == 0.0 ? 0.0 : z[0] / (2.0 * pi * r2);
    };
    auto a1 = convolve_lattice(grid.dims, grid.spacing, Bs.values, k1);
    auto a2 = convolve_lattice(grid.dims, grid.spacing, Bs.values, k2);
    SampledField A = make_field(grid, 2);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      A.at(n, 0) = a1[n];
      A.at(n, 1) = a2[n];
    }
    return A;
  }
  // 3D: A = -(1/4pi) (z/|z|^3) X B convolution, componentwise
  auto kmake = [](int c) {
    return [c](const std::vector<double>& z) {
      double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
      if (r2 == 0.0) return 0.0;
      return z[c] / (4.0 * pi * r2 * std::sqrt(r2));
    };
  };
  std::vector<double> bc[3];
  for (int c = 0; c < 3; ++c) {
    bc[c].resize(grid.node_count());
    for (std::size_t n = 0; n < grid.node_count(); ++n) bc[c][n] = Bs.at(n, c);
  }
  // (k X B)_i = eps_ijk k_j B_k ; A = -(conv)
  SampledField A = make_field(grid, 3);
  int eps[3][2][2] = {{{1, 2}, {2, 1}}, {{2, 0}, {0, 2}}, {{0, 1}, {1, 0}}};
  for (int i = 0; i < 3; ++i) {
    auto plus = convolve_lattice(grid.dims, grid.spacing, bc[eps[i][0][1]], kmake(eps[i][0][0]));
    auto minus = convolve_lattice(grid.dims, grid.spacing, bc[eps[i][1][1]], kmake(eps[i][1][0]));
    for (std::size_t n = 0; n < grid.node_count(); ++n) A.at(n, i) = -(plus[n] - minus[n]);
  }
  return A;
}

FarFieldFit coulomb_far_field_check(const FieldModel& B, double radius, int n_points,
                                    QuadratureOptions opt) {
  if (B.dim != 2) throw ConfigError("coulomb_far_field_check: 2D only");
  if (B.decay.mu <= 2.0 && !B.support_radius)
    throw ConfigError("coulomb_far_field_check: requires mu > 2");
  if (radius < 10.0 * B.decay.R_decay && !(B.support_radius && radius >= 10.0 * *B.support_radius))
    throw ConfigError("coulomb_far_field_check: radius below 10 R_decay");
  VectorPotential A = coulomb_gauge_pointwise(B, opt);
  FarFieldFit fit;
  std::vector<Vec2> values(n_points);
  for (int j = 0; j < n_points; ++j) {
    double th = 2.0 * pi * j / n_points;
    Vec2 x{radius * std::cos(th), radius * std::sin(th)};
    values[j] = A.eval2(x);
  }
  // mean of A . tangent times 2 pi r is the fitted flux coefficient
  for (int j = 0; j < n_points; ++j) {
    double th = 2.0 * pi * j / n_points;
    Vec2 tangent{-std::sin(th), std::cos(th)};
    fit.coefficient += dot(values[j], tangent);
  }
  fit.coefficient *= 2.0 * pi * radius / n_points;
  for (int j = 0; j < n_points; ++j) {
    double th = 2.0 * pi * j / n_points;
    Vec2 model = (fit.coefficient / (2.0 * pi * radius)) * Vec2{-std::sin(th), std::cos(th)};
    fit.residual = std::max(fit.residual, norm(values[j] - model));
  }
  fit.budget = B.support_radius
                   ? 1e-6 + 10.0 * opt.abs_tol
                   : 2.0 * B.decay.C * std::pow(radius, -(B.decay.mu - 1.0)) + 10.0 * opt.abs_tol;
  fit.within_budget = fit.residual <= fit.budget;
  return fit;
}

// --- adaptive gauge -----------------------------------------------------------

namespace {

// Piecewise C^2 angle profile g on [0, pi/2], extended by g(pi - t) = g(t)
// and evenness in t.  Segments: g = c0 + c1 * smoothstep.
struct AngleProfile {
  struct Seg {
    double t0, t1, c0, c1;
    double G0;  // integral of g over [0, t0]
  };
  std::vector<Seg> segs;
  double quarter = 0.5 * pi;

  static AngleProfile build(double a1, double tr, double lobe_flat_half) {
    // positive bump: 1 on [0,a1], taper to a1+tr; lobe at pi/4 with flat
    // half-width lobe_flat_half, tapers tr wide; areas cancel by design
    AngleProfile p;
    double a2 = a1 + tr;
    double L0 = 0.25 * pi - lobe_flat_half - tr;
    double L1 = 0.25 * pi - lobe_flat_half;
    double L2 = 0.25 * pi + lobe_flat_half;
    double L3 = 0.25 * pi + lobe_flat_half + tr;
    if (!(a2 < L0 && L3 < 0.5 * pi))
      throw ConfigError("adaptive gauge: sector/transition geometry does not fit");
    p.segs = {{0.0, a1, 1.0, 0.0, 0.0},  {a1, a2, 1.0, -1.0, 0.0}, {a2, L0, 0.0, 0.0, 0.0},
              {L0, L1, 0.0, -1.0, 0.0},  {L1, L2, -1.0, 0.0, 0.0}, {L2, L3, -1.0, 1.0, 0.0},
              {L3, 0.5 * pi, 0.0, 0.0, 0.0}};
    double acc = 0.0;
    for (auto& s : p.segs) {
      s.G0 = acc;
      double w = s.t1 - s.t0;
      acc += s.c0 * w + s.c1 * w * 0.5;  // int smoothstep over full width = w/2
    }
    return p;
  }

  // g on [0, pi/2]
  double g_quarter(double t) const {
    for (const auto& s : segs)
      if (t <= s.t1) {
        double w = s.t1 - s.t0;
        return s.c0 + s.c1 * smoothstep5((t - s.t0) / w);
      }
    return 0.0;
  }
  double gp_quarter(double t) const {
    for (const auto& s : segs)
      if (t <= s.t1) {
        double w = s.t1 - s.t0;
        return s.c1 * smoothstep5_deriv((t - s.t0) / w) / w;
      }
    return 0.0;
  }
  double G_quarter(double t) const {
    for (const auto& s : segs)
      if (t <= s.t1) {
        double w = s.t1 - s.t0;
        return s.G0 + s.c0 * (t - s.t0) + s.c1 * w * smoothstep5_antideriv((t - s.t0) / w);
      }
    return segs.back().G0;
  }

  // full profile: even in t, mirror-symmetric about pi/2, G odd and 2pi-periodic
  double g(double t) const {
    t = std::remainder(t, 2.0 * pi);
    t = std::abs(t);
    if (t > pi) t = 2.0 * pi - t;
    return t <= 0.5 * pi ? g_quarter(t) : g_quarter(pi - t);
  }
  double gp(double t) const {
    double tt = std::remainder(t, 2.0 * pi);
    double sign = 1.0;
    if (tt < 0) {
      tt = -tt;
      sign = -sign;
    }
    if (tt > pi) {
      tt = 2.0 * pi - tt;
      sign = -sign;
    }
    if (tt <= 0.5 * pi) return sign * gp_quarter(tt);
    return -sign * gp_quarter(pi - tt);
  }
  double G(double t) const {
    double tt = std::remainder(t, 2.0 * pi);
    double sign = 1.0;
    if (tt < 0) {
      tt = -tt;
      sign = -1.0;
    }
    double v;
    if (tt <= 0.5 * pi)
      v = G_quarter(tt);
    else if (tt <= pi)
      v = -G_quarter(pi - tt);  // G(pi/2) = 0 and mirror antisymmetry
    else
      v = -G(2.0 * pi - tt);
    return sign * v;
  }
};

}  // namespace

VectorPotential adaptive_gauge(const FieldModel& B, const Vec2& omega,
                               const AdaptiveGaugeParams& params, QuadratureOptions opt) {
  if (B.dim != 2) throw ConfigError("adaptive_gauge: 2D only");
  if (!(B.decay.mu > 2.0) && !B.support_radius)
    throw ConfigError("adaptive_gauge: requires mu > 2");
  double flux = B.known_flux ? *B.known_flux : total_flux(B);

  // base gauge: Coulomb; for the built-ins (radial B) the transversal gauge
  // is the same potential and much cheaper to evaluate
  bool radial = B.label == "gaussian2d" || B.label == "solenoid2d" ||
                B.label == "radial2d_powertail" || B.label == "zero";
  VectorPotential base = radial ? transversal_gauge(B, opt) : coulomb_gauge_pointwise(B, opt);

  if (flux == 0.0) {
    base.kind = GaugeKind::adaptive;
    base.notice = "unnecessary-adaptation: flux vanishes, Coulomb gauge returned unchanged";
    return base;
  }

  double theta0 = std::atan2(omega[1], omega[0]);
  double a1 = params.sector_half_angle_deg * pi / 180.0;
  double tr = params.transition_deg * pi / 180.0;
  AngleProfile prof = AngleProfile::build(a1, tr, 0.5 * (a1 - 0.5 * tr));
  double R0c = params.cutoff_inner, R1c = params.cutoff_outer;
  if (!(R0c > 0.0 && R1c > R0c)) throw ConfigError("adaptive_gauge: bad cutoff radii");
  double fscale = flux / (2.0 * pi);

  auto f_of = [prof, fscale, theta0](double ang) { return fscale * prof.G(ang - theta0); };
  auto fp_of = [prof, fscale, theta0](double ang) { return fscale * prof.g(ang - theta0); };
  auto fpp_of = [prof, fscale, theta0](double ang) { return fscale * prof.gp(ang - theta0); };
  auto chi = [R0c, R1c](double r) { return smoothstep5((r - R0c) / (R1c - R0c)); };
  auto chip = [R0c, R1c](double r) { return smoothstep5_deriv((r - R0c) / (R1c - R0c)) / (R1c - R0c); };
  auto chipp = [R0c, R1c](double r) {
    return smoothstep5_deriv2((r - R0c) / (R1c - R0c)) / ((R1c - R0c) * (R1c - R0c));
  };

  AnalyticLambda lam;
  lam.sign = -1.0;  // A^omega = A_base - grad lambda
  lam.settle_radius = R1c;
  lam.lambda = [f_of, chi](const Vec2& x) {
    double r = norm(x);
    if (r == 0.0) return 0.0;
    return f_of(std::atan2(x[1], x[0])) * chi(r);
  };
  lam.grad = [f_of, fp_of, chi, chip](const Vec2& x) -> Vec2 {
    double r = norm(x);
    if (r < 1e-14) return {0.0, 0.0};
    double ang = std::atan2(x[1], x[0]);
    double c = chi(r), cp = chip(r);
    double f = f_of(ang), fp = fp_of(ang);
    // grad = f' chi grad(theta) + f chi' rhat
    Vec2 gt{-x[1] / (r * r), x[0] / (r * r)};
    Vec2 rh{x[0] / r, x[1] / r};
    return fp * c * gt + f * cp * rh;
  };
  lam.laplacian = [f_of, fpp_of, chi, chip, chipp](const Vec2& x) {
    double r = norm(x);
    if (r < 1e-14) return 0.0;
    double ang = std::atan2(x[1], x[0]);
    return f_of(ang) * (chipp(r) + chip(r) / r) + fpp_of(ang) * chi(r) / (r * r);
  };
  lam.Lambda_of_angle = f_of;

  VectorPotential A = base;
  A.kind = GaugeKind::adaptive;
  A.label = "adaptive(" + B.label + ")";
  A.grad_part = lam;
  auto base_eval = base.A2;
  auto grad = lam.grad;
  A.A2 = [base_eval, grad](const Vec2& x) { return base_eval(x) - grad(x); };
  A.A2_base = base_eval;
  return A;
}

VectorPotential external_potential2d(std::function<Vec2(const Vec2&)> a_eval, LineDecay decay,
                                     std::string label, bool medium_range) {
  VectorPotential v;
  v.dim = 2;
  v.kind = GaugeKind::external;
  v.label = std::move(label);
  v.A2 = std::move(a_eval);
  v.A2_base = v.A2;
  v.line_decay = decay;
  v.medium_range = medium_range;
  v.source_decay = DecayCertificate{decay.K, std::max(decay.mu_line, 1.01), decay.R};
  return v;
}

// --- gauge functions ----------------------------------------------------------

GaugeFunction extract_lambda(const VectorPotential& A, const VectorPotential& Aprime,
                             QuadratureOptions opt, double loop_tol) {
  if (A.dim != 2 || Aprime.dim != 2) throw ConfigError("extract_lambda: 2D only");
  auto a = A.A2;
  auto ap = Aprime.A2;
  auto diff = [a, ap](const Vec2& x) { return ap(x) - a(x); };

  // gauge-pair precondition: vanishing loop integrals of A' - A
  for (double r : {0.8, 1.9, 3.7, 6.5}) {
    auto loop = integrate(
        [&diff, r](double th) {
          Vec2 x{r * std::cos(th), r * std::sin(th)};
          Vec2 t{-r * std::sin(th), r * std::cos(th)};
          return dot(diff(x), t);
        },
        0.0, 2.0 * pi, opt);
    if (std::abs(loop.value) > loop_tol * (1.0 + 2.0 * pi * r))
      throw ConfigError("extract_lambda: loop integral of A' - A is nonzero, not a gauge pair");
  }

  GaugeFunction g;
  std::vector<double> jumps = A.source_jump_radii;
  for (double rj : Aprime.source_jump_radii) jumps.push_back(rj);
  g.lambda = [diff, opt, jumps](const Vec2& x) {
    double r = norm(x);
    if (r < 1e-300) return 0.0;
    QuadratureOptions o = opt;
    for (double rj : jumps)
      if (rj < r) o.breakpoints.push_back(rj / r);
    for (double s = 0.5; s * r > 0.25; s *= 0.5) o.breakpoints.push_back(s);
    auto res = integrate([&diff, &x](double s) { return dot(x, diff({s * x[0], s * x[1]})); },
                         0.0, 1.0, o);
    return res.value;
  };
  double R0 = 20.0;
  R0 = std::max(R0, 10.0 * A.source_decay.R_decay);
  R0 = std::max(R0, 10.0 * Aprime.source_decay.R_decay);
  // keep the extrapolation ladder affordable for slowly decaying sources
  g.R0 = std::min(R0, 200.0);
  return g;
}

double asymptotic_Lambda(const GaugeFunction& lam, const Vec2& omega, double tol) {
  if (lam.Lambda_analytic) return (*lam.Lambda_analytic)(std::atan2(omega[1], omega[0]));
  double R = lam.R0;
  double v1 = lam.lambda(R * omega);
  double v2 = lam.lambda(2.0 * R * omega);
  double v3 = lam.lambda(4.0 * R * omega);
  for (int refine = 0; refine < 2; ++refine) {
    double d1 = v2 - v1, d2 = v3 - v2;
    if (std::abs(d2) <= 0.1 * tol) return v3;
    if (std::abs(d2) >= 0.9 * std::abs(d1))
      throw NumericError(
          "asymptotic_Lambda: no-limit, differences do not decrease (gauge pair not "
          "medium-range)");
    double q = d2 / d1;
    double extrap = v3 + d2 * q / (1.0 - q);
    if (std::abs(d2 * q / (1.0 - q)) <= tol) return extrap;
    // one more doubling
    v1 = v2;
    v2 = v3;
    R *= 2.0;
    v3 = lam.lambda(4.0 * R * omega);
  }
  double d1 = v2 - v1, d2 = v3 - v2;
  if (std::abs(d2) >= 0.9 * std::abs(d1))
    throw NumericError("asymptotic_Lambda: no-limit, differences do not decrease");
  double q = d2 / d1;
  return v3 + d2 * q / (1.0 - q);
}

LongitudinalProfile longitudinal_profile(const VectorPotential& A,
                                         const std::vector<Vec2>& directions,
                                         const std::vector<double>& radii) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw ConfigError("longitudinal_profile: radii must increase");
  LongitudinalProfile out;
  out.directions = directions;
  out.radii = radii;
  out.longitudinal.resize(directions.size());
  out.magnitude.resize(directions.size());
  double long_exp = std::numeric_limits<double>::infinity();
  double mag_exp = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < directions.size(); ++d) {
    const Vec2 om = directions[d];
    for (double r : radii) {
      Vec2 a = A.eval2(r * om);
      out.longitudinal[d].push_back(std::abs(dot(a, om)));
      out.magnitude[d].push_back(norm(a));
    }
    auto fit = [&](const std::vector<double>& vals) {
      double peak = 0.0;
      for (double v : vals) peak = std::max(peak, v);
      if (peak < 1e-13) return std::numeric_limits<double>::infinity();
      std::vector<std::pair<double, double>> pts;
      for (std::size_t k = 0; k < vals.size(); ++k)
        pts.emplace_back(radii[k], std::max(vals[k], 1e-300));
      return fit_decay_exponent(pts);
    };
    long_exp = std::min(long_exp, fit(out.longitudinal[d]));
    mag_exp = std::min(mag_exp, fit(out.magnitude[d]));
  }
  out.longitudinal_exponent = long_exp;
  out.magnitude_exponent = mag_exp;
  out.medium_range = long_exp > 1.0 && mag_exp > 0.5;
  return out;
}

SampledField sample_potential(const VectorPotential& A, const GridSpec& grid) {
  if (A.dim == 2) {
    if (grid.dim() != 2) throw ConfigError("sample_potential: dimension mismatch");
    SampledField out = make_field(grid, 2);
    parallel_for(grid.dims[0], [&](std::size_t ii) {
      int i = static_cast<int>(ii);
      for (int j = 0; j < grid.dims[1]; ++j) {
        Vec2 a = A.eval2(grid.position2(i, j));
        std::size_t n = grid.flat(i, j);
        out.at(n, 0) = a[0];
        out.at(n, 1) = a[1];
      }
    });
    return out;
  }
  if (grid.dim() != 3) throw ConfigError("sample_potential: dimension mismatch");
  SampledField out = make_field(grid, 3);
  parallel_for(grid.dims[0], [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    for (int j = 0; j < grid.dims[1]; ++j)
      for (int k = 0; k < grid.dims[2]; ++k) {
        Vec3 a = A.eval3(grid.position3(i, j, k));
        std::size_t n = grid.flat(i, j, k);
        for (int c = 0; c < 3; ++c) out.at(n, c) = a[c];
      }
  });
  return out;
}

double curl_mismatch_max(const SampledField& A, const FieldModel& B, double mask_width) {
  const GridSpec& g = A.grid;
  double err = 0.0;
  if (B.dim == 2) {
    if (A.components != 2) throw ConfigError("curl_mismatch_max: need 2 components");
    for (int i = 1; i + 1 < g.dims[0]; ++i)
      for (int j = 1; j + 1 < g.dims[1]; ++j) {
        Vec2 x = g.position2(i, j);
        bool masked = false;
        for (double rj : B.jump_radii)
          if (std::abs(norm(x) - rj) < mask_width) masked = true;
        if (masked) continue;
        double curl = (A.at(g.flat(i + 1, j), 1) - A.at(g.flat(i - 1, j), 1)) / (2.0 * g.spacing[0]) -
                      (A.at(g.flat(i, j + 1), 0) - A.at(g.flat(i, j - 1), 0)) / (2.0 * g.spacing[1]);
        err = std::max(err, std::abs(curl - B.eval2(x)));
      }
    return err;
  }
  if (A.components != 3) throw ConfigError("curl_mismatch_max: need 3 components");
  for (int i = 1; i + 1 < g.dims[0]; ++i)
    for (int j = 1; j + 1 < g.dims[1]; ++j)
      for (int k = 1; k + 1 < g.dims[2]; ++k) {
        Vec3 x = g.position3(i, j, k);
        auto d = [&](int comp, int axis) {
          std::size_t np, nm;
          if (axis == 0) {
            np = g.flat(i + 1, j, k);
            nm = g.flat(i - 1, j, k);
          } else if (axis == 1) {
            np = g.flat(i, j + 1, k);
            nm = g.flat(i, j - 1, k);
          } else {
            np = g.flat(i, j, k + 1);
            nm = g.flat(i, j, k - 1);
          }
          return (A.at(np, comp) - A.at(nm, comp)) / (2.0 * g.spacing[axis]);
        };
        Vec3 curl{d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
        Vec3 b = B.eval3(x);
        for (int c = 0; c < 3; ++c) err = std::max(err, std::abs(curl[c] - b[c]));
      }
  return err;
}

double divergence_max(const SampledField& A) {
  const GridSpec& g = A.grid;
  double err = 0.0;
  if (g.dim() == 2) {
    for (int i = 1; i + 1 < g.dims[0]; ++i)
      for (int j = 1; j + 1 < g.dims[1]; ++j) {
        double div =
            (A.at(g.flat(i + 1, j), 0) - A.at(g.flat(i - 1, j), 0)) / (2.0 * g.spacing[0]) +
            (A.at(g.flat(i, j + 1), 1) - A.at(g.flat(i, j - 1), 1)) / (2.0 * g.spacing[1]);
        err = std::max(err, std::abs(div));
      }
    return err;
  }
  for (int i = 1; i + 1 < g.dims[0]; ++i)
    for (int j = 1; j + 1 < g.dims[1]; ++j)
      for (int k = 1; k + 1 < g.dims[2]; ++k) {
        double div =
            (A.at(g.flat(i + 1, j, k), 0) - A.at(g.flat(i - 1, j, k), 0)) / (2.0 * g.spacing[0]) +
            (A.at(g.flat(i, j + 1, k), 1) - A.at(g.flat(i, j - 1, k), 1)) / (2.0 * g.spacing[1]) +
            (A.at(g.flat(i, j, k + 1), 2) - A.at(g.flat(i, j, k - 1), 2)) / (2.0 * g.spacing[2]);
        err = std::max(err, std::abs(div));
      }
  return err;
}

}  // namespace gaugekit
