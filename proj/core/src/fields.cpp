#include "gaugekit/fields.hpp"

#include <algorithm>
#include <cmath>

namespace gaugekit {
namespace {

FieldModel zero_field() {
  FieldModel f;
  f.dim = 2;
  f.label = "zero";
  f.B2 = [](const Vec2&) { return 0.0; };
  f.gradB2 = [](const Vec2&) { return Vec2{0.0, 0.0}; };
  f.decay = {0.0, 10.0, 1.0};
  f.known_flux = 0.0;
  f.support_radius = 1.0;
  return f;
}

FieldModel gaussian2d(double amplitude, double width) {
  if (width <= 0.0) throw ConfigError("gaussian2d: width must be positive");
  FieldModel f;
  f.dim = 2;
  f.label = "gaussian2d";
  const double w2 = width * width;
  f.B2 = [amplitude, w2](const Vec2& x) { return amplitude * std::exp(-dot(x, x) / w2); };
  f.gradB2 = [amplitude, w2](const Vec2& x) {
    double b = amplitude * std::exp(-dot(x, x) / w2);
    return Vec2{-2.0 * x[0] / w2 * b, -2.0 * x[1] / w2 * b};
  };
  // superpolynomial decay; power-law certificate chosen so that
  // r^mu exp(-r^2/w^2) is decreasing past R_decay (max sits at r = w sqrt(mu/2))
  f.decay.mu = 6.0;
  f.decay.R_decay = std::max(4.0 * width, 4.0);
  double r = f.decay.R_decay;
  f.decay.C = std::abs(amplitude) * std::pow(r, f.decay.mu) * std::exp(-r * r / w2) * 1.01 + 1e-300;
  f.integrability_p = 3.0;
  f.known_flux = amplitude * pi * w2;
  return f;
}

FieldModel solenoid2d(double radius) {
  if (radius <= 0.0) throw ConfigError("solenoid2d: radius must be positive");
  FieldModel f;
  f.dim = 2;
  f.label = "solenoid2d";
  const double r2 = radius * radius;
  f.B2 = [r2](const Vec2& x) { return dot(x, x) <= r2 ? 1.0 : 0.0; };
  f.decay = {0.0, 40.0, radius * 1.000001};
  f.integrability_p = 3.0;
  f.known_flux = pi * r2;
  f.support_radius = radius;
  f.jump_radii = {radius};
  return f;
}

FieldModel radial_powertail(double mu) {
  if (mu <= 1.5) throw ConfigError("radial2d_powertail: mu must exceed 3/2");
  FieldModel f;
  f.dim = 2;
  f.label = "radial2d_powertail";
  f.B2 = [mu](const Vec2& x) { return std::pow(1.0 + dot(x, x), -0.5 * mu); };
  f.gradB2 = [mu](const Vec2& x) {
    double s = -0.5 * mu * std::pow(1.0 + dot(x, x), -0.5 * mu - 1.0) * 2.0;
    return Vec2{s * x[0], s * x[1]};
  };
  // (1+r^2)^(-mu/2) <= r^-mu for all r
  f.decay = {1.0, mu, 1.0};
  f.integrability_p = 3.0;
  if (mu > 2.0) f.known_flux = pi / (0.5 * mu - 1.0);  // int 2 pi r (1+r^2)^(-mu/2) dr
  return f;
}

// Prop. PC item 3 counterexample: B = curl A for the explicit Coulomb-gauge
// A with non-short-range longitudinal part.  mu = 2 exactly.
FieldModel pc_counterexample2d() {
  FieldModel f;
  f.dim = 2;
  f.label = "pc_counterexample2d";
  f.B2 = [](const Vec2& x) {
    double r2 = dot(x, x);
    double den = 1.0 + r2;
    return 4.0 * x[0] * x[1] * (r2 + 3.0) / (den * den * den);
  };
  f.gradB2 = [](const Vec2& x) {
    // B = 4 x1 x2 q(r^2), q(u) = (u+3)/(u+1)^3, q'(u) = -2(u+4)/(u+1)^4
    double u = dot(x, x);
    double den = 1.0 + u;
    double q = (u + 3.0) / (den * den * den);
    double qp = -2.0 * (u + 4.0) / (den * den * den * den);
    return Vec2{4.0 * x[1] * q + 8.0 * x[0] * x[0] * x[1] * qp,
                4.0 * x[0] * q + 8.0 * x[0] * x[1] * x[1] * qp};
  };
  f.decay = {2.5, 2.0, 2.0};
  f.integrability_p = 3.0;
  f.known_flux = 0.0;  // odd in each coordinate
  return f;
}

FieldModel gaussian3d_loop(double amplitude) {
  // B = curl (0,0,a e^{-|x|^2}) = a e^{-|x|^2} (-2 x2, 2 x1, 0); div B = 0
  FieldModel f;
  f.dim = 3;
  f.label = "gaussian3d_loop";
  f.B3 = [amplitude](const Vec3& x) {
    double g = amplitude * std::exp(-dot(x, x));
    return Vec3{-2.0 * x[1] * g, 2.0 * x[0] * g, 0.0};
  };
  f.decay.mu = 7.0;
  f.decay.R_decay = 4.0;
  double r = f.decay.R_decay;
  f.decay.C =
      2.0 * std::abs(amplitude) * std::pow(r, f.decay.mu + 1.0) * std::exp(-r * r) * 1.01 + 1e-300;
  f.integrability_p = 4.0;
  return f;
}

}  // namespace

FieldModel make_test_field(const std::string& name, const std::vector<double>& params) {
  auto arg = [&params](std::size_t i, double def) { return i < params.size() ? params[i] : def; };
  if (name == "zero") return zero_field();
  if (name == "gaussian2d") return gaussian2d(arg(0, 1.0), arg(1, 1.0));
  if (name == "solenoid2d") return solenoid2d(arg(0, 1.0));
  if (name == "radial2d_powertail") return radial_powertail(arg(0, 2.5));
  if (name == "pc_counterexample2d") return pc_counterexample2d();
  if (name == "gaussian3d_loop") return gaussian3d_loop(arg(0, 1.0));
  throw ConfigError("unknown test field '" + name + "'");
}

ScalarPotentialModel make_gaussian_potential(double amplitude, double width, const Vec2& center) {
  ScalarPotentialModel m;
  m.dim = 2;
  m.label = "gaussian_potential";
  const double w2 = width * width;
  m.V2 = [amplitude, w2, center](const Vec2& x) {
    Vec2 d = x - center;
    return amplitude * std::exp(-dot(d, d) / w2);
  };
  m.decay = {std::abs(amplitude) * 1e3, 3.0, 8.0 * width + norm(center)};
  return m;
}

namespace {

GridSpec offset_from_singularities(GridSpec grid, const std::vector<Vec2>& sing) {
  if (sing.empty() || grid.dim() != 2) return grid;
  for (int attempt = 0; attempt < 2; ++attempt) {
    bool hit = false;
    for (const Vec2& s : sing) {
      for (int a = 0; a < 2; ++a) {
        double t = (s[a] - grid.position(a, 0)) / grid.spacing[a];
        if (std::abs(t - std::round(t)) < 1e-12 && std::round(t) >= 0 &&
            std::round(t) < grid.dims[a])
          hit = true;
      }
    }
    if (!hit) return grid;
    for (int a = 0; a < 2; ++a) grid.origin[a] += 0.5 * grid.spacing[a];
  }
  return grid;
}

}  // namespace

SampledField sample_field(const FieldModel& model, GridSpec grid) {
  grid = offset_from_singularities(grid, model.singular_points);
  if (model.dim == 2) {
    if (grid.dim() != 2) throw ConfigError("sample_field: 2D model needs a 2D grid");
    SampledField out = make_field(grid, 1);
    parallel_for(grid.dims[0], [&](std::size_t i0) {
      for (int i1 = 0; i1 < grid.dims[1]; ++i1)
        out.values[grid.flat(static_cast<int>(i0), i1)] =
            model.eval2(grid.position2(static_cast<int>(i0), i1));
    });
    return out;
  }
  if (grid.dim() != 3) throw ConfigError("sample_field: 3D model needs a 3D grid");
  SampledField out = make_field(grid, 3);
  parallel_for(grid.dims[0], [&](std::size_t i0) {
    for (int i1 = 0; i1 < grid.dims[1]; ++i1)
      for (int i2 = 0; i2 < grid.dims[2]; ++i2) {
        Vec3 b = model.eval3(grid.position3(static_cast<int>(i0), i1, i2));
        std::size_t n = grid.flat(static_cast<int>(i0), i1, i2);
        for (int c = 0; c < 3; ++c) out.at(n, c) = b[c];
      }
  });
  return out;
}

SampledField sample_field(const ScalarPotentialModel& model, GridSpec grid) {
  grid = offset_from_singularities(grid, model.singular_points);
  if (model.dim == 2) {
    SampledField out = make_field(grid, 1);
    for (int i0 = 0; i0 < grid.dims[0]; ++i0)
      for (int i1 = 0; i1 < grid.dims[1]; ++i1)
        out.values[grid.flat(i0, i1)] = model.V2(grid.position2(i0, i1));
    return out;
  }
  SampledField out = make_field(grid, 1);
  for (int i0 = 0; i0 < grid.dims[0]; ++i0)
    for (int i1 = 0; i1 < grid.dims[1]; ++i1)
      for (int i2 = 0; i2 < grid.dims[2]; ++i2)
        out.values[grid.flat(i0, i1, i2)] = model.V3(grid.position3(i0, i1, i2));
  return out;
}

namespace {

double field_magnitude(const FieldModel& m, double r, double theta, double phi = 0.0) {
  if (m.dim == 2) return std::abs(m.eval2({r * std::cos(theta), r * std::sin(theta)}));
  double st = std::sin(phi);
  return norm(m.eval3({r * std::cos(theta) * st, r * std::sin(theta) * st, r * std::cos(phi)}));
}

}  // namespace

DecayProfile decay_norm(const FieldModel& model, double R, double p, double mu,
                        const QuadratureOptions& opt) {
  if (R <= 0.0) throw ConfigError("decay_norm: R must be positive");
  if (p <= model.dim) throw ConfigError("decay_norm: requires p > dimension");
  if (mu <= 1.5) throw ConfigError("decay_norm: requires mu > 3/2");
  DecayProfile prof;
  prof.R = R;
  prof.p = p;
  prof.mu = mu;

  QuadratureOptions radial_opt = opt;
  for (double jr : model.jump_radii) radial_opt.breakpoints.push_back(jr);
  if (model.support_radius) radial_opt.breakpoints.push_back(*model.support_radius);

  // local L^p part by nested polar quadrature
  QuadratureResult lp;
  if (model.dim == 2) {
    lp = integrate(
        [&](double r) {
          auto ang = integrate(
              [&](double th) { return std::pow(field_magnitude(model, r, th), p); }, 0.0,
              2.0 * pi, opt);
          return r * ang.value;
        },
        0.0, R, radial_opt);
  } else {
    lp = integrate(
        [&](double r) {
          auto ang = integrate(
              [&](double phi) {
                auto azi = integrate(
                    [&](double th) { return std::pow(field_magnitude(model, r, th, phi), p); },
                    0.0, 2.0 * pi, opt);
                return std::sin(phi) * azi.value;
              },
              0.0, pi, opt);
          return r * r * ang.value;
        },
        0.0, R, radial_opt);
  }
  if (!std::isfinite(lp.value))
    throw NumericError("decay_norm: local L^p integral is not finite (decay-class violation)");
  prof.lp_part = std::pow(lp.value, 1.0 / p);

  // weighted sup part: radial sampling from R out to the radius where the
  // declared certificate bounds the weighted tail by what was already seen
  double sup = 0.0;
  const double R_cert = std::max(model.decay.R_decay, R);
  const int n_dirs = 32, n_radii = 200;
  for (int k = 0; k <= n_radii; ++k) {
    double r = R * std::pow(R_cert * 4.0 / R, k / static_cast<double>(n_radii));
    for (int j = 0; j < n_dirs; ++j) {
      double th = 2.0 * pi * (j + 0.13) / n_dirs;
      if (model.dim == 2)
        sup = std::max(sup, std::pow(r, mu) * field_magnitude(model, r, th));
      else
        for (int l = 1; l < 8; ++l)
          sup = std::max(sup, std::pow(r, mu) * field_magnitude(model, r, th, pi * l / 8.0));
    }
  }
  // beyond 4 R_cert the certificate gives r^mu |B| <= C r^(mu - mu_decl)
  if (model.decay.C > 0.0 && mu > model.decay.mu && !model.support_radius)
    throw NumericError("decay_norm: weighted sup not certified finite for mu > declared decay");
  prof.sup_part = sup;
  prof.norm_value = prof.lp_part + prof.sup_part;
  return prof;
}

double divergence_residual(const FieldModel& model, const GridSpec& grid) {
  if (model.dim != 3) throw ConfigError("divergence_residual: requires a 3D field");
  if (grid.dim() != 3) throw ConfigError("divergence_residual: requires a 3D grid");
  SampledField s = sample_field(model, grid);
  double res = 0.0;
  const auto& g = s.grid;
  for (int i = 1; i + 1 < g.dims[0]; ++i)
    for (int j = 1; j + 1 < g.dims[1]; ++j)
      for (int k = 1; k + 1 < g.dims[2]; ++k) {
        double div = (s.at(g.flat(i + 1, j, k), 0) - s.at(g.flat(i - 1, j, k), 0)) /
                         (2.0 * g.spacing[0]) +
                     (s.at(g.flat(i, j + 1, k), 1) - s.at(g.flat(i, j - 1, k), 1)) /
                         (2.0 * g.spacing[1]) +
                     (s.at(g.flat(i, j, k + 1), 2) - s.at(g.flat(i, j, k - 1), 2)) /
                         (2.0 * g.spacing[2]);
        res = std::max(res, std::abs(div));
      }
  return res;
}

double total_flux(const FieldModel& model, const QuadratureOptions& opt) {
  if (model.dim != 2) throw ConfigError("total_flux: 2D fields only");
  if (model.decay.mu <= 2.0 && !model.support_radius)
    throw ConfigError("total_flux: flux not guaranteed finite for mu <= 2");
  QuadratureOptions radial = opt;
  for (double jr : model.jump_radii) radial.breakpoints.push_back(jr);
  auto ring = [&](double r) {
    auto ang = integrate([&](double th) { return model.eval2({r * std::cos(th), r * std::sin(th)}); },
                         0.0, 2.0 * pi, opt);
    return r * ang.value;
  };
  if (model.support_radius) {
    auto res = integrate(ring, 0.0, *model.support_radius * 1.0000001, radial);
    return res.value;
  }
  // tail of the flux integrand: 2 pi r C r^-mu
  TailBound tail{2.0 * pi * model.decay.C, model.decay.mu - 1.0, model.decay.R_decay};
  auto res = integrate_half_line(ring, 0.0, tail, radial);
  return res.value;
}

double fit_decay_exponent(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 8) throw ConfigError("fit_decay_exponent: need at least 8 samples");
  double prev_r = 0.0;
  for (const auto& [r, m] : samples) {
    if (r <= prev_r) throw ConfigError("fit_decay_exponent: radii must be strictly increasing");
    if (m <= 0.0) throw ConfigError("fit_decay_exponent: magnitudes must be positive");
    prev_r = r;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(samples.size());
  for (const auto& [r, m] : samples) {
    double x = std::log(r), y = std::log(m);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

bool check_decay_certificate(const FieldModel& model, int n_radii, int n_dirs, double slack) {
  const auto& d = model.decay;
  for (int k = 0; k < n_radii; ++k) {
    double r = d.R_decay * std::pow(100.0, k / static_cast<double>(n_radii - 1));
    for (int j = 0; j < n_dirs; ++j) {
      double th = 2.0 * pi * (j + 0.37) / n_dirs;
      double mag = model.dim == 2 ? field_magnitude(model, r, th)
                                  : field_magnitude(model, r, th, pi * ((j % 7) + 0.5) / 7.0);
      if (mag * std::pow(r, d.mu) > d.C * slack + 1e-14) return false;
    }
  }
  return true;
}

}  // namespace gaugekit
