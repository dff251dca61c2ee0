#include <cmath>

#include "doctest.h"
#include "gaugekit/fields.hpp"

using namespace gaugekit;

TEST_CASE("catalog basics") {
  FieldModel zero = make_test_field("zero");
  CHECK(zero.eval2({1.3, -0.4}) == 0.0);
  CHECK(*zero.known_flux == 0.0);

  FieldModel g = make_test_field("gaussian2d", {1.0, 1.0});
  CHECK(g.eval2({0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(*g.known_flux == doctest::Approx(pi).epsilon(1e-12));

  FieldModel sol = make_test_field("solenoid2d", {1.0});
  CHECK(sol.eval2({0.5, 0.0}) == 1.0);
  CHECK(sol.eval2({1.5, 0.0}) == 0.0);
  CHECK(*sol.known_flux == doctest::Approx(pi));

  CHECK_THROWS_AS(make_test_field("does_not_exist"), ConfigError);
}

TEST_CASE("sample_field matches direct evaluation") {
  FieldModel g = make_test_field("gaussian2d");
  GridSpec grid = make_square_grid(2, 3, 2.0);  // 3x3, spacing 1, origin-centered
  SampledField s = sample_field(g, grid);
  CHECK(s.values[grid.flat(1, 1)] == doctest::Approx(1.0));
  CHECK(s.values[grid.flat(0, 0)] == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  FieldModel zero = make_test_field("zero");
  SampledField z = sample_field(zero, grid);
  for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("decay_norm of the Gaussian against the quadrature oracle") {
  FieldModel g = make_test_field("gaussian2d");
  DecayProfile p = decay_norm(g, 1.0, 3.0, 2.0);
  // oracle: (int_{|x|<=1} e^{-3 r^2} dx)^{1/3} = (pi/3 (1 - e^{-3}))^{1/3}
  double lp_oracle = std::pow(pi / 3.0 * (1.0 - std::exp(-3.0)), 1.0 / 3.0);
  CHECK(p.lp_part == doctest::Approx(lp_oracle).epsilon(1e-6));
  // sup part: max_{r>=1} r^2 e^{-r^2} is attained at r = 1 (calculus oracle)
  CHECK(p.sup_part == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(p.norm_value == doctest::Approx(p.lp_part + p.sup_part));
}

TEST_CASE("decay_norm trivial and compact cases") {
  DecayProfile z = decay_norm(make_test_field("zero"), 1.0, 3.0, 2.0);
  CHECK(z.norm_value == doctest::Approx(0.0));

  DecayProfile s = decay_norm(make_test_field("solenoid2d"), 2.0, 3.0, 2.0);
  CHECK(s.sup_part == doctest::Approx(0.0));  // field vanishes beyond R = 2

  CHECK_THROWS_AS(decay_norm(make_test_field("gaussian2d"), 1.0, 1.5, 2.0), ConfigError);
}

TEST_CASE("decay_norm sup part is monotone in mu for R >= 1") {
  FieldModel g = make_test_field("gaussian2d");
  double prev = 0.0;
  for (double mu : {1.6, 2.0, 2.5, 3.0}) {
    DecayProfile p = decay_norm(g, 1.0, 3.0, mu);
    CHECK(p.sup_part >= prev - 1e-12);
    prev = p.sup_part;
  }
}

TEST_CASE("divergence_residual: zero, curl field convergence, violation") {
  FieldModel loop = make_test_field("gaussian3d_loop");
  GridSpec coarse = make_square_grid(3, 33, 8.0);  // h = 0.25
  GridSpec fine = make_square_grid(3, 65, 8.0);    // h = 0.125
  double rc = divergence_residual(loop, coarse);
  double rf = divergence_residual(loop, fine);
  CHECK(rf < 0.01);
  CHECK(rc / rf >= 3.5);  // order h^2

  FieldModel bad;
  bad.dim = 3;
  bad.label = "div-violation";
  bad.B3 = [](const Vec3& x) { return Vec3{x[0], 0.0, 0.0}; };
  double rb = divergence_residual(bad, coarse);
  CHECK(rb == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(divergence_residual(make_test_field("gaussian2d"), coarse), ConfigError);
}

TEST_CASE("total_flux oracle values") {
  CHECK(total_flux(make_test_field("zero")) == doctest::Approx(0.0));
  CHECK(total_flux(make_test_field("gaussian2d")) == doctest::Approx(pi).epsilon(1e-6));
  QuadratureOptions relaxed;
  relaxed.abs_tol = 1e-6;
  CHECK(total_flux(make_test_field("solenoid2d"), relaxed) == doctest::Approx(pi).epsilon(1e-4));
  // mu <= 2 and no compact support: flux not guaranteed finite
  CHECK_THROWS_AS(total_flux(make_test_field("radial2d_powertail", {1.75})), ConfigError);
  CHECK(total_flux(make_test_field("radial2d_powertail", {2.5})) ==
        doctest::Approx(pi / 0.25).epsilon(1e-5));
}

TEST_CASE("flux of a curl-of-compact-generator field vanishes") {
  // B = -Laplacian(g) for a compactly supported bump g: flux is exactly 0
  FieldModel b;
  b.dim = 2;
  b.label = "laplacian-bump";
  b.B2 = [](const Vec2& x) {
    // g = (1 - r^2/4)^4 on r <= 2;  B = -lap g by 5-point stencil at (|x|, 0)
    double r2 = dot(x, x);
    if (r2 >= 4.0) return 0.0;
    const double h = 1e-5;
    auto g = [](double rr2) {
      double u = 1.0 - rr2 / 4.0;
      return u <= 0.0 ? 0.0 : u * u * u * u;
    };
    double x1 = std::sqrt(r2);
    auto gx = [&](double xx, double yy) { return g(xx * xx + yy * yy); };
    double lap =
        (gx(x1 + h, 0) + gx(x1 - h, 0) + gx(x1, h) + gx(x1, -h) - 4.0 * gx(x1, 0)) / (h * h);
    return -lap;
  };
  b.decay = {0.0, 40.0, 2.0001};
  b.support_radius = 2.0;
  double flux = total_flux(b, {1e-7});
  CHECK(std::abs(flux) < 1e-4);
}

TEST_CASE("fit_decay_exponent") {
  std::vector<std::pair<double, double>> pl;
  for (int i = 0; i < 12; ++i) {
    double r = 10.0 + 8.0 * i;
    pl.emplace_back(r, 1.0 / r);
  }
  CHECK(fit_decay_exponent(pl) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> perturbed;
  for (int i = 0; i < 16; ++i) {
    double r = 10.0 + 6.0 * i;
    perturbed.emplace_back(r, std::pow(r, -0.75) * (1.0 + 0.01 * std::sin(r)));
  }
  CHECK(fit_decay_exponent(perturbed) == doctest::Approx(0.75).epsilon(0.03));

  std::vector<std::pair<double, double>> flat;
  for (int i = 0; i < 8; ++i) flat.emplace_back(1.0 + i, 3.0);
  CHECK(fit_decay_exponent(flat) == doctest::Approx(0.0));

  std::vector<std::pair<double, double>> bad{{1, 1}, {2, -1}, {3, 1}, {4, 1},
                                             {5, 1}, {6, 1},  {7, 1}, {8, 1}};
  CHECK_THROWS_AS(fit_decay_exponent(bad), ConfigError);
  std::vector<std::pair<double, double>> few{{1, 1}, {2, 1}};
  CHECK_THROWS_AS(fit_decay_exponent(few), ConfigError);
}

TEST_CASE("declared decay certificates hold on a sampling grid") {
  for (const char* name : {"gaussian2d", "solenoid2d", "pc_counterexample2d"}) {
    FieldModel f = make_test_field(name);
    CHECK_MESSAGE(check_decay_certificate(f), name);
  }
  FieldModel p175 = make_test_field("radial2d_powertail", {1.75});
  FieldModel p25 = make_test_field("radial2d_powertail", {2.5});
  CHECK(check_decay_certificate(p175));
  CHECK(check_decay_certificate(p25));
  FieldModel loop = make_test_field("gaussian3d_loop");
  CHECK(check_decay_certificate(loop));
}

TEST_CASE("pc_counterexample2d curl identity against finite differences") {
  // B must equal curl of the explicit potential A1 = x1(x1^2-x2^2+1)/(r^2+1)^2,
  // A2 = x2(x1^2-x2^2-1)/(r^2+1)^2
  auto A = [](const Vec2& x) -> Vec2 {
    double den = (1.0 + dot(x, x));
    den *= den;
    return {x[0] * (x[0] * x[0] - x[1] * x[1] + 1.0) / den,
            x[1] * (x[0] * x[0] - x[1] * x[1] - 1.0) / den};
  };
  FieldModel B = make_test_field("pc_counterexample2d");
  const double h = 1e-5;
  for (Vec2 x : {Vec2{1.0, 0.5}, Vec2{0.3, -1.2}, Vec2{2.0, 2.0}, Vec2{-0.7, 0.9}}) {
    double curl = (A({x[0] + h, x[1]})[1] - A({x[0] - h, x[1]})[1]) / (2 * h) -
                  (A({x[0], x[1] + h})[0] - A({x[0], x[1] - h})[0]) / (2 * h);
    CHECK(B.eval2(x) == doctest::Approx(curl).epsilon(1e-6));
  }
  // gradient metadata consistent with finite differences
  for (Vec2 x : {Vec2{0.8, -0.3}, Vec2{1.7, 1.1}}) {
    Vec2 g = B.gradB2(x);
    double d1 = (B.eval2({x[0] + h, x[1]}) - B.eval2({x[0] - h, x[1]})) / (2 * h);
    double d2 = (B.eval2({x[0], x[1] + h}) - B.eval2({x[0], x[1] - h})) / (2 * h);
    CHECK(g[0] == doctest::Approx(d1).epsilon(1e-5));
    CHECK(g[1] == doctest::Approx(d2).epsilon(1e-5));
  }
}

TEST_CASE("gaussian gradient metadata") {
  FieldModel g = make_test_field("gaussian2d");
  const double h = 1e-6;
  Vec2 x{0.7, -1.1};
  Vec2 gr = g.gradB2(x);
  CHECK(gr[0] == doctest::Approx((g.eval2({x[0] + h, x[1]}) - g.eval2({x[0] - h, x[1]})) / (2 * h))
                     .epsilon(1e-6));
  CHECK(gr[1] == doctest::Approx((g.eval2({x[0], x[1] + h}) - g.eval2({x[0], x[1] - h})) / (2 * h))
                     .epsilon(1e-6));
}
