#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gaugekit/fields.hpp"

namespace gaugekit {

enum class GaugeKind { transversal, griesinger, coulomb, adaptive, external };

std::string to_string(GaugeKind k);

// Compactly supported bump with unit integral, h(z) = c (1 - |z/R_h|^2)^4.
struct Mollifier {
  int dim = 2;
  double R_h = 0.5;
  double normalization = 1.0;

  double eval(double r2) const {
    double t = r2 / (R_h * R_h);
    if (t >= 1.0) return 0.0;
    double u = 1.0 - t;
    double u2 = u * u;
    return normalization * u2 * u2;
  }
};

Mollifier make_bump_mollifier(int dim, double R_h = 0.5);

// Analytic gauge-function component lambda carried by composite potentials
// (adaptive gauge).  A_total = A_base + sign * grad(lambda).  Knowing lambda
// exactly lets line integrals and asymptotic limits of the gradient part be
// evaluated in closed form.
struct AnalyticLambda {
  double sign = 1.0;
  std::function<double(const Vec2&)> lambda;
  std::function<Vec2(const Vec2&)> grad;
  std::function<double(const Vec2&)> laplacian;
  std::function<double(double)> Lambda_of_angle;  // radial limit per direction
  double settle_radius = 0.0;                     // lambda == Lambda beyond this
};

// Parameters of the |omega . A| bound along a line, used to pick quadrature
// truncation radii: |omega . A(x + omega t)| <= K (1+|x|) |t|^-mu_line.
struct LineDecay {
  double K = 1.0;
  double mu_line = 2.0;
  double R = 10.0;
  bool integrable() const { return mu_line > 1.0; }
};

struct VectorPotential {
  int dim = 2;
  GaugeKind kind = GaugeKind::external;
  std::string label;
  std::function<Vec2(const Vec2&)> A2;  // total potential
  std::function<Vec3(const Vec3&)> A3;
  std::function<Vec2(const Vec2&)> A2_base;  // total minus analytic gradient part
  std::optional<AnalyticLambda> grad_part;
  LineDecay line_decay;
  DecayCertificate source_decay;
  std::optional<double> source_flux;
  std::optional<double> source_support_radius;
  std::vector<double> source_jump_radii;
  bool medium_range = true;
  std::string notice;  // e.g. unnecessary-adaptation
  QuadratureOptions quad;

  Vec2 eval2(const Vec2& x) const { return A2(x); }
  Vec3 eval3(const Vec3& x) const { return A3(x); }
};

// --- gauge constructions ----------------------------------------------------

// A(x) = -x X int_0^1 s B(sx) ds ; exactly transversal (x.A = 0)
VectorPotential transversal_gauge(const FieldModel& B, QuadratureOptions opt = {});

// A(x) = -int h(z) int_0^1 (x-z) X s B(sx+(1-s)z) ds dz; mollified transversal
VectorPotential griesinger_gauge(const FieldModel& B, const Mollifier& h,
                                 QuadratureOptions opt = {});

// Pointwise Coulomb gauge A(x) = -(1/omega_nu) int (x-y)/|x-y|^nu X B(y) dy
VectorPotential coulomb_gauge_pointwise(const FieldModel& B, QuadratureOptions opt = {});

// Grid Coulomb gauge by discrete convolution; kernel odd-symmetric, zero on
// the singular cell (principal-value consistent midpoint rule).
SampledField coulomb_gauge(const FieldModel& B, const GridSpec& grid);

struct FarFieldFit {
  double coefficient = 0.0;  // fitted flux
  double residual = 0.0;     // max deviation from the 1/r model on the circle
  double budget = 0.0;       // O(r^-(mu-1)) allowance
  bool within_budget = true;
};

// Fits A ~ (Phi / 2 pi r^2) (-x2, x1) on the circle of given radius (2D).
FarFieldFit coulomb_far_field_check(const FieldModel& B, double radius,
                                    int n_points = 32, QuadratureOptions opt = {});

// A^omega = A_coulomb - grad lambda, with lambda = f(arg x) for large |x| and
// f' = Phi/(2 pi) on sectors around +-omega: integrable decay there.
struct AdaptiveGaugeParams {
  double sector_half_angle_deg = 15.0;
  double transition_deg = 10.0;
  double cutoff_inner = 6.0;   // lambda == 0 inside
  double cutoff_outer = 12.0;  // pure f(arg x) outside
};
VectorPotential adaptive_gauge(const FieldModel& B, const Vec2& omega,
                               const AdaptiveGaugeParams& params = {},
                               QuadratureOptions opt = {});

// Wraps an externally supplied potential (e.g. the Prop. PC counterexample).
VectorPotential external_potential2d(std::function<Vec2(const Vec2&)> A, LineDecay decay,
                                     std::string label = "external", bool medium_range = true);

// --- gauge functions ----------------------------------------------------------

struct GaugeFunction {
  std::function<double(const Vec2&)> lambda;
  std::optional<std::function<double(double)>> Lambda_analytic;  // per angle
  double R0 = 20.0;  // extrapolation base radius for the asymptotic limit
};

// lambda(x) = int_0^1 x . (A' - A)(sx) ds, checked to be a gauge pair by loop
// integrals of A' - A on four test loops.
GaugeFunction extract_lambda(const VectorPotential& A, const VectorPotential& Aprime,
                             QuadratureOptions opt = {}, double loop_tol = 1e-5);

// Lambda(omega) = lim_r lambda(r omega), Richardson-extrapolated over
// {R0, 2 R0, 4 R0}; throws NumericError when the differences do not decrease
// (the obstruction for gauge pairs that are not medium-range).
double asymptotic_Lambda(const GaugeFunction& lam, const Vec2& omega, double tol = 1e-4);

// --- decay diagnostics --------------------------------------------------------

struct LongitudinalProfile {
  std::vector<Vec2> directions;
  std::vector<double> radii;
  // [direction][radius]
  std::vector<std::vector<double>> longitudinal;
  std::vector<std::vector<double>> magnitude;
  double longitudinal_exponent = 0.0;  // +inf when identically zero
  double magnitude_exponent = 0.0;
  bool medium_range = false;
};

LongitudinalProfile longitudinal_profile(const VectorPotential& A,
                                         const std::vector<Vec2>& directions,
                                         const std::vector<double>& radii);

// --- grid helpers used by verification ----------------------------------------

SampledField sample_potential(const VectorPotential& A, const GridSpec& grid);

// Max-norm mismatch of the central-difference curl of sampled A against the
// analytic B, skipping the boundary ring and |r - r_jump| < mask_width.
double curl_mismatch_max(const SampledField& A, const FieldModel& B, double mask_width = 0.0);

// Max-norm central-difference divergence of a sampled vector field.
double divergence_max(const SampledField& A);

}  // namespace gaugekit
