#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaugekit/grid.hpp"
#include "gaugekit/quadrature.hpp"

namespace gaugekit {

// Decay certificate |B(x)| <= C |x|^-mu for |x| >= R_decay.  Certified from
// declared constants, not by global search; spot-checked by sampling.
struct DecayCertificate {
  double C = 1.0;
  double mu = 2.0;
  double R_decay = 1.0;
};

// Magnetic field with decay metadata.  2D fields are scalar valued, 3D fields
// are 3-vector valued and must be divergence free.  Units: hbar = e = 1.
struct FieldModel {
  int dim = 2;
  std::string label;
  std::function<double(const Vec2&)> B2;
  std::function<Vec3(const Vec3&)> B3;
  // gradient of the 2D scalar field, when known analytically (curl B feeds
  // the adapted-potential divergence)
  std::function<Vec2(const Vec2&)> gradB2;
  DecayCertificate decay;
  double integrability_p = 3.0;
  std::optional<double> known_flux;       // 2D only
  std::optional<double> support_radius;   // compactly supported fields
  std::vector<double> jump_radii;         // radial discontinuity circles
  std::vector<Vec2> singular_points;

  double eval2(const Vec2& x) const { return B2(x); }
  Vec3 eval3(const Vec3& x) const { return B3(x); }
};

// Short-range electrostatic potential A_0, decay mu > 1.
struct ScalarPotentialModel {
  int dim = 2;
  std::string label;
  std::function<double(const Vec2&)> V2;
  std::function<double(const Vec3&)> V3;
  DecayCertificate decay{1.0, 2.0, 1.0};
  std::vector<Vec2> singular_points;
};

struct DecayProfile {
  double R = 1.0;
  double p = 3.0;
  double mu = 2.0;
  double lp_part = 0.0;   // (int_{|x|<=R} |B|^p)^{1/p}
  double sup_part = 0.0;  // sup_{|x|>=R} |x|^mu |B|
  double norm_value = 0.0;
};

// --- catalog ----------------------------------------------------------------
// Built-in test fields:
//   zero, gaussian2d(amplitude,width), solenoid2d(radius),
//   radial2d_powertail(mu), pc_counterexample2d, gaussian3d_loop(amplitude)
FieldModel make_test_field(const std::string& name, const std::vector<double>& params = {});

ScalarPotentialModel make_gaussian_potential(double amplitude = 1.0, double width = 1.0,
                                             const Vec2& center = {0.0, 0.0});

// --- operations ---------------------------------------------------------------

SampledField sample_field(const FieldModel& model, GridSpec grid);
SampledField sample_field(const ScalarPotentialModel& model, GridSpec grid);

DecayProfile decay_norm(const FieldModel& model, double R, double p, double mu,
                        const QuadratureOptions& opt = {});

// max over interior nodes of the central-difference divergence (3D only)
double divergence_residual(const FieldModel& model, const GridSpec& grid);

// total flux of a 2D field, polar adaptive quadrature (requires mu > 2)
double total_flux(const FieldModel& model, const QuadratureOptions& opt = {});

// least-squares slope of log|value| against log(radius); returns -slope
double fit_decay_exponent(const std::vector<std::pair<double, double>>& radius_magnitude);

// spot check of the decay certificate by sampling (n_radii x n_dirs)
bool check_decay_certificate(const FieldModel& model, int n_radii = 64, int n_dirs = 16,
                             double slack = 1.0 + 1e-9);

}  // namespace gaugekit
