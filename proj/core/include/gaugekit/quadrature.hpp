#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gaugekit/common.hpp"

namespace gaugekit {

// Adaptive Gauss-Kronrod (G7/K15) with absolute-error control.
//
// Improper integrals follow the truncation policy: cut at T where the
// declared algebraic bound |f(t)| <= C t^-mu certifies a tail
// C T^(1-mu)/(mu-1) below half the tolerance, and integrate [a,T]
// adaptively.  Known discontinuities are passed as breakpoints so panels
// never straddle them.

struct QuadratureOptions {
  double abs_tol = 1e-8;
  int max_depth = 48;
  std::vector<double> breakpoints;  // interior split points, may be outside range
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimate + any tail bound charged to the budget
  long evaluations = 0;
  bool converged = true;
};

// |f(t)| <= C t^-mu for t >= R (mu > 1)
struct TailBound {
  double C = 1.0;
  double mu = 2.0;
  double R = 1.0;
  double truncation_radius(double tol) const;
  double bound_beyond(double T) const;
};

using Integrand = std::function<double(double)>;

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opt = {});

// int_a^inf f, tail certified by `tail`
QuadratureResult integrate_half_line(const Integrand& f, double a, const TailBound& tail,
                                     const QuadratureOptions& opt = {});

// int_-inf^inf f, |f| certified by `tail` in both directions
QuadratureResult integrate_real_line(const Integrand& f, const TailBound& tail,
                                     const QuadratureOptions& opt = {});

// throws NumericError when the estimate misses the tolerance
void require_converged(const QuadratureResult& r, const char* what);

// Fixed Gauss-Legendre rule on [a,b] (nodes/weights), for tensor-product use.
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace gaugekit
