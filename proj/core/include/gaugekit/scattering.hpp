#pragma once

#include <functional>
#include <vector>

#include "gaugekit/xray.hpp"

namespace gaugekit {

// Rotated lattice attached to a scattering direction: coordinate s along
// omega, transverse coordinate d along perp(omega); both origin-centered.
// Storage is d-major so per-line cumulative integrals run on contiguous rows.
struct LineFrame {
  Vec2 omega{1.0, 0.0};
  int n_s = 0, n_d = 0;
  double h_s = 0.0, h_d = 0.0;

  double s(int i) const { return (i - 0.5 * (n_s - 1)) * h_s; }
  double d(int j) const { return (j - 0.5 * (n_d - 1)) * h_d; }
  Vec2 position(int i, int j) const {
    Vec2 t = perp(omega);
    return s(i) * omega + d(j) * t;
  }
  std::size_t flat(int j, int i) const { return static_cast<std::size_t>(j) * n_s + i; }
  std::size_t node_count() const { return static_cast<std::size_t>(n_s) * n_d; }
};

LineFrame make_line_frame(const Vec2& omega, int n_s, double s_extent, int n_d, double d_extent);

// complex field on a LineFrame with 1 (Schroedinger) or 2 (Pauli) components
struct FrameField {
  LineFrame frame;
  int components = 1;
  std::vector<cplx> v;

  cplx& at(int j, int i, int c = 0) { return v[frame.flat(j, i) * components + c]; }
  cplx at(int j, int i, int c = 0) const { return v[frame.flat(j, i) * components + c]; }
};

FrameField make_frame_field(const LineFrame& frame, int components = 1);
double frame_norm(const FrameField& f);

// e^{i a(omega, x)} on a transverse lattice
struct HighEnergyPhase {
  Vec2 omega{1.0, 0.0};
  double offset_start = 0.0;
  double offset_step = 0.0;
  std::vector<double> a;
  std::vector<cplx> phase;
};

HighEnergyPhase high_energy_phase(const VectorPotential& A, const Vec2& omega, int n_offsets,
                                  double offset_extent, QuadratureOptions opt = {});

struct GaugeShift {
  double shift = 0.0;            // mean of a' - a over the lattice
  double max_deviation = 0.0;    // max |a' - a - shift|
};

// a'(omega,.) - a(omega,.) must be x-independent and equal
// Lambda(omega) - Lambda(-omega)
GaugeShift phase_gauge_shift(const VectorPotential& A, const VectorPotential& Aprime,
                             const Vec2& omega, int n_offsets, double offset_extent,
                             QuadratureOptions opt = {});

// a(omega) = int_0^inf omega . A(t omega) dt; vanishes identically in any
// transversal gauge.  sign < 0 integrates along -omega instead.
double modified_phase(const VectorPotential& A, const Vec2& omega, int sign = +1,
                      QuadratureOptions opt = {});

// gauge-invariant combination a(omega,x) - a_+(omega) - a_-(omega): the phase
// of the modified scattering operator S^J
double sj_invariant_phase(const VectorPotential& A, const Vec2& omega, const Vec2& x,
                          QuadratureOptions opt = {});

// --- adapted potentials and K operators ------------------------------------

// A_pm(x) = int_0^{pm inf} omega X B(x + omega s) ds, with omega . A_pm = 0;
// companion lambda_pm from a reference gauge, and the exact divergence from
// the line integral of omega . curl B.
struct AdaptedPotential {
  Vec2 omega{1.0, 0.0};
  int sign = +1;
  std::function<Vec2(const Vec2&)> A;
  std::function<double(const Vec2&)> lambda;
  std::function<double(const Vec2&)> divergence;
};

AdaptedPotential adapted_potential(const FieldModel& B, const Vec2& omega, int sign,
                                   const VectorPotential& reference_gauge,
                                   QuadratureOptions opt = {});

// K_pm operator coefficients sampled on a frame, plus raw fields for the
// exactly symmetric application.
struct KOperatorSpec {
  LineFrame frame;
  double mass = 1.0;
  bool pauli = false;
  int sign = +1;
  std::vector<Vec2> A;          // adapted potential on the frame
  std::vector<double> divA;     // its divergence
  std::vector<double> B;        // magnetic field (spin term)
  // spec'd coefficient views
  Vec2 vector_coefficient(std::size_t n) const { return (-1.0 / mass) * A[n]; }
  cplx scalar_coefficient(std::size_t n) const {
    return cplx(dot(A[n], A[n]), divA[n]) / (2.0 * mass);
  }
  double spin_coefficient(std::size_t n) const { return -B[n] / (2.0 * mass); }
};

KOperatorSpec make_k_operator(const FieldModel& B, const Vec2& omega, int sign,
                              const LineFrame& frame, double mass, bool pauli);

// K psi = (1/2m)(-A.(p psi) - p.(A psi) + A^2 psi - sigma3 B psi), p by
// 4th-order centered differences with zero boundary extension (exactly
// Hermitian on compactly supported fields).
FrameField apply_K(const KOperatorSpec& K, const FrameField& psi);

// --- the (a1) limit and the inverse A0 pipeline ------------------------------

struct A0ForwardResult {
  FrameField rhs;            // the high-energy limit of (u/m)(S - e^{ia})
  std::vector<double> a;     // a(omega, x) per transverse row
  FrameField k_terms;        // the two K integrals (diagnostic / subtraction)
};

A0ForwardResult a0_forward_rhs(const ScalarPotentialModel* A0, const FieldModel& B,
                               const Vec2& omega, const FrameField& psi,
                               const VectorPotential& reference_gauge, double mass = 1.0,
                               bool pauli = false);

struct A0XraySlice {
  Vec2 omega{1.0, 0.0};
  double offset_start = 0.0;
  double offset_step = 0.0;
  std::vector<double> values;  // int A0(x + omega t) dt per offset
  std::vector<bool> mask;      // false where |psi| was below threshold
};

A0XraySlice extract_a0_xray(const A0ForwardResult& limit, const FieldModel& B, const Vec2& omega,
                            const FrameField& psi, const VectorPotential& reference_gauge,
                            double mass = 1.0, bool pauli = false,
                            double mask_threshold = 1e-3);

SampledField reconstruct_A0(const std::vector<A0XraySlice>& slices, int n_pixels, double extent);

}  // namespace gaugekit
