#pragma once

#include <map>
#include <string>
#include <vector>

#include "gaugekit/fields.hpp"
#include "gaugekit/gauges.hpp"

namespace gaugekit {

// Complex grid state, 1 component (Schroedinger) or 2 (Pauli spinor).
struct WavePacket {
  GridSpec grid;
  int components = 1;
  double mass = 1.0;
  std::vector<cplx> psi;

  cplx& at(std::size_t node, int c = 0) { return psi[node * components + c]; }
  cplx at(std::size_t node, int c = 0) const { return psi[node * components + c]; }
};

WavePacket make_packet(const GridSpec& grid, int components = 1, double mass = 1.0);

// normalized Gaussian e^{-|x-x0|^2/(2 sigma^2)} e^{i q.x}
WavePacket gaussian_packet(const GridSpec& grid, const Vec2& center, double sigma, const Vec2& q,
                           double mass = 1.0, int components = 1);

double packet_norm(const WavePacket& p);
cplx packet_inner(const WavePacket& a, const WavePacket& b);
void normalize(WavePacket& p);
double packet_width(const WavePacket& p, int axis);  // sqrt(2 Var) of |psi|^2
Vec2 momentum_expectation(const WavePacket& p);
// fraction of |psi|^2 within `cells` of the periodic boundary
double boundary_mass(const WavePacket& p, int cells);

// Sampled Hamiltonian data: H = (1/2m)((p-A)^2 - sigma3 B) + A0, applied
// spectrally through the symmetrized product -(A.p + p.A).
struct HamiltonianSpec {
  GridSpec grid;
  double mass = 1.0;
  bool pauli = false;
  std::vector<double> Ax, Ay;  // vector potential components
  std::vector<double> A0;      // electrostatic potential
  std::vector<double> B;       // magnetic field (spin term)
};

HamiltonianSpec make_hamiltonian(const GridSpec& grid, const VectorPotential* A,
                                 const ScalarPotentialModel* A0, const FieldModel* B,
                                 double mass = 1.0, bool pauli = false);
HamiltonianSpec free_hamiltonian(const GridSpec& grid, double mass = 1.0, bool pauli = false);

struct EvolutionParams {
  double dt = 0.1;
  int steps = 1;
  int max_degree = 128;     // Chebyshev polynomial cap
  double cheb_tol = 1e-15;  // coefficient cutoff
  int guard_cells = 16;     // wrap-around margin
};

WavePacket apply_H(const HamiltonianSpec& H, const WavePacket& psi);
double energy_expectation(const HamiltonianSpec& H, const WavePacket& psi);

// exact free evolution e^{-i |p|^2 t / 2m}
WavePacket evolve_free(const WavePacket& psi, double t);

// Chebyshev expansion of e^{-iH dt}, applied `steps` times.  Throws when the
// spectral-radius estimate times dt exceeds the degree cap.
WavePacket evolve(const HamiltonianSpec& H, const WavePacket& psi, const EvolutionParams& params);

struct ScatteringResult {
  WavePacket packet;
  double cook_residual_minus = 0.0;  // ||(H - H0) e^{-i H0 t} psi|| at t = -T
  double cook_residual_plus = 0.0;   // and at t = +T
};

// S psi ~ e^{i H0 T} e^{-i H 2T} e^{i H0 T} psi
ScatteringResult approx_scattering(const HamiltonianSpec& H, const WavePacket& psi, double T,
                                   const EvolutionParams& params, double cook_tol = 1e9);

struct BoostedPhaseResult {
  WavePacket packet;       // e^{-iu omega x} S e^{iu omega x} psi
  double error = 0.0;      // || packet - e^{ia} psi ||
  double window = 0.0;     // traversal half-distance u T / m
  double cook_minus = 0.0;
  double cook_plus = 0.0;
};

// Boosted conjugation of the scattering operator against the analytic
// high-energy phase from the reference potential A.
BoostedPhaseResult boosted_scattering_phase(const HamiltonianSpec& H, const VectorPotential& A,
                                            const WavePacket& psi, double u, const Vec2& omega,
                                            double window_distance = 10.0,
                                            const EvolutionParams& params = {});

struct ExperimentReport {
  std::string name;
  std::vector<double> parameters;
  std::vector<double> errors;
  double fitted_exponent = 0.0;
  bool trivial = false;  // all errors below the floor, no rate to fit
  bool passed = false;
  std::map<std::string, std::string> info;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

ExperimentReport convergence_study(const HamiltonianSpec& H, const VectorPotential& A,
                                   const WavePacket& psi, const Vec2& omega,
                                   const std::vector<double>& u_list,
                                   double window_distance = 10.0,
                                   const EvolutionParams& params = {},
                                   double pass_exponent = 0.8);

}  // namespace gaugekit
