#include <cmath>
#include <random>

#include "doctest.h"
#include "gaugekit/propagator.hpp"
#include "gaugekit/quadrature.hpp"
#include "gaugekit/xray.hpp"

using namespace gaugekit;

namespace {
const FieldModel kGauss = make_test_field("gaussian2d");

WavePacket random_compact_packet(const GridSpec& g, int components, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  WavePacket p = make_packet(g, components);
  for (int i = 0; i < g.dims[0]; ++i)
    for (int j = 0; j < g.dims[1]; ++j) {
      Vec2 x = g.position2(i, j);
      double env = std::exp(-0.25 * dot(x, x));
      for (int c = 0; c < components; ++c) p.at(g.flat(i, j), c) = cplx(N(rng), N(rng)) * env;
    }
  normalize(p);
  return p;
}
}  // namespace

TEST_CASE("apply_H: plane-wave eigenvalue, constant shift, hermiticity") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  HamiltonianSpec H0 = free_hamiltonian(g);
  // broad envelope around q = (2, 0): H0 psi ~ |q|^2/2m psi at the center
  WavePacket pw = gaussian_packet(g, {0.0, 0.0}, 6.0, {2.0, 0.0});
  WavePacket hpw = apply_H(H0, pw);
  std::size_t c0 = g.flat(63, 63);
  cplx ratio = hpw.at(c0) / pw.at(c0);
  CHECK(ratio.real() == doctest::Approx(2.0).epsilon(0.01));

  // constant electrostatic shift acts exactly
  ScalarPotentialModel shift;
  shift.dim = 2;
  shift.V2 = [](const Vec2&) { return 0.7; };
  HamiltonianSpec Hc = make_hamiltonian(g, nullptr, &shift, nullptr);
  WavePacket hc = apply_H(Hc, pw);
  for (std::size_t k = 0; k < pw.psi.size(); k += 197)
    CHECK(std::abs(hc.psi[k] - (hpw.psi[k] + 0.7 * pw.psi[k])) < 1e-12);

  // hermiticity of the full magnetic Hamiltonian to roundoff
  VectorPotential A = transversal_gauge(kGauss);
  ScalarPotentialModel A0 = make_gaussian_potential(0.5, 1.5);
  HamiltonianSpec H = make_hamiltonian(g, &A, &A0, &kGauss, 1.0, false);
  WavePacket u = random_compact_packet(g, 1, 11);
  WavePacket v = random_compact_packet(g, 1, 12);
  cplx lhs = packet_inner(u, apply_H(H, v));
  cplx rhs = packet_inner(apply_H(H, u), v);
  CHECK(std::abs(lhs - rhs) < 1e-9);

  // Pauli mode
  HamiltonianSpec Hp = make_hamiltonian(g, &A, &A0, &kGauss, 1.0, true);
  WavePacket u2 = random_compact_packet(g, 2, 13);
  WavePacket v2 = random_compact_packet(g, 2, 14);
  CHECK(std::abs(packet_inner(u2, apply_H(Hp, v2)) - packet_inner(apply_H(Hp, u2), v2)) < 1e-9);
}

TEST_CASE("evolve_free: identity, Gaussian width law, momentum conservation") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  WavePacket p = gaussian_packet(g, {0.0, 0.0}, 1.0, {0.5, -0.3});
  WavePacket p0 = evolve_free(p, 0.0);
  double d0 = 0.0;
  for (std::size_t k = 0; k < p.psi.size(); ++k) d0 = std::max(d0, std::abs(p.psi[k] - p0.psi[k]));
  CHECK(d0 < 1e-12);

  CHECK(packet_width(p, 0) == doctest::Approx(1.0).epsilon(1e-9));
  WavePacket p1 = evolve_free(p, 1.0);
  CHECK(packet_width(p1, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(packet_width(p1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  Vec2 q0 = momentum_expectation(p);
  Vec2 q1 = momentum_expectation(p1);
  CHECK(q0[0] == doctest::Approx(q1[0]).epsilon(1e-12));
  CHECK(q0[1] == doctest::Approx(q1[1]).epsilon(1e-12));
  CHECK(packet_norm(p1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve: free Hamiltonian matches the exact spectral evolution") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  WavePacket p = gaussian_packet(g, {0.0, 0.0}, 1.5, {1.0, 0.5});
  HamiltonianSpec H0 = free_hamiltonian(g);
  EvolutionParams ep;
  ep.dt = 0.25;
  ep.steps = 8;
  WavePacket cheb = evolve(H0, p, ep);
  WavePacket exact = evolve_free(p, 2.0);
  double diff = 0.0;
  for (std::size_t k = 0; k < p.psi.size(); ++k)
    diff += std::norm(cheb.psi[k] - exact.psi[k]);
  CHECK(std::sqrt(diff * g.spacing[0] * g.spacing[1]) < 1e-7);

  // constant A0 = c: global phase times free evolution
  ScalarPotentialModel shift;
  shift.dim = 2;
  shift.V2 = [](const Vec2&) { return 0.3; };
  HamiltonianSpec Hc = make_hamiltonian(g, nullptr, &shift, nullptr);
  WavePacket chc = evolve(Hc, p, ep);
  cplx phase = std::polar(1.0, -0.3 * 2.0);
  diff = 0.0;
  for (std::size_t k = 0; k < p.psi.size(); ++k)
    diff += std::norm(chc.psi[k] - phase * exact.psi[k]);
  CHECK(std::sqrt(diff * g.spacing[0] * g.spacing[1]) < 1e-7);
}

TEST_CASE("evolve: unitarity and energy conservation on the gaussian2d Hamiltonian") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  VectorPotential A = transversal_gauge(kGauss);
  ScalarPotentialModel A0 = make_gaussian_potential(0.4, 2.0);
  HamiltonianSpec H = make_hamiltonian(g, &A, &A0, &kGauss, 1.0, false);
  WavePacket p = gaussian_packet(g, {1.0, 0.0}, 1.5, {0.8, 0.4});
  double e0 = energy_expectation(H, p);
  EvolutionParams ep;
  ep.dt = 0.1;
  ep.steps = 200;
  WavePacket out = evolve(H, p, ep);
  CHECK(std::abs(packet_norm(out) - 1.0) < 1e-8);
  double e1 = energy_expectation(H, out);
  CHECK(std::abs(e1 - e0) / std::abs(e0) < 1e-6);

  // spectral-bound violation: dt far too large for the degree cap
  EvolutionParams bad;
  bad.dt = 10.0;
  bad.steps = 1;
  CHECK_THROWS_AS(evolve(H, p, bad), NumericError);
}

TEST_CASE("gauge covariance of the dynamics") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  VectorPotential A = transversal_gauge(kGauss);
  HamiltonianSpec H = make_hamiltonian(g, &A, nullptr, nullptr);
  // smooth compactly concentrated lambda, A' = A + grad lambda sampled exactly
  auto lam = [](const Vec2& x) { return 0.8 * std::exp(-0.5 * dot(x, x)); };
  auto glam = [lam](const Vec2& x) {
    double l = lam(x);
    return Vec2{-x[0] * l, -x[1] * l};
  };
  HamiltonianSpec Hp = H;
  for (int i = 0; i < g.dims[0]; ++i)
    for (int j = 0; j < g.dims[1]; ++j) {
      Vec2 gl = glam(g.position2(i, j));
      Hp.Ax[g.flat(i, j)] += gl[0];
      Hp.Ay[g.flat(i, j)] += gl[1];
    }
  WavePacket p = gaussian_packet(g, {0.0, 0.5}, 1.5, {1.0, 0.0});
  WavePacket pl = p;
  for (int i = 0; i < g.dims[0]; ++i)
    for (int j = 0; j < g.dims[1]; ++j)
      pl.at(g.flat(i, j)) *= std::polar(1.0, lam(g.position2(i, j)));
  EvolutionParams ep;
  ep.dt = 0.1;
  ep.steps = 30;
  WavePacket lhs = evolve(Hp, pl, ep);
  WavePacket rhs = evolve(H, p, ep);
  for (int i = 0; i < g.dims[0]; ++i)
    for (int j = 0; j < g.dims[1]; ++j)
      rhs.at(g.flat(i, j)) *= std::polar(1.0, lam(g.position2(i, j)));
  double diff = 0.0;
  for (std::size_t k = 0; k < lhs.psi.size(); ++k) diff += std::norm(lhs.psi[k] - rhs.psi[k]);
  CHECK(std::sqrt(diff * g.spacing[0] * g.spacing[1]) < 1e-6);
}

TEST_CASE("approx_scattering: free S is the identity; Born-level phase") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  HamiltonianSpec H0 = free_hamiltonian(g);
  WavePacket p = gaussian_packet(g, {0.0, 0.0}, 1.5, {4.0, 0.0});
  EvolutionParams ep;
  ep.dt = 0.3;
  ScatteringResult free_s = approx_scattering(H0, p, 2.0, ep);
  double diff = 0.0;
  for (std::size_t k = 0; k < p.psi.size(); ++k)
    diff += std::norm(free_s.packet.psi[k] - p.psi[k]);
  CHECK(std::sqrt(diff * g.spacing[0] * g.spacing[1]) < 1e-7);
  CHECK(free_s.cook_residual_minus < 1e-12);

  // weak A0 at high speed: S psi - psi ~ -i (1/|v|) Xray(A0) psi
  GridSpec gf = make_square_grid(2, 192, 32.0);
  WavePacket pf = gaussian_packet(gf, {0.0, 0.0}, 1.4, {15.0, 0.0});
  ScalarPotentialModel A0 = make_gaussian_potential(1e-3, 1.0);
  HamiltonianSpec HA = make_hamiltonian(gf, nullptr, &A0, nullptr);
  ScatteringResult born = approx_scattering(HA, pf, 0.7, ep);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < gf.dims[0]; ++i)
    for (int j = 0; j < gf.dims[1]; ++j) {
      Vec2 x = gf.position2(i, j);
      // line integral of A0 through x along e1, in closed form
      double xr = 1e-3 * std::sqrt(pi) * std::exp(-x[1] * x[1]);
      cplx predicted = cplx(0.0, -xr / 15.0) * pf.at(gf.flat(i, j));
      cplx actual = born.packet.at(gf.flat(i, j)) - pf.at(gf.flat(i, j));
      num += std::norm(actual - predicted);
      den += std::norm(predicted);
    }
  CHECK(std::sqrt(num / den) < 0.10);
}

TEST_CASE("approx_scattering: doubling T stays within the Cook-residual budget") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  WavePacket p = gaussian_packet(g, {0.0, 0.0}, 1.3, {2.0, 0.0});
  ScalarPotentialModel A0 = make_gaussian_potential(0.05, 1.0);
  HamiltonianSpec HA = make_hamiltonian(g, nullptr, &A0, nullptr);
  HamiltonianSpec H0 = free_hamiltonian(g);
  EvolutionParams ep;
  ep.dt = 0.3;
  const double T1 = 2.5, T2 = 5.0;
  ScatteringResult s1 = approx_scattering(HA, p, T1, ep);
  ScatteringResult s2 = approx_scattering(HA, p, T2, ep);
  double change = 0.0;
  for (std::size_t k = 0; k < p.psi.size(); ++k)
    change += std::norm(s2.packet.psi[k] - s1.packet.psi[k]);
  change = std::sqrt(change * g.spacing[0] * g.spacing[1]);
  // Cook oracle: || S_{T2} - S_{T1} || <= sum of both tail integrals of
  // ||(H - H0) e^{-i H0 t} psi||, sampled by trapezoid on [T1, T2]
  auto residual = [&](double t) {
    WavePacket q = evolve_free(p, t);
    WavePacket d = apply_H(HA, q);
    WavePacket d0 = apply_H(H0, q);
    for (std::size_t k = 0; k < d.psi.size(); ++k) d.psi[k] -= d0.psi[k];
    return packet_norm(d);
  };
  const int nsamp = 11;
  double integral = 0.0;
  for (int side : {-1, +1}) {
    double prev = residual(side * T1);
    for (int k = 1; k < nsamp; ++k) {
      double t = T1 + (T2 - T1) * k / (nsamp - 1);
      double cur = residual(side * t);
      integral += 0.5 * (prev + cur) * (T2 - T1) / (nsamp - 1);
      prev = cur;
    }
  }
  CHECK(change <= 1.3 * integral + 1e-10);
}

TEST_CASE("boosted scattering phase: trivial fields and the transversal ratio") {
  GridSpec g = make_square_grid(2, 192, 32.0);
  HamiltonianSpec H0 = free_hamiltonian(g);
  VectorPotential Z = transversal_gauge(make_test_field("zero"));
  WavePacket p = gaussian_packet(g, {0.0, 0.0}, 1.0, {0.0, 0.0});
  EvolutionParams ep;
  ep.dt = 0.5;
  BoostedPhaseResult triv = boosted_scattering_phase(H0, Z, p, 6.0, {1.0, 0.0}, 10.0, ep);
  CHECK(triv.error < 1e-7);

  VectorPotential A = transversal_gauge(kGauss, {1e-9});
  HamiltonianSpec H = make_hamiltonian(g, &A, nullptr, nullptr);
  BoostedPhaseResult lo = boosted_scattering_phase(H, A, p, 6.0, {1.0, 0.0}, 11.0, ep);
  BoostedPhaseResult hi = boosted_scattering_phase(H, A, p, 12.0, {1.0, 0.0}, 11.0, ep);
  CHECK(hi.error < lo.error);
  CHECK(hi.error / lo.error > 0.30);
  CHECK(hi.error / lo.error < 0.70);

  // boost beyond the Nyquist band is rejected
  CHECK_THROWS_AS(boosted_scattering_phase(H, A, p, 30.0, {1.0, 0.0}, 10.0, ep), ConfigError);
}

TEST_CASE("Enss-Weder residual halves when the boost doubles") {
  GridSpec g = make_square_grid(2, 192, 32.0);
  ScalarPotentialModel A0 = make_gaussian_potential();
  HamiltonianSpec H = make_hamiltonian(g, nullptr, &A0, nullptr);
  VectorPotential Z = transversal_gauge(make_test_field("zero"));
  WavePacket p = gaussian_packet(g, {0.0, 0.0}, 1.0, {0.0, 0.0});
  EvolutionParams ep;
  ep.dt = 0.5;
  auto residual = [&](double u) {
    BoostedPhaseResult r = boosted_scattering_phase(H, Z, p, u, {1.0, 0.0}, 11.0, ep);
    // (u/m)|| S psi - psi + i Xray(A0) psi ||
    double acc = 0.0;
    for (int i = 0; i < g.dims[0]; ++i)
      for (int j = 0; j < g.dims[1]; ++j) {
        Vec2 x = g.position2(i, j);
        double xr = std::sqrt(pi) * std::exp(-x[1] * x[1]);
        cplx lhs = (r.packet.at(g.flat(i, j)) - p.at(g.flat(i, j))) * u +
                   cplx(0.0, 1.0) * xr * p.at(g.flat(i, j));
        acc += std::norm(lhs);
      }
    return std::sqrt(acc * g.spacing[0] * g.spacing[1]);
  };
  double r6 = residual(6.0);
  double r12 = residual(12.0);
  CHECK(r12 / r6 > 0.5 * 0.7);
  CHECK(r12 / r6 < 0.5 * 1.3);
}

TEST_CASE("convergence_study: trivial fields give a trivial passing report") {
  GridSpec g = make_square_grid(2, 128, 32.0);
  HamiltonianSpec H0 = free_hamiltonian(g);
  VectorPotential Z = transversal_gauge(make_test_field("zero"));
  WavePacket p = gaussian_packet(g, {0.0, 0.0}, 1.0, {0.0, 0.0});
  EvolutionParams ep;
  ep.dt = 0.5;
  ExperimentReport rep = convergence_study(H0, Z, p, {1.0, 0.0}, {3.0, 6.0}, 10.0, ep);
  CHECK(rep.trivial);
  CHECK(rep.passed);
  for (double e : rep.errors) CHECK(e <= 1e-7);
  CHECK_THROWS_AS(convergence_study(H0, Z, p, {1.0, 0.0}, {6.0, 3.0}, 10.0, ep), ConfigError);
}
