// Acceptance suite: one pass/fail line per criterion, spec thresholds pinned
// in code.  Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gaugekit/propagator.hpp"
#include "gaugekit/scattering.hpp"

using namespace gaugekit;

namespace {

int failures = 0;

void verdict(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] C%-2d %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double timed_seconds(const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double masked_rel_l2(const SampledField& rec, const std::function<double(const Vec2&)>& truth,
                     double radius) {
  double num = 0.0, den = 0.0;
  const GridSpec& g = rec.grid;
  for (int i = 0; i < g.dims[0]; ++i)
    for (int j = 0; j < g.dims[1]; ++j) {
      Vec2 x = g.position2(i, j);
      if (norm(x) > radius) continue;
      double t = truth(x);
      double d = rec.values[g.flat(i, j)] - t;
      num += d * d;
      den += t * t;
    }
  return std::sqrt(num / den);
}

// --- C1: curl of every gauge matches B at order h^2 ---------------------------

void criterion1() {
  struct Case {
    std::string field, gauge;
    double ratio = 0.0, fine_err = 0.0, seconds = 0.0;
    bool pass = false;
  };
  std::vector<Case> cases;
  auto run2d = [&](const std::string& fname, const std::string& gname) {
    Case c{fname, gname};
    FieldModel B = make_test_field(fname);
    // pointwise h^2 convergence is undefined across the jump circle: mask a
    // fixed annulus comparable to the mollifier averaging radius
    double mask = B.jump_radii.empty() ? 0.0 : 0.6;
    double moll_radius = B.jump_radii.empty() ? 0.5 : 0.25;
    c.seconds = timed_seconds([&] {
      auto sample = [&](int n) {
        GridSpec g = make_square_grid(2, n, 12.0);
        if (gname == "coulomb") return coulomb_gauge(B, g);
        if (gname == "griesinger")
          return sample_potential(
              griesinger_gauge(B, make_bump_mollifier(2, moll_radius), {1e-9}), g);
        return sample_potential(transversal_gauge(B, {1e-10}), g);
      };
      double ec = curl_mismatch_max(sample(64), B, mask);
      double ef = curl_mismatch_max(sample(128), B, mask);
      c.ratio = ec / ef;
      c.fine_err = ef;
    });
    c.pass = c.ratio >= 3.5 && c.fine_err < 0.05 && c.seconds <= 300.0;
    cases.push_back(c);
  };
  auto run3d = [&](const std::string& gname) {
    Case c{"gaussian3d_loop", gname};
    FieldModel B = make_test_field("gaussian3d_loop");
    // 48^3 on this field is not yet in the asymptotic h^2 regime; halving
    // from 32^3 to 64^3 (extent 10) is, and stays well inside the time cap
    c.seconds = timed_seconds([&] {
      auto sample = [&](int n) {
        GridSpec g = make_square_grid(3, n, 10.0);
        if (gname == "coulomb") return coulomb_gauge(B, g);
        if (gname == "griesinger")
          return sample_potential(griesinger_gauge(B, make_bump_mollifier(3, 0.5), {1e-8}), g);
        return sample_potential(transversal_gauge(B, {1e-9}), g);
      };
      double ec = curl_mismatch_max(sample(32), B, 0.0);
      double ef = curl_mismatch_max(sample(64), B, 0.0);
      c.ratio = ec / ef;
      c.fine_err = ef;
    });
    c.pass = c.ratio >= 3.5 && c.fine_err < 0.05 && c.seconds <= 300.0;
    cases.push_back(c);
  };

  for (const char* g : {"transversal", "griesinger", "coulomb"}) {
    run2d("gaussian2d", g);
    if (std::string(g) != "transversal") run2d("solenoid2d", g);  // jump circle exclusion
    run3d(g);
  }
  bool all = true;
  std::string detail;
  for (const auto& c : cases) {
    all = all && c.pass;
    detail += c.field + "/" + c.gauge + ": ratio=" + fmt(c.ratio) + " err=" + fmt(c.fine_err) +
              " t=" + fmt(c.seconds) + "s; ";
  }
  verdict(1, "gauge correctness: curl matches B at order h^2", all, detail);
}

// --- C2: decay rates of |A| ----------------------------------------------------

void criterion2() {
  bool all = true;
  std::string detail;
  for (double mu : {1.75, 2.5}) {
    FieldModel B = make_test_field("radial2d_powertail", {mu});
    double want = std::min(1.0, mu - 1.0);
    VectorPotential At = transversal_gauge(B, {1e-10});
    VectorPotential Ag = griesinger_gauge(B, make_bump_mollifier(2, 0.5), {1e-9});
    for (auto& [name, A] : {std::pair<std::string, VectorPotential&>{"transversal", At},
                            std::pair<std::string, VectorPotential&>{"griesinger", Ag}}) {
      // the subleading term of |A| is down by only r^(mu-2); push the fit
      // window far out so the power law dominates
      std::vector<std::pair<double, double>> samples;
      for (int i = 0; i < 10; ++i) {
        double r = 2.0e4 * std::pow(1.6, i);
        samples.emplace_back(r, norm(A.eval2({r, 0.0})));
      }
      double expo = fit_decay_exponent(samples);
      bool ok = std::abs(expo - want) <= 0.1;
      all = all && ok;
      detail += name + " mu=" + fmt(mu) + ": " + fmt(expo) + " want " + fmt(want) + "; ";
    }
  }
  verdict(2, "decay rates: |A| exponent is min(1, mu-1) +- 0.1", all, detail);
}

// --- C3: Coulomb far field -----------------------------------------------------

void criterion3() {
  bool all = true;
  std::string detail;
  for (const char* name : {"gaussian2d", "solenoid2d"}) {
    FieldModel B = make_test_field(name);
    FarFieldFit fit = coulomb_far_field_check(B, 50.0, 32, {1e-7});
    double rel = std::abs(fit.coefficient - *B.known_flux) / *B.known_flux;
    bool ok = rel <= 0.01;
    all = all && ok;
    detail += std::string(name) + ": coef=" + fmt(fit.coefficient) + " rel=" + fmt(rel) + "; ";
  }
  verdict(3, "Coulomb far field: fitted flux within 1%", all, detail);
}

// --- C4: gauge pair identities ---------------------------------------------------

void criterion4() {
  FieldModel G = make_test_field("gaussian2d");
  bool pass_inject = true;
  // injected lambda reproduced to 1e-5
  VectorPotential A = transversal_gauge(G, {1e-11});
  VectorPotential Ap = A;
  auto base = A.A2;
  Ap.A2 = [base](const Vec2& x) {
    double e = std::exp(-dot(x, x));
    return base(x) + Vec2{-2.0 * x[0] * e, -2.0 * x[1] * e};
  };
  Ap.A2_base = Ap.A2;
  GaugeFunction lam = extract_lambda(A, Ap, {1e-11});
  double worst = 0.0;
  for (Vec2 x : {Vec2{1.0, 0.0}, Vec2{0.3, 0.4}, Vec2{-1.5, 2.0}, Vec2{0.0, -0.7}}) {
    double want = std::exp(-dot(x, x)) - 1.0;
    worst = std::max(worst, std::abs(lam.lambda(x) - want));
  }
  double lam_inf = asymptotic_Lambda(lam, {0.6, 0.8});
  worst = std::max(worst, std::abs(lam_inf - (-1.0)));
  pass_inject = worst <= 1e-5;

  // shift law on 16 directions with the adaptive pair
  VectorPotential At = transversal_gauge(G, {1e-9});
  VectorPotential Aw = adaptive_gauge(G, {1.0, 0.0}, {}, {1e-9});
  double worst_dev = 0.0, worst_shift = 0.0;
  for (int k = 0; k < 16; ++k) {
    double th = 2.0 * pi * k / 16.0 + 0.02;
    GaugeShift g = phase_gauge_shift(At, Aw, unit_vector(th), 17, 5.0, {1e-8});
    double expected =
        -(Aw.grad_part->Lambda_of_angle(th) - Aw.grad_part->Lambda_of_angle(th + pi));
    worst_dev = std::max(worst_dev, g.max_deviation);
    worst_shift = std::max(worst_shift, std::abs(g.shift - expected));
  }
  bool pass_shift = worst_dev <= 1e-4 && worst_shift <= 1e-4;

  // no-limit obstruction for the Prop. PC pair
  FieldModel Bpc = make_test_field("pc_counterexample2d");
  VectorPotential Atp = transversal_gauge(Bpc, {1e-9});
  VectorPotential Acp = external_potential2d(
      [](const Vec2& x) -> Vec2 {
        double den = 1.0 + dot(x, x);
        den *= den;
        return {x[0] * (x[0] * x[0] - x[1] * x[1] + 1.0) / den,
                x[1] * (x[0] * x[0] - x[1] * x[1] - 1.0) / den};
      },
      LineDecay{2.0, 1.0, 10.0}, "pc-coulomb", false);
  Acp.source_decay = Bpc.decay;
  bool pass_nolimit = false;
  try {
    GaugeFunction pc = extract_lambda(Atp, Acp, {1e-9});
    asymptotic_Lambda(pc, {1.0, 0.0});
  } catch (const NumericError&) {
    pass_nolimit = true;
  }
  verdict(4, "gauge pair identities",
          pass_inject && pass_shift && pass_nolimit,
          "inject_err=" + fmt(worst) + " dev=" + fmt(worst_dev) + " shift_err=" +
              fmt(worst_shift) + " no-limit=" + (pass_nolimit ? "raised" : "MISSING"));
}

// --- C5: scalar X-ray roundtrip --------------------------------------------------

void criterion5() {
  double e1 = 0.0, e2 = 0.0, secs = 0.0;
  secs = timed_seconds([&] {
    TailBound tail{1.0, 3.0, 4.0};
    auto phantom1 = [](const Vec2& x) { return std::exp(-dot(x, x)); };
    Sinogram s1 = xray_scalar_forward(phantom1, 360, 512, 6.0, tail, {1e-8});
    SampledField r1 = fbp_invert(s1, 128, 6.0);
    e1 = masked_rel_l2(r1, phantom1, 5.5);

    auto phantom2 = [](const Vec2& x) {
      Vec2 c{0.8, -0.4};
      Vec2 d = x - c;
      return 0.8 * std::exp(-(1.5 * d[0] * d[0] + 2.5 * d[1] * d[1])) +
             0.4 * std::exp(-3.0 * dot(x + c, x + c));
    };
    Sinogram s2 = xray_scalar_forward(phantom2, 360, 512, 6.0, tail, {1e-8});
    SampledField r2 = fbp_invert(s2, 128, 6.0);
    e2 = masked_rel_l2(r2, phantom2, 5.5);
  });
  bool ok = e1 <= 0.02 && e2 <= 0.02 && secs <= 120.0;
  verdict(5, "X-ray roundtrip at 360x512 within 2%", ok,
          "gaussian=" + fmt(e1) + " two-bump=" + fmt(e2) + " t=" + fmt(secs) + "s");
}

// --- C6: B reconstruction from potential line data -------------------------------

void criterion6() {
  FieldModel G = make_test_field("gaussian2d");
  const int n_dirs = 128, n_off = 192;
  auto dataset_for = [&](const VectorPotential& A) {
    std::vector<PotentialLineData> ds(n_dirs);
    for (int i = 0; i < n_dirs; ++i)
      ds[i] = potential_line_data(A, unit_vector(pi * i / n_dirs), n_off, 6.0, {3e-7});
    return ds;
  };
  double err_t = 0.0, err_w = 0.0, cross = 0.0, secs = 0.0;
  secs = timed_seconds([&] {
    VectorPotential At = transversal_gauge(G, {1e-7});
    VectorPotential Aw = adaptive_gauge(G, {1.0, 0.0}, {}, {1e-7});
    SampledField rec_t = reconstruct_B(dataset_for(At), 96, 6.0);
    SampledField rec_w = reconstruct_B(dataset_for(Aw), 96, 6.0);
    err_t = masked_rel_l2(rec_t, G.B2, 3.0);
    err_w = masked_rel_l2(rec_w, G.B2, 3.0);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < rec_t.values.size(); ++k) {
      double d = rec_t.values[k] - rec_w.values[k];
      num += d * d;
      den += rec_t.values[k] * rec_t.values[k];
    }
    cross = std::sqrt(num / den);
  });
  bool ok = err_t <= 0.05 && err_w <= 0.05 && cross <= 0.05;
  verdict(6, "B reconstruction from line data within 5%, gauge independent", ok,
          "transversal=" + fmt(err_t) + " adaptive=" + fmt(err_w) + " cross=" + fmt(cross) +
              " t=" + fmt(secs) + "s");
}

// --- C7: A0 reconstruction -------------------------------------------------------

void criterion7() {
  ScalarPotentialModel A0 = make_gaussian_potential();
  auto run = [&](const FieldModel& B, double gauge_tol) {
    VectorPotential ref = transversal_gauge(B, {gauge_tol});
    const int n_dirs = 90;
    std::vector<A0XraySlice> slices(n_dirs);
    for (int k = 0; k < n_dirs; ++k) {
      Vec2 omega = unit_vector(pi * k / n_dirs);
      LineFrame fr = make_line_frame(omega, 97, 8.0, 129, 6.0);
      FrameField psi = make_frame_field(fr, 1);
      for (auto& v : psi.v) v = 1.0;
      A0ForwardResult fwd = a0_forward_rhs(&A0, B, omega, psi, ref);
      slices[k] = extract_a0_xray(fwd, B, omega, psi, ref);
    }
    SampledField rec = reconstruct_A0(slices, 96, 6.0);
    return masked_rel_l2(rec, [&A0](const Vec2& x) { return A0.V2(x); }, 3.0);
  };
  double err_free = 0.0, err_mag = 0.0, secs = 0.0;
  secs = timed_seconds([&] {
    err_free = run(make_test_field("zero"), 1e-8);
    err_mag = run(make_test_field("gaussian2d"), 1e-8);
  });
  bool ok = err_free <= 0.05 && err_mag <= 0.05;
  verdict(7, "A0 reconstruction within 5% (free and magnetic routes)", ok,
          "B=0: " + fmt(err_free) + "  B=gaussian2d: " + fmt(err_mag) + " t=" + fmt(secs) + "s");
}

// --- C8: propagator soundness ------------------------------------------------------

void criterion8() {
  GridSpec g = make_square_grid(2, 128, 32.0);
  FieldModel G = make_test_field("gaussian2d");
  VectorPotential A = transversal_gauge(G);
  ScalarPotentialModel A0 = make_gaussian_potential(0.4, 2.0);
  HamiltonianSpec H = make_hamiltonian(g, &A, &A0, &G, 1.0, false);
  WavePacket p = gaussian_packet(g, {1.0, 0.0}, 1.5, {0.8, 0.4});
  double e0 = energy_expectation(H, p);
  EvolutionParams ep;
  ep.dt = 0.05;
  ep.steps = 1000;
  double norm_drift = 0.0, energy_drift = 0.0, width_err = 0.0, cov_err = 0.0, secs = 0.0;
  secs = timed_seconds([&] {
    WavePacket out = evolve(H, p, ep);
    norm_drift = std::abs(packet_norm(out) - 1.0);
    energy_drift = std::abs(energy_expectation(H, out) - e0) / std::abs(e0);

    WavePacket freep = gaussian_packet(g, {0.0, 0.0}, 1.0, {0.0, 0.0});
    for (double t : {0.5, 1.0, 2.0}) {
      WavePacket q = evolve_free(freep, t);
      double want = std::sqrt(1.0 + t * t);
      width_err = std::max(width_err, std::abs(packet_width(q, 0) - want));
      width_err = std::max(width_err, std::abs(packet_width(q, 1) - want));
    }

    // gauge covariance of the dynamics
    auto lamf = [](const Vec2& x) { return 0.8 * std::exp(-0.5 * dot(x, x)); };
    HamiltonianSpec Hp = H;
    for (int i = 0; i < g.dims[0]; ++i)
      for (int j = 0; j < g.dims[1]; ++j) {
        Vec2 x = g.position2(i, j);
        double l = lamf(x);
        Hp.Ax[g.flat(i, j)] += -x[0] * l;
        Hp.Ay[g.flat(i, j)] += -x[1] * l;
      }
    WavePacket pl = p;
    for (int i = 0; i < g.dims[0]; ++i)
      for (int j = 0; j < g.dims[1]; ++j)
        pl.at(g.flat(i, j)) *= std::polar(1.0, lamf(g.position2(i, j)));
    EvolutionParams short_ep;
    short_ep.dt = 0.1;
    short_ep.steps = 50;
    WavePacket lhs = evolve(Hp, pl, short_ep);
    WavePacket rhs = evolve(H, p, short_ep);
    double acc = 0.0;
    for (int i = 0; i < g.dims[0]; ++i)
      for (int j = 0; j < g.dims[1]; ++j) {
        cplx r = rhs.at(g.flat(i, j)) * std::polar(1.0, lamf(g.position2(i, j)));
        acc += std::norm(lhs.at(g.flat(i, j)) - r);
      }
    cov_err = std::sqrt(acc * g.spacing[0] * g.spacing[1]);
  });
  bool ok = norm_drift <= 1e-8 && energy_drift <= 1e-6 && width_err <= 1e-6 && cov_err <= 1e-6;
  verdict(8, "propagator soundness", ok,
          "norm_drift=" + fmt(norm_drift) + " energy_drift=" + fmt(energy_drift) +
              " width_err=" + fmt(width_err) + " covariance=" + fmt(cov_err) + " t=" +
              fmt(secs) + "s");
}

// --- C9: high-energy limit convergence ---------------------------------------------

void criterion9() {
  GridSpec g = make_square_grid(2, 256, 32.0);
  FieldModel G = make_test_field("gaussian2d");
  // adaptive gauge: integrable decay along the flight direction keeps the
  // window-truncation bias far below the O(1/u) signal
  VectorPotential A = adaptive_gauge(G, {1.0, 0.0}, {}, {1e-9});
  HamiltonianSpec H = make_hamiltonian(g, &A, nullptr, nullptr);
  WavePacket psi = gaussian_packet(g, {0.0, 0.0}, 0.9, {0.0, 0.0});
  EvolutionParams ep;
  ep.dt = 0.5;
  double expo = 0.0, ratio = 0.0, secs = 0.0;
  std::vector<double> errs;
  secs = timed_seconds([&] {
    ExperimentReport rep = convergence_study(H, A, psi, {1.0, 0.0}, {4.0, 8.0, 16.0}, 11.0, ep);
    errs = rep.errors;
    expo = rep.fitted_exponent;
    ratio = rep.errors[2] / rep.errors[1];
  });
  bool ok = std::abs(expo - 1.0) <= 0.2 && ratio >= 0.35 && ratio <= 0.65 && secs <= 1800.0;
  verdict(9, "high-energy limit: O(1/u) convergence", ok,
          "errors={" + fmt(errs[0]) + "," + fmt(errs[1]) + "," + fmt(errs[2]) + "} exponent=" +
              fmt(expo) + " ratio16/8=" + fmt(ratio) + " t=" + fmt(secs) + "s");
}

// --- C10: modified-phase invariance --------------------------------------------------

void criterion10() {
  FieldModel G = make_test_field("gaussian2d");
  VectorPotential At = transversal_gauge(G, {1e-9});
  VectorPotential Aw = adaptive_gauge(G, {1.0, 0.0}, {}, {1e-9});
  VectorPotential Ag = griesinger_gauge(G, make_bump_mollifier(2, 0.5), {1e-8});
  double worst = 0.0, secs = 0.0;
  secs = timed_seconds([&] {
    for (int k = 0; k < 8; ++k) {
      Vec2 omega = unit_vector(pi * k / 8.0 + 0.03);
      double mp_t_f = modified_phase(At, omega, +1, {1e-7});
      double mp_t_b = modified_phase(At, omega, -1, {1e-7});
      double mp_w_f = modified_phase(Aw, omega, +1, {1e-7});
      double mp_w_b = modified_phase(Aw, omega, -1, {1e-7});
      double mp_g_f = modified_phase(Ag, omega, +1, {1e-7});
      double mp_g_b = modified_phase(Ag, omega, -1, {1e-7});
      for (int j = 0; j < 64; ++j) {
        double d = -6.0 + 12.0 * j / 63.0;
        Vec2 x = d * perp(omega);
        double vt = line_integral_a(At, omega, x, {1e-7}) - mp_t_f - (-mp_t_b);
        double vw = line_integral_a(Aw, omega, x, {1e-7}) - mp_w_f - (-mp_w_b);
        double vg = line_integral_a(Ag, omega, x, {1e-7}) - mp_g_f - (-mp_g_b);
        worst = std::max(worst, std::abs(vw - vt));
        worst = std::max(worst, std::abs(vg - vt));
      }
    }
  });
  bool ok = worst <= 1e-4;
  verdict(10, "modified-phase invariance across three gauges", ok,
          "max_disagreement=" + fmt(worst) + " t=" + fmt(secs) + "s");
}

}  // namespace

int main() {
  std::printf("gaugekit acceptance criteria\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
