#include "gaugekit/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace gaugekit {

LineFrame make_line_frame(const Vec2& omega, int n_s, double s_extent, int n_d, double d_extent) {
  double nrm = norm(omega);
  if (nrm < 1e-14) throw ConfigError("line frame: zero direction");
  LineFrame f;
  f.omega = (1.0 / nrm) * omega;
  f.n_s = n_s;
  f.n_d = n_d;
  f.h_s = 2.0 * s_extent / (n_s - 1);
  f.h_d = 2.0 * d_extent / (n_d - 1);
  return f;
}

FrameField make_frame_field(const LineFrame& frame, int components) {
  FrameField f;
  f.frame = frame;
  f.components = components;
  f.v.assign(frame.node_count() * components, cplx(0.0, 0.0));
  return f;
}

double frame_norm(const FrameField& f) {
  double s = 0.0;
  for (const cplx& z : f.v) s += std::norm(z);
  return std::sqrt(s * f.frame.h_s * f.frame.h_d);
}

HighEnergyPhase high_energy_phase(const VectorPotential& A, const Vec2& omega, int n_offsets,
                                  double offset_extent, QuadratureOptions opt) {
  HighEnergyPhase out;
  out.omega = omega;
  out.offset_step = 2.0 * offset_extent / (n_offsets - 1);
  out.offset_start = -offset_extent;
  out.a.resize(n_offsets);
  out.phase.resize(n_offsets);
  Vec2 tilde = perp(omega);
  parallel_for(n_offsets, [&](std::size_t j) {
    double d = out.offset_start + j * out.offset_step;
    double a = line_integral_a(A, omega, d * tilde, opt);
    out.a[j] = a;
    out.phase[j] = std::polar(1.0, a);
  });
  return out;
}

GaugeShift phase_gauge_shift(const VectorPotential& A, const VectorPotential& Aprime,
                             const Vec2& omega, int n_offsets, double offset_extent,
                             QuadratureOptions opt) {
  auto pa = high_energy_phase(A, omega, n_offsets, offset_extent, opt);
  auto pb = high_energy_phase(Aprime, omega, n_offsets, offset_extent, opt);
  GaugeShift g;
  for (int j = 0; j < n_offsets; ++j) g.shift += pb.a[j] - pa.a[j];
  g.shift /= n_offsets;
  for (int j = 0; j < n_offsets; ++j)
    g.max_deviation = std::max(g.max_deviation, std::abs(pb.a[j] - pa.a[j] - g.shift));
  return g;
}

double modified_phase(const VectorPotential& A, const Vec2& omega, int sign,
                      QuadratureOptions opt) {
  if (!A.medium_range || !A.line_decay.integrable())
    throw NumericError("modified_phase: potential not medium-range");
  Vec2 om = sign >= 0 ? omega : Vec2{-omega[0], -omega[1]};
  double analytic = 0.0;
  if (A.grad_part) {
    // int_0^inf omega . grad(lambda)(t omega) dt = Lambda(omega) - lambda(0)
    double ang = std::atan2(om[1], om[0]);
    analytic = A.grad_part->sign *
               (A.grad_part->Lambda_of_angle(ang) - A.grad_part->lambda({0.0, 0.0}));
  }
  auto base = A.A2_base ? A.A2_base : A.A2;
  // the longitudinal component along the ray through the origin decays like
  // the potential itself
  TailBound tail{A.line_decay.K, std::max(A.line_decay.mu_line, 1.01), A.line_decay.R};
  QuadratureOptions o = opt;
  if (A.source_support_radius) o.breakpoints.push_back(*A.source_support_radius);
  for (double rj : A.source_jump_radii) o.breakpoints.push_back(rj);
  auto res = integrate_half_line(
      [&base, &om](double t) { return dot(om, base({t * om[0], t * om[1]})); }, 0.0, tail, o);
  require_converged(res, "modified_phase");
  return res.value + analytic;
}

double sj_invariant_phase(const VectorPotential& A, const Vec2& omega, const Vec2& x,
                          QuadratureOptions opt) {
  double a = line_integral_a(A, omega, x, opt);
  double forward = modified_phase(A, omega, +1, opt);
  // int_{-inf}^0 omega . A(t omega) dt
  double backward = -modified_phase(A, omega, -1, opt);
  return a - forward - backward;
}

// --- adapted potentials -------------------------------------------------------

namespace {

TailBound field_line_tail(const FieldModel& B, double offset_mag) {
  if (B.support_radius) return {0.0, 2.0, std::max(1.0, 2.0 * *B.support_radius)};
  return {B.decay.C * std::pow(2.0, B.decay.mu) * (1.0 + offset_mag), B.decay.mu,
          std::max(1.0, 2.0 * B.decay.R_decay)};
}

}  // namespace

AdaptedPotential adapted_potential(const FieldModel& B, const Vec2& omega, int sign,
                                   const VectorPotential& reference_gauge,
                                   QuadratureOptions opt) {
  if (B.dim != 2) throw ConfigError("adapted_potential: 2D only");
  if (!(B.decay.mu > 2.0) && !B.support_radius)
    throw ConfigError("adapted_potential: requires mu > 2");
  AdaptedPotential out;
  double nrm = norm(omega);
  out.omega = (1.0 / nrm) * omega;
  out.sign = sign >= 0 ? +1 : -1;
  const Vec2 om = out.omega;
  const double sgn = out.sign;
  auto field = B.B2;
  auto gradB = B.gradB2;
  auto support = B.support_radius;
  auto decay = B.decay;

  // int_0^{pm inf} f(x + omega s) ds as a half-line integral in u = pm s,
  // with a caller-supplied decay certificate for f along the line
  auto half_line = [om, sgn, support, opt](const Vec2& x,
                                           const std::function<double(const Vec2&)>& f,
                                           TailBound tail) {
    tail.R += std::abs(dot(x, om));
    QuadratureOptions o = opt;
    if (support) {
      double b = 2.0 * dot(x, om) * sgn;
      double c = dot(x, x) - *support * *support;
      double disc = b * b - 4.0 * c;
      if (disc > 0.0) {
        double sq = std::sqrt(disc);
        for (double u : {(-b - sq) / 2.0, (-b + sq) / 2.0})
          if (u > 0.0) o.breakpoints.push_back(u);
      }
    }
    auto res = integrate_half_line(
        [&](double u) { return f({x[0] + om[0] * sgn * u, x[1] + om[1] * sgn * u}); }, 0.0, tail,
        o);
    require_converged(res, "adapted_potential");
    return sgn * res.value;
  };

  auto field_tail = [support, decay](const Vec2& x, const Vec2& om2) {
    Vec2 foot = x - dot(x, om2) * om2;
    return field_line_tail(FieldModel{2, "", nullptr, nullptr, nullptr, decay, 3.0, std::nullopt,
                                      support, {}, {}},
                           norm(foot));
  };

  out.A = [om, field, half_line, field_tail](const Vec2& x) -> Vec2 {
    double I = half_line(x, field, field_tail(x, om));
    // omega X B = (omega2 B, -omega1 B)
    return {om[1] * I, -om[0] * I};
  };
  auto ref = reference_gauge;
  out.lambda = [om, ref, half_line](const Vec2& x) {
    // the longitudinal component of the reference gauge decays like its
    // declared line certificate
    Vec2 foot = x - dot(x, om) * om;
    TailBound tail{ref.line_decay.K * (1.0 + norm(foot)),
                   std::max(ref.line_decay.mu_line, 1.01), ref.line_decay.R};
    return half_line(x, [&ref, &om](const Vec2& y) { return dot(om, ref.eval2(y)); }, tail);
  };
  if (gradB) {
    out.divergence = [om, gradB, half_line, field_tail](const Vec2& x) {
      // div A_pm = -int omega . curl B; 2D curl of scalar B is (d2 B, -d1 B)
      TailBound tail = field_tail(x, om);
      tail.C *= 4.0;  // grad B certificate, one decay order stronger in practice
      return -half_line(x, [&gradB, &om](const Vec2& y) {
        Vec2 g = gradB(y);
        return om[0] * g[1] - om[1] * g[0];
      }, tail);
    };
  } else {
    auto Afun = out.A;
    out.divergence = [Afun](const Vec2& x) {
      const double h = 1e-4;
      return (Afun({x[0] + h, x[1]})[0] - Afun({x[0] - h, x[1]})[0] +
              Afun({x[0], x[1] + h})[1] - Afun({x[0], x[1] - h})[1]) /
             (2.0 * h);
    };
  }
  return out;
}

// --- frame machinery ------------------------------------------------------------

namespace {

// 4th-order cumulative integral of samples f (spacing h): F[k] = int_{x0}^{xk}
std::vector<double> cumulative_integral(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<double> F(n, 0.0);
  if (n < 4) {  // trapezoid fallback
    for (int k = 1; k < n; ++k) F[k] = F[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return F;
  }
  for (int k = 0; k + 1 < n; ++k) {
    double panel;
    if (k == 0)
      panel = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    else if (k + 2 >= n)
      panel = h / 24.0 * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    else
      panel = h / 24.0 * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
    F[k + 1] = F[k] + panel;
  }
  return F;
}

// returns phi -> -i d(phi) by centered 4th-order differences, zero extension
void fd4_derivative(const FrameField& phi, int axis, FrameField& out) {
  const LineFrame& fr = phi.frame;
  const double h = axis == 0 ? fr.h_s : fr.h_d;
  const cplx mi(0.0, -1.0);
  for (int c = 0; c < phi.components; ++c)
    for (int j = 0; j < fr.n_d; ++j)
      for (int i = 0; i < fr.n_s; ++i) {
        auto get = [&](int jj, int ii) -> cplx {
          if (jj < 0 || jj >= fr.n_d || ii < 0 || ii >= fr.n_s) return 0.0;
          return phi.at(jj, ii, c);
        };
        cplx d;
        if (axis == 0)
          d = (-get(j, i + 2) + 8.0 * get(j, i + 1) - 8.0 * get(j, i - 1) + get(j, i - 2)) /
              (12.0 * h);
        else
          d = (-get(j + 2, i) + 8.0 * get(j + 1, i) - 8.0 * get(j - 1, i) + get(j - 2, i)) /
              (12.0 * h);
        out.at(j, i, c) = mi * d;
      }
}

}  // namespace

KOperatorSpec make_k_operator(const FieldModel& Bmodel, const Vec2& omega, int sign,
                              const LineFrame& frame, double mass, bool pauli) {
  if (Bmodel.dim != 2) throw ConfigError("make_k_operator: 2D only");
  KOperatorSpec K;
  K.frame = frame;
  K.mass = mass;
  K.pauli = pauli;
  K.sign = sign >= 0 ? +1 : -1;
  K.A.resize(frame.node_count());
  K.divA.resize(frame.node_count());
  K.B.resize(frame.node_count());

  const Vec2 om = frame.omega;
  // extended s-lattice so half-line integrals reach the negligible region
  double margin = Bmodel.support_radius ? *Bmodel.support_radius + 2.0
                                        : std::max(2.0 * Bmodel.decay.R_decay, 12.0);
  double S_half = std::abs(frame.s(frame.n_s - 1)) + margin;
  int n_ext = static_cast<int>(std::ceil(2.0 * S_half / frame.h_s)) + 1;
  double s0 = -0.5 * (n_ext - 1) * frame.h_s;
  int i_off = static_cast<int>(std::round((frame.s(0) - s0) / frame.h_s));

  parallel_for(frame.n_d, [&](std::size_t jj) {
    int j = static_cast<int>(jj);
    Vec2 tilde = perp(om);
    double d = frame.d(j);
    std::vector<double> brow(n_ext), crow(n_ext);
    for (int i = 0; i < n_ext; ++i) {
      Vec2 x = (s0 + i * frame.h_s) * om + d * tilde;
      brow[i] = Bmodel.eval2(x);
      if (Bmodel.gradB2) {
        Vec2 g = Bmodel.gradB2(x);
        crow[i] = om[0] * g[1] - om[1] * g[0];  // omega . curl B
      }
    }
    auto Bcum = cumulative_integral(brow, frame.h_s);
    auto Ccum = cumulative_integral(crow, frame.h_s);
    double Btot = Bcum[n_ext - 1], Ctot = Ccum[n_ext - 1];
    for (int i = 0; i < frame.n_s; ++i) {
      std::size_t n = frame.flat(j, i);
      int ie = i + i_off;
      // int_0^{+inf} f(x + omega s) ds = total - prefix ; minus sign flips it
      double I = K.sign > 0 ? (Btot - Bcum[ie]) : -Bcum[ie];
      double Ic = K.sign > 0 ? (Ctot - Ccum[ie]) : -Ccum[ie];
      K.A[n] = Vec2{om[1] * I, -om[0] * I};
      K.divA[n] = -Ic;
      K.B[n] = brow[ie];
    }
  });
  if (!Bmodel.gradB2) {
    // fall back to differencing the sampled adapted potential
    for (int j = 0; j < frame.n_d; ++j)
      for (int i = 0; i < frame.n_s; ++i) {
        auto get = [&](int jj, int ii, int c) {
          jj = std::clamp(jj, 0, frame.n_d - 1);
          ii = std::clamp(ii, 0, frame.n_s - 1);
          return K.A[frame.flat(jj, ii)][c];
        };
        // s-axis derivative of the omega-component is 0 (transversality);
        // divergence in frame coordinates: d_s (A.omega) + d_d (A.tilde)
        Vec2 tilde = perp(om);
        double dAd = (get(j + 1, i, 0) * tilde[0] + get(j + 1, i, 1) * tilde[1] -
                      get(j - 1, i, 0) * tilde[0] - get(j - 1, i, 1) * tilde[1]) /
                     (2.0 * frame.h_d);
        double dAs = (dot({get(j, i + 1, 0), get(j, i + 1, 1)}, om) -
                      dot({get(j, i - 1, 0), get(j, i - 1, 1)}, om)) /
                     (2.0 * frame.h_s);
        K.divA[frame.flat(j, i)] = dAs + dAd;
      }
  }
  return K;
}

FrameField apply_K(const KOperatorSpec& K, const FrameField& psi) {
  if (!(psi.frame.n_s == K.frame.n_s && psi.frame.n_d == K.frame.n_d))
    throw ConfigError("apply_K: frame shape mismatch");
  if (K.pauli && psi.components != 2)
    throw ConfigError("apply_K: Pauli mode needs a 2-component field");
  const LineFrame& fr = K.frame;
  FrameField out = make_frame_field(fr, psi.components);
  FrameField ps = make_frame_field(fr, psi.components);
  FrameField pd = make_frame_field(fr, psi.components);
  fd4_derivative(psi, 0, ps);  // p psi, frame s-axis
  fd4_derivative(psi, 1, pd);  // p psi, frame d-axis

  // A psi products, then p . (A psi)
  FrameField As = make_frame_field(fr, psi.components);
  FrameField Ad = make_frame_field(fr, psi.components);
  Vec2 tilde = perp(fr.omega);
  for (int c = 0; c < psi.components; ++c)
    for (int j = 0; j < fr.n_d; ++j)
      for (int i = 0; i < fr.n_s; ++i) {
        std::size_t n = fr.flat(j, i);
        cplx p = psi.at(j, i, c);
        As.at(j, i, c) = dot(K.A[n], fr.omega) * p;
        Ad.at(j, i, c) = dot(K.A[n], tilde) * p;
      }
  FrameField dAs = make_frame_field(fr, psi.components);
  FrameField dAd = make_frame_field(fr, psi.components);
  fd4_derivative(As, 0, dAs);
  fd4_derivative(Ad, 1, dAd);

  const double im = 1.0 / (2.0 * K.mass);
  for (int c = 0; c < psi.components; ++c) {
    double spin_sign = (c == 0) ? 1.0 : -1.0;  // sigma3
    for (int j = 0; j < fr.n_d; ++j)
      for (int i = 0; i < fr.n_s; ++i) {
        std::size_t n = fr.flat(j, i);
        cplx Ap = dot(K.A[n], fr.omega) * ps.at(j, i, c) + dot(K.A[n], tilde) * pd.at(j, i, c);
        cplx pA = dAs.at(j, i, c) + dAd.at(j, i, c);
        cplx val = -(Ap + pA) + dot(K.A[n], K.A[n]) * psi.at(j, i, c);
        if (K.pauli) val -= spin_sign * K.B[n] * psi.at(j, i, c);
        out.at(j, i, c) = im * val;
      }
  }
  return out;
}

// --- (a1) forward and inverse ----------------------------------------------------

namespace {

// time-integrated K coefficients: for each node, int over t of coeff(x+omega t)
// for t in (-inf, 0] (sign -1) or [0, inf) (sign +1); these are cumulative
// integrals along the s-axis of the frame.
struct IntegratedK {
  std::vector<Vec2> vecA;      // int A_pm(x + omega t) dt
  std::vector<double> divA;    // int div A_pm dt
  std::vector<double> A2;      // int (A_pm)^2 dt
  std::vector<double> B;       // int B dt
};

IntegratedK integrate_k_coeffs(const KOperatorSpec& K, int time_sign) {
  const LineFrame& fr = K.frame;
  IntegratedK out;
  out.vecA.resize(fr.node_count());
  out.divA.resize(fr.node_count());
  out.A2.resize(fr.node_count());
  out.B.resize(fr.node_count());
  std::vector<double> a1(fr.n_s), a2(fr.n_s), dv(fr.n_s), a2sq(fr.n_s), bb(fr.n_s);
  for (int j = 0; j < fr.n_d; ++j) {
    for (int i = 0; i < fr.n_s; ++i) {
      std::size_t n = fr.flat(j, i);
      a1[i] = K.A[n][0];
      a2[i] = K.A[n][1];
      dv[i] = K.divA[n];
      a2sq[i] = dot(K.A[n], K.A[n]);
      bb[i] = K.B[n];
    }
    auto c1 = cumulative_integral(a1, fr.h_s);
    auto c2 = cumulative_integral(a2, fr.h_s);
    auto cd = cumulative_integral(dv, fr.h_s);
    auto cq = cumulative_integral(a2sq, fr.h_s);
    auto cb = cumulative_integral(bb, fr.h_s);
    for (int i = 0; i < fr.n_s; ++i) {
      std::size_t n = fr.flat(j, i);
      if (time_sign > 0) {
        out.vecA[n] = Vec2{c1[fr.n_s - 1] - c1[i], c2[fr.n_s - 1] - c2[i]};
        out.divA[n] = cd[fr.n_s - 1] - cd[i];
        out.A2[n] = cq[fr.n_s - 1] - cq[i];
        out.B[n] = cb[fr.n_s - 1] - cb[i];
      } else {
        out.vecA[n] = Vec2{c1[i], c2[i]};
        out.divA[n] = cd[i];
        out.A2[n] = cq[i];
        out.B[n] = cb[i];
      }
    }
  }
  return out;
}

// apply the time-integrated K to a fixed field phi (p phi computed once)
FrameField apply_integrated_k(const IntegratedK& IK, const KOperatorSpec& K,
                              const FrameField& phi) {
  const LineFrame& fr = K.frame;
  FrameField out = make_frame_field(fr, phi.components);
  FrameField ps = make_frame_field(fr, phi.components);
  FrameField pd = make_frame_field(fr, phi.components);
  fd4_derivative(phi, 0, ps);
  fd4_derivative(phi, 1, pd);
  Vec2 tilde = perp(fr.omega);
  const double im = 1.0 / (2.0 * K.mass);
  for (int c = 0; c < phi.components; ++c) {
    double spin_sign = (c == 0) ? 1.0 : -1.0;
    for (int j = 0; j < fr.n_d; ++j)
      for (int i = 0; i < fr.n_s; ++i) {
        std::size_t n = fr.flat(j, i);
        cplx Ap = dot(IK.vecA[n], fr.omega) * ps.at(j, i, c) +
                  dot(IK.vecA[n], tilde) * pd.at(j, i, c);
        cplx val = -2.0 * Ap + cplx(0.0, 1.0) * IK.divA[n] * phi.at(j, i, c) +
                   IK.A2[n] * phi.at(j, i, c);
        if (K.pauli) val -= spin_sign * IK.B[n] * phi.at(j, i, c);
        out.at(j, i, c) = im * val;
      }
  }
  return out;
}

}  // namespace

A0ForwardResult a0_forward_rhs(const ScalarPotentialModel* A0, const FieldModel& B,
                               const Vec2& omega, const FrameField& psi,
                               const VectorPotential& reference_gauge, double mass, bool pauli) {
  const LineFrame& fr = psi.frame;
  A0ForwardResult res;
  res.rhs = make_frame_field(fr, psi.components);
  res.k_terms = make_frame_field(fr, psi.components);
  res.a.resize(fr.n_d);

  // a(omega, x) per transverse row (s-independent)
  Vec2 tilde = perp(fr.omega);
  parallel_for(fr.n_d, [&](std::size_t j) {
    res.a[j] = line_integral_a(reference_gauge, fr.omega, fr.d(static_cast<int>(j)) * tilde);
  });

  // X-ray of A0 per row
  std::vector<double> xray_a0(fr.n_d, 0.0);
  if (A0) {
    parallel_for(fr.n_d, [&](std::size_t j) {
      Vec2 x = fr.d(static_cast<int>(j)) * tilde;
      TailBound tail{A0->decay.C * std::pow(2.0, A0->decay.mu) * (1.0 + std::abs(fr.d(static_cast<int>(j)))),
                     A0->decay.mu, std::max(1.0, 2.0 * A0->decay.R_decay)};
      auto r = integrate_real_line(
          [&](double t) { return A0->V2(x + t * fr.omega); }, tail, {});
      xray_a0[j] = r.value;
    });
  }

  const bool have_B = B.label != "zero";
  FrameField kminus_term = make_frame_field(fr, psi.components);
  FrameField kplus_term = make_frame_field(fr, psi.components);
  if (have_B) {
    KOperatorSpec Km = make_k_operator(B, fr.omega, -1, fr, mass, pauli);
    KOperatorSpec Kp = make_k_operator(B, fr.omega, +1, fr, mass, pauli);
    IntegratedK IKm = integrate_k_coeffs(Km, -1);
    IntegratedK IKp = integrate_k_coeffs(Kp, +1);
    // K_- acts on psi; K_+ acts on e^{ia} psi
    kminus_term = apply_integrated_k(IKm, Km, psi);
    FrameField eia_psi = make_frame_field(fr, psi.components);
    for (int c = 0; c < psi.components; ++c)
      for (int j = 0; j < fr.n_d; ++j) {
        cplx ph = std::polar(1.0, res.a[j]);
        for (int i = 0; i < fr.n_s; ++i) eia_psi.at(j, i, c) = ph * psi.at(j, i, c);
      }
    kplus_term = apply_integrated_k(IKp, Kp, eia_psi);
  }

  const cplx mi(0.0, -1.0);
  for (int c = 0; c < psi.components; ++c)
    for (int j = 0; j < fr.n_d; ++j) {
      cplx ph = std::polar(1.0, res.a[j]);
      for (int i = 0; i < fr.n_s; ++i) {
        cplx val = mi * ph * xray_a0[j] * psi.at(j, i, c);
        cplx kterm = mi * ph * kminus_term.at(j, i, c) + mi * kplus_term.at(j, i, c);
        res.k_terms.at(j, i, c) = kterm;
        res.rhs.at(j, i, c) = val + kterm;
      }
    }
  return res;
}

A0XraySlice extract_a0_xray(const A0ForwardResult& limit, const FieldModel& B, const Vec2& omega,
                            const FrameField& psi, const VectorPotential& reference_gauge,
                            double mass, bool pauli, double mask_threshold) {
  const LineFrame& fr = psi.frame;
  A0XraySlice out;
  out.omega = fr.omega;
  out.offset_start = fr.d(0);
  out.offset_step = fr.h_d;
  out.values.assign(fr.n_d, 0.0);
  out.mask.assign(fr.n_d, false);

  // recompute the K-terms (they depend on B but not on A0) and subtract
  A0ForwardResult pure_k = a0_forward_rhs(nullptr, B, omega, psi, reference_gauge, mass, pauli);
  double psi_max = 0.0;
  for (const cplx& z : psi.v) psi_max = std::max(psi_max, std::abs(z));
  const double thr = mask_threshold * psi_max;

  for (int j = 0; j < fr.n_d; ++j) {
    cplx ph = std::polar(1.0, pure_k.a[j]);
    double wsum = 0.0, acc = 0.0;
    for (int i = 0; i < fr.n_s; ++i)
      for (int c = 0; c < psi.components; ++c) {
        cplx p = psi.at(j, i, c);
        if (std::abs(p) < thr) continue;
        cplx x = (limit.rhs.at(j, i, c) - pure_k.k_terms.at(j, i, c)) / (cplx(0.0, -1.0) * ph * p);
        double w = std::norm(p);
        acc += w * x.real();
        wsum += w;
      }
    if (wsum > 0.0) {
      out.values[j] = acc / wsum;
      out.mask[j] = true;
    }
  }
  return out;
}

SampledField reconstruct_A0(const std::vector<A0XraySlice>& slices, int n_pixels, double extent) {
  if (slices.empty()) throw ConfigError("reconstruct_A0: no slices");
  Sinogram s;
  s.n_angles = static_cast<int>(slices.size());
  s.n_offsets = static_cast<int>(slices.front().values.size());
  s.offset_start = slices.front().offset_start;
  s.offset_step = slices.front().offset_step;
  s.angle_start = std::atan2(slices.front().omega[1], slices.front().omega[0]);
  s.angle_step =
      s.n_angles > 1 ? std::atan2(slices[1].omega[1], slices[1].omega[0]) - s.angle_start : pi;
  s.values.resize(static_cast<std::size_t>(s.n_angles) * s.n_offsets);
  for (int i = 0; i < s.n_angles; ++i) {
    if (static_cast<int>(slices[i].values.size()) != s.n_offsets)
      throw ConfigError("reconstruct_A0: inconsistent slices");
    for (int j = 0; j < s.n_offsets; ++j) s.at(i, j) = slices[i].values[j];
  }
  return fbp_invert(s, n_pixels, extent);
}

}  // namespace gaugekit
