#include "gaugekit/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace gaugekit {
namespace {

struct PlanKey {
  std::vector<int> dims;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (sign != o.sign) return sign < o.sign;
    return dims < o.dims;
  }
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan> plan_cache;

fftw_plan get_plan(const std::vector<int>& dims, int sign, fftw_complex* buf) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  PlanKey key{dims, sign};
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // planned in-place on the caller's buffer with ESTIMATE: FFTW does not
  // touch the data, and the plan is reusable on any equally aligned buffer
  fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign,
                              FFTW_ESTIMATE);
  plan_cache.emplace(key, p);
  return p;
}

}  // namespace

void dft(const std::vector<int>& dims, std::vector<cplx>& data, int sign) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  if (data.size() != n) throw ConfigError("dft: data size does not match dims");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan p = get_plan(dims, sign, buf);
  fftw_execute_dft(p, buf, buf);
}

void dft_forward(const std::vector<int>& dims, std::vector<cplx>& data) {
  dft(dims, data, FFTW_FORWARD);
}

void dft_inverse(const std::vector<int>& dims, std::vector<cplx>& data) {
  dft(dims, data, FFTW_BACKWARD);
  double scale = 1.0;
  for (int d : dims) scale *= d;
  scale = 1.0 / scale;
  for (auto& v : data) v *= scale;
}

double dft_freq(int k, int n, double h) {
  int kk = (k <= n / 2) ? k : k - n;
  return 2.0 * pi * kk / (n * h);
}

std::vector<double> convolve_lattice(
    const std::vector<int>& dims, const std::vector<double>& spacing,
    const std::vector<double>& data,
    const std::function<double(const std::vector<double>&)>& kernel) {
  const int rank = static_cast<int>(dims.size());
  std::vector<int> pad(rank);
  std::size_t pn = 1;
  for (int a = 0; a < rank; ++a) {
    pad[a] = 2 * dims[a];
    pn *= static_cast<std::size_t>(pad[a]);
  }
  double cell = 1.0;
  for (double h : spacing) cell *= h;

  std::vector<cplx> F(pn, 0.0), K(pn, 0.0);
  // scatter data into the padded box
  std::vector<int> idx(rank, 0);
  std::size_t n = data.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat, pflat = 0;
    for (int a = rank - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % dims[a]);
      rem /= dims[a];
    }
    for (int a = 0; a < rank; ++a) pflat = pflat * pad[a] + idx[a];
    F[pflat] = data[flat];
  }
  // kernel on wrapped offsets
  std::vector<double> z(rank);
  std::vector<int> kidx(rank, 0);
  for (std::size_t pflat = 0; pflat < pn; ++pflat) {
    std::size_t rem = pflat;
    for (int a = rank - 1; a >= 0; --a) {
      kidx[a] = static_cast<int>(rem % pad[a]);
      rem /= pad[a];
    }
    bool in_range = true;
    for (int a = 0; a < rank; ++a) {
      int off = kidx[a] <= pad[a] / 2 ? kidx[a] : kidx[a] - pad[a];
      if (off >= dims[a] || off <= -dims[a]) in_range = false;
      z[a] = off * spacing[a];
    }
    K[pflat] = in_range ? kernel(z) : 0.0;
  }
  dft_forward(pad, F);
  dft_forward(pad, K);
  for (std::size_t i = 0; i < pn; ++i) F[i] *= K[i];
  dft_inverse(pad, F);

  std::vector<double> out(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat, pflat = 0;
    for (int a = rank - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % dims[a]);
      rem /= dims[a];
    }
    for (int a = 0; a < rank; ++a) pflat = pflat * pad[a] + idx[a];
    out[flat] = F[pflat].real() * cell;
  }
  return out;
}

}  // namespace gaugekit
