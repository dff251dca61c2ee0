#pragma once

#include <complex>
#include <vector>

#include "gaugekit/common.hpp"

namespace gaugekit {

// Thin FFTW wrapper: cached plans, complex<double> in/out, any rank <= 3.
// Plan creation is serialized internally; execution is re-entrant.

void dft(const std::vector<int>& dims, std::vector<cplx>& data, int sign);  // sign -1 fwd, +1 inv (unnormalized)
void dft_forward(const std::vector<int>& dims, std::vector<cplx>& data);
void dft_inverse(const std::vector<int>& dims, std::vector<cplx>& data);  // normalized by 1/N

// Angular frequency of DFT bin k on n samples with spacing h (standard
// wrap: k > n/2 negative).
double dft_freq(int k, int n, double h);

// Linear (zero-padded) convolution of two real fields on a common uniform
// grid; `kernel` is evaluated on the lattice of index offsets scaled by h.
// Returns sum_j kernel((i-j)*h) * data[j] * cellVolume at each node i.
std::vector<double> convolve_lattice(const std::vector<int>& dims,
                                     const std::vector<double>& spacing,
                                     const std::vector<double>& data,
                                     const std::function<double(const std::vector<double>&)>& kernel);

}  // namespace gaugekit
