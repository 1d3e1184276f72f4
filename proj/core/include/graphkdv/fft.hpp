#pragma once

#include <complex>
#include <vector>

namespace graphkdv {

using cplx = std::complex<double>;

// Unnormalized DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
void fft_forward(std::vector<cplx>& data);
// Inverse including the 1/n factor.
void fft_inverse(std::vector<cplx>& data);

// Angular frequencies matching the DFT ordering for sample spacing d.
std::vector<double> fft_frequencies(int n, double d);

bool is_power_of_two(long n);
int next_power_of_two(long n);

}  // namespace graphkdv
