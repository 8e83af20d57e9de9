#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace decoh {

using cplx = std::complex<double>;

// In-place unnormalized DFT: X_k = sum_j x_j exp(sign * 2 pi i jk/n), sign = -1 forward.
// Safe to call from several threads; plans are cached per (n, sign).
void fft(std::span<cplx> data, int sign);
inline void fft_forward(std::span<cplx> data) { fft(data, -1); }
// Includes the 1/n factor.
void fft_inverse(std::span<cplx> data);

// Angular wavenumbers of the DFT bins for sample spacing d (standard bin order).
std::vector<double> fft_wavenumbers(std::size_t n, double d);

}  // namespace decoh
