#pragma once

#include <complex>
#include <vector>

namespace levyfield {

/// In-place iterative radix-2 FFT. Length must be a power of two.
/// Summation order is fixed, so results are bit-identical across runs.
void fft(std::vector<std::complex<double>>& a, bool inverse);

/// Angular grid frequencies 2*pi*k/L for a periodic grid of n points with
/// spacing dx (L = n*dx), in standard FFT bin order (k = 0..n/2, then
/// negative frequencies).
std::vector<double> fft_frequencies(std::size_t n, double dx);

}  // namespace levyfield
