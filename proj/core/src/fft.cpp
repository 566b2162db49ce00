#include "levyfield/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace levyfield {

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft: length must be a nonzero power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

std::vector<double> fft_frequencies(std::size_t n, double dx) {
  std::vector<double> xi(n);
  const double base = 2.0 * M_PI / (static_cast<double>(n) * dx);
  for (std::size_t k = 0; k < n; ++k) {
    const auto sk = static_cast<long long>(k);
    const long long half = static_cast<long long>(n) / 2;
    xi[k] = base * static_cast<double>(sk <= half ? sk : sk - static_cast<long long>(n));
  }
  return xi;
}

}  // namespace levyfield
