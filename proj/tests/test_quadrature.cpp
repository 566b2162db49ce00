#include <doctest.h>

#include <cmath>

#include "levyfield/fft.hpp"
#include "levyfield/quadrature.hpp"

using namespace levyfield;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  // degree 2n-1 exactness
  auto f = [](double x) { return 5.0 * std::pow(x, 7) - x * x * x + 2.0 * x * x + 1.0; };
  const double got = quad::panel(f, -1.0, 1.0, 4);
  CHECK(got == doctest::Approx(2.0 * (2.0 / 3.0) + 2.0).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature on a peaked integrand") {
  auto f = [](double x) { return 1.0 / (1e-4 + x * x); };
  const double exact = 2.0 * std::atan(1.0 / 1e-2) / 1e-2;
  const auto r = quad::adaptive(f, -1.0, 1.0, 1e-12, 0.0, 30);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("graded panels handle integrable endpoint singularities") {
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  const auto r = quad::graded_lower(f, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("fft round trip and frequencies") {
  std::vector<std::complex<double>> a(16);
  for (int i = 0; i < 16; ++i) a[i] = std::complex<double>(std::sin(0.3 * i), 0.1 * i);
  auto b = a;
  fft(b, false);
  fft(b, true);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(b[i] - a[i]) < 1e-13);

  const auto xi = fft_frequencies(8, 0.5);
  CHECK(xi[0] == 0.0);
  CHECK(xi[1] == doctest::Approx(2.0 * M_PI / 4.0));
  CHECK(xi[7] == doctest::Approx(-2.0 * M_PI / 4.0));
}

TEST_CASE("fft diagonalizes a pure harmonic") {
  const int n = 32;
  std::vector<std::complex<double>> a(n);
  for (int i = 0; i < n; ++i) a[i] = std::cos(2.0 * M_PI * 3.0 * i / n);
  fft(a, false);
  CHECK(std::abs(a[3]) == doctest::Approx(n / 2.0).epsilon(1e-12));
  CHECK(std::abs(a[n - 3]) == doctest::Approx(n / 2.0).epsilon(1e-12));
  for (int k = 0; k < n; ++k)
    if (k != 3 && k != n - 3) CHECK(std::abs(a[k]) < 1e-10);
}
