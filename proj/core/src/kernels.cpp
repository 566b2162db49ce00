#include "levyfield/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "levyfield/errors.hpp"
#include "levyfield/quadrature.hpp"

namespace levyfield {

std::string kernel_name(KernelKind k) { return k == KernelKind::heat ? "heat" : "wave"; }

Kernel::Kernel(KernelKind kind, ExponentModel exponent)
    : kind_(kind), exponent_(std::move(exponent)) {
  if (kind_ == KernelKind::wave) {
    if (!exponent_.symmetric())
      throw precondition_error("wave kernel requires a symmetric exponent (real psi >= 0)");
    if (!exponent_.satisfies_rl())
      throw precondition_error("wave kernel requires psi -> infinity at infinity");
  }
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

std::complex<double> hat_heat(double t, std::complex<double> psi) {
  return std::exp(-t * psi);
}

double hat_wave(double t, double psi) {
  const double k = std::sqrt(std::max(0.0, psi));
  return t * sinc(t * k);
}

std::complex<double> Kernel::eval_hat(double t, const std::vector<double>& xi) const {
  if (t < 0.0) throw std::invalid_argument("eval_hat: t must be >= 0");
  const auto psi = exponent_.eval(xi);
  if (kind_ == KernelKind::heat) return hat_heat(t, psi);
  return {hat_wave(t, std::max(0.0, psi.real())), 0.0};
}

double ou_variance_factor(double t, double c) {
  if (c < 0.0) throw std::invalid_argument("ou_variance_factor: c must be >= 0");
  if (c * t < 1e-12) return t * (1.0 - 0.5 * c * t);
  return -std::expm1(-c * t) / c;
}

namespace {

std::complex<double> heat_cov_ordered(std::complex<double> psi, double t1, double t2) {
  // t1 <= t2: e^{-(t2-t1) conj(psi)} * (1 - e^{-2 t1 Re psi})/(2 Re psi)
  const double c = 2.0 * std::max(0.0, psi.real());
  return std::exp(-(t2 - t1) * std::conj(psi)) * ou_variance_factor(t1, c);
}

double wave_cov_ordered(double psi, double t1, double t2) {
  // t1 <= t2, psi >= 0, K = sqrt(psi):
  //   C = (1/2K^2) [ t1 cos((t2-t1)K) - (sin((t1+t2)K) - sin((t2-t1)K)) / (2K) ]
  // For small K(t1+t2) the subtraction cancels; the product form
  //   C = int_0^{t1} u (u+dt) sinc(uK) sinc((u+dt)K) du
  // is smooth and handled by one Gauss-Legendre panel.
  const double k = std::sqrt(std::max(0.0, psi));
  const double dt = t2 - t1;
  if (k * (t1 + t2) < 1.0) {
    auto f = [&](double u) { return u * (u + dt) * sinc(u * k) * sinc((u + dt) * k); };
    return quad::panel(f, 0.0, t1, 24);
  }
  const double k2 = 2.0 * k * k;
  return (t1 * std::cos(dt * k) - (std::sin((t1 + t2) * k) - std::sin(dt * k)) / (2.0 * k)) / k2;
}

}  // namespace

std::complex<double> time_covariance(KernelKind kind, std::complex<double> psi, double t1,
                                     double t2) {
  if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("time_covariance: times must be >= 0");
  if (t1 > t2) return std::conj(time_covariance(kind, psi, t2, t1));
  if (t1 == 0.0) return {0.0, 0.0};
  if (kind == KernelKind::heat) {
    if (psi.real() < -1e-12)
      throw std::invalid_argument("time_covariance: heat requires Re psi >= 0");
    return heat_cov_ordered(psi, t1, t2);
  }
  if (std::abs(psi.imag()) > 1e-12 * (std::abs(psi.real()) + 1.0))
    throw std::invalid_argument("time_covariance: wave requires real psi");
  return {wave_cov_ordered(std::max(0.0, psi.real()), t1, t2), 0.0};
}

namespace {
constexpr double kPhaseCap = 32.0;  // decaying oscillations (sinc tails)

// Non-decaying oscillatory factors are replaced by their mean already at
// half a period; keeps the radial integrands smooth for the verdict layer
// at a bounded constant-level cost, never touching tail exponents.
double one_minus_cos_capped(double phase) {
  const double p = std::abs(phase);
  if (p > M_PI) return 1.0;
  if (p < 1e-4) return 0.5 * p * p * (1.0 - p * p / 12.0);
  return 1.0 - std::cos(p);
}
}  // namespace

double kernel_tt_energy(KernelKind kind, std::complex<double> psi, double T) {
  if (kind == KernelKind::heat) return ou_variance_factor(T, 2.0 * std::max(0.0, psi.real()));
  const double pr = std::max(0.0, psi.real());
  const double k = std::sqrt(pr);
  if (2.0 * T * k > kPhaseCap) return T / (2.0 * pr);
  return wave_cov_ordered(pr, T, T);
}

double kernel_increment_energy(KernelKind kind, std::complex<double> psi, double eps, double T) {
  if (eps <= 0.0) return 0.0;
  if (kind == KernelKind::heat) {
    // |1 - e^{-eps psi}|^2 * int_0^T e^{-2 s Re psi} ds
    const double c = std::max(0.0, psi.real());
    const double a = std::expm1(-eps * c);
    const double decay = std::exp(-eps * c);
    const double energy = a * a + 2.0 * decay * one_minus_cos_capped(eps * psi.imag());
    return energy * ou_variance_factor(T, 2.0 * c);
  }
  // wave: (2 sin^2(eps K/2)/K^2) * [T + (sin((2T+eps)K) - sin(eps K))/(2K)]
  const double pr = std::max(0.0, psi.real());
  const double k = std::sqrt(pr);
  if (k < 1e-12) return eps * eps * T;  // hat(t) -> t
  const double front = one_minus_cos_capped(eps * k) / (k * k);
  double bracket = T;
  if (T * k <= M_PI)
    bracket = T + (std::sin((2.0 * T + eps) * k) - std::sin(eps * k)) / (2.0 * k);
  return front * std::max(0.0, bracket);
}

}  // namespace levyfield
