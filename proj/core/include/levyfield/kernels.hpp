#pragma once

#include <complex>

#include "levyfield/exponent.hpp"

namespace levyfield {

enum class KernelKind { heat, wave };

std::string kernel_name(KernelKind k);

/// Fourier transform of the fundamental solution:
/// heat e^{-t psi(xi)}, wave t * sinc(t sqrt(psi(xi))).
/// The wave kernel requires a symmetric exponent (real psi >= 0) with
/// psi -> infinity at infinity; rejected at construction.
class Kernel {
public:
  Kernel(KernelKind kind, ExponentModel exponent);

  KernelKind kind() const { return kind_; }
  const ExponentModel& exponent() const { return exponent_; }

  std::complex<double> eval_hat(double t, const std::vector<double>& xi) const;

private:
  KernelKind kind_;
  ExponentModel exponent_;
};

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// hat-kernel at a known exponent value.
std::complex<double> hat_heat(double t, std::complex<double> psi);
double hat_wave(double t, double psi);

/// C(t1,t2) = int_0^{t1^t2} hat(t1-s) conj(hat(t2-s)) ds, in closed form with
/// series branches at the degenerate limits. Hermitian: C(t1,t2) =
/// conj(C(t2,t1)) exactly.
std::complex<double> time_covariance(KernelKind kind, std::complex<double> psi, double t1,
                                     double t2);

/// (1 - e^{-c t}) / c with the c -> 0 limit t; c >= 0.
double ou_variance_factor(double t, double c);

/// int_0^T |hat(s, xi)|^2 ds at a known exponent value; equals the diagonal
/// time covariance. Oscillatory wave terms are averaged beyond an internal
/// phase cap so the result is smooth in psi.
double kernel_tt_energy(KernelKind kind, std::complex<double> psi, double T);

/// int_0^T |hat(s+eps, xi) - hat(s, xi)|^2 ds in closed form, phase-capped
/// like kernel_tt_energy. Nonnegative.
double kernel_increment_energy(KernelKind kind, std::complex<double> psi, double eps, double T);

}  // namespace levyfield
