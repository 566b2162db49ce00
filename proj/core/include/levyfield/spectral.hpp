#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace levyfield {

enum class MeasureFamily { riesz_like, gaussian_density, paper_example, finite_uniform, custom };

std::string family_name(MeasureFamily f);

/// Spectral measure of the noise covariance: mu(dxi) = rho(||xi||) dxi plus
/// an optional atom at the origin. Tempered-ness is checked numerically at
/// construction (integrability of (1+r)^-(2d+2) against mu).
class SpectralMeasure {
public:
  static SpectralMeasure riesz_like(double beta, int d);       // rho = (1+r)^-beta
  static SpectralMeasure gaussian_density(int d);              // rho = exp(-r^2/2)
  static SpectralMeasure paper_example();                      // rho = (1+r)^-1, d = 1
  static SpectralMeasure finite_uniform(int d);                // rho = 1 on r <= 1
  static SpectralMeasure custom(std::function<double(double)> rho, int d,
                                std::optional<double> tail_exponent = std::nullopt);

  /// Same measure with an added atom at 0 of the given weight.
  SpectralMeasure with_atom(double weight) const;

  double radial_density(double r) const { return rho_(r); }
  double atom_at_zero() const { return atom_; }
  int dimension() const { return d_; }
  MeasureFamily family() const { return family_; }
  std::optional<double> declared_tail_exponent() const { return tail_exponent_; }
  double riesz_beta() const;

private:
  SpectralMeasure(std::function<double(double)> rho, int d, MeasureFamily fam,
                  std::optional<double> tail, double atom, double beta);

  std::function<double(double)> rho_;
  int d_;
  MeasureFamily family_;
  std::optional<double> tail_exponent_;
  double atom_ = 0.0;
  double beta_ = 0.0;  // riesz_like parameter, kept for serialization
};

/// Partial integrals of a radial integrand against mu up to each cutoff.
struct PartialIntegralSeries {
  std::vector<double> cutoffs;
  std::vector<double> partials;  // cumulative, atom term included
  std::vector<double> errors;    // cumulative per-panel quadrature error
  double atom_term = 0.0;
};

/// Cutoff radii 2^k, k = 0..max_octave (default 40).
std::vector<double> default_cutoff_schedule(int max_octave = 40);

/// int f(||xi||) mu(dxi) truncated at each cutoff, via the radial reduction
/// omega_{d-1} int_0^R f(r) rho(r) r^{d-1} dr + f(0) mu{0} with adaptive
/// Gauss-Legendre panels per octave. f must be nonnegative and finite on
/// every panel. `panel_scale` multiplies the panel count (refinement knob
/// used by the stability property tests).
PartialIntegralSeries integrate_radial(const SpectralMeasure& mu,
                                       const std::function<double(double)>& f,
                                       const std::vector<double>& cutoff_schedule,
                                       int panel_scale = 1);

enum class VerdictKind { convergent, divergent };

struct Verdict {
  VerdictKind kind;
  double value = 0.0;            // Richardson-extrapolated limit (convergent)
  double error = 0.0;            // extrapolation + quadrature error estimate
  double growth_slope = 0.0;     // d log(partial) / d log(cutoff) (divergent)
  double increment_slope = 0.0;  // fitted d ln(increment) / d ln(cutoff)
  bool geometric = false;        // increment slope < -0.2 (strong decay)
  bool low_confidence = false;   // fitted tail exponent within 0.05 of -1
};

/// Classifies a partial-integral series as convergent or divergent from the
/// decay profile of its increments. Convergent requires decaying increments
/// with a Cauchy Richardson extrapolation (rel. 1e-4); logarithmic growth is
/// classified divergent. Throws indeterminate_error when the increments fit
/// neither profile.
Verdict convergence_verdict(const PartialIntegralSeries& series);

/// CSV export: cutoff, partial, err (17 significant digits).
std::string to_csv(const PartialIntegralSeries& series);

}  // namespace levyfield
