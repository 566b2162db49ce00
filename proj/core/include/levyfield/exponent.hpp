#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levyfield {

/// Levy-Khintchine triplet (drift a, diffusion A = Q'Q, jump measure nu).
/// The jump density is either radial (argument ||y||, any dimension) or a
/// signed one-dimensional density (argument y, d = 1 only); it is integrated
/// numerically over [inner, outer] truncation radii with the compensator
/// split at ||y|| = 1.
struct LevyTriplet {
  std::vector<double> drift;             // size d
  std::vector<double> diffusion;         // row-major d x d, symmetric PSD
  std::function<double(double)> jump_density;
  bool radial_density = true;
  double jump_inner = 1e-10;
  double jump_outer = 1e6;
};

struct PoissonAtom {
  std::vector<double> y;
  double weight;
};

enum class ExponentFamily {
  brownian,
  isotropic_stable,
  asymmetric_cauchy,
  compound_poisson,
  log_squared,
  numeric_triplet,
  fractional,
};

std::string family_name(ExponentFamily f);

/// A Levy characteristic exponent psi: R^d -> C. Immutable after
/// construction; evaluation is pure and thread-safe.
class ExponentModel {
public:
  static ExponentModel brownian(std::vector<double> diffusion, int d);
  static ExponentModel brownian_identity(int d);
  static ExponentModel isotropic_stable(double alpha, int d);
  static ExponentModel asymmetric_cauchy(double h);  // d = 1, psi = |xi| + i h xi log|xi|
  static ExponentModel compound_poisson(std::vector<PoissonAtom> atoms,
                                        std::vector<double> drift_tilde);
  /// Prop-2.2-style construction: d = 1,
  /// psi(xi) = 2 * int_0^{1/e} (1 - cos(xi x)) log(1/x) dx / x,
  /// real, even, growing like (log xi)^2.
  static ExponentModel log_squared();
  static ExponentModel numeric_triplet(LevyTriplet triplet, int d,
                                       std::optional<bool> rl_override = std::nullopt);

  std::complex<double> eval(const std::vector<double>& xi) const;
  /// psi at xi = r * e_1; for the radial families this is psi on the whole
  /// shell of radius r.
  std::complex<double> eval_radial(double r) const;

  int dimension() const { return d_; }
  bool symmetric() const { return symmetric_; }
  bool satisfies_rl() const { return rl_; }
  ExponentFamily family() const;

  // parameter accessors used by serialization and the family-specific
  // shortcuts (stable alpha under fractional powers, etc.)
  double stable_alpha() const;
  double cauchy_h() const;
  double fractional_tau() const;
  const ExponentModel& fractional_base() const;
  const std::vector<double>& brownian_diffusion() const;
  const std::vector<PoissonAtom>& poisson_atoms() const;
  const std::vector<double>& poisson_drift() const;

private:
  struct Brownian {
    std::vector<double> A;
    double min_eig;
  };
  struct Stable {
    double alpha;
  };
  struct Cauchy {
    double h;
  };
  struct Poisson {
    std::vector<PoissonAtom> atoms;
    std::vector<double> drift;
    double total_mass;
  };
  struct LogSquared {};
  struct Triplet {
    std::shared_ptr<const LevyTriplet> t;
  };
  struct Fractional {
    std::shared_ptr<const ExponentModel> base;
    double tau;
  };
  using Params =
      std::variant<Brownian, Stable, Cauchy, Poisson, LogSquared, Triplet, Fractional>;

  ExponentModel(int d, bool symmetric, bool rl, Params p)
      : d_(d), symmetric_(symmetric), rl_(rl), params_(std::move(p)) {}

  friend ExponentModel fractional_power(const ExponentModel&, double);

  int d_;
  bool symmetric_;
  bool rl_;
  Params params_;
};

/// psi^tau via subordination by a tau-stable subordinator. Requires a
/// symmetric base (real psi >= 0); isotropic_stable(alpha) maps to
/// isotropic_stable(alpha*tau), nested fractional powers collapse by
/// multiplying exponents.
ExponentModel fractional_power(const ExponentModel& model, double tau);

struct RadialGridSpec {
  double max_radius = 256.0;
  int shells = 8;       // dyadic, radii max_radius * 2^-(shells-1-k)
  int directions = 64;  // per shell; d = 1 uses +/-1
};

enum class Trend { increasing, flat, decreasing };

struct StructureReport {
  std::vector<double> shell_radii;
  std::vector<double> bochner_per_shell;    // sup |psi|/(1+r^2) per shell
  std::vector<double> min_re_psi_per_shell; // RL evidence
  double min_abs_psi_off_zero = 0.0;
  double bochner_ratio = 0.0;               // overall sup
  double hermitian_residual = 0.0;          // max |psi(xi) - conj(psi(-xi))|
  double max_imag_part = 0.0;               // symmetry evidence
  Trend rl_trend = Trend::flat;
};

/// Structural diagnostics on dyadic shells: non-degeneracy, Bochner ratio,
/// growth at infinity, Hermitian symmetry. Report-only; never throws on
/// degenerate models.
StructureReport diagnose(const ExponentModel& model, const RadialGridSpec& grid = {});

/// Deterministic direction set on the unit sphere (d <= 3).
std::vector<std::vector<double>> unit_directions(int d, int count);

}  // namespace levyfield
