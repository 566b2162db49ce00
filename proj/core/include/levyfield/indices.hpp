#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyfield/kernels.hpp"
#include "levyfield/spectral.hpp"

namespace levyfield {

enum class SpectralWeight { one, abs_psi_pow, norm_pow };

/// Verdict of int w(xi) mu(dxi) / (1 + Re psi(xi)) with w = 1, |psi|^a or
/// ||xi||^(2b). Anisotropic |psi| is direction-averaged over the shell.
/// Indeterminate partial-sum profiles propagate as indeterminate_error.
Verdict weighted_spectral_integral(const ExponentModel& psi, const SpectralMeasure& mu,
                                   SpectralWeight weight, double exponent = 0.0);

/// Dalang's condition: weight = one.
Verdict dalang_verdict(const ExponentModel& psi, const SpectralMeasure& mu);

enum class FractalKind { H, L };

struct IndexEstimate {
  double value = 0.0;
  double lo = 0.0;         // bracket
  double hi = 0.0;
  bool capped_low = false;   // smallest probe already divergent -> 0
  bool capped_high = false;  // 0.99 converges -> 1
  bool low_confidence = false;
};

/// Bisection of the sup-exponent over (0,1): kind H on a in |psi|^a, kind L
/// on b in ||xi||^(2b). Budget: 2 endpoint probes + 8 bisections (bracket
/// ~0.004). Requires a convergent Dalang verdict.
IndexEstimate fractal_index(const ExponentModel& psi, const SpectralMeasure& mu,
                            FractalKind kind);

/// I_R(T): bisection on eta in (0,1) of
///   int_0^T ds int ||xi||^eta |hat(s,xi)|^2 mu(dxi),
/// time integral in closed form. Requires the kernel to lie in the
/// mu-square-integrable class (Dalang-equivalent).
IndexEstimate kernel_space_index(const Kernel& kernel, const SpectralMeasure& mu, double T);

struct KernelTimeIndices {
  IndexEstimate i_h;        // int_0^1 s^{-b} ds int |hat|^2 mu
  IndexEstimate i_h_upper;  // eps-integral of increment energies
  IndexEstimate i_h_lower;  // sup_{r<=eps} variant (monotone envelope)
};

KernelTimeIndices kernel_time_indices(const Kernel& kernel, const SpectralMeasure& mu, double T);

struct IntegrabilityIndex {
  double index = 0.0;
  double stderr_ = 0.0;
  bool lower_bound_only = false;
  bool infinite = false;  // all samples vanish at the probed resolution
};

/// sup{b : sum e^{bk} f_k < infinity} from samples (t_k, f_k) on an
/// exponential lag grid; log-linear fit with a log-lag regressor absorbing
/// polynomial-log factors. `monotone` selects the equality form of the
/// partial-sum criterion (otherwise the estimate is a lower bound).
IntegrabilityIndex index_from_integrability(const std::vector<std::pair<double, double>>& samples,
                                            bool monotone);

struct IndexReport {
  Verdict dalang;
  IndexEstimate ind_h;
  IndexEstimate ind_l;
  std::optional<KernelKind> kernel;
  double horizon = 1.0;
  std::optional<IndexEstimate> i_r;
  std::optional<KernelTimeIndices> time_indices;
  std::string model_id;
  std::string measure_id;
  int bisection_budget = 8;
};

/// Full report: Dalang verdict, both fractal indices, and (when a kernel
/// kind is given) the kernel indices at horizon T.
IndexReport compute_index_report(const ExponentModel& psi, const SpectralMeasure& mu,
                                 std::optional<KernelKind> kernel, double T,
                                 const std::string& model_id = "",
                                 const std::string& measure_id = "");

std::string to_json_string(const IndexReport& report);
std::string csv_header_index_report();
std::string to_csv_row(const IndexReport& report, const std::string& sweep_value = "");

}  // namespace levyfield
