#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levyfield/fieldsim.hpp"
#include "levyfield/indices.hpp"

namespace levyfield {

enum class Direction { time, space };

struct VariogramTable {
  Direction direction = Direction::time;
  std::vector<double> lags;
  std::vector<double> values;      // sup over base points of E|increment|^2
  std::vector<double> std_errors;  // zero in exact mode, jackknife otherwise
  bool empirical = false;
};

/// Exact second-moment variogram from the covariance oracle, sup over the
/// base-time grid. Lags must be positive; a lag beyond the oracle's domain
/// is rejected.
VariogramTable variogram_exact(const CovarianceOracle& oracle, Direction direction,
                               const std::vector<double>& lags,
                               const std::vector<double>& base_times);

/// Empirical variogram: squared increments averaged over replicas per base
/// point, sup over base points, delete-one-replica jackknife errors.
/// Requires uniform grids in the chosen direction; lags are rounded to grid
/// multiples and must not exceed the grid extent.
VariogramTable variogram_empirical(const FieldSample& sample, Direction direction,
                                   const std::vector<double>& lags);

struct ExponentFit {
  double exponent = 0.0;      // slope/2, the L2-increment Holder exponent
  double ci = 0.0;            // 1.96 * stderr(exponent)
  double slope = 0.0;         // log-log slope over the smallest 6 lags
  double slope_stderr = 0.0;
  double small_lag_exponent = 0.0;  // refit on the 4 smallest lags
  double small_lag_ci = 0.0;
  IntegrabilityIndex lemma_route;   // index_from_integrability on the table
};

/// Weighted log-log regression of the variogram over its smallest 6 lags.
/// Throws on non-positive values at the small lags (degenerate table).
ExponentFit fit_exponent(const VariogramTable& table);

struct DirectionVerdict {
  double predicted_hi = 0.0;  // exponent range (0, predicted_hi)
  double predicted_lo_bracket = 0.0;
  double predicted_hi_bracket = 0.0;
  std::optional<double> fitted;
  std::optional<double> fitted_ci;
  bool holder = true;          // not-Holder only when the index bracket includes 0
  bool high_confidence = false;  // slope test agrees (both routes)
  bool agreement = false;        // fitted exponent consistent with prediction
};

struct RegularityVerdict {
  KernelKind kernel = KernelKind::heat;
  DirectionVerdict time;
  DirectionVerdict space;
};

/// Classify a model against the optimal-regularity thresholds: heat time
/// exponent up to ind_H/2, heat space up to ind_L; wave time up to
/// (1/2 ^ ind_H), wave space up to ind_L. Not-Holder is flagged when the
/// corresponding index bracket contains 0; the fitted-slope route must agree
/// for high confidence.
RegularityVerdict classify(const IndexReport& report, const std::optional<ExponentFit>& time_fit,
                           const std::optional<ExponentFit>& space_fit);

std::string to_csv(const VariogramTable& table);
std::string to_json_string(const RegularityVerdict& verdict);

}  // namespace levyfield
