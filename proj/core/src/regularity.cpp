#include "levyfield/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "levyfield/errors.hpp"

namespace levyfield {

VariogramTable variogram_exact(const CovarianceOracle& oracle, Direction direction,
                               const std::vector<double>& lags,
                               const std::vector<double>& base_times) {
  if (lags.size() < 8) throw std::invalid_argument("variogram: need at least 8 lags");
  if (base_times.empty()) throw std::invalid_argument("variogram: empty base grid");
  VariogramTable t;
  t.direction = direction;
  t.empirical = false;
  for (double lag : lags) {
    if (!(lag > 0.0)) throw std::invalid_argument("variogram: lags must be positive");
    double sup = 0.0;
    for (double base : base_times) {
      const double v = direction == Direction::time
                           ? oracle.increment_second_moment_time(base, lag)
                           : oracle.increment_second_moment_space(base, lag);
      sup = std::max(sup, v);
    }
    t.lags.push_back(lag);
    t.values.push_back(sup);
    t.std_errors.push_back(0.0);
  }
  return t;
}

namespace {

// grid spacing of a uniform axis; throws when not uniform
double uniform_step(const std::vector<double>& axis, const char* what) {
  if (axis.size() < 2) throw std::invalid_argument(std::string(what) + ": grid too short");
  const double h = axis[1] - axis[0];
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (std::abs(axis[i] - axis[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument(std::string(what) + ": grid must be uniform");
  return h;
}

}  // namespace

VariogramTable variogram_empirical(const FieldSample& sample, Direction direction,
                                   const std::vector<double>& lags) {
  if (lags.size() < 8) throw std::invalid_argument("variogram: need at least 8 lags");
  const std::size_t nt = sample.time_grid.size();
  const std::size_t nx = sample.space_grid.size();
  const int reps = sample.replicas;
  if (reps < 8) throw std::invalid_argument("variogram: need at least 8 replicas");

  std::vector<double> axis;
  if (direction == Direction::time) {
    axis = sample.time_grid;
  } else {
    for (const auto& p : sample.space_grid) axis.push_back(p[0]);
  }
  const double step = uniform_step(axis, "variogram");
  const double extent = axis.back() - axis.front();

  VariogramTable t;
  t.direction = direction;
  t.empirical = true;
  for (double lag : lags) {
    if (!(lag > 0.0)) throw std::invalid_argument("variogram: lags must be positive");
    if (lag > extent + 1e-12)
      throw std::invalid_argument("variogram: lag exceeds the grid extent");
    const int offset = static_cast<int>(std::lround(lag / step));
    if (offset < 1 || std::abs(offset * step - lag) > 1e-6 * std::max(1.0, lag))
      throw std::invalid_argument("variogram: lag is not a grid multiple");

    // per-base replicate means; base = (time index, space index) pairs
    std::vector<std::vector<double>> per_base;  // [base][replica] squared increment
    if (direction == Direction::time) {
      for (std::size_t i = 0; i + offset < nt; ++i)
        for (std::size_t x = 0; x < nx; ++x) {
          std::vector<double> sq(reps);
          for (int r = 0; r < reps; ++r) {
            const double d = sample.value(r, static_cast<int>(i + offset), static_cast<int>(x)) -
                             sample.value(r, static_cast<int>(i), static_cast<int>(x));
            sq[r] = d * d;
          }
          per_base.push_back(std::move(sq));
        }
    } else {
      for (std::size_t x = 0; x + offset < nx; ++x)
        for (std::size_t i = 0; i < nt; ++i) {
          if (sample.time_grid[i] <= 0.0) continue;  // deterministic zero row
          std::vector<double> sq(reps);
          for (int r = 0; r < reps; ++r) {
            const double d = sample.value(r, static_cast<int>(i), static_cast<int>(x + offset)) -
                             sample.value(r, static_cast<int>(i), static_cast<int>(x));
            sq[r] = d * d;
          }
          per_base.push_back(std::move(sq));
        }
    }
    if (per_base.empty()) throw std::invalid_argument("variogram: no admissible base points");

    const std::size_t nb = per_base.size();
    std::vector<double> base_sum(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b)
      for (int r = 0; r < reps; ++r) base_sum[b] += per_base[b][r];
    double sup = 0.0;
    for (std::size_t b = 0; b < nb; ++b) sup = std::max(sup, base_sum[b] / reps);

    // delete-one-replica jackknife of the sup statistic
    double jk_mean = 0.0;
    std::vector<double> jk(reps);
    for (int r = 0; r < reps; ++r) {
      double s = 0.0;
      for (std::size_t b = 0; b < nb; ++b)
        s = std::max(s, (base_sum[b] - per_base[b][r]) / (reps - 1));
      jk[r] = s;
      jk_mean += s;
    }
    jk_mean /= reps;
    double var = 0.0;
    for (int r = 0; r < reps; ++r) var += (jk[r] - jk_mean) * (jk[r] - jk_mean);
    var *= static_cast<double>(reps - 1) / reps;

    t.lags.push_back(lag);
    t.values.push_back(sup);
    t.std_errors.push_back(std::sqrt(std::max(0.0, var)));
  }
  return t;
}

namespace {

struct LogFit {
  double slope = 0.0;
  double stderr_ = 0.0;
};

LogFit weighted_loglog(const std::vector<double>& lags, const std::vector<double>& values,
                       const std::vector<double>& errs, std::size_t count) {
  // smallest `count` lags; tables are built smallest-first or not, so sort
  std::vector<std::size_t> order(lags.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lags[a] < lags[b]; });
  order.resize(std::min(count, order.size()));

  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t idx : order) {
    if (!(values[idx] > 0.0))
      throw std::invalid_argument("fit_exponent: non-positive variogram value at a small lag");
    const double x = std::log(lags[idx]);
    const double y = std::log(values[idx]);
    // weight by inverse squared relative error when available
    double w = 1.0;
    if (errs[idx] > 0.0) {
      const double rel = errs[idx] / values[idx];
      w = 1.0 / (rel * rel + 1e-6);
    }
    sw += w;
    swx += w * x;
    swy += w * y;
    swxx += w * x * x;
    swxy += w * x * y;
  }
  LogFit f;
  const double denom = sw * swxx - swx * swx;
  f.slope = (sw * swxy - swx * swy) / std::max(denom, 1e-300);
  // residual-based stderr
  double rss = 0.0, wsum = 0.0;
  const double xbar = swx / sw, ybar = swy / sw;
  for (std::size_t idx : order) {
    const double x = std::log(lags[idx]);
    const double y = std::log(values[idx]);
    double w = 1.0;
    if (errs[idx] > 0.0) {
      const double rel = errs[idx] / values[idx];
      w = 1.0 / (rel * rel + 1e-6);
    }
    const double r = y - ybar - f.slope * (x - xbar);
    rss += w * r * r;
    wsum += w;
  }
  const double dof = std::max(1.0, static_cast<double>(order.size()) - 2.0);
  f.stderr_ = std::sqrt((rss / dof) / std::max(denom / sw, 1e-300) * (wsum / sw));
  return f;
}

}  // namespace

ExponentFit fit_exponent(const VariogramTable& table) {
  if (table.lags.size() < 8) throw std::invalid_argument("fit_exponent: need at least 8 lags");
  ExponentFit fit;
  const LogFit main = weighted_loglog(table.lags, table.values, table.std_errors, 6);
  fit.slope = main.slope;
  fit.slope_stderr = main.stderr_;
  fit.exponent = 0.5 * main.slope;
  fit.ci = 1.96 * 0.5 * main.stderr_;
  const LogFit small = weighted_loglog(table.lags, table.values, table.std_errors, 4);
  fit.small_lag_exponent = 0.5 * small.slope;
  fit.small_lag_ci = 1.96 * 0.5 * small.stderr_;

  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < table.lags.size(); ++i)
    samples.emplace_back(table.lags[i], table.values[i]);
  bool monotone = true;
  std::vector<std::size_t> order(table.lags.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return table.lags[a] < table.lags[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    monotone = monotone && table.values[order[i]] >= table.values[order[i - 1]] * 0.9;
  if (samples.size() >= 12) fit.lemma_route = index_from_integrability(samples, monotone);
  return fit;
}

namespace {

DirectionVerdict direction_verdict(double predicted, double pred_lo, double pred_hi,
                                   const IndexEstimate& index,
                                   const std::optional<ExponentFit>& fit) {
  DirectionVerdict v;
  v.predicted_hi = predicted;
  v.predicted_lo_bracket = pred_lo;
  v.predicted_hi_bracket = pred_hi;
  // not-Holder exactly when the index bracket includes 0
  v.holder = index.lo > 1e-12 && !index.capped_low;
  if (fit.has_value()) {
    v.fitted = fit->exponent;
    v.fitted_ci = fit->ci;
    const double slack = fit->ci + (pred_hi - pred_lo) + 0.05;
    v.agreement = std::abs(fit->exponent - predicted) <= slack;
    if (!v.holder) {
      // the slope route must also see a vanishing exponent
      v.high_confidence = fit->small_lag_exponent - fit->small_lag_ci <= 0.0;
    } else {
      v.high_confidence = v.agreement;
    }
  }
  return v;
}

}  // namespace

RegularityVerdict classify(const IndexReport& report, const std::optional<ExponentFit>& time_fit,
                           const std::optional<ExponentFit>& space_fit) {
  if (!report.kernel.has_value())
    throw std::invalid_argument("classify: index report carries no kernel");
  RegularityVerdict v;
  v.kernel = *report.kernel;
  const IndexEstimate& ih = report.ind_h;
  const IndexEstimate& il = report.ind_l;
  if (v.kernel == KernelKind::heat) {
    v.time = direction_verdict(0.5 * ih.value, 0.5 * ih.lo, 0.5 * ih.hi, ih, time_fit);
  } else {
    v.time = direction_verdict(std::min(0.5, ih.value), std::min(0.5, ih.lo),
                               std::min(0.5, ih.hi), ih, time_fit);
  }
  v.space = direction_verdict(il.value, il.lo, il.hi, il, space_fit);
  return v;
}

std::string to_csv(const VariogramTable& table) {
  std::string out = "lag,value,stderr\n";
  char buf[128];
  for (std::size_t i = 0; i < table.lags.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", table.lags[i], table.values[i],
                  table.std_errors[i]);
    out += buf;
  }
  return out;
}

namespace {

nlohmann::json dir_json(const DirectionVerdict& v) {
  nlohmann::json j;
  j["predicted_exponent_hi"] = v.predicted_hi;
  j["predicted_bracket"] = {v.predicted_lo_bracket, v.predicted_hi_bracket};
  j["classification"] = v.holder ? "holder-with-exponent-range" : "not-holder";
  j["high_confidence"] = v.high_confidence;
  if (v.fitted.has_value()) {
    j["fitted_exponent"] = *v.fitted;
    j["fitted_ci"] = *v.fitted_ci;
    j["agreement"] = v.agreement;
  }
  return j;
}

}  // namespace

std::string to_json_string(const RegularityVerdict& verdict) {
  nlohmann::json j;
  j["schema"] = "levyfield-regularity/1";
  j["kernel"] = kernel_name(verdict.kernel);
  j["time"] = dir_json(verdict.time);
  j["space"] = dir_json(verdict.space);
  return j.dump(2);
}

}  // namespace levyfield
