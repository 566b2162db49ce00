#include "levyfield/indices.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include <json.hpp>

#include "levyfield/errors.hpp"
#include "levyfield/quadrature.hpp"

namespace levyfield {

namespace {

constexpr double kProbeLow = 0.01;
constexpr double kProbeHigh = 0.99;
constexpr int kBisectionBudget = 8;

// Direction set for shell averages; one direction suffices in d = 1 where
// psi(-xi) = conj psi(xi) makes |psi| and Re psi even.
std::vector<std::vector<double>> verdict_directions(const ExponentModel& psi) {
  const int d = psi.dimension();
  if (d == 1) return {{1.0}};
  return unit_directions(d, 16);
}

using RadialFn = std::function<double(double)>;

Verdict radial_verdict(const SpectralMeasure& mu, const RadialFn& f) {
  const auto series = integrate_radial(mu, f, default_cutoff_schedule());
  return convergence_verdict(series);
}

double weight_value(SpectralWeight w, double exponent, double r, double abs_psi) {
  switch (w) {
    case SpectralWeight::one: return 1.0;
    case SpectralWeight::abs_psi_pow: return std::pow(abs_psi, exponent);
    case SpectralWeight::norm_pow: return std::pow(r, exponent);
  }
  return 1.0;
}

// int_0^1 s^{-b} e^{-c s} ds: alternating series for moderate c, Gamma tail
// asymptotics beyond (the incomplete-gamma remainder is < e^{-25}).
double time_weight_heat(double b, double c) {
  if (c <= 25.0) {
    long double sum = 0.0L;
    long double term = 1.0L;  // (-c)^n / n!
    for (int n = 0; n <= 120; ++n) {
      sum += term / (n + 1.0L - b);
      term *= -static_cast<long double>(c) / (n + 1.0L);
      if (std::abs(static_cast<double>(term)) < 1e-18 * (std::abs(static_cast<double>(sum)) + 1.0) &&
          n > 4)
        break;
    }
    return static_cast<double>(sum);
  }
  return std::tgamma(1.0 - b) * std::pow(c, b - 1.0);
}

// int_0^1 s^{2-b} sinc^2(s K) ds = S(b, 2K) / (2 K^2) with
// S(b,y) = sum_{n>=1} (-1)^{n+1} y^{2n} / ((2n)! (2n+1-b)); for large y the
// closed form via int_0^inf s^{-b} cos(ys) ds, oscillatory remainder dropped
// beyond the phase cap.
double time_weight_wave(double b, double psi) {
  const double k = std::sqrt(std::max(0.0, psi));
  const double y = 2.0 * k;
  if (y < 1e-12) return 1.0 / (3.0 - b);
  if (y <= 30.0) {
    long double sum = 0.0L;
    long double pow_term = 1.0L;  // y^{2n} / (2n)!
    const long double y2 = static_cast<long double>(y) * y;
    for (int n = 1; n <= 80; ++n) {
      pow_term *= y2 / ((2.0L * n - 1.0L) * (2.0L * n));
      const long double term = pow_term / (2.0L * n + 1.0L - b);
      sum += (n % 2 ? 1.0L : -1.0L) * term;
      if (std::abs(static_cast<double>(pow_term)) <
              1e-20 * (std::abs(static_cast<double>(sum)) + 1e-30) &&
          n > 4)
        break;
    }
    return static_cast<double>(sum) / (2.0 * k * k);
  }
  const double head = 1.0 / (1.0 - b) -
                      std::tgamma(1.0 - b) * std::sin(0.5 * M_PI * b) * std::pow(y, b - 1.0);
  return head / (2.0 * k * k);
}

struct ProbeOutcome {
  bool convergent;
  bool low_confidence;
};

ProbeOutcome run_probe(const std::function<Verdict()>& probe) {
  try {
    const Verdict v = probe();
    return {v.kind == VerdictKind::convergent, v.low_confidence};
  } catch (const indeterminate_error&) {
    // unclassifiable decay treated as non-convergent with low confidence
    return {false, true};
  }
}

IndexEstimate bisect_index(const std::function<Verdict(double)>& verdict_at) {
  auto probe = [&](double x) { return run_probe([&] { return verdict_at(x); }); };

  IndexEstimate est;
  const ProbeOutcome low = probe(kProbeLow);
  if (!low.convergent) {
    est.value = 0.0;
    est.lo = 0.0;
    est.hi = kProbeLow;
    est.capped_low = true;
    est.low_confidence = low.low_confidence;
    return est;
  }
  const ProbeOutcome high = probe(kProbeHigh);
  if (high.convergent) {
    est.value = 1.0;
    est.lo = kProbeHigh;
    est.hi = 1.0;
    est.capped_high = true;
    est.low_confidence = high.low_confidence;
    return est;
  }
  double a = kProbeLow, b = kProbeHigh;
  bool lowconf = false;
  for (int it = 0; it < kBisectionBudget; ++it) {
    const double mid = 0.5 * (a + b);
    const ProbeOutcome o = probe(mid);
    lowconf = lowconf || o.low_confidence;
    (o.convergent ? a : b) = mid;
  }
  est.value = 0.5 * (a + b);
  est.lo = a;
  est.hi = b;
  if (lowconf) {
    est.low_confidence = true;
    est.lo = std::max(0.0, est.lo - 0.05);
    est.hi = std::min(1.0, est.hi + 0.05);
  }
  return est;
}

void require_dalang(const ExponentModel& psi, const SpectralMeasure& mu, const char* op) {
  const Verdict v = dalang_verdict(psi, mu);
  if (v.kind != VerdictKind::convergent)
    throw precondition_error(std::string(op) +
                             ": Dalang's condition fails (int mu(dxi)/(1+Re psi) diverges); "
                             "no random-field solution exists");
}

}  // namespace

Verdict weighted_spectral_integral(const ExponentModel& psi, const SpectralMeasure& mu,
                                   SpectralWeight weight, double exponent) {
  if (psi.dimension() != mu.dimension())
    throw std::invalid_argument("weighted_spectral_integral: dimension mismatch");
  if ((weight != SpectralWeight::one) && (exponent < 0.0 || exponent > 2.0))
    throw std::invalid_argument("weighted_spectral_integral: exponent out of range");
  const auto dirs = verdict_directions(psi);
  const int d = psi.dimension();
  RadialFn f = [&, dirs, d](double r) {
    double acc = 0.0;
    std::vector<double> xi(d);
    for (const auto& dir : dirs) {
      for (int i = 0; i < d; ++i) xi[i] = r * dir[i];
      const auto p = psi.eval(xi);
      acc += weight_value(weight, exponent, r, std::abs(p)) / (1.0 + std::max(0.0, p.real()));
    }
    return acc / static_cast<double>(dirs.size());
  };
  return radial_verdict(mu, f);
}

Verdict dalang_verdict(const ExponentModel& psi, const SpectralMeasure& mu) {
  return weighted_spectral_integral(psi, mu, SpectralWeight::one);
}

IndexEstimate fractal_index(const ExponentModel& psi, const SpectralMeasure& mu,
                            FractalKind kind) {
  require_dalang(psi, mu, "fractal_index");
  return bisect_index([&](double x) {
    return kind == FractalKind::H
               ? weighted_spectral_integral(psi, mu, SpectralWeight::abs_psi_pow, x)
               : weighted_spectral_integral(psi, mu, SpectralWeight::norm_pow, 2.0 * x);
  });
}

IndexEstimate kernel_space_index(const Kernel& kernel, const SpectralMeasure& mu, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("kernel_space_index: T must be positive");
  const ExponentModel& psi = kernel.exponent();
  require_dalang(psi, mu, "kernel_space_index");
  const KernelKind kind = kernel.kind();

  return bisect_index([&](double eta) {
    return radial_verdict(mu, [&](double r) {
      return std::pow(r, eta) * kernel_tt_energy(kind, psi.eval_radial(r), T);
    });
  });
}

KernelTimeIndices kernel_time_indices(const Kernel& kernel, const SpectralMeasure& mu, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("kernel_time_indices: T must be positive");
  const ExponentModel& psi = kernel.exponent();
  require_dalang(psi, mu, "kernel_time_indices");
  const KernelKind kind = kernel.kind();

  KernelTimeIndices out;

  // I_H: bisection on b of int_0^1 s^{-b} ds int |hat(s,xi)|^2 mu(dxi)
  out.i_h = bisect_index([&](double b) {
    return radial_verdict(mu, [&](double r) {
      const auto p = psi.eval_radial(r);
      return kind == KernelKind::heat
                 ? time_weight_heat(b, 2.0 * std::max(0.0, p.real()))
                 : time_weight_wave(b, std::max(0.0, p.real()));
    });
  });

  // Increment energies G(eps) = int_0^T ds int |hat(s+eps)-hat(s)|^2 mu on
  // the dyadic eps grid 2^-k, k = 0..20, computed once and reused by every
  // bisection probe. The integrand saturates near eps * psi ~ 1, so these
  // integrals get the extended cutoff schedule; eps levels whose crossover
  // lies beyond it are dropped (at least 8 usable levels required).
  constexpr int kEpsLevels = 21;
  const auto dirs = verdict_directions(psi);
  const int d = psi.dimension();
  const auto schedule = default_cutoff_schedule(60);
  auto increment_integral = [&](double eps) -> std::optional<double> {
    RadialFn f = [&, eps](double r) {
      double acc = 0.0;
      std::vector<double> xi(d);
      for (const auto& dir : dirs) {
        for (int i = 0; i < d; ++i) xi[i] = r * dir[i];
        acc += kernel_increment_energy(kind, psi.eval(xi), eps, T);
      }
      return acc / static_cast<double>(dirs.size());
    };
    try {
      const auto v = convergence_verdict(integrate_radial(mu, f, schedule));
      if (v.kind != VerdictKind::convergent) return std::nullopt;
      return v.value;
    } catch (const indeterminate_error&) {
      return std::nullopt;
    }
  };

  std::vector<double> g_plain;
  for (int k = 0; k < kEpsLevels; ++k) {
    const auto g = increment_integral(std::pow(2.0, -k));
    if (!g.has_value()) break;  // finer levels live past the quadrature range
    g_plain.push_back(*g);
  }
  if (g_plain.size() < 12)
    throw indeterminate_error(
        "kernel_time_indices: increment energies unresolvable at the quadrature range");

  // sup{b : sum 2^{bk} G_k < inf} equals the fitted decay exponent of G_k
  // (equality form of the partial-sum criterion, G monotone in eps); the
  // bisection probes compare against that estimate. Leading levels carry the
  // crossover transient and are dropped when enough remain.
  auto dyadic_index = [](const std::vector<double>& g) {
    const std::size_t drop = std::min<std::size_t>(5, g.size() > 14 ? g.size() - 14 : 0);
    std::vector<std::pair<double, double>> samples;
    for (std::size_t k = drop; k < g.size(); ++k)
      samples.emplace_back(std::pow(2.0, -static_cast<double>(k)), g[k]);
    const IntegrabilityIndex fit = index_from_integrability(samples, true);
    return bisect_index([&fit](double b) {
      Verdict v{b < fit.index ? VerdictKind::convergent : VerdictKind::divergent};
      v.low_confidence = std::abs(b - fit.index) < 2.0 * fit.stderr_;
      return v;
    });
  };
  out.i_h_upper = dyadic_index(g_plain);

  // sup_{r in [0, eps]} via a 16-point refinement with a running monotone
  // envelope from the smallest eps upward.
  constexpr int kRefine = 16;
  const std::size_t levels = g_plain.size();
  std::vector<double> g_sup(levels, 0.0);
  double running = 0.0;
  for (std::size_t k = levels; k-- > 0;) {
    const double eps = std::pow(2.0, -static_cast<double>(k));
    for (int j = 1; j < kRefine; ++j) {
      const auto val = increment_integral(eps * static_cast<double>(j) / kRefine);
      if (val.has_value()) running = std::max(running, *val);
    }
    running = std::max(running, g_plain[k]);
    g_sup[k] = running;
  }
  out.i_h_lower = dyadic_index(g_sup);

  return out;
}

IntegrabilityIndex index_from_integrability(const std::vector<std::pair<double, double>>& samples,
                                            bool monotone) {
  if (samples.size() < 12)
    throw std::invalid_argument("index_from_integrability: need at least 12 lags");
  std::vector<double> x, y;
  bool any_pos = false;
  for (const auto& [t, f] : samples) {
    if (!(t > 0.0) || f < 0.0)
      throw std::invalid_argument("index_from_integrability: invalid sample");
    if (f > 0.0) any_pos = true;
  }
  IntegrabilityIndex out;
  out.lower_bound_only = !monotone;
  if (!any_pos) {
    out.infinite = true;
    out.index = std::numeric_limits<double>::infinity();
    return out;
  }
  for (const auto& [t, f] : samples) {
    if (f <= 0.0) continue;  // below resolution
    const double k = -std::log(t);
    x.push_back(k);
    y.push_back(std::log(f));
  }
  if (x.size() < 4) {
    out.infinite = true;
    out.index = std::numeric_limits<double>::infinity();
    return out;
  }
  // least squares on [1, k, log k]; the log regressor absorbs
  // polynomial-log factors so they do not bias the exponent
  const std::size_t n = x.size();
  double A[3][3] = {};
  double rhs[3] = {};
  auto reg = [](double k, int j) {
    return j == 0 ? 1.0 : (j == 1 ? k : std::log(std::max(k, 0.5)));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) {
      rhs[a] += reg(x[i], a) * y[i];
      for (int b = 0; b < 3; ++b) A[a][b] += reg(x[i], a) * reg(x[i], b);
    }
  }
  // solve 3x3 by Gaussian elimination with partial pivoting
  double M[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) M[i][j] = A[i][j];
    M[i][3] = rhs[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < 3; ++rr)
      if (std::abs(M[rr][col]) > std::abs(M[piv][col])) piv = rr;
    std::swap(M[col], M[piv]);
    for (int rr = col + 1; rr < 3; ++rr) {
      const double fct = M[rr][col] / M[col][col];
      for (int cc = col; cc < 4; ++cc) M[rr][cc] -= fct * M[col][cc];
    }
  }
  double coef[3];
  for (int i = 2; i >= 0; --i) {
    coef[i] = M[i][3];
    for (int j = i + 1; j < 3; ++j) coef[i] -= M[i][j] * coef[j];
    coef[i] /= M[i][i];
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (int j = 0; j < 3; ++j) fit += coef[j] * reg(x[i], j);
    rss += (y[i] - fit) * (y[i] - fit);
  }
  // stderr of the slope coefficient from (X'X)^{-1}
  // invert A via cofactors (3x3)
  const double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                     A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                     A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  const double inv11 = (A[0][0] * A[2][2] - A[0][2] * A[2][0]) / det;
  const double sigma2 = rss / std::max<double>(1.0, static_cast<double>(n) - 3.0);
  out.index = std::max(0.0, -coef[1]);
  out.stderr_ = std::sqrt(std::max(0.0, sigma2 * inv11));
  return out;
}

IndexReport compute_index_report(const ExponentModel& psi, const SpectralMeasure& mu,
                                 std::optional<KernelKind> kernel, double T,
                                 const std::string& model_id, const std::string& measure_id) {
  IndexReport rep;
  rep.dalang = dalang_verdict(psi, mu);
  rep.model_id = model_id;
  rep.measure_id = measure_id;
  rep.horizon = T;
  rep.bisection_budget = kBisectionBudget;
  if (rep.dalang.kind != VerdictKind::convergent)
    throw precondition_error(
        "compute_index_report: Dalang's condition fails (int mu/(1+Re psi) diverges); no "
        "random-field solution exists");
  rep.ind_h = fractal_index(psi, mu, FractalKind::H);
  rep.ind_l = fractal_index(psi, mu, FractalKind::L);
  if (kernel.has_value()) {
    rep.kernel = kernel;
    Kernel k(*kernel, psi);
    rep.i_r = kernel_space_index(k, mu, T);
    rep.time_indices = kernel_time_indices(k, mu, T);
  }
  return rep;
}

namespace {

nlohmann::json estimate_json(const IndexEstimate& e) {
  return {{"value", e.value},         {"lo", e.lo},
          {"hi", e.hi},               {"capped_low", e.capped_low},
          {"capped_high", e.capped_high}, {"low_confidence", e.low_confidence}};
}

nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j;
  j["kind"] = v.kind == VerdictKind::convergent ? "convergent" : "divergent";
  if (v.kind == VerdictKind::convergent) {
    j["value"] = v.value;
    j["error"] = v.error;
  } else {
    j["growth_slope"] = v.growth_slope;
  }
  j["increment_slope"] = v.increment_slope;
  j["low_confidence"] = v.low_confidence;
  return j;
}

}  // namespace

std::string to_json_string(const IndexReport& report) {
  nlohmann::json j;
  j["schema"] = "levyfield-index-report/1";
  j["model"] = report.model_id;
  j["measure"] = report.measure_id;
  j["horizon"] = report.horizon;
  j["bisection_budget"] = report.bisection_budget;
  j["dalang"] = verdict_json(report.dalang);
  j["ind_H"] = estimate_json(report.ind_h);
  j["ind_L"] = estimate_json(report.ind_l);
  if (report.kernel.has_value()) j["kernel"] = kernel_name(*report.kernel);
  if (report.i_r.has_value()) j["I_R"] = estimate_json(*report.i_r);
  if (report.time_indices.has_value()) {
    j["I_H"] = estimate_json(report.time_indices->i_h);
    j["I_H_upper"] = estimate_json(report.time_indices->i_h_upper);
    j["I_H_lower"] = estimate_json(report.time_indices->i_h_lower);
  }
  return j.dump(2);
}

std::string csv_header_index_report() {
  return "sweep_value,model,measure,dalang,ind_H,ind_H_lo,ind_H_hi,ind_L,ind_L_lo,ind_L_hi,"
         "kernel,horizon,I_R,I_H,I_H_upper,I_H_lower\n";
}

std::string to_csv_row(const IndexReport& report, const std::string& sweep_value) {
  char buf[640];
  auto opt = [](const std::optional<IndexEstimate>& e) { return e ? e->value : std::nan(""); };
  std::snprintf(
      buf, sizeof(buf),
      "%s,%s,%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
      sweep_value.c_str(), report.model_id.c_str(), report.measure_id.c_str(),
      report.dalang.kind == VerdictKind::convergent ? "convergent" : "divergent",
      report.ind_h.value, report.ind_h.lo, report.ind_h.hi, report.ind_l.value, report.ind_l.lo,
      report.ind_l.hi, report.kernel ? kernel_name(*report.kernel).c_str() : "",
      report.horizon, opt(report.i_r),
      report.time_indices ? report.time_indices->i_h.value : std::nan(""),
      report.time_indices ? report.time_indices->i_h_upper.value : std::nan(""),
      report.time_indices ? report.time_indices->i_h_lower.value : std::nan(""));
  return buf;
}

}  // namespace levyfield
