#include "levyfield/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levyfield/errors.hpp"
#include "levyfield/quadrature.hpp"

namespace levyfield {

namespace {

constexpr double kEulerGamma = 0.577215664901532860606512;

// ---- cosine-integral machinery for the log_squared family ----------------
//
// psi(xi)/2 = log(xi) * Cin(xi/e) - E(xi/e)   for xi > 0, where
//   Cin(z) = int_0^z (1-cos u) du/u = gamma + log z - Ci(z),
//   E(z)   = int_0^z (1-cos u) log(u) du/u.

// Rational approximations for the auxiliary functions of Si/Ci
// (Abramowitz & Stegun 5.2.38/5.2.39, valid z >= 1, |eps| < 5e-7).
void ci_aux(double z, double& f, double& g) {
  const double z2 = z * z;
  const double z4 = z2 * z2;
  const double z6 = z4 * z2;
  const double z8 = z4 * z4;
  f = (z8 + 38.027264 * z6 + 265.187033 * z4 + 335.677320 * z2 + 38.102495) /
      (z8 + 40.021433 * z6 + 322.624911 * z4 + 570.236280 * z2 + 157.105423) / z;
  g = (z8 + 42.242855 * z6 + 302.757865 * z4 + 352.018498 * z2 + 21.821899) /
      (z8 + 48.196927 * z6 + 482.485984 * z4 + 1114.978885 * z2 + 449.690326) / z2;
}

double cosine_integral(double z) {
  double f, g;
  ci_aux(z, f, g);
  return f * std::sin(z) - g * std::cos(z);
}

double cin(double z) {
  if (z < 2.0) {
    // sum (-1)^{k+1} z^{2k} / (2k (2k)!)
    double term = z * z / 2.0;  // k = 1 numerator z^2/2! ; /(2k) below
    double sum = 0.0;
    double z2 = z * z;
    for (int k = 1; k <= 24; ++k) {
      sum += ((k % 2) ? 1.0 : -1.0) * term / (2.0 * k);
      term *= z2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
      if (term < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
  }
  return kEulerGamma + std::log(z) - cosine_integral(z);
}

// E on [0, 8] by series: int_0^z u^{2k-1} log u du = z^{2k}(log z/(2k) - 1/(2k)^2).
double e_series(double z) {
  if (z <= 0.0) return 0.0;
  const double lz = std::log(z);
  double sum = 0.0;
  double z2k = 1.0;        // z^{2k} running
  double fact = 1.0;       // (2k)! running
  const double z2 = z * z;
  for (int k = 1; k <= 40; ++k) {
    z2k *= z2;
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = z2k / fact * (lz / (2.0 * k) - 1.0 / (4.0 * k * k));
    sum += ((k % 2) ? 1.0 : -1.0) * term;
    if (std::abs(term) < 1e-17 * (std::abs(sum) + 1e-300) && k > 4) break;
  }
  return sum;
}

// E on (8, 512] by per-period panels on top of the series value at 8.
double e_mid(double z) {
  double sum = e_series(8.0);
  auto f = [](double u) { return (1.0 - std::cos(u)) * std::log(u) / u; };
  double a = 8.0;
  while (a < z) {
    const double b = std::min(z, a + 2.0 * M_PI);
    sum += quad::panel(f, a, b, 16);
    a = b;
  }
  return sum;
}

// Two-term integration-by-parts tail of int cos(u) log(u)/u du.
double osc_boundary(double u) {
  const double lu = std::log(u);
  const double f = lu / u;
  const double fp = (1.0 - lu) / (u * u);
  const double fpp = (2.0 * lu - 3.0) / (u * u * u);
  return std::sin(u) * f + std::cos(u) * fp - std::sin(u) * fpp;
}

double e_large(double z) {
  static const double e512 = e_mid(512.0);
  static const double l512 = std::log(512.0);
  const double lz = std::log(z);
  const double osc = osc_boundary(z) - osc_boundary(512.0);
  return e512 + 0.5 * (lz * lz - l512 * l512) - osc;
}

double e_func(double z) {
  if (z <= 8.0) return e_series(z);
  if (z <= 512.0) return e_mid(z);
  return e_large(z);
}

double psi_log_squared(double xi) {
  const double x = std::abs(xi);
  if (x == 0.0) return 0.0;
  const double z = x / M_E;
  return 2.0 * (std::log(x) * cin(z) - e_func(z));
}

// ---- numeric Levy-Khintchine jump integrals -------------------------------

// Spherical average of cos(y . xi) over directions y with |y| = r:
// d=1 -> cos(r k), d=2 -> J0(r k), d=3 -> sinc(r k).
double radial_cos_average(int d, double rk) {
  switch (d) {
    case 1: return std::cos(rk);
    case 2: return std::cyl_bessel_j(0, rk);
    default: return rk == 0.0 ? 1.0 : std::sin(rk) / rk;
  }
}

double sphere_area(int d) {
  // omega_{d-1} = 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

double one_minus_cos(double t) {
  const double a = std::abs(t);
  if (a < 1e-4) {
    const double t2 = t * t;
    return 0.5 * t2 * (1.0 - t2 / 12.0);
  }
  return 1.0 - std::cos(t);
}

double t_minus_sin(double t) {
  if (std::abs(t) < 1e-4) {
    const double t3 = t * t * t;
    return t3 / 6.0 * (1.0 - t * t / 20.0);
  }
  return t - std::sin(t);
}

// Adaptive integral of f over [a, b] with oscillation-aware subdivision for
// phase rate |omega|; panels never span more than ~4 radians.
double osc_integrate(const std::function<double(double)>& f, double a, double b, double omega) {
  if (a >= b) return 0.0;
  const double phase = std::abs(omega) * (b - a);
  const int pieces = std::max(1, std::min(4096, static_cast<int>(phase / 4.0) + 1));
  double sum = 0.0;
  const double step = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * step;
    const double hi = (i + 1 == pieces) ? b : lo + step;
    sum += quad::adaptive(f, lo, hi, 1e-11, 0.0, 10, 16).value;
  }
  return sum;
}

std::complex<double> triplet_jump_part(const LevyTriplet& t, int d,
                                       const std::vector<double>& xi) {
  double norm2 = 0.0;
  for (double v : xi) norm2 += v * v;
  const double k = std::sqrt(norm2);

  double re = 0.0, im = 0.0;
  if (t.radial_density) {
    const double area = sphere_area(d);
    auto inner = [&](double r) {
      return (1.0 - radial_cos_average(d, r * k)) * t.jump_density(r) * std::pow(r, d - 1);
    };
    // compensator drift term vanishes for symmetric (radial) nu
    const double split = std::min(1.0, t.jump_outer);
    double val = 0.0;
    if (t.jump_inner < split) {
      // geometric panels toward the (possibly singular) origin
      double hi = split;
      while (hi > t.jump_inner * 2.0) {
        const double lo = std::max(t.jump_inner, 0.5 * hi);
        val += osc_integrate(inner, lo, hi, k);
        hi = lo;
      }
      val += osc_integrate(inner, t.jump_inner, hi, k);
    }
    if (t.jump_outer > 1.0) val += osc_integrate(inner, 1.0, t.jump_outer, k);
    re = area * val;
  } else {
    // d = 1 signed density
    const double x1 = xi[0];
    auto re_f = [&](double y) {
      return one_minus_cos(y * x1) * (t.jump_density(y) + t.jump_density(-y));
    };
    auto im_comp = [&](double y) {
      return t_minus_sin(y * x1) * t.jump_density(y) + t_minus_sin(-y * x1) * t.jump_density(-y);
    };
    auto im_plain = [&](double y) {
      return -std::sin(y * x1) * t.jump_density(y) - std::sin(-y * x1) * t.jump_density(-y);
    };
    const double split = std::min(1.0, t.jump_outer);
    double re_val = 0.0, im_val = 0.0;
    if (t.jump_inner < split) {
      double hi = split;
      while (hi > t.jump_inner * 2.0) {
        const double lo = std::max(t.jump_inner, 0.5 * hi);
        re_val += osc_integrate(re_f, lo, hi, x1);
        im_val += osc_integrate(im_comp, lo, hi, x1);
        hi = lo;
      }
      re_val += osc_integrate(re_f, t.jump_inner, hi, x1);
      im_val += osc_integrate(im_comp, t.jump_inner, hi, x1);
    }
    if (t.jump_outer > 1.0) {
      re_val += osc_integrate(re_f, 1.0, t.jump_outer, x1);
      im_val += osc_integrate(im_plain, 1.0, t.jump_outer, x1);
    }
    re = re_val;
    im = im_val;
  }
  if (!std::isfinite(re) || !std::isfinite(im))
    throw integration_failure("numeric_triplet jump integral diverged over declared cutoffs",
                              std::isfinite(re) ? re : 0.0);
  return {re, im};
}

double quadratic_form(const std::vector<double>& A, const std::vector<double>& xi, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += xi[i] * A[i * d + j] * xi[j];
  return s;
}

double min_sym_eigenvalue(const std::vector<double>& A, int d) {
  // power iteration on (c I - A); d <= 3 in practice, exact enough
  if (d == 1) return A[0];
  double trace = 0.0, maxabs = 0.0;
  for (int i = 0; i < d; ++i) trace += A[i * d + i];
  for (double v : A) maxabs = std::max(maxabs, std::abs(v));
  const double c = d * maxabs + 1.0;
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double lambda = 0.0;
  for (int it = 0; it < 400; ++it) {
    std::vector<double> w(d, 0.0);
    for (int i = 0; i < d; ++i) {
      w[i] = c * v[i];
      for (int j = 0; j < d; ++j) w[i] -= A[i * d + j] * v[j];
    }
    double n = 0.0;
    for (double x : w) n += x * x;
    n = std::sqrt(n);
    if (n == 0.0) return 0.0;
    for (int i = 0; i < d; ++i) v[i] = w[i] / n;
    lambda = n;
  }
  return c - lambda;
}

}  // namespace

std::string family_name(ExponentFamily f) {
  switch (f) {
    case ExponentFamily::brownian: return "brownian";
    case ExponentFamily::isotropic_stable: return "isotropic_stable";
    case ExponentFamily::asymmetric_cauchy: return "asymmetric_cauchy";
    case ExponentFamily::compound_poisson: return "compound_poisson";
    case ExponentFamily::log_squared: return "log_squared";
    case ExponentFamily::numeric_triplet: return "numeric_triplet";
    case ExponentFamily::fractional: return "fractional";
  }
  return "unknown";
}

ExponentModel ExponentModel::brownian(std::vector<double> diffusion, int d) {
  if (d < 1) throw std::invalid_argument("brownian: dimension must be >= 1");
  if (diffusion.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("brownian: diffusion matrix must be d x d");
  double maxabs = 0.0;
  for (double v : diffusion) maxabs = std::max(maxabs, std::abs(v));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(diffusion[i * d + j] - diffusion[j * d + i]) > 1e-12 * (maxabs + 1.0))
        throw std::invalid_argument("brownian: diffusion matrix must be symmetric");
  const double min_eig = min_sym_eigenvalue(diffusion, d);
  if (min_eig < -1e-12 * (maxabs + 1.0))
    throw std::invalid_argument("brownian: diffusion matrix must be PSD");
  const bool rl = min_eig > 1e-12 * (maxabs + 1.0);
  return ExponentModel(d, true, rl, Brownian{std::move(diffusion), min_eig});
}

ExponentModel ExponentModel::brownian_identity(int d) {
  std::vector<double> A(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) A[i * d + i] = 1.0;
  return brownian(std::move(A), d);
}

ExponentModel ExponentModel::isotropic_stable(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("isotropic_stable: alpha must lie in (0,2)");
  return ExponentModel(d, true, true, Stable{alpha});
}

ExponentModel ExponentModel::asymmetric_cauchy(double h) {
  const double cap = 2.0 / M_PI;
  if (std::abs(h) > cap + 1e-15)
    throw std::invalid_argument("asymmetric_cauchy: h must lie in [-2/pi, 2/pi]");
  return ExponentModel(1, h == 0.0, true, Cauchy{h});
}

ExponentModel ExponentModel::compound_poisson(std::vector<PoissonAtom> atoms,
                                              std::vector<double> drift_tilde) {
  if (atoms.empty()) throw std::invalid_argument("compound_poisson: no atoms");
  const int d = static_cast<int>(atoms.front().y.size());
  if (d < 1) throw std::invalid_argument("compound_poisson: atoms must have dimension >= 1");
  if (drift_tilde.empty()) drift_tilde.assign(d, 0.0);
  if (drift_tilde.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("compound_poisson: drift dimension mismatch");
  double mass = 0.0;
  for (const auto& a : atoms) {
    if (a.y.size() != static_cast<std::size_t>(d))
      throw std::invalid_argument("compound_poisson: atom dimension mismatch");
    if (a.weight < 0.0) throw std::invalid_argument("compound_poisson: negative atom weight");
    mass += a.weight;
  }
  bool zero_drift = true;
  for (double v : drift_tilde) zero_drift = zero_drift && v == 0.0;
  bool paired = zero_drift;
  if (paired) {
    for (const auto& a : atoms) {
      bool found = false;
      for (const auto& b : atoms) {
        double dist = 0.0;
        for (int i = 0; i < d; ++i) dist += std::abs(a.y[i] + b.y[i]);
        if (dist < 1e-12 && std::abs(a.weight - b.weight) < 1e-12) {
          found = true;
          break;
        }
      }
      if (!found) {
        paired = false;
        break;
      }
    }
  }
  return ExponentModel(d, paired, false, Poisson{std::move(atoms), std::move(drift_tilde), mass});
}

ExponentModel ExponentModel::log_squared() {
  return ExponentModel(1, true, true, LogSquared{});
}

ExponentModel ExponentModel::numeric_triplet(LevyTriplet triplet, int d,
                                             std::optional<bool> rl_override) {
  if (d < 1 || d > 3) throw std::invalid_argument("numeric_triplet: d must be 1..3");
  if (triplet.drift.empty()) triplet.drift.assign(d, 0.0);
  if (triplet.drift.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("numeric_triplet: drift dimension mismatch");
  if (triplet.diffusion.empty()) triplet.diffusion.assign(static_cast<std::size_t>(d) * d, 0.0);
  if (triplet.diffusion.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("numeric_triplet: diffusion must be d x d");
  if (!triplet.radial_density && d != 1)
    throw std::invalid_argument("numeric_triplet: signed densities are one-dimensional");
  const double min_eig = min_sym_eigenvalue(triplet.diffusion, d);
  double maxabs = 0.0;
  for (double v : triplet.diffusion) maxabs = std::max(maxabs, std::abs(v));
  if (min_eig < -1e-12 * (maxabs + 1.0))
    throw std::invalid_argument("numeric_triplet: diffusion must be PSD");

  bool has_jumps = static_cast<bool>(triplet.jump_density);
  if (has_jumps) {
    // (1 ^ ||y||^2) integrability over the declared cutoffs
    auto integrand = [&](double r) {
      const double dens = triplet.radial_density
                              ? triplet.jump_density(r) * sphere_area(d) * std::pow(r, d - 1)
                              : triplet.jump_density(r) + triplet.jump_density(-r);
      return std::min(1.0, r * r) * dens;
    };
    double check = 0.0;
    double hi = std::min(1.0, triplet.jump_outer);
    while (hi > triplet.jump_inner * 2.0) {
      const double lo = std::max(triplet.jump_inner, 0.5 * hi);
      check += quad::adaptive(integrand, lo, hi, 1e-9, 0.0, 12, 16).value;
      hi = lo;
    }
    if (triplet.jump_outer > 1.0)
      check += quad::adaptive(integrand, 1.0, triplet.jump_outer, 1e-9, 0.0, 16, 16).value;
    if (!std::isfinite(check) || check > 1e12)
      throw integration_failure("numeric_triplet: (1 ^ |y|^2) nu(dy) not finite over cutoffs",
                                check);
  }

  bool zero_drift = true;
  for (double v : triplet.drift) zero_drift = zero_drift && v == 0.0;
  bool symmetric = zero_drift && min_eig >= 0.0;
  if (symmetric && has_jumps && !triplet.radial_density) {
    for (double y : {0.1, 0.37, 0.9, 2.5}) {
      if (std::abs(triplet.jump_density(y) - triplet.jump_density(-y)) >
          1e-10 * (std::abs(triplet.jump_density(y)) + 1.0)) {
        symmetric = false;
        break;
      }
    }
  }

  auto shared = std::make_shared<const LevyTriplet>(std::move(triplet));
  ExponentModel m(d, symmetric, false, Triplet{shared});
  bool rl;
  if (rl_override.has_value()) {
    rl = *rl_override;
  } else if (min_eig > 1e-12 * (maxabs + 1.0)) {
    rl = true;
  } else {
    // growth probe on three decades
    double prev = 0.0;
    rl = true;
    for (double r : {1e2, 1e3, 1e4}) {
      const double cur = m.eval_radial(r).real();
      if (cur < prev * 1.2 || cur < 1.0) {
        rl = false;
        break;
      }
      prev = cur;
    }
  }
  m.rl_ = rl;
  return m;
}

ExponentFamily ExponentModel::family() const {
  if (std::holds_alternative<Brownian>(params_)) return ExponentFamily::brownian;
  if (std::holds_alternative<Stable>(params_)) return ExponentFamily::isotropic_stable;
  if (std::holds_alternative<Cauchy>(params_)) return ExponentFamily::asymmetric_cauchy;
  if (std::holds_alternative<Poisson>(params_)) return ExponentFamily::compound_poisson;
  if (std::holds_alternative<LogSquared>(params_)) return ExponentFamily::log_squared;
  if (std::holds_alternative<Triplet>(params_)) return ExponentFamily::numeric_triplet;
  return ExponentFamily::fractional;
}

std::complex<double> ExponentModel::eval(const std::vector<double>& xi) const {
  if (xi.size() != static_cast<std::size_t>(d_))
    throw std::invalid_argument("eval_psi: xi dimension mismatch");
  for (double v : xi)
    if (!std::isfinite(v)) throw std::invalid_argument("eval_psi: xi must be finite");

  double norm2 = 0.0;
  for (double v : xi) norm2 += v * v;
  const double r = std::sqrt(norm2);

  if (const auto* b = std::get_if<Brownian>(&params_))
    return {0.5 * quadratic_form(b->A, xi, d_), 0.0};
  if (const auto* s = std::get_if<Stable>(&params_)) return {std::pow(r, s->alpha), 0.0};
  if (const auto* c = std::get_if<Cauchy>(&params_)) {
    const double x = xi[0];
    if (x == 0.0) return {0.0, 0.0};
    return {std::abs(x), c->h * x * std::log(std::abs(x))};
  }
  if (const auto* p = std::get_if<Poisson>(&params_)) {
    double re = 0.0, im = 0.0;
    for (const auto& a : p->atoms) {
      double dot = 0.0;
      for (int i = 0; i < d_; ++i) dot += a.y[i] * xi[i];
      re += a.weight * one_minus_cos(dot);
      im -= a.weight * std::sin(dot);
    }
    for (int i = 0; i < d_; ++i) im -= p->drift[i] * xi[i];
    return {re, im};
  }
  if (std::holds_alternative<LogSquared>(params_)) return {psi_log_squared(xi[0]), 0.0};
  if (const auto* t = std::get_if<Triplet>(&params_)) {
    std::complex<double> val(0.5 * quadratic_form(t->t->diffusion, xi, d_), 0.0);
    double dot = 0.0;
    for (int i = 0; i < d_; ++i) dot += t->t->drift[i] * xi[i];
    val -= std::complex<double>(0.0, dot);
    if (t->t->jump_density) val += triplet_jump_part(*t->t, d_, xi);
    return val;
  }
  const auto& f = std::get<Fractional>(params_);
  const double base = std::max(0.0, f.base->eval(xi).real());
  return {std::pow(base, f.tau), 0.0};
}

std::complex<double> ExponentModel::eval_radial(double r) const {
  std::vector<double> xi(d_, 0.0);
  xi[0] = r;
  return eval(xi);
}

double ExponentModel::stable_alpha() const { return std::get<Stable>(params_).alpha; }
double ExponentModel::cauchy_h() const { return std::get<Cauchy>(params_).h; }
double ExponentModel::fractional_tau() const { return std::get<Fractional>(params_).tau; }
const ExponentModel& ExponentModel::fractional_base() const {
  return *std::get<Fractional>(params_).base;
}
const std::vector<double>& ExponentModel::brownian_diffusion() const {
  return std::get<Brownian>(params_).A;
}
const std::vector<PoissonAtom>& ExponentModel::poisson_atoms() const {
  return std::get<Poisson>(params_).atoms;
}
const std::vector<double>& ExponentModel::poisson_drift() const {
  return std::get<Poisson>(params_).drift;
}

ExponentModel fractional_power(const ExponentModel& model, double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("fractional_power: tau must lie in (0,1)");
  if (!model.symmetric())
    throw precondition_error(
        "fractional_power: base exponent must be symmetric (real psi >= 0)");
  if (model.family() == ExponentFamily::isotropic_stable)
    return ExponentModel::isotropic_stable(model.stable_alpha() * tau, model.dimension());
  if (model.family() == ExponentFamily::fractional) {
    // collapse nesting so (psi^t1)^t2 == psi^(t1 t2) exactly
    return fractional_power(model.fractional_base(), model.fractional_tau() * tau);
  }
  auto base = std::make_shared<const ExponentModel>(model);
  return ExponentModel(model.dimension(), true, model.satisfies_rl(),
                       ExponentModel::Fractional{std::move(base), tau});
}

std::vector<std::vector<double>> unit_directions(int d, int count) {
  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (d == 2) {
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * M_PI * i / count;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  // Fibonacci sphere
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = golden * i;
    dirs.push_back({rad * std::cos(th), rad * std::sin(th), z});
  }
  return dirs;
}

StructureReport diagnose(const ExponentModel& model, const RadialGridSpec& grid) {
  const int d = model.dimension();
  const auto dirs = unit_directions(d, grid.directions);
  StructureReport rep;
  rep.min_abs_psi_off_zero = std::numeric_limits<double>::infinity();

  for (int s = 0; s < grid.shells; ++s) {
    const double radius = grid.max_radius * std::pow(2.0, -(grid.shells - 1 - s));
    double bochner = 0.0;
    double min_re = std::numeric_limits<double>::infinity();
    for (const auto& dir : dirs) {
      std::vector<double> xi(d), xin(d);
      for (int i = 0; i < d; ++i) {
        xi[i] = radius * dir[i];
        xin[i] = -radius * dir[i];
      }
      const auto psi = model.eval(xi);
      const auto psin = model.eval(xin);
      rep.hermitian_residual =
          std::max(rep.hermitian_residual, std::abs(psi - std::conj(psin)));
      rep.max_imag_part = std::max(rep.max_imag_part, std::abs(psi.imag()));
      rep.min_abs_psi_off_zero = std::min(rep.min_abs_psi_off_zero, std::abs(psi));
      bochner = std::max(bochner, std::abs(psi) / (1.0 + radius * radius));
      min_re = std::min(min_re, psi.real());
    }
    rep.shell_radii.push_back(radius);
    rep.bochner_per_shell.push_back(bochner);
    rep.min_re_psi_per_shell.push_back(min_re);
    rep.bochner_ratio = std::max(rep.bochner_ratio, bochner);
  }

  // growth trend of min Re psi over the outer shells, in log-log
  const int n = static_cast<int>(rep.shell_radii.size());
  const int m = std::min(4, n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - m; i < n; ++i) {
    const double x = std::log(rep.shell_radii[i]);
    const double y = std::log(std::max(rep.min_re_psi_per_shell[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / std::max(m * sxx - sx * sx, 1e-300);
  rep.rl_trend = slope > 0.1 ? Trend::increasing : (slope < -0.1 ? Trend::decreasing : Trend::flat);
  return rep;
}

}  // namespace levyfield
