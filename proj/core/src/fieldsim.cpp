#include "levyfield/fieldsim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "levyfield/errors.hpp"
#include "levyfield/fft.hpp"
#include "levyfield/indices.hpp"
#include "levyfield/quadrature.hpp"
#include "levyfield/rng.hpp"
#include "levyfield/version.hpp"

namespace levyfield {

namespace {

double sphere_area(int d) { return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d); }

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::uint64_t FrequencyLattice::digest() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& m : modes) {
    h = fnv1a(m.xi.data(), m.xi.size() * sizeof(double), h);
    h = fnv1a(&m.weight, sizeof(double), h);
  }
  h = fnv1a(&zero_mode_weight, sizeof(double), h);
  h = fnv1a(&cutoff, sizeof(double), h);
  return h;
}

FrequencyLattice build_lattice(const SpectralMeasure& mu, const ExponentModel& psi, int n_modes,
                               double cutoff) {
  if (n_modes < 16) throw std::invalid_argument("build_lattice: need at least 16 modes");
  if (!(cutoff > 0.0) || cutoff > std::pow(2.0, 40))
    throw std::invalid_argument("build_lattice: cutoff outside the quadrature range");
  if (mu.dimension() != psi.dimension())
    throw std::invalid_argument("build_lattice: dimension mismatch");
  const int d = mu.dimension();
  if (d > 2) throw std::invalid_argument("build_lattice: only d = 1, 2 supported");

  const Verdict dal = dalang_verdict(psi, mu);
  if (dal.kind != VerdictKind::convergent)
    throw precondition_error("build_lattice: Dalang's condition fails; no solution to simulate");

  // Dalang-weighted and plain mass per octave cell [cutoff 2^-(k+1), cutoff 2^-k]
  constexpr int kOctaves = 30;
  const double area = sphere_area(d);
  auto dalang_f = [&](double r) {
    const auto p = psi.eval_radial(r);
    return area * mu.radial_density(r) * std::pow(r, d - 1) /
           (1.0 + std::max(0.0, p.real()));
  };
  std::vector<double> edges(kOctaves + 1);
  for (int k = 0; k <= kOctaves; ++k) edges[k] = cutoff * std::pow(2.0, -(kOctaves - k));
  std::vector<double> dmass(kOctaves);
  double partial = quad::graded_lower(dalang_f, edges[0]).value;  // [0, lowest edge]
  const double below = partial;
  for (int k = 0; k < kOctaves; ++k) {
    dmass[k] = quad::adaptive(dalang_f, edges[k], edges[k + 1], 1e-11, 0.0, 10, 16).value;
    partial += dmass[k];
  }
  const double total = dal.value;
  const double trunc = std::max(0.0, total - partial);
  if (trunc > 0.5 * total)
    throw precondition_error(
        "build_lattice: cutoff discards more than half of the Dalang mass; raise the cutoff");

  // allocate modes per octave proportionally to the Dalang mass
  const int n_theta = d == 2 ? 16 : 1;
  const int radial_budget = std::max(16, n_modes / n_theta);
  const double alloc_total = partial;
  std::vector<int> alloc(kOctaves, 0);
  int used = 0;
  for (int k = 0; k < kOctaves; ++k) {
    const double share = (dmass[k] + (k == 0 ? below : 0.0)) / alloc_total;
    alloc[k] = share > 1e-12 ? std::max(1, static_cast<int>(std::lround(share * radial_budget)))
                             : 0;
    used += alloc[k];
  }
  // trim or grow to the budget, touching the largest allocations first
  while (used > radial_budget) {
    int best = -1;
    for (int k = 0; k < kOctaves; ++k)
      if (alloc[k] > 1 && (best < 0 || alloc[k] > alloc[best])) best = k;
    if (best < 0) break;
    --alloc[best];
    --used;
  }

  FrequencyLattice lat;
  lat.dimension = d;
  lat.cutoff = cutoff;
  lat.dalang_total = total;
  lat.truncation_error = trunc;
  lat.zero_mode_weight = mu.atom_at_zero();

  auto plain_mass = [&](double a, double b) {
    auto f = [&](double r) { return area * mu.radial_density(r) * std::pow(r, d - 1); };
    if (a <= 0.0) return quad::graded_lower(f, b).value;
    return quad::adaptive(f, a, b, 1e-11, 0.0, 12, 16).value;
  };

  for (int k = 0; k < kOctaves; ++k) {
    if (alloc[k] == 0) continue;
    const double a = edges[k], b = edges[k + 1];
    const double q = std::pow(b / a, 1.0 / alloc[k]);
    for (int j = 0; j < alloc[k]; ++j) {
      const double lo = (k == 0 && j == 0) ? 0.0 : a * std::pow(q, j);
      const double hi = a * std::pow(q, j + 1);
      const double node = a * std::pow(q, j + 0.5);
      const double cell = plain_mass(lo, hi);  // full +/- mass via the area factor
      if (cell <= 0.0) continue;
      if (d == 1) {
        FrequencyLattice::Mode m;
        m.xi = {node};
        m.weight = cell;
        m.psi = psi.eval(m.xi);
        lat.modes.push_back(std::move(m));
      } else {
        for (int l = 0; l < n_theta; ++l) {
          const double th = M_PI * (l + 0.5) / n_theta;
          FrequencyLattice::Mode m;
          m.xi = {node * std::cos(th), node * std::sin(th)};
          m.weight = cell / n_theta;
          m.psi = psi.eval(m.xi);
          lat.modes.push_back(std::move(m));
        }
      }
    }
  }
  return lat;
}

namespace {

// Per-replica complex Gaussian N(0,1) pair -> CN(0,1)
inline std::complex<double> cn01(const GaussianStream& gs, std::uint32_t idx) {
  const auto [z0, z1] = gs.normal_pair(idx);
  return {z0 * M_SQRT1_2, z1 * M_SQRT1_2};
}

struct WaveFactor {
  Eigen::MatrixXd L;  // C = L L^T
  bool ok = true;
};

WaveFactor wave_factor(std::complex<double> psi, const std::vector<double>& times) {
  const int n = static_cast<int>(times.size());
  Eigen::MatrixXd C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = time_covariance(KernelKind::wave, psi, times[i], times[j]).real();
      C(i, j) = v;
      C(j, i) = v;
    }
  WaveFactor f;
  if (!C.allFinite()) {
    f.ok = false;
    return f;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(C + 1e-12 * std::max(1e-300, C.trace() / n) *
                                          Eigen::MatrixXd::Identity(n, n));
  if (llt.info() == Eigen::Success) {
    f.L = llt.matrixL();
    return f;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  f.L = eig.eigenvectors() * lam.asDiagonal();
  return f;
}

// One replica of per-mode time paths assembled onto the space grid.
// Output layout out[t * nx + x], accumulated in mode order.
void assemble_replica(KernelKind kind, const FrequencyLattice& lat,
                      const std::vector<double>& times,
                      const std::vector<double>& cos_table,
                      const std::vector<double>& sin_table,
                      const std::vector<WaveFactor>& factors, std::uint64_t seed,
                      std::uint32_t replica, std::size_t nx, double* out) {
  const std::size_t nt = times.size();
  const double pref = std::pow(2.0 * M_PI, -0.5 * lat.dimension);
  std::vector<std::complex<double>> z(nt);
  std::vector<std::complex<double>> w(nt);
  std::fill(out, out + nt * nx, 0.0);

  for (std::size_t j = 0; j < lat.modes.size(); ++j) {
    const auto& mode = lat.modes[j];
    const GaussianStream gs(seed, replica, static_cast<std::uint32_t>(j));
    if (kind == KernelKind::heat) {
      const double c = 2.0 * std::max(0.0, mode.psi.real());
      double prev_t = times[0];
      z[0] = std::sqrt(ou_variance_factor(times[0], c)) * cn01(gs, 0);
      for (std::size_t i = 1; i < nt; ++i) {
        const double dt = times[i] - prev_t;
        const std::complex<double> a = std::exp(-dt * mode.psi);
        z[i] = a * z[i - 1] + std::sqrt(ou_variance_factor(dt, c)) * cn01(gs, i);
        prev_t = times[i];
      }
    } else {
      if (!factors[j].ok) continue;
      for (std::size_t i = 0; i < nt; ++i) w[i] = cn01(gs, i);
      for (std::size_t i = 0; i < nt; ++i) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t l = 0; l < nt; ++l) acc += factors[j].L(i, l) * w[l];
        z[i] = acc;
      }
    }
    const double amp = pref * std::sqrt(2.0 * mode.weight);
    const double* ct = cos_table.data() + j * nx;
    const double* st = sin_table.data() + j * nx;
    for (std::size_t i = 0; i < nt; ++i) {
      const double re = z[i].real(), im = z[i].imag();
      double* row = out + i * nx;
      for (std::size_t x = 0; x < nx; ++x) row[x] += amp * (ct[x] * re - st[x] * im);
    }
  }

  if (lat.zero_mode_weight > 0.0) {
    const GaussianStream gs(seed, replica, static_cast<std::uint32_t>(lat.modes.size()));
    std::vector<double> x0(nt);
    if (kind == KernelKind::heat) {
      x0[0] = std::sqrt(times[0]) * gs.normal(0);
      for (std::size_t i = 1; i < nt; ++i)
        x0[i] = x0[i - 1] + std::sqrt(times[i] - times[i - 1]) * gs.normal(i);
    } else {
      const WaveFactor f = wave_factor(0.0, times);
      std::vector<double> g(nt);
      for (std::size_t i = 0; i < nt; ++i) g[i] = gs.normal(i);
      for (std::size_t i = 0; i < nt; ++i) {
        double acc = 0.0;
        for (std::size_t l = 0; l < nt; ++l) acc += f.L(i, l) * g[l];
        x0[i] = acc;
      }
    }
    const double amp = pref * std::sqrt(lat.zero_mode_weight);
    for (std::size_t i = 0; i < nt; ++i) {
      double* row = out + i * nx;
      for (std::size_t x = 0; x < nx; ++x) row[x] += amp * x0[i];
    }
  }
}

}  // namespace

FieldSample simulate_linear(const Kernel& kernel, const FrequencyLattice& lattice,
                            const std::vector<double>& time_grid,
                            const std::vector<std::vector<double>>& space_grid, int replicas,
                            std::uint64_t seed, int threads) {
  if (replicas < 1) throw std::invalid_argument("simulate_linear: replicas must be >= 1");
  if (time_grid.empty() || space_grid.empty())
    throw std::invalid_argument("simulate_linear: empty grid");
  for (std::size_t i = 1; i < time_grid.size(); ++i)
    if (!(time_grid[i] > time_grid[i - 1]))
      throw std::invalid_argument("simulate_linear: time grid must be sorted increasing");
  if (time_grid.front() < 0.0)
    throw std::invalid_argument("simulate_linear: negative times");
  if (kernel.exponent().dimension() != lattice.dimension)
    throw std::invalid_argument("simulate_linear: lattice/kernel dimension mismatch");
  for (const auto& x : space_grid)
    if (static_cast<int>(x.size()) != lattice.dimension)
      throw std::invalid_argument("simulate_linear: space point dimension mismatch");

  const std::size_t nt = time_grid.size();
  const std::size_t nx = space_grid.size();
  const std::size_t nm = lattice.modes.size();

  FieldSample s;
  s.time_grid = time_grid;
  s.space_grid = space_grid;
  s.replicas = replicas;
  s.seed = seed;
  s.kind = kernel.kind();
  s.lattice_digest = lattice.digest();
  s.values.assign(static_cast<std::size_t>(replicas) * nt * nx, 0.0);

  // phase tables
  std::vector<double> cos_table(nm * nx), sin_table(nm * nx);
  for (std::size_t j = 0; j < nm; ++j) {
    for (std::size_t x = 0; x < nx; ++x) {
      double dot = 0.0;
      for (int i = 0; i < lattice.dimension; ++i) dot += space_grid[x][i] * lattice.modes[j].xi[i];
      cos_table[j * nx + x] = std::cos(dot);
      sin_table[j * nx + x] = std::sin(dot);
    }
  }

  std::vector<WaveFactor> factors;
  if (kernel.kind() == KernelKind::wave) {
    factors.resize(nm);
    for (std::size_t j = 0; j < nm; ++j) {
      factors[j] = wave_factor(lattice.modes[j].psi, time_grid);
      if (!factors[j].ok)
        s.warnings.push_back("mode " + std::to_string(j) +
                             " skipped: time covariance factorization failed");
    }
  }

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, replicas));
  auto work = [&](int t_id) {
    for (int r = t_id; r < replicas; r += nthreads)
      assemble_replica(kernel.kind(), lattice, time_grid, cos_table, sin_table, factors, seed,
                       static_cast<std::uint32_t>(r), nx,
                       s.values.data() + static_cast<std::size_t>(r) * nt * nx);
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  return s;
}

// ---------------------------------------------------------------------------
// covariance oracle

namespace {

// Re int_0^inf amp(r) e^{i omega r} dr (d=1) or int amp(r).real J0(|omega| r) dr
// (d=2), over octaves with oscillation-resolved panels. phase_hint(r) bounds
// the internal phase of amp. Integration stops once an octave's contribution
// bound falls below abs_tol twice in a row; the bound joins the error.
struct OscResult {
  double value = 0.0;
  double error = 0.0;
};

OscResult osc_radial_integral(const std::function<std::complex<double>(double)>& amp,
                              const std::function<double(double)>& phase_hint, double omega,
                              double abs_tol, int d) {
  OscResult out;
  const double r_lo = std::pow(2.0, -20);
  const double r_hi = std::pow(2.0, 40);

  auto piece_value = [&](double a, double b) {
    const auto& rule = quad::gauss_legendre(12);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double r = mid + half * rule.x[i];
      const std::complex<double> v = amp(r);
      double f;
      if (d == 1) {
        f = v.real() * std::cos(omega * r) - v.imag() * std::sin(omega * r);
      } else {
        f = v.real() * std::cyl_bessel_j(0, std::abs(omega) * r);
      }
      sum += rule.w[i] * f;
    }
    return sum * half;
  };

  // opening panel [0, r_lo]
  out.value += piece_value(0.0, r_lo);

  int quiet = 0;
  double peak_env = 0.0;
  for (double a = r_lo; a < r_hi; a *= 2.0) {
    const double b = 2.0 * a;
    const double env =
        std::abs(amp(a)) + std::abs(amp(0.5 * (a + b))) + std::abs(amp(b));
    peak_env = std::max(peak_env, env);
    const double osc_window = std::abs(omega) > 0.0 ? 8.0 / std::abs(omega) : (b - a);
    const double bound = env * std::min(b - a, osc_window);
    // stop only in the decaying tail, past the envelope peak
    if (bound < abs_tol && env < 0.25 * peak_env && a >= 1.0) {
      if (++quiet >= 2) {
        out.error += 4.0 * bound;
        break;
      }
    } else {
      quiet = 0;
    }
    const double span = std::abs(omega) * (b - a) +
                        std::abs(phase_hint(b) - phase_hint(a));
    const int pieces = std::max(1, std::min(300000, static_cast<int>(span / 3.0) + 1));
    if (pieces >= 300000) {
      out.error += bound;  // unresolvable; bounded and skipped
      continue;
    }
    const double step = (b - a) / pieces;
    double acc = 0.0;
    for (int i = 0; i < pieces; ++i)
      acc += piece_value(a + i * step, (i + 1 == pieces) ? b : a + (i + 1) * step);
    out.value += acc;
  }
  return out;
}

}  // namespace

CovarianceOracle::CovarianceOracle(Kernel kernel, SpectralMeasure mu)
    : kernel_(std::move(kernel)), mu_(std::move(mu)) {
  if (kernel_.exponent().dimension() != mu_.dimension())
    throw std::invalid_argument("CovarianceOracle: dimension mismatch");
  if (mu_.dimension() > 2)
    throw std::invalid_argument("CovarianceOracle: only d = 1, 2 supported");
  const auto v = dalang_verdict(kernel_.exponent(), mu_);
  if (v.kind != VerdictKind::convergent)
    throw precondition_error("CovarianceOracle: Dalang's condition fails");
  const KernelKind kind = kernel_.kind();
  const ExponentModel& psi = kernel_.exponent();
  auto tt1 = [&](double r) { return kernel_tt_energy(kind, psi.eval_radial(r), 1.0); };
  const auto series = integrate_radial(mu_, tt1, default_cutoff_schedule());
  scale_ = std::pow(2.0 * M_PI, -mu_.dimension()) *
           (convergence_verdict(series).value + mu_.atom_at_zero());
}

double CovarianceOracle::operator()(double t1, const std::vector<double>& x1, double t2,
                                    const std::vector<double>& x2) const {
  const int d = mu_.dimension();
  if (static_cast<int>(x1.size()) != d || static_cast<int>(x2.size()) != d)
    throw std::invalid_argument("covariance_oracle: point dimension mismatch");
  const double tmin = std::min(t1, t2);
  if (tmin <= 0.0) return 0.0;
  const KernelKind kind = kernel_.kind();
  const ExponentModel& psi = kernel_.exponent();

  double omega = 0.0;
  if (d == 1) {
    omega = x1[0] - x2[0];
  } else {
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) n2 += (x1[i] - x2[i]) * (x1[i] - x2[i]);
    omega = std::sqrt(n2);
  }

  const bool diagonal = t1 == t2;
  auto amp = [&](double r) -> std::complex<double> {
    const auto p = psi.eval_radial(r);
    const std::complex<double> c =
        diagonal ? std::complex<double>(kernel_tt_energy(kind, p, t1), 0.0)
                 : time_covariance(kind, p, t1, t2);
    const double dens = mu_.radial_density(r) * (d == 1 ? 2.0 : 2.0 * M_PI * r);
    return c * dens;
  };
  auto hint = [&](double r) -> double {
    if (diagonal) return 0.0;  // tt energy is phase-capped smooth
    const auto p = psi.eval_radial(r);
    if (kind == KernelKind::heat) return std::abs((t2 - t1) * p.imag());
    return (t1 + t2) * std::sqrt(std::max(0.0, p.real()));
  };

  // stopping tolerance from the unit-horizon variance scale
  const double tol = 1e-6 * scale_ * std::max(tmin, 0.05) * std::pow(2.0 * M_PI, d) + 1e-14;
  const auto osc = osc_radial_integral(amp, hint, omega, tol, d);

  double atom_part = 0.0;
  if (mu_.atom_at_zero() > 0.0)
    atom_part = mu_.atom_at_zero() * time_covariance(kind, 0.0, t1, t2).real();

  return std::pow(2.0 * M_PI, -d) * (atom_part + osc.value);
}

double CovarianceOracle::increment_second_moment_time(double t, double eps) const {
  const KernelKind kind = kernel_.kind();
  const ExponentModel& psi = kernel_.exponent();
  auto f = [&](double r) {
    const auto p = psi.eval_radial(r);
    return kernel_tt_energy(kind, p, eps) + kernel_increment_energy(kind, p, eps, t);
  };
  const auto series = integrate_radial(mu_, f, default_cutoff_schedule(120));
  const auto v = convergence_verdict(series);
  if (v.kind != VerdictKind::convergent)
    throw indeterminate_error(
        "increment_second_moment_time: lag too small for the quadrature range");
  return std::pow(2.0 * M_PI, -mu_.dimension()) * v.value;
}

double CovarianceOracle::increment_second_moment_space(double t, double h) const {
  const KernelKind kind = kernel_.kind();
  const ExponentModel& psi = kernel_.exponent();
  const int d = mu_.dimension();
  // 2 (2pi)^-d int TT(xi; t) (1 - cos(h xi)) mu(dxi) = 2 (2pi)^-d (V - O)
  auto tt = [&](double r) { return kernel_tt_energy(kind, psi.eval_radial(r), t); };
  const auto series = integrate_radial(mu_, tt, default_cutoff_schedule());
  const auto v = convergence_verdict(series);
  const double variance_part = v.value;  // includes the atom

  auto amp = [&](double r) -> std::complex<double> {
    return {tt(r) * mu_.radial_density(r) * (d == 1 ? 2.0 : 2.0 * M_PI * r), 0.0};
  };
  auto hint = [](double) { return 0.0; };
  const auto osc =
      osc_radial_integral(amp, hint, h, 1e-8 * (std::abs(variance_part) + 1.0) + 1e-14, d);
  const double cos_part = osc.value + mu_.atom_at_zero() * kernel_tt_energy(kind, 0.0, t);

  return 2.0 * std::pow(2.0 * M_PI, -d) * std::max(0.0, variance_part - cos_part);
}

double covariance_oracle(const Kernel& kernel, const SpectralMeasure& mu, double t1,
                         const std::vector<double>& x1, double t2,
                         const std::vector<double>& x2) {
  return CovarianceOracle(kernel, mu)(t1, x1, t2, x2);
}

// ---------------------------------------------------------------------------
// deterministic semigroup and the nonlinear solver

std::vector<double> semigroup_convolve(const ExponentModel& psi, const std::vector<double>& u0,
                                       double t, double dx) {
  if (psi.dimension() != 1)
    throw std::invalid_argument("semigroup_convolve: one-dimensional grids only");
  const std::size_t n = u0.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("semigroup_convolve: grid length must be a power of two");
  if (t < 0.0) throw std::invalid_argument("semigroup_convolve: t must be >= 0");
  std::vector<std::complex<double>> a(u0.begin(), u0.end());
  fft(a, false);
  const auto freqs = fft_frequencies(n, dx);
  for (std::size_t k = 0; k < n; ++k) a[k] *= std::exp(-t * psi.eval({freqs[k]}));
  fft(a, true);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k].real();
  return out;
}

FieldSample solve_nonlinear_heat(const ExponentModel& psi, const FrequencyLattice& lattice,
                                 const std::function<double(double)>& g, double lipschitz,
                                 const std::vector<double>& u0,
                                 const std::vector<double>& time_grid, double dx,
                                 std::uint64_t seed) {
  if (psi.dimension() != 1)
    throw std::invalid_argument("solve_nonlinear_heat: one-dimensional grids only");
  const std::size_t n = u0.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("solve_nonlinear_heat: grid length must be a power of two");
  if (time_grid.size() < 2 || time_grid.front() != 0.0)
    throw std::invalid_argument("solve_nonlinear_heat: time grid must start at 0");
  const double dt = time_grid[1] - time_grid[0];
  for (std::size_t i = 1; i < time_grid.size(); ++i)
    if (std::abs((time_grid[i] - time_grid[i - 1]) - dt) > 1e-12 * std::max(1.0, dt))
      throw std::invalid_argument("solve_nonlinear_heat: time step must be uniform");
  if (lipschitz < 0.0)
    throw std::invalid_argument("solve_nonlinear_heat: negative Lipschitz constant");
  if (lipschitz * dt >= 1.0)
    throw std::invalid_argument(
        "solve_nonlinear_heat: step-size rejection, Lipschitz constant times dt must be < 1");

  const std::size_t nt = time_grid.size();
  const auto space = uniform_space_grid(static_cast<int>(n), dx);

  // exact linear field on the same lattice and replica-0 streams
  std::vector<double> h_field(nt * n);
  {
    std::vector<double> cos_table(lattice.modes.size() * n),
        sin_table(lattice.modes.size() * n);
    for (std::size_t j = 0; j < lattice.modes.size(); ++j)
      for (std::size_t x = 0; x < n; ++x) {
        const double dot = space[x][0] * lattice.modes[j].xi[0];
        cos_table[j * n + x] = std::cos(dot);
        sin_table[j * n + x] = std::sin(dot);
      }
    assemble_replica(KernelKind::heat, lattice, time_grid, cos_table, sin_table, {}, seed, 0, n,
                     h_field.data());
  }

  const auto freqs = fft_frequencies(n, dx);
  std::vector<std::complex<double>> mult(n);
  for (std::size_t k = 0; k < n; ++k) mult[k] = std::exp(-dt * psi.eval({freqs[k]}));

  FieldSample s;
  s.time_grid = time_grid;
  s.space_grid = space;
  s.replicas = 1;
  s.seed = seed;
  s.kind = KernelKind::heat;
  s.lattice_digest = lattice.digest();
  s.values.assign(nt * n, 0.0);

  std::vector<double> u = u0;
  for (std::size_t x = 0; x < n; ++x) s.values[x] = u[x];
  std::vector<std::complex<double>> work(n);
  for (std::size_t i = 0; i + 1 < nt; ++i) {
    const double* h_now = h_field.data() + i * n;
    const double* h_next = h_field.data() + (i + 1) * n;
    for (std::size_t x = 0; x < n; ++x)
      work[x] = std::complex<double>(u[x] + dt * g(u[x]) - h_now[x], 0.0);
    fft(work, false);
    for (std::size_t k = 0; k < n; ++k) work[k] *= mult[k];
    fft(work, true);
    for (std::size_t x = 0; x < n; ++x) u[x] = work[x].real() + h_next[x];
    double* row = s.values.data() + (i + 1) * n;
    for (std::size_t x = 0; x < n; ++x) row[x] = u[x];
  }
  return s;
}

std::vector<std::vector<double>> uniform_space_grid(int n, double dx) {
  std::vector<std::vector<double>> grid;
  grid.reserve(n);
  for (int i = 0; i < n; ++i) grid.push_back({i * dx});
  return grid;
}

// ---------------------------------------------------------------------------
// persistence

void save_field(const FieldSample& sample, const std::string& basepath) {
  {
    std::ofstream bin(basepath + ".bin", std::ios::binary | std::ios::trunc);
    if (!bin) throw std::runtime_error("save_field: cannot open " + basepath + ".bin");
    bin.write(reinterpret_cast<const char*>(sample.values.data()),
              static_cast<std::streamsize>(sample.values.size() * sizeof(double)));
  }
  nlohmann::json j;
  j["schema"] = "levyfield-field/1";
  j["layout"] = "replica,time,space";
  j["float"] = "ieee754-double-le";
  j["kind"] = kernel_name(sample.kind);
  j["seed"] = sample.seed;
  j["replicas"] = sample.replicas;
  j["time_grid"] = sample.time_grid;
  j["space_grid"] = sample.space_grid;
  j["lattice_digest"] = sample.lattice_digest;
  j["warnings"] = sample.warnings;
  std::ofstream meta(basepath + ".json", std::ios::trunc);
  meta << j.dump(2) << "\n";
}

FieldSample load_field(const std::string& basepath) {
  std::ifstream meta(basepath + ".json");
  if (!meta) throw std::runtime_error("load_field: cannot open " + basepath + ".json");
  nlohmann::json j;
  meta >> j;
  FieldSample s;
  s.kind = j.at("kind").get<std::string>() == "wave" ? KernelKind::wave : KernelKind::heat;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.replicas = j.at("replicas").get<int>();
  s.time_grid = j.at("time_grid").get<std::vector<double>>();
  s.space_grid = j.at("space_grid").get<std::vector<std::vector<double>>>();
  s.lattice_digest = j.at("lattice_digest").get<std::uint64_t>();
  if (j.contains("warnings")) s.warnings = j.at("warnings").get<std::vector<std::string>>();
  const std::size_t count =
      static_cast<std::size_t>(s.replicas) * s.time_grid.size() * s.space_grid.size();
  s.values.resize(count);
  std::ifstream bin(basepath + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("load_field: cannot open " + basepath + ".bin");
  bin.read(reinterpret_cast<char*>(s.values.data()),
           static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(bin.gcount()) != count * sizeof(double))
    throw std::runtime_error("load_field: truncated binary payload");
  return s;
}

std::string to_csv_slice(const FieldSample& sample, int replica) {
  if (replica < 0 || replica >= sample.replicas)
    throw std::invalid_argument("to_csv_slice: replica out of range");
  std::string out = "t";
  char buf[64];
  for (const auto& x : sample.space_grid) {
    std::snprintf(buf, sizeof(buf), ",x=%.17g", x[0]);
    out += buf;
  }
  out += "\n";
  for (std::size_t i = 0; i < sample.time_grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", sample.time_grid[i]);
    out += buf;
    for (std::size_t x = 0; x < sample.space_grid.size(); ++x) {
      std::snprintf(buf, sizeof(buf), ",%.17g",
                    sample.value(replica, static_cast<int>(i), static_cast<int>(x)));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace levyfield
