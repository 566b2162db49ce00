#include "levyfield/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace levyfield::quad {

namespace {

Rule compute_rule(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton iteration on P_n with the Chebyshev-angle initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      const double dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
    }
    const double dp = n * (x * p0 - p1) / (x * x - 1.0);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double panel(const std::function<double(double)>& f, double a, double b, int n) {
  const Rule& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

namespace {

Result adaptive_rec(const std::function<double(double)>& f, double a, double b, double whole,
                    double rel_tol, double abs_tol, int depth, int n) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid, n);
  const double right = panel(f, mid, b, n);
  const double diff = std::abs(whole - left - right);
  if (depth <= 0 || diff <= rel_tol * std::abs(left + right) + abs_tol)
    return {left + right, diff};
  const Result rl = adaptive_rec(f, a, mid, left, rel_tol, 0.5 * abs_tol, depth - 1, n);
  const Result rr = adaptive_rec(f, mid, b, right, rel_tol, 0.5 * abs_tol, depth - 1, n);
  return {rl.value + rr.value, rl.error + rr.error};
}

}  // namespace

Result adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double abs_tol, int max_depth, int n) {
  if (!(a <= b)) throw std::invalid_argument("quad::adaptive: a > b");
  if (a == b) return {0.0, 0.0};
  return adaptive_rec(f, a, b, panel(f, a, b, n), rel_tol, abs_tol, max_depth, n);
}

Result graded_lower(const std::function<double(double)>& f, double b, int octaves, int n) {
  if (!(b > 0)) throw std::invalid_argument("quad::graded_lower: b must be positive");
  Result total;
  double hi = b;
  for (int j = 0; j < octaves; ++j) {
    const double lo = 0.5 * hi;
    const Result r = adaptive(f, lo, hi, 1e-12, 0.0, 8, n);
    total.value += r.value;
    total.error += r.error;
    hi = lo;
  }
  // closing panel [0, hi]; the integrand must be finite on the open panel,
  // GL nodes never touch 0
  total.value += panel(f, 0.0, hi, n);
  return total;
}

}  // namespace levyfield::quad
