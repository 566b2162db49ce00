#pragma once

#include <functional>
#include <vector>

namespace levyfield::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Gauss-Legendre nodes/weights on (-1,1), computed once per order and cached.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};
const Rule& gauss_legendre(int n);

/// Fixed-order panel integral over [a,b].
double panel(const std::function<double(double)>& f, double a, double b, int n = 32);

/// Adaptive bisection: accepts a panel when |whole - left - right| is within
/// tolerance. Deterministic recursion order (left before right).
Result adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 24,
                int n = 16);

/// Integral over (0, b] with geometric panels toward 0, for integrands with
/// an integrable singularity at the origin. `octaves` panels of the form
/// [b*2^-(j+1), b*2^-j] plus one closing panel at the bottom.
Result graded_lower(const std::function<double(double)>& f, double b, int octaves = 48,
                    int n = 16);

}  // namespace levyfield::quad
