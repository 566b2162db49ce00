#pragma once

#include <cmath>
#include <vector>

#include "levyfield/exponent.hpp"
#include "levyfield/spectral.hpp"

namespace testing_support {

struct GoldenPair {
  double alpha;
  double beta;
  double ind_h() const { return std::min(1.0, (alpha + beta - 1.0) / alpha); }
  double ind_l() const { return std::min(1.0, (alpha + beta - 1.0) / 2.0); }
  bool dalang_holds() const { return alpha + beta > 1.0; }
  levyfield::ExponentModel model() const {
    return levyfield::ExponentModel::isotropic_stable(alpha, 1);
  }
  levyfield::SpectralMeasure measure() const {
    return levyfield::SpectralMeasure::riesz_like(beta, 1);
  }
};

// the (alpha, beta) grid of the golden set; the first two fail Dalang
inline std::vector<GoldenPair> golden_grid() {
  std::vector<GoldenPair> g;
  for (double a : {0.5, 1.0, 1.5})
    for (double b : {0.25, 0.5, 1.0}) g.push_back({a, b});
  return g;
}

inline std::vector<GoldenPair> golden_valid() {
  std::vector<GoldenPair> g;
  for (const auto& p : golden_grid())
    if (p.dalang_holds()) g.push_back(p);
  return g;
}

inline std::vector<double> dyadic_lags(int from_pow, int to_pow) {
  std::vector<double> lags;
  for (int j = from_pow; j <= to_pow; ++j) lags.push_back(std::pow(2.0, -j));
  return lags;
}

}  // namespace testing_support
