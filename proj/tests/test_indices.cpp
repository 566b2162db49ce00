#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/indices.hpp"

using namespace levyfield;
using namespace testing_support;

TEST_CASE("weighted spectral integral verdicts from the tail-exponent oracle") {
  auto psi = ExponentModel::isotropic_stable(1.0, 1);
  auto mu = SpectralMeasure::riesz_like(1.5, 1);
  // weight one: tail exponent -2.5 < -1 -> convergent
  CHECK(weighted_spectral_integral(psi, mu, SpectralWeight::one).kind ==
        VerdictKind::convergent);
  // weight |psi|^0.8: tail exponent 0.8 - 1 - 1.5 = -1.7 < -1 -> convergent
  CHECK(weighted_spectral_integral(psi, mu, SpectralWeight::abs_psi_pow, 0.8).kind ==
        VerdictKind::convergent);
  // weight |psi|^a diverges once a - 2.5 >= -1, i.e. a >= 1.5: probe via norm weight
  CHECK(weighted_spectral_integral(psi, mu, SpectralWeight::norm_pow, 1.8).kind ==
        VerdictKind::divergent);
}

TEST_CASE("log squared x paper example: norm weight diverges for every b > 0") {
  auto psi = ExponentModel::log_squared();
  auto mu = SpectralMeasure::paper_example();
  for (double b : {0.01, 0.05, 0.25, 0.5}) {
    CHECK(weighted_spectral_integral(psi, mu, SpectralWeight::norm_pow, 2.0 * b).kind ==
          VerdictKind::divergent);
  }
}

TEST_CASE("golden fractal indices against the tail-exponent formulas") {
  for (const auto& p : golden_valid()) {
    auto psi = p.model();
    auto mu = p.measure();
    const auto ih = fractal_index(psi, mu, FractalKind::H);
    const auto il = fractal_index(psi, mu, FractalKind::L);
    CAPTURE(p.alpha);
    CAPTURE(p.beta);
    CHECK(std::abs(ih.value - p.ind_h()) <= 0.02);
    CHECK(std::abs(il.value - p.ind_l()) <= 0.02);
    CHECK(ih.hi - ih.lo > 0.0);
    CHECK(il.value <= ih.value + (ih.hi - ih.lo) + (il.hi - il.lo) + 1e-12);
  }
}

TEST_CASE("dalang-divergent pairs are rejected with a precondition error") {
  for (const auto& p : golden_grid()) {
    if (p.dalang_holds()) continue;
    CHECK_THROWS_AS(fractal_index(p.model(), p.measure(), FractalKind::H), precondition_error);
  }
}

TEST_CASE("stable over riesz(0.5): the spec's worked pair") {
  auto psi = ExponentModel::isotropic_stable(1.0, 1);
  auto mu = SpectralMeasure::riesz_like(0.5, 1);
  const auto ih = fractal_index(psi, mu, FractalKind::H);
  const auto il = fractal_index(psi, mu, FractalKind::L);
  CHECK(ih.value == doctest::Approx(0.5).epsilon(0.04));
  CHECK(il.value == doctest::Approx(0.25).epsilon(0.08));
}

TEST_CASE("log squared: ind_L exactly zero, ind_H near the log-boundary half") {
  // With psi ~ (log xi)^2 and mu = (1+|xi|)^{-1} dxi the defining integrals
  // give ind_H = 1/2 (integrand (log r)^{2a-2}/r) and ind_L = 0; the slow-log
  // boundary keeps the bisection estimate below the exact 1/2.
  auto psi = ExponentModel::log_squared();
  auto mu = SpectralMeasure::paper_example();
  const auto il = fractal_index(psi, mu, FractalKind::L);
  CHECK(il.value == 0.0);
  CHECK(il.capped_low);
  CHECK(il.hi <= 0.05);
  const auto ih = fractal_index(psi, mu, FractalKind::H);
  CHECK(ih.value >= 0.3);
  CHECK(ih.value <= 0.6);
}

TEST_CASE("brownian with a finite measure caps both indices at one") {
  auto psi = ExponentModel::brownian_identity(1);
  auto mu = SpectralMeasure::finite_uniform(1);
  const auto ih = fractal_index(psi, mu, FractalKind::H);
  const auto il = fractal_index(psi, mu, FractalKind::L);
  CHECK(ih.value == 1.0);
  CHECK(ih.capped_high);
  CHECK(il.value == 1.0);
  CHECK(il.capped_high);
}

TEST_CASE("heat kernel index identities on a golden pair") {
  GoldenPair p{1.0, 0.5};
  Kernel heat(KernelKind::heat, p.model());
  auto mu = p.measure();
  const auto ir = kernel_space_index(heat, mu, 1.0);
  CHECK(std::abs(ir.value - std::min(1.0, 2.0 * p.ind_l())) <= 0.03);
  const auto kt = kernel_time_indices(heat, mu, 1.0);
  CHECK(std::abs(kt.i_h.value - p.ind_h()) <= 0.03);
  CHECK(std::abs(kt.i_h_upper.value - p.ind_h()) <= 0.03);
  CHECK(std::abs(kt.i_h_lower.value - p.ind_h()) <= 0.03);
}

TEST_CASE("wave kernel index identities on a golden pair") {
  GoldenPair p{1.0, 0.25};
  Kernel wave(KernelKind::wave, p.model());
  auto mu = p.measure();
  const auto ir = kernel_space_index(wave, mu, 1.0);
  CHECK(std::abs(ir.value - std::min(1.0, 2.0 * p.ind_l())) <= 0.03);
  const auto kt = kernel_time_indices(wave, mu, 1.0);
  CHECK(kt.i_h.lo >= 0.95);  // I_H = 1 for the wave kernel
  CHECK(std::abs(kt.i_h_upper.value - std::min(1.0, 2.0 * p.ind_h())) <= 0.05);
  CHECK(std::abs(kt.i_h_lower.value - std::min(1.0, 2.0 * p.ind_h())) <= 0.05);
}

TEST_CASE("space index caps at one when 2 ind_L exceeds the range") {
  Kernel heat(KernelKind::heat, ExponentModel::brownian_identity(1));
  auto mu = SpectralMeasure::finite_uniform(1);
  const auto ir = kernel_space_index(heat, mu, 1.0);
  CHECK(ir.value == 1.0);
  CHECK(ir.capped_high);
}

TEST_CASE("kernel indices demand a well-posed model") {
  GoldenPair bad{0.5, 0.25};
  Kernel heat(KernelKind::heat, bad.model());
  CHECK_THROWS_AS(kernel_space_index(heat, bad.measure(), 1.0), precondition_error);
  CHECK_THROWS_AS(kernel_time_indices(heat, bad.measure(), 1.0), precondition_error);
}

TEST_CASE("space index is T-independent on the golden pair") {
  GoldenPair p{1.5, 0.25};
  Kernel heat(KernelKind::heat, p.model());
  auto mu = p.measure();
  double values[3];
  int i = 0;
  for (double t : {0.5, 1.0, 2.0}) values[i++] = kernel_space_index(heat, mu, t).value;
  CHECK(std::abs(values[0] - values[1]) <= 0.02);
  CHECK(std::abs(values[1] - values[2]) <= 0.02);
}

TEST_CASE("integrability index on synthetic decay profiles") {
  auto samples = [](auto f) {
    std::vector<std::pair<double, double>> s;
    for (int k = 1; k <= 20; ++k) s.emplace_back(std::exp(-k), f(k));
    return s;
  };
  const auto pure = index_from_integrability(
      samples([](int k) { return std::exp(-0.7 * k); }), true);
  CHECK(pure.index == doctest::Approx(0.7).epsilon(0.01));

  // polynomial factor does not move the index
  const auto poly = index_from_integrability(
      samples([](int k) { return k * k * std::exp(-1.0 * k); }), true);
  CHECK(poly.index == doctest::Approx(1.0).epsilon(0.03));

  const auto flat = index_from_integrability(samples([](int) { return 1.0; }), true);
  CHECK(flat.index == 0.0);

  const auto zero = index_from_integrability(samples([](int) { return 0.0; }), true);
  CHECK(zero.infinite);
}

TEST_CASE("fractional-power consistency where the subordinated model stays well-posed") {
  // positivity of ind_H transfers between psi and psi^tau (both Dalang-valid)
  struct Case { double alpha, beta, tau; };
  for (const Case c : {Case{1.5, 1.0, 0.5}, Case{1.5, 0.5, 0.9}, Case{1.0, 0.5, 0.9}}) {
    auto psi = ExponentModel::isotropic_stable(c.alpha, 1);
    auto mu = SpectralMeasure::riesz_like(c.beta, 1);
    auto sub = fractional_power(psi, c.tau);
    REQUIRE(dalang_verdict(sub, mu).kind == VerdictKind::convergent);
    const auto base_h = fractal_index(psi, mu, FractalKind::H);
    const auto sub_h = fractal_index(sub, mu, FractalKind::H);
    CHECK((base_h.value > 0.0) == (sub_h.value > 0.0));
  }
}

TEST_CASE("index reports are bitwise deterministic") {
  GoldenPair p{1.0, 0.5};
  const auto r1 = compute_index_report(p.model(), p.measure(), KernelKind::heat, 1.0, "m", "mu");
  const auto r2 = compute_index_report(p.model(), p.measure(), KernelKind::heat, 1.0, "m", "mu");
  CHECK(to_json_string(r1) == to_json_string(r2));
}

TEST_CASE("index report serialization carries the indices and caps") {
  GoldenPair p{1.0, 1.0};
  const auto rep = compute_index_report(p.model(), p.measure(), std::nullopt, 1.0, "stable",
                                        "riesz");
  const auto json = to_json_string(rep);
  CHECK(json.find("\"ind_H\"") != std::string::npos);
  CHECK(json.find("\"capped_high\": true") != std::string::npos);
  const auto row = to_csv_row(rep, "1.0");
  CHECK(row.rfind("1.0,stable,riesz,convergent,", 0) == 0);
}
