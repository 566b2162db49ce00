#include "levyfield/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "levyfield/errors.hpp"
#include "levyfield/fieldsim.hpp"
#include "levyfield/regularity.hpp"
#include "levyfield/version.hpp"

namespace levyfield {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<double> dyadic_lags(double largest, int count) {
  std::vector<double> lags;
  for (int k = 0; k < count; ++k) lags.push_back(largest * std::pow(2.0, -k));
  std::reverse(lags.begin(), lags.end());
  return lags;
}

nlohmann::json trend_json(Trend t) {
  switch (t) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    default: return "flat";
  }
}

bool has_stage(const ExperimentConfig& c, const char* s) {
  return std::find(c.stages.begin(), c.stages.end(), s) != c.stages.end();
}

std::vector<double> make_time_grid(double horizon, int points) {
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i) t[i] = horizon * (i + 1) / points;
  return t;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::string& out_root) {
  RunResult result;
  const std::string digest = config_digest(config.raw);

  nlohmann::json report;
  report["schema"] = kReportSchemaTag;
  report["version"] = kVersion;
  report["config_digest"] = digest;
  report["config"] = config.raw;
  report["tolerances"] = {
      {"cutoff_schedule", "2^k, k=0..40"},
      {"panels", "adaptive Gauss-Legendre, 32 nodes per octave"},
      {"richardson_rel_tol", 1e-4},
      {"geometric_slope_threshold", 0.2},
      {"bisection_budget", 8},
      {"near_boundary_band", 0.05},
  };

  fs::path dir;
  try {
    dir = fs::path(out_root) / digest;
    fs::create_directories(dir / "tables");
    fs::create_directories(dir / "fields");
  } catch (const std::exception& e) {
    result.exit_code = exit_io_error;
    result.message = std::string("io: ") + e.what();
    return result;
  }
  result.out_dir = dir.string();

  const ExponentModel& model = config.model_ref();
  const SpectralMeasure& measure = config.measure_ref();
  std::string stage;
  try {
    if (has_stage(config, "diagnose")) {
      stage = "diagnose/diagnose";
      const auto rep = diagnose(model);
      report["diagnose"] = {
          {"shell_radii", rep.shell_radii},
          {"bochner_per_shell", rep.bochner_per_shell},
          {"min_re_psi_per_shell", rep.min_re_psi_per_shell},
          {"bochner_ratio", rep.bochner_ratio},
          {"min_abs_psi_off_zero", rep.min_abs_psi_off_zero},
          {"hermitian_residual", rep.hermitian_residual},
          {"max_imag_part", rep.max_imag_part},
          {"rl_trend", trend_json(rep.rl_trend)},
      };
    }

    std::optional<IndexReport> index_report;
    if (has_stage(config, "indices")) {
      stage = "indices/compute_index_report";
      index_report = compute_index_report(model, measure, config.kernel, config.horizon,
                                          family_name(model.family()),
                                          family_name(measure.family()));
      report["indices"] = nlohmann::json::parse(to_json_string(*index_report));
      write_text(dir / "tables" / "indices.csv",
                 csv_header_index_report() + to_csv_row(*index_report));
    }

    std::optional<FieldSample> sample;
    std::optional<FrequencyLattice> lattice;
    auto need_lattice = [&]() -> const FrequencyLattice& {
      if (!lattice.has_value()) {
        lattice = build_lattice(measure, model, config.lattice_modes, config.lattice_cutoff);
        report["lattice"] = {{"modes", lattice->modes.size()},
                             {"cutoff", lattice->cutoff},
                             {"dalang_total", lattice->dalang_total},
                             {"truncation_error", lattice->truncation_error},
                             {"digest", lattice->digest()}};
      }
      return *lattice;
    };

    if (has_stage(config, "simulate")) {
      stage = "simulate/simulate_linear";
      Kernel kernel(*config.kernel, model);
      const auto time_grid = make_time_grid(config.horizon, config.time_points);
      const auto space_grid = uniform_space_grid(config.space_points, config.space_dx);
      sample = simulate_linear(kernel, need_lattice(), time_grid, space_grid, config.replicas,
                               config.seed, config.threads);
      save_field(*sample, (dir / "fields" / "linear").string());
      write_text(dir / "tables" / "field_slice.csv", to_csv_slice(*sample, 0));
      report["simulate"] = {{"replicas", sample->replicas},
                            {"warnings", sample->warnings},
                            {"field", "fields/linear"}};
    }

    std::optional<ExponentFit> time_fit, space_fit;
    if (has_stage(config, "variogram")) {
      stage = "variogram/variogram";
      Kernel kernel(*config.kernel, model);
      CovarianceOracle oracle(kernel, measure);
      auto tlags = config.time_lags;
      if (tlags.empty()) dyadic_lags(config.horizon / 4.0, 10).swap(tlags);
      auto slags = config.space_lags;
      if (slags.empty())
        dyadic_lags(config.space_dx * std::max(1, config.space_points / 2), 10).swap(slags);
      const std::vector<double> bases = {0.5 * config.horizon, 0.75 * config.horizon,
                                         config.horizon};
      const auto vt = variogram_exact(oracle, Direction::time, tlags, bases);
      const auto vs = variogram_exact(oracle, Direction::space, slags, bases);
      write_text(dir / "tables" / "variogram_time.csv", to_csv(vt));
      write_text(dir / "tables" / "variogram_space.csv", to_csv(vs));
      stage = "variogram/fit_exponent";
      time_fit = fit_exponent(vt);
      space_fit = fit_exponent(vs);
      report["variogram"] = {
          {"time", {{"exponent", time_fit->exponent}, {"ci", time_fit->ci}}},
          {"space", {{"exponent", space_fit->exponent}, {"ci", space_fit->ci}}}};
      if (sample.has_value()) {
        stage = "variogram/variogram_empirical";
        // empirical lags restricted to grid multiples within the extent
        auto grid_lags = [&](double step, int count) {
          std::vector<double> l;
          for (int k = 1; k <= count; ++k) l.push_back(step * k);
          return l;
        };
        const auto et = variogram_empirical(
            *sample, Direction::time,
            grid_lags(config.horizon / config.time_points,
                      std::max(8, config.time_points - 1)));
        const auto es = variogram_empirical(
            *sample, Direction::space,
            grid_lags(config.space_dx, std::max(8, config.space_points - 1)));
        write_text(dir / "tables" / "variogram_time_empirical.csv", to_csv(et));
        write_text(dir / "tables" / "variogram_space_empirical.csv", to_csv(es));
      }
    }

    if (has_stage(config, "classify")) {
      stage = "classify/classify";
      const auto verdict = classify(*index_report, time_fit, space_fit);
      report["classify"] = nlohmann::json::parse(to_json_string(verdict));
    }

    if (has_stage(config, "nonlinear")) {
      stage = "nonlinear/solve_nonlinear_heat";
      std::function<double(double)> g;
      double lipschitz = config.nl_lipschitz;
      if (config.nl_g == "zero") {
        g = [](double) { return 0.0; };
      } else if (config.nl_g == "constant") {
        const double a0 = config.nl_a0;
        g = [a0](double) { return a0; };
      } else {
        g = [](double u) { return -u; };
        lipschitz = std::max(lipschitz, 1.0);
      }
      const int n = config.nl_space_points;
      std::vector<double> u0(n, 0.0);
      if (config.nl_u0 == "cosine") {
        const double k0 = 2.0 * M_PI * config.nl_u0_wavenumber / (n * config.space_dx);
        for (int i = 0; i < n; ++i) u0[i] = std::cos(k0 * i * config.space_dx);
      }
      std::vector<double> tgrid(config.nl_time_steps + 1);
      for (int i = 0; i <= config.nl_time_steps; ++i)
        tgrid[i] = config.horizon * i / config.nl_time_steps;
      const auto nl = solve_nonlinear_heat(model, need_lattice(), g, lipschitz, u0, tgrid,
                                           config.space_dx, config.seed);
      save_field(nl, (dir / "fields" / "nonlinear").string());
      report["nonlinear"] = {{"field", "fields/nonlinear"},
                             {"steps", config.nl_time_steps},
                             {"g", config.nl_g}};
    }
  } catch (const config_error& e) {
    result.exit_code = exit_config_error;
    result.message = stage + ": " + e.what();
  } catch (const precondition_error& e) {
    result.exit_code = exit_precondition;
    result.message = stage + ": " + e.what();
  } catch (const indeterminate_error& e) {
    result.exit_code = exit_indeterminate;
    result.message = stage + ": " + e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = exit_config_error;
    result.message = stage + ": " + e.what();
  } catch (const std::exception& e) {
    result.exit_code = exit_io_error;
    result.message = stage + ": " + e.what();
  }

  if (result.exit_code != exit_ok) report["error"] = result.message;
  result.report_json = report.dump(2);
  try {
    write_text(dir / "report.json", result.report_json + "\n");
  } catch (const std::exception& e) {
    result.exit_code = exit_io_error;
    result.message = std::string("io: ") + e.what();
  }
  return result;
}

SweepResult sweep_experiment(const nlohmann::json& base_doc, const std::string& parameter,
                             const std::vector<double>& values, const std::string& out_root) {
  SweepResult out;
  out.csv = csv_header_index_report();

  std::string pointer = "/" + parameter;
  std::replace(pointer.begin(), pointer.end(), '.', '/');

  for (double v : values) {
    nlohmann::json doc = base_doc;
    try {
      doc[nlohmann::json::json_pointer(pointer)] = v;
    } catch (const std::exception& e) {
      out.row_errors.push_back("value " + std::to_string(v) + ": bad parameter path: " +
                               e.what());
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%.17g,,,error:bad-path,,,,,,,,,,,,\n", v);
      out.csv += buf;
      continue;
    }
    char val_buf[40];
    std::snprintf(val_buf, sizeof(val_buf), "%.17g", v);
    try {
      const ExperimentConfig c = parse_config(doc);
      const auto rep = compute_index_report(c.model_ref(), c.measure_ref(), c.kernel, c.horizon,
                                            family_name(c.model_ref().family()),
                                            family_name(c.measure_ref().family()));
      out.csv += to_csv_row(rep, val_buf);
    } catch (const std::exception& e) {
      out.row_errors.push_back("value " + std::string(val_buf) + ": " + e.what());
      out.csv += std::string(val_buf) + ",,,error," + ",,,,,,,,,,,\n";
    }
  }

  try {
    const std::string digest = config_digest(base_doc);
    std::filesystem::create_directories(out_root);
    const auto path = std::filesystem::path(out_root) / ("sweep-" + digest + ".csv");
    write_text(path, out.csv);
    out.csv_path = path.string();
  } catch (const std::exception&) {
    out.exit_code = exit_io_error;
  }
  return out;
}

}  // namespace levyfield
