#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyfield/errors.hpp"
#include "levyfield/exponent.hpp"
#include "levyfield/kernels.hpp"
#include "levyfield/spectral.hpp"

namespace levyfield {

/// Declarative experiment description; see README for the schema. Parsed
/// eagerly so invalid configs fail before any stage runs.
struct ExperimentConfig {
  std::optional<ExponentModel> model;
  std::optional<SpectralMeasure> measure;
  std::optional<KernelKind> kernel;
  double horizon = 1.0;
  int lattice_modes = 512;
  double lattice_cutoff = 1048576.0;  // 2^20
  int time_points = 8;
  int space_points = 8;
  double space_dx = 0.5;
  int replicas = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::vector<std::string> stages;
  std::vector<double> time_lags;   // defaults: dyadic if empty
  std::vector<double> space_lags;
  // nonlinear stage
  std::string nl_g = "constant";   // "zero" | "constant" | "linear_decay" (g(u) = -u)
  double nl_a0 = 0.0;
  double nl_lipschitz = 0.0;
  std::string nl_u0 = "zero";      // "zero" | "cosine"
  double nl_u0_wavenumber = 1.0;
  int nl_space_points = 256;
  int nl_time_steps = 64;

  nlohmann::json raw;

  const ExponentModel& model_ref() const { return *model; }
  const SpectralMeasure& measure_ref() const { return *measure; }
};

ExponentModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ExponentModel& m);
SpectralMeasure measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const SpectralMeasure& m);

/// Parses and validates a config document (schema tag, stage dependencies,
/// parameter ranges). Throws config_error with a message naming the field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_file(const std::string& path);

/// FNV-1a digest of the canonical (sorted-key, fixed-precision) dump.
std::string config_digest(const nlohmann::json& doc);

}  // namespace levyfield
