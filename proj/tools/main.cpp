#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "levyfield/config.hpp"
#include "levyfield/runner.hpp"
#include "levyfield/version.hpp"

namespace {

std::string default_out_root() {
  if (const char* env = std::getenv("LEVYFIELD_OUT")) return env;
  return "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levyfield: regularity indices and exact spectral simulation for "
               "Levy-driven stochastic heat/wave equations"};
  app.set_version_flag("--version", levyfield::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_root = default_out_root();
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  int threads_override = -1;

  auto* run = app.add_subcommand("run", "execute the configured pipeline stages");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_root, "output root directory");
  run->add_option("--seed", seed_override, "override the config seed")
      ->each([&](const std::string&) { has_seed = true; });
  run->add_option("--threads", threads_override, "cap worker threads (0 = hardware)");

  auto* sweep = app.add_subcommand("sweep", "repeat the index computation over parameter values");
  std::string param;
  std::vector<double> values;
  sweep->add_option("config", config_path, "base experiment config (JSON)")->required();
  sweep->add_option("--param", param, "dotted config path, e.g. model.alpha")->required();
  sweep->add_option("--values", values, "parameter values")->expected(-1);
  sweep->add_option("--out", out_root, "output root directory");

  auto* validate = app.add_subcommand("validate", "check a config against the schema");
  validate->add_option("config", config_path, "experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      levyfield::parse_config_file(config_path);
      std::cout << "ok\n";
      return levyfield::exit_ok;
    }
    if (run->parsed()) {
      auto config = levyfield::parse_config_file(config_path);
      if (has_seed) {
        config.seed = seed_override;
        config.raw["seed"] = seed_override;
      }
      if (threads_override >= 0) config.threads = threads_override;
      const auto result = levyfield::run_experiment(config, out_root);
      if (result.exit_code == levyfield::exit_ok) {
        std::cout << "report: " << result.out_dir << "/report.json\n";
      } else {
        std::cerr << "error (" << result.exit_code << "): " << result.message << "\n";
      }
      return result.exit_code;
    }
    // sweep
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open " << config_path << "\n";
      return levyfield::exit_io_error;
    }
    nlohmann::json doc;
    in >> doc;
    const auto result = levyfield::sweep_experiment(doc, param, values, out_root);
    for (const auto& e : result.row_errors) std::cerr << "row error: " << e << "\n";
    if (!result.csv_path.empty()) std::cout << "table: " << result.csv_path << "\n";
    return result.exit_code;
  } catch (const levyfield::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return levyfield::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return levyfield::exit_io_error;
  }
}
