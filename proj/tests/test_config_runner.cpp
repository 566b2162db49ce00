#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <unistd.h>
#include <fstream>

#include "levyfield/config.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/indices.hpp"
#include "levyfield/runner.hpp"
#include "levyfield/version.hpp"

using namespace levyfield;
namespace fs = std::filesystem;

namespace {

nlohmann::json base_config() {
  return nlohmann::json{
      {"schema", kConfigSchemaTag},
      {"model", {{"family", "isotropic_stable"}, {"alpha", 1.0}, {"dimension", 1}}},
      {"measure", {{"family", "riesz_like"}, {"beta", 0.5}, {"dimension", 1}}},
      {"kernel", "heat"},
      {"horizon", 1.0},
      {"stages", {"diagnose", "indices"}},
      {"lattice", {{"modes", 64}, {"cutoff", 65536.0}}},
      {"grids", {{"time_points", 4}, {"space_points", 4}, {"space_dx", 0.5}}},
      {"replicas", 64},
      {"seed", 11},
  };
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("levyfield-run-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config schema validation failures") {
  auto doc = base_config();
  doc.erase("schema");
  CHECK_THROWS_AS(parse_config(doc), config_error);

  doc = base_config();
  doc["stages"] = {"classify"};
  CHECK_THROWS_AS(parse_config(doc), config_error);  // classify needs indices + variogram

  doc = base_config();
  doc["stages"] = {"simulate"};
  doc.erase("kernel");
  CHECK_THROWS_AS(parse_config(doc), config_error);

  doc = base_config();
  doc["model"]["family"] = "unheard_of";
  CHECK_THROWS_AS(parse_config(doc), config_error);
}

TEST_CASE("model and measure documents round-trip") {
  for (const char* fam : {"brownian", "isotropic_stable", "asymmetric_cauchy", "log_squared"}) {
    nlohmann::json j = {{"family", fam}, {"dimension", 1}};
    if (std::string(fam) == "isotropic_stable") j["alpha"] = 1.3;
    if (std::string(fam) == "asymmetric_cauchy") j["h"] = -0.25;
    const auto m = model_from_json(j);
    const auto back = model_to_json(m);
    CHECK(model_from_json(back).family() == m.family());
  }
  nlohmann::json frac = {{"family", "fractional"},
                         {"tau", 0.5},
                         {"dimension", 1},
                         {"base", {{"family", "isotropic_stable"}, {"alpha", 1.5}}}};
  const auto m = model_from_json(frac);
  CHECK(m.family() == ExponentFamily::isotropic_stable);  // collapses to stable(0.75)
  CHECK(m.stable_alpha() == doctest::Approx(0.75));

  nlohmann::json meas = {{"family", "riesz_like"}, {"beta", 0.5}, {"atom", 1.0}};
  const auto mu = measure_from_json(meas);
  CHECK(mu.atom_at_zero() == 1.0);
  CHECK(measure_to_json(mu)["beta"] == 0.5);
}

TEST_CASE("config digests are canonical") {
  const auto a = config_digest(base_config());
  auto shuffled = nlohmann::json::parse(base_config().dump());
  CHECK(config_digest(shuffled) == a);
  auto changed = base_config();
  changed["seed"] = 12;
  CHECK(config_digest(changed) != a);
}

TEST_CASE("diagnose-only run writes a report and exits zero") {
  TempDir tmp;
  auto doc = base_config();
  doc["stages"] = {"diagnose"};
  const auto result = run_experiment(parse_config(doc), tmp.path.string());
  REQUIRE(result.exit_code == exit_ok);
  const auto report = nlohmann::json::parse(result.report_json);
  CHECK(report["diagnose"]["bochner_ratio"].get<double>() > 0.0);
  CHECK(report["config_digest"] == config_digest(doc));
  CHECK(fs::exists(fs::path(result.out_dir) / "report.json"));
}

TEST_CASE("dalang-divergent configs exit with the precondition code") {
  TempDir tmp;
  auto doc = base_config();
  doc["model"]["alpha"] = 0.5;  // alpha + beta = 1: divergent
  doc["stages"] = {"indices"};
  const auto result = run_experiment(parse_config(doc), tmp.path.string());
  CHECK(result.exit_code == exit_precondition);
  CHECK(result.message.find("Dalang") != std::string::npos);
}

TEST_CASE("full pipeline on the golden pair marks agreement both ways") {
  TempDir tmp;
  auto doc = base_config();
  doc["stages"] = {"indices", "simulate", "variogram", "classify"};
  doc["replicas"] = 400;
  doc["lattice"] = {{"modes", 128}, {"cutoff", 1048576.0}};
  doc["grids"] = {{"time_points", 8}, {"space_points", 8}, {"space_dx", 0.25}};
  const auto result = run_experiment(parse_config(doc), tmp.path.string());
  REQUIRE(result.exit_code == exit_ok);
  const auto report = nlohmann::json::parse(result.report_json);
  CHECK(report["classify"]["time"]["classification"] == "holder-with-exponent-range");
  CHECK(report["classify"]["time"]["agreement"] == true);
  CHECK(report["classify"]["space"]["agreement"] == true);
  CHECK(fs::exists(fs::path(result.out_dir) / "tables" / "variogram_time.csv"));
  CHECK(fs::exists(fs::path(result.out_dir) / "fields" / "linear.bin"));
}

TEST_CASE("reruns reproduce the outputs bit for bit") {
  TempDir tmp1, tmp2;
  auto doc = base_config();
  doc["stages"] = {"indices", "simulate"};
  const auto r1 = run_experiment(parse_config(doc), tmp1.path.string());
  const auto r2 = run_experiment(parse_config(doc), tmp2.path.string());
  REQUIRE(r1.exit_code == exit_ok);
  REQUIRE(r2.exit_code == exit_ok);
  CHECK(r1.report_json == r2.report_json);
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(read(fs::path(r1.out_dir) / "fields" / "linear.bin") ==
        read(fs::path(r2.out_dir) / "fields" / "linear.bin"));
  CHECK(read(fs::path(r1.out_dir) / "tables" / "indices.csv") ==
        read(fs::path(r2.out_dir) / "tables" / "indices.csv"));
}

TEST_CASE("sweep over alpha matches the tail-exponent oracle") {
  TempDir tmp;
  auto doc = base_config();
  const auto result =
      sweep_experiment(doc, "model.alpha", {0.5, 1.0, 1.5}, tmp.path.string());
  CHECK(result.exit_code == exit_ok);
  // alpha = 0.5 with beta = 0.5 fails Dalang: recorded as an error row
  CHECK(result.row_errors.size() == 1);
  CHECK(result.csv.find("error") != std::string::npos);
  // alpha = 1.0 -> ind_H 0.5; alpha = 1.5 -> ind_H = 2/3
  std::istringstream lines(result.csv);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  auto field = [](const std::string& row, int idx) {
    std::istringstream ss(row);
    std::string cell;
    for (int i = 0; i <= idx; ++i) std::getline(ss, cell, ',');
    return cell;
  };
  CHECK(std::stod(field(rows[1], 4)) == doctest::Approx(0.5).epsilon(0.04));
  CHECK(std::stod(field(rows[2], 4)) == doctest::Approx(2.0 / 3.0).epsilon(0.04));
  // ind_L column
  CHECK(std::stod(field(rows[1], 7)) == doctest::Approx(0.25).epsilon(0.08));
}

TEST_CASE("sweep over beta recovers the ind_L oracle") {
  TempDir tmp;
  auto doc = base_config();
  const auto result =
      sweep_experiment(doc, "measure.beta", {0.25, 0.5, 1.0}, tmp.path.string());
  CHECK(result.exit_code == exit_ok);
  CHECK(result.row_errors.empty());
  std::istringstream lines(result.csv);
  std::string line;
  std::getline(lines, line);
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  const double expected[] = {0.125, 0.25, 0.5};
  for (int i = 0; i < 3; ++i) {
    std::istringstream ss(rows[i]);
    std::string cell;
    for (int c = 0; c <= 7; ++c) std::getline(ss, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(expected[i]).epsilon(0.1));
  }
}

TEST_CASE("empty sweep produces an empty table and exit zero") {
  TempDir tmp;
  const auto result = sweep_experiment(base_config(), "model.alpha", {}, tmp.path.string());
  CHECK(result.exit_code == exit_ok);
  CHECK(result.csv == csv_header_index_report());
}
