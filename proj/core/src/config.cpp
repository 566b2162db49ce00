#include "levyfield/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "levyfield/errors.hpp"
#include "levyfield/version.hpp"

namespace levyfield {

namespace {

[[noreturn]] void bad(const std::string& what) { throw config_error("config: " + what); }

double need_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) bad(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

}  // namespace

ExponentModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("family")) bad("model.family missing");
  const std::string fam = j.at("family").get<std::string>();
  const int d = j.value("dimension", 1);
  if (fam == "brownian") {
    if (j.contains("diffusion") && j.at("diffusion").is_array()) {
      std::vector<double> a;
      for (const auto& row : j.at("diffusion"))
        for (const auto& v : row) a.push_back(v.get<double>());
      return ExponentModel::brownian(std::move(a), d);
    }
    return ExponentModel::brownian_identity(d);
  }
  if (fam == "isotropic_stable")
    return ExponentModel::isotropic_stable(need_number(j, "alpha"), d);
  if (fam == "asymmetric_cauchy") return ExponentModel::asymmetric_cauchy(need_number(j, "h"));
  if (fam == "compound_poisson") {
    std::vector<PoissonAtom> atoms;
    if (!j.contains("atoms")) bad("compound_poisson needs atoms");
    for (const auto& a : j.at("atoms"))
      atoms.push_back({a.at("y").get<std::vector<double>>(), a.at("w").get<double>()});
    std::vector<double> drift;
    if (j.contains("drift")) drift = j.at("drift").get<std::vector<double>>();
    return ExponentModel::compound_poisson(std::move(atoms), std::move(drift));
  }
  if (fam == "log_squared") return ExponentModel::log_squared();
  if (fam == "fractional") {
    if (!j.contains("base")) bad("fractional needs base model");
    return fractional_power(model_from_json(j.at("base")), need_number(j, "tau"));
  }
  if (fam == "numeric_triplet") {
    LevyTriplet t;
    if (j.contains("drift")) t.drift = j.at("drift").get<std::vector<double>>();
    if (j.contains("diffusion")) {
      for (const auto& row : j.at("diffusion"))
        for (const auto& v : row) t.diffusion.push_back(v.get<double>());
    }
    t.jump_inner = j.value("jump_inner", 1e-10);
    t.jump_outer = j.value("jump_outer", 1e6);
    if (j.contains("jump_density")) {
      const auto& jd = j.at("jump_density");
      const std::string kind = jd.at("kind").get<std::string>();
      const double c = jd.value("c", 1.0);
      if (kind == "stable_like") {
        const double p = need_number(jd, "alpha");
        t.jump_density = [c, p, d](double r) { return c * std::pow(std::abs(r), -d - p); };
      } else if (kind == "exponential") {
        t.jump_density = [c](double r) { return c * std::exp(-std::abs(r)); };
      } else {
        bad("unknown jump_density kind '" + kind + "'");
      }
      t.radial_density = jd.value("radial", true);
    }
    std::optional<bool> rl;
    if (j.contains("satisfies_rl")) rl = j.at("satisfies_rl").get<bool>();
    return ExponentModel::numeric_triplet(std::move(t), d, rl);
  }
  bad("unknown model family '" + fam + "'");
}

nlohmann::json model_to_json(const ExponentModel& m) {
  nlohmann::json j;
  j["dimension"] = m.dimension();
  switch (m.family()) {
    case ExponentFamily::brownian: {
      j["family"] = "brownian";
      const auto& a = m.brownian_diffusion();
      const int d = m.dimension();
      nlohmann::json rows = nlohmann::json::array();
      for (int i = 0; i < d; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < d; ++k) row.push_back(a[i * d + k]);
        rows.push_back(row);
      }
      j["diffusion"] = rows;
      break;
    }
    case ExponentFamily::isotropic_stable:
      j["family"] = "isotropic_stable";
      j["alpha"] = m.stable_alpha();
      break;
    case ExponentFamily::asymmetric_cauchy:
      j["family"] = "asymmetric_cauchy";
      j["h"] = m.cauchy_h();
      break;
    case ExponentFamily::compound_poisson: {
      j["family"] = "compound_poisson";
      nlohmann::json atoms = nlohmann::json::array();
      for (const auto& a : m.poisson_atoms()) atoms.push_back({{"y", a.y}, {"w", a.weight}});
      j["atoms"] = atoms;
      j["drift"] = m.poisson_drift();
      break;
    }
    case ExponentFamily::log_squared:
      j["family"] = "log_squared";
      break;
    case ExponentFamily::fractional:
      j["family"] = "fractional";
      j["tau"] = m.fractional_tau();
      j["base"] = model_to_json(m.fractional_base());
      break;
    case ExponentFamily::numeric_triplet:
      bad("numeric_triplet models with custom densities do not round-trip");
  }
  return j;
}

SpectralMeasure measure_from_json(const nlohmann::json& j) {
  if (!j.contains("family")) bad("measure.family missing");
  const std::string fam = j.at("family").get<std::string>();
  const int d = j.value("dimension", 1);
  const double atom = j.value("atom", 0.0);
  SpectralMeasure m = [&]() {
    if (fam == "riesz_like") return SpectralMeasure::riesz_like(need_number(j, "beta"), d);
    if (fam == "gaussian_density") return SpectralMeasure::gaussian_density(d);
    if (fam == "paper_example") return SpectralMeasure::paper_example();
    if (fam == "finite_uniform") return SpectralMeasure::finite_uniform(d);
    bad("unknown measure family '" + fam + "'");
  }();
  return atom > 0.0 ? m.with_atom(atom) : m;
}

nlohmann::json measure_to_json(const SpectralMeasure& m) {
  nlohmann::json j;
  j["family"] = family_name(m.family());
  j["dimension"] = m.dimension();
  if (m.atom_at_zero() > 0.0) j["atom"] = m.atom_at_zero();
  if (m.family() == MeasureFamily::riesz_like) j["beta"] = m.riesz_beta();
  return j;
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  ExperimentConfig c;
  c.raw = doc;
  if (doc.value("schema", "") != kConfigSchemaTag)
    bad(std::string("schema must be '") + kConfigSchemaTag + "'");
  if (!doc.contains("model")) bad("model section missing");
  if (!doc.contains("measure")) bad("measure section missing");
  c.model = model_from_json(doc.at("model"));
  c.measure = measure_from_json(doc.at("measure"));
  if (c.model->dimension() != c.measure->dimension())
    bad("model and measure dimensions differ");

  if (doc.contains("kernel")) {
    const std::string k = doc.at("kernel").get<std::string>();
    if (k == "heat")
      c.kernel = KernelKind::heat;
    else if (k == "wave")
      c.kernel = KernelKind::wave;
    else
      bad("kernel must be 'heat' or 'wave'");
  }
  c.horizon = doc.value("horizon", 1.0);
  if (!(c.horizon > 0.0)) bad("horizon must be positive");
  if (doc.contains("lattice")) {
    c.lattice_modes = doc.at("lattice").value("modes", 512);
    c.lattice_cutoff = doc.at("lattice").value("cutoff", 1048576.0);
  }
  if (doc.contains("grids")) {
    const auto& g = doc.at("grids");
    c.time_points = g.value("time_points", 8);
    c.space_points = g.value("space_points", 8);
    c.space_dx = g.value("space_dx", 0.5);
  }
  c.replicas = doc.value("replicas", 1000);
  c.seed = doc.value("seed", std::uint64_t{1});
  c.threads = doc.value("threads", 0);
  if (c.replicas < 1) bad("replicas must be >= 1");
  if (c.time_points < 2 || c.space_points < 1) bad("grid sizes too small");

  const std::vector<std::string> known = {"diagnose", "indices",  "simulate",
                                          "variogram", "classify", "nonlinear"};
  if (!doc.contains("stages") || !doc.at("stages").is_array() || doc.at("stages").empty())
    bad("stages must be a nonempty list");
  for (const auto& s : doc.at("stages")) {
    const std::string name = s.get<std::string>();
    if (std::find(known.begin(), known.end(), name) == known.end())
      bad("unknown stage '" + name + "'");
    c.stages.push_back(name);
  }
  auto has = [&](const char* s) {
    return std::find(c.stages.begin(), c.stages.end(), s) != c.stages.end();
  };
  if (has("classify") && !(has("indices") && has("variogram")))
    bad("stage 'classify' requires 'indices' and 'variogram'");
  if ((has("simulate") || has("variogram") || has("classify")) && !c.kernel.has_value())
    bad("stages 'simulate'/'variogram'/'classify' need a kernel");

  if (doc.contains("variogram")) {
    const auto& v = doc.at("variogram");
    if (v.contains("time_lags")) c.time_lags = v.at("time_lags").get<std::vector<double>>();
    if (v.contains("space_lags")) c.space_lags = v.at("space_lags").get<std::vector<double>>();
  }
  if (doc.contains("nonlinear")) {
    const auto& n = doc.at("nonlinear");
    c.nl_g = n.value("g", "constant");
    if (c.nl_g != "zero" && c.nl_g != "constant" && c.nl_g != "linear_decay")
      bad("nonlinear.g must be zero | constant | linear_decay");
    c.nl_a0 = n.value("a0", 0.0);
    c.nl_lipschitz = n.value("lipschitz", c.nl_g == "linear_decay" ? 1.0 : 0.0);
    c.nl_u0 = n.value("u0", "zero");
    if (c.nl_u0 != "zero" && c.nl_u0 != "cosine") bad("nonlinear.u0 must be zero | cosine");
    c.nl_u0_wavenumber = n.value("u0_wavenumber", 1.0);
    c.nl_space_points = n.value("space_points", 256);
    c.nl_time_steps = n.value("time_steps", 64);
    if ((c.nl_space_points & (c.nl_space_points - 1)) != 0)
      bad("nonlinear.space_points must be a power of two");
  }
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw config_error(std::string("config: parse failure: ") + e.what());
  }
  return parse_config(doc);
}

std::string config_digest(const nlohmann::json& doc) {
  const std::string dump = doc.dump();  // sorted keys: nlohmann objects are ordered maps
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace levyfield
