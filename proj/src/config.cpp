#include "rso/config.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace rso {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("$", "not valid JSON");
  return j;
}

double require_number(const json& j, const std::string& path,
                      const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing");
  if (!j[key].is_number()) throw ConfigError(path + "." + key, "must be a number");
  return j[key].get<double>();
}

double number_or(const json& j, const std::string& path,
                 const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(path + "." + key, "must be a number");
  return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& path,
                           const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing");
  if (!j[key].is_string()) throw ConfigError(path + "." + key, "must be a string");
  return j[key].get<std::string>();
}

ObjectiveSpec parse_objective(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  ObjectiveSpec spec;
  spec.kind = require_string(j, path, "kind");
  if (spec.kind == "quadratic") {
    spec.L = number_or(j, path, "L", 1.0);
    const double dim = number_or(j, path, "dim", 2.0);
    if (dim < 1 || dim != std::floor(dim)) {
      throw ConfigError(path + ".dim", "must be an integer >= 1");
    }
    spec.dim = static_cast<std::size_t>(dim);
    if (!(spec.L > 0)) throw ConfigError(path + ".L", "must be > 0");
  } else if (spec.kind == "cosh") {
    spec.a = number_or(j, path, "a", 1.0);
    if (!(spec.a > 0)) throw ConfigError(path + ".a", "must be > 0");
  } else if (spec.kind == "exp1d" || spec.kind == "quartic") {
    // no parameters
  } else if (spec.kind == "hard_instance") {
    spec.eps = require_number(j, path, "eps");
    spec.eta = require_number(j, path, "eta");
    spec.L0 = require_number(j, path, "L0");
    spec.L1 = require_number(j, path, "L1");
    spec.delta1 = require_number(j, path, "delta1");
    if (j.contains("variant")) {
      const std::string v = require_string(j, path, "variant");
      if (v == "construction") {
        spec.variant = PlateauHeight::construction;
      } else if (v == "certified") {
        spec.variant = PlateauHeight::certified;
      } else {
        throw ConfigError(path + ".variant",
                          "must be 'construction' or 'certified'");
      }
    }
    try {
      spec.build();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, e.what());
    }
  } else {
    throw ConfigError(path + ".kind", "unknown objective '" + spec.kind + "'");
  }
  return spec;
}

NoiseKind parse_noise_kind(const json& j, const std::string& path) {
  const std::string kind = require_string(j, path, "kind");
  if (kind == "gaussian") return NoiseKind::gaussian_isotropic;
  if (kind == "sphere") return NoiseKind::bounded_uniform_sphere;
  throw ConfigError(path + ".kind", "must be 'gaussian' or 'sphere'");
}

OptimizerSpec parse_optimizer(const json& j, const std::string& path,
                              const ObjectiveSpec& objective) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  const std::string kind = require_string(j, path, "kind");
  if (kind == "nsgdm") {
    const std::string mode =
        j.contains("mode") ? require_string(j, path, "mode") : "agnostic";
    if (mode == "agnostic") return NsgdmConfig::agnostic();
    if (mode == "informed") {
      const double L1 = number_or(j, path, "L1", objective.build().params.L1);
      if (!(L1 > 0)) {
        throw ConfigError(path + ".L1",
                          "informed mode needs L1 > 0 (given or declared "
                          "by the objective)");
      }
      return NsgdmConfig::informed(L1);
    }
    if (mode == "custom") {
      const double eta = require_number(j, path, "eta");
      if (!(eta > 0)) throw ConfigError(path + ".eta", "must be > 0");
      return NsgdmConfig::custom(eta);
    }
    throw ConfigError(path + ".mode",
                      "must be 'agnostic', 'informed' or 'custom'");
  }
  if (kind == "gnmm") {
    GnmmConfig c;
    c.eta = number_or(j, path, "eta", 1.0);
    c.alpha = number_or(j, path, "alpha", 0.75);
    if (!(c.eta > 0)) throw ConfigError(path + ".eta", "must be > 0");
    if (!(c.alpha > 0 && c.alpha < 1)) {
      throw ConfigError(path + ".alpha", "must be in (0,1)");
    }
    const std::string rule =
        j.contains("rule") ? require_string(j, path, "rule") : "last_gradient";
    if (rule == "last_gradient") {
      c.rule = MomentumRule::last_gradient;
    } else if (rule == "uniform_average") {
      c.rule = MomentumRule::uniform_average;
    } else if (rule == "nsgdm_weights") {
      c.rule = MomentumRule::nsgdm_weights;
    } else {
      throw ConfigError(path + ".rule",
                        "must be 'last_gradient', 'uniform_average' or "
                        "'nsgdm_weights'");
    }
    return c;
  }
  if (kind == "backtracking") {
    BacktrackConfig c;
    c.beta = number_or(j, path, "beta", 0.5);
    c.gamma = number_or(j, path, "gamma", 0.5);
    if (!(c.beta > 0 && c.beta < 1)) {
      throw ConfigError(path + ".beta", "must be in (0,1)");
    }
    if (!(c.gamma > 0 && c.gamma < 1)) {
      throw ConfigError(path + ".gamma", "must be in (0,1)");
    }
    return c;
  }
  if (kind == "clipped_sgd") {
    ClippedSgdConfig c;
    c.eta = number_or(j, path, "eta", 1.0);
    c.clip = number_or(j, path, "clip", 0.25);
    if (!(c.eta > 0)) throw ConfigError(path + ".eta", "must be > 0");
    if (!(c.clip > 0)) throw ConfigError(path + ".clip", "must be > 0");
    return c;
  }
  if (kind == "adagrad_norm") {
    AdagradNormConfig c;
    c.eta = number_or(j, path, "eta", 1.0);
    c.b0 = number_or(j, path, "b0", 1e-6);
    if (!(c.eta > 0)) throw ConfigError(path + ".eta", "must be > 0");
    if (!(c.b0 > 0)) throw ConfigError(path + ".b0", "must be > 0");
    return c;
  }
  throw ConfigError(path + ".kind", "unknown optimizer '" + kind + "'");
}

}  // namespace

Objective ObjectiveSpec::build() const {
  if (kind == "quadratic") return make_quadratic(L, dim);
  if (kind == "cosh") return make_cosh(a);
  if (kind == "exp1d") return make_exp1d();
  if (kind == "quartic") return make_quartic();
  if (kind == "hard_instance") {
    return make_hard_instance(eps, eta, L0, L1, delta1, variant).objective();
  }
  throw std::invalid_argument("ObjectiveSpec: unknown kind '" + kind + "'");
}

ParsedRunConfig parse_run_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("$", "must be an object");

  ParsedRunConfig out;
  RunConfig& cfg = out.run;

  const double seed = number_or(j, "$", "seed", 1.0);
  if (seed < 0 || seed != std::floor(seed)) {
    throw ConfigError("$.seed", "must be a nonnegative integer");
  }
  cfg.seed = static_cast<std::uint64_t>(seed);

  const double horizon = require_number(j, "$", "horizon");
  if (horizon < 1 || horizon != std::floor(horizon)) {
    throw ConfigError("$.horizon", "must be an integer >= 1");
  }
  cfg.horizon = static_cast<int>(horizon);

  if (j.contains("target_eps")) {
    const double eps = require_number(j, "$", "target_eps");
    if (!(eps > 0)) throw ConfigError("$.target_eps", "must be > 0");
    cfg.target_eps = eps;
  }

  if (j.contains("noise")) {
    if (!j["noise"].is_object()) throw ConfigError("$.noise", "must be an object");
    cfg.sigma = number_or(j["noise"], "$.noise", "sigma", 0.0);
    if (cfg.sigma < 0) throw ConfigError("$.noise.sigma", "must be >= 0");
    if (j["noise"].contains("kind")) {
      cfg.noise_kind = parse_noise_kind(j["noise"], "$.noise");
    }
  }

  if (!j.contains("objective")) throw ConfigError("$.objective", "missing");
  out.objective_spec = parse_objective(j["objective"], "$.objective");
  cfg.objective = out.objective_spec.build();

  if (!j.contains("optimizer")) throw ConfigError("$.optimizer", "missing");
  cfg.optimizer = parse_optimizer(j["optimizer"], "$.optimizer",
                                  out.objective_spec);

  if (std::holds_alternative<BacktrackConfig>(cfg.optimizer) &&
      cfg.sigma != 0.0) {
    throw ConfigError("$.noise.sigma",
                      "backtracking line search requires sigma = 0");
  }

  if (j.contains("start")) {
    if (!j["start"].is_array() || j["start"].empty()) {
      throw ConfigError("$.start", "must be a non-empty array of numbers");
    }
    std::vector<double> s;
    for (const auto& v : j["start"]) {
      if (!v.is_number()) throw ConfigError("$.start", "must contain numbers");
      s.push_back(v.get<double>());
    }
    if (s.size() != cfg.objective.dim) {
      throw ConfigError("$.start", "dimension does not match the objective");
    }
    cfg.start = Vector(std::move(s));
  }

  if (j.contains("check_descent")) {
    if (!j["check_descent"].is_boolean()) {
      throw ConfigError("$.check_descent", "must be a boolean");
    }
    cfg.check_descent = j["check_descent"].get<bool>();
  }

  out.canonical_json = j.dump();
  return out;
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("$", "must be an object");

  SweepSpec spec;
  spec.base_eta = require_number(j, "$", "base_eta");
  if (!(spec.base_eta > 0)) throw ConfigError("$.base_eta", "must be > 0");

  if (j.contains("multipliers")) {
    if (!j["multipliers"].is_array() || j["multipliers"].empty()) {
      throw ConfigError("$.multipliers", "must be a non-empty array");
    }
    for (const auto& v : j["multipliers"]) {
      if (!v.is_number() || !(v.get<double>() > 0)) {
        throw ConfigError("$.multipliers", "entries must be numbers > 0");
      }
      spec.multipliers.push_back(v.get<double>());
    }
  } else {
    for (int k = -5; k <= 8; ++k) {
      spec.multipliers.push_back(std::pow(10.0, k / 5.0));
    }
  }

  if (!j.contains("objective")) throw ConfigError("$.objective", "missing");
  spec.objective_spec = parse_objective(j["objective"], "$.objective");
  spec.objective = spec.objective_spec.build();

  if (!j.contains("optimizers") || !j["optimizers"].is_array() ||
      j["optimizers"].empty()) {
    throw ConfigError("$.optimizers", "must be a non-empty array");
  }
  int idx = 0;
  for (const auto& o : j["optimizers"]) {
    const std::string path = "$.optimizers[" + std::to_string(idx) + "]";
    OptimizerSpec parsed = parse_optimizer(o, path, spec.objective_spec);
    std::string label = optimizer_kind_name(parsed);
    if (o.contains("name")) {
      if (!o["name"].is_string()) throw ConfigError(path + ".name", "string");
      label = o["name"].get<std::string>();
    }
    spec.optimizers.push_back(std::move(parsed));
    spec.optimizer_labels.push_back(std::move(label));
    ++idx;
  }

  if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty()) {
    throw ConfigError("$.seeds", "must be a non-empty array");
  }
  for (const auto& s : j["seeds"]) {
    if (!s.is_number() || s.get<double>() < 0) {
      throw ConfigError("$.seeds", "entries must be nonnegative integers");
    }
    spec.seeds.push_back(static_cast<std::uint64_t>(s.get<double>()));
  }

  const double horizon = require_number(j, "$", "horizon");
  if (horizon < 1 || horizon != std::floor(horizon)) {
    throw ConfigError("$.horizon", "must be an integer >= 1");
  }
  spec.horizon = static_cast<int>(horizon);

  if (j.contains("noise")) {
    spec.sigma = number_or(j["noise"], "$.noise", "sigma", 0.0);
    if (spec.sigma < 0) throw ConfigError("$.noise.sigma", "must be >= 0");
    if (j["noise"].contains("kind")) {
      spec.noise_kind = parse_noise_kind(j["noise"], "$.noise");
    }
  }
  if (j.contains("target_eps")) {
    const double eps = require_number(j, "$", "target_eps");
    if (!(eps > 0)) throw ConfigError("$.target_eps", "must be > 0");
    spec.target_eps = eps;
  }

  spec.canonical_json = j.dump();
  return spec;
}

namespace {

template <typename T>
std::vector<T> parse_list(const json& j, const std::string& path,
                          const char* key) {
  std::vector<T> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw ConfigError(path + "." + key, "must be an array");
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError(path + "." + key, "numbers only");
    out.push_back(static_cast<T>(v.get<double>()));
  }
  return out;
}

}  // namespace

LemmaGridSpec default_lemma_grid() {
  return {default_general_grid(), default_explicit_grid()};
}

LemmaGridSpec parse_lemma_grid(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("$", "must be an object");
  LemmaGridSpec spec;

  if (j.contains("general")) {
    const json& g = j["general"];
    const auto a_vals = parse_list<int>(g, "$.general", "a");
    const auto b_offsets = parse_list<int>(g, "$.general", "b_offsets");
    const auto p_vals = parse_list<double>(g, "$.general", "p");
    const auto q_vals = parse_list<double>(g, "$.general", "q");
    for (int a : a_vals)
      for (int off : b_offsets)
        for (double p : p_vals)
          for (double q : q_vals)
            for (GeneralPart part :
                 {GeneralPart::i, GeneralPart::ii, GeneralPart::iii})
              spec.general.push_back({a, a + off, p, q, part});
  }
  if (j.contains("explicit")) {
    const json& e = j["explicit"];
    const auto T_vals = parse_list<int>(e, "$.explicit", "T");
    const auto eta_vals = parse_list<double>(e, "$.explicit", "eta");
    const auto L1_vals = parse_list<double>(e, "$.explicit", "L1");
    for (int T : T_vals)
      for (double eta : eta_vals)
        for (double L1 : L1_vals)
          for (ExplicitPart part :
               {ExplicitPart::a_i, ExplicitPart::a_ii, ExplicitPart::b_i,
                ExplicitPart::b_ii, ExplicitPart::c_i, ExplicitPart::c_ii,
                ExplicitPart::c_iii})
            spec.explicit_grid.push_back({T, eta, L1, part});
  }
  return spec;
}

SmoothnessSpec parse_smoothness_spec(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("$", "must be an object");
  SmoothnessSpec spec;
  if (!j.contains("objective")) throw ConfigError("$.objective", "missing");
  spec.objective_spec = parse_objective(j["objective"], "$.objective");
  spec.objective = spec.objective_spec.build();
  spec.pairs = static_cast<int>(number_or(j, "$", "pairs", 10000));
  if (spec.pairs < 1) throw ConfigError("$.pairs", "must be >= 1");
  if (j.contains("box")) {
    if (!j["box"].is_array() || j["box"].size() != 2) {
      throw ConfigError("$.box", "must be [lo, hi]");
    }
    spec.box_lo = j["box"][0].get<double>();
    spec.box_hi = j["box"][1].get<double>();
    if (!(spec.box_lo < spec.box_hi)) throw ConfigError("$.box", "lo < hi");
  }
  spec.seed = static_cast<std::uint64_t>(number_or(j, "$", "seed", 7.0));
  spec.grid_points = static_cast<int>(number_or(j, "$", "grid_points", 100000));
  if (spec.grid_points < 2) throw ConfigError("$.grid_points", "must be >= 2");
  spec.canonical_json = j.dump();
  return spec;
}

std::string config_hash(const std::string& canonical_json) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical_json) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  for (int i = 15; i >= 0; --i) os << ((h >> (i * 4)) & 0xF);
  return os.str();
}

}  // namespace rso
