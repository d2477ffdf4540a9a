#include "rso/optimizers.hpp"

#include <cmath>
#include <stdexcept>

#include "rso/verify.hpp"

namespace rso {

NsgdmConfig NsgdmConfig::agnostic() { return {Mode::agnostic, 1.0 / 7.0}; }

NsgdmConfig NsgdmConfig::informed(double L1) {
  if (!(L1 > 0.0)) {
    throw std::invalid_argument("NsgdmConfig::informed: requires L1 > 0");
  }
  return {Mode::informed, 1.0 / (12.0 * L1)};
}

NsgdmConfig NsgdmConfig::custom(double eta) {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("NsgdmConfig::custom: requires eta > 0");
  }
  return {Mode::custom, eta};
}

double nsgdm_beta(int t) {
  if (t < 1) throw std::invalid_argument("nsgdm_beta: t >= 1");
  return 1.0 - std::pow(static_cast<double>(t), -0.5);
}

double nsgdm_eta(const NsgdmConfig& c, int t) {
  if (t < 1) throw std::invalid_argument("nsgdm_eta: t >= 1");
  return c.eta * std::pow(static_cast<double>(t), -0.75);
}

StepOutcome nsgdm_step(NsgdmState& state, const NsgdmConfig& config,
                       const Vector& x, const Vector& g, int t) {
  const double beta = nsgdm_beta(t);
  const double eta = nsgdm_eta(config, t);
  state.m = axpy(scale(beta, state.m), 1.0 - beta, g);
  const double mn = norm(state.m);
  if (mn == 0.0) {
    // all contributing gradients cancelled; take a zero step
    return {x, state.m, eta};
  }
  return {axpy(x, -eta / mn, state.m), state.m, eta};
}

StepOutcome gnmm_step(GnmmState& state, const GnmmConfig& config,
                      const Vector& x, const Vector& g, int t) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("gnmm_step: alpha must be in (0,1)");
  }
  if (!(config.eta > 0.0)) {
    throw std::invalid_argument("gnmm_step: eta must be > 0");
  }
  if (state.track_cone || config.rule == MomentumRule::custom) {
    state.grads.push_back(g);
  }
  switch (config.rule) {
    case MomentumRule::last_gradient:
      state.m = g;
      if (state.track_cone) {
        for (auto& l : state.lambda) l = 0.0;
        state.lambda.push_back(1.0);
      }
      break;
    case MomentumRule::uniform_average: {
      const double w = 1.0 / t;
      state.m = axpy(scale(1.0 - w, state.m), w, g);
      if (state.track_cone) {
        for (auto& l : state.lambda) l *= 1.0 - w;
        state.lambda.push_back(w);
      }
      break;
    }
    case MomentumRule::nsgdm_weights: {
      const double beta = nsgdm_beta(t);
      state.m = axpy(scale(beta, state.m), 1.0 - beta, g);
      if (state.track_cone) {
        for (auto& l : state.lambda) l *= beta;
        state.lambda.push_back(1.0 - beta);
      }
      break;
    }
    case MomentumRule::custom:
      if (!config.custom_rule) {
        throw std::invalid_argument(
            "gnmm_step: custom rule selected but none supplied");
      }
      state.m = config.custom_rule(state.grads);
      break;
  }
  const double mn = norm(state.m);
  if (mn == 0.0) {
    throw std::runtime_error(
        "gnmm_step: momentum rule produced the zero vector, which is outside "
        "cone(g_1..g_t) \\ {0}");
  }
  const double eta = config.eta * std::pow(static_cast<double>(t), -config.alpha);
  return {axpy(x, -eta / mn, state.m), state.m, eta};
}

BacktrackOutcome backtracking_gd_step(BacktrackState& state,
                                      const BacktrackConfig& config,
                                      const Objective& f, const Vector& x,
                                      int t) {
  (void)t;
  if (!(config.beta > 0.0 && config.beta < 1.0) ||
      !(config.gamma > 0.0 && config.gamma < 1.0)) {
    throw std::invalid_argument(
        "backtracking_gd_step: beta and gamma must be in (0,1)");
  }
  const Vector g = f.gradient(x);
  const double gn_sq = dot(g, g);
  if (gn_sq == 0.0) {
    return {x, state.eta_prev, 0, true};
  }
  const double fx = f.value(x);
  // eta_prev = beta^{k_prev}, so k = k_prev already satisfies beta^k <= eta_prev
  double eta = state.eta_prev;
  int k = state.k_prev;
  int trials = 0;
  for (;;) {
    ++trials;
    if (f.value(axpy(x, -eta, g)) <= fx - eta * config.gamma * gn_sq) break;
    ++k;
    eta *= config.beta;
    if (k - state.k_prev >= config.max_trials) {
      throw std::runtime_error(
          "backtracking_gd_step: no acceptable stepsize within trial cap");
    }
  }
  state.eta_prev = eta;
  state.k_prev = k;
  return {axpy(x, -eta, g), eta, trials, false};
}

Vector clipped_sgd_step(const ClippedSgdConfig& config, const Vector& x,
                        const Vector& g) {
  if (!(config.eta > 0.0) || !(config.clip > 0.0)) {
    throw std::invalid_argument("clipped_sgd_step: eta and clip must be > 0");
  }
  const double gn = norm(g);
  if (gn == 0.0) return x;
  const double factor = std::min(1.0, config.clip / gn);
  return axpy(x, -config.eta * factor, g);
}

Vector adagrad_norm_step(AdagradNormState& state,
                         const AdagradNormConfig& config, const Vector& x,
                         const Vector& g) {
  if (!(config.eta > 0.0) || !(config.b0 > 0.0)) {
    throw std::invalid_argument("adagrad_norm_step: eta and b0 must be > 0");
  }
  state.b_sq += dot(g, g);
  return axpy(x, -config.eta / std::sqrt(state.b_sq), g);
}

const char* optimizer_kind_name(const OptimizerSpec& spec) {
  struct Visitor {
    const char* operator()(const NsgdmConfig&) const { return "nsgdm"; }
    const char* operator()(const GnmmConfig&) const { return "gnmm"; }
    const char* operator()(const BacktrackConfig&) const {
      return "backtracking";
    }
    const char* operator()(const ClippedSgdConfig&) const {
      return "clipped_sgd";
    }
    const char* operator()(const AdagradNormConfig&) const {
      return "adagrad_norm";
    }
  };
  return std::visit(Visitor{}, spec);
}

namespace {

struct StepData {
  Vector x_next;
  std::optional<Vector> m;
  double eta;
  bool stationary = false;
};

class Stepper {
 public:
  Stepper(const RunConfig& config, std::size_t dim)
      : config_(config),
        nsgdm_(dim),
        gnmm_(dim),
        adagrad_(std::get_if<AdagradNormConfig>(&config.optimizer)
                     ? std::get<AdagradNormConfig>(config.optimizer).b0
                     : 1e-6) {}

  StepData step(const Vector& x, const Vector& g, int t) {
    if (const auto* c = std::get_if<NsgdmConfig>(&config_.optimizer)) {
      auto out = nsgdm_step(nsgdm_, *c, x, g, t);
      return {std::move(out.x_next), std::move(out.m), out.eta};
    }
    if (const auto* c = std::get_if<GnmmConfig>(&config_.optimizer)) {
      auto out = gnmm_step(gnmm_, *c, x, g, t);
      return {std::move(out.x_next), std::move(out.m), out.eta};
    }
    if (const auto* c = std::get_if<BacktrackConfig>(&config_.optimizer)) {
      auto out = backtracking_gd_step(backtrack_, *c, config_.objective, x, t);
      return {std::move(out.x_next), std::nullopt, out.eta, out.stationary};
    }
    if (const auto* c = std::get_if<ClippedSgdConfig>(&config_.optimizer)) {
      return {clipped_sgd_step(*c, x, g), std::nullopt, c->eta};
    }
    const auto& c = std::get<AdagradNormConfig>(config_.optimizer);
    return {adagrad_norm_step(adagrad_, c, x, g), std::nullopt, c.eta};
  }

  // the stepsize the schedule would use at t, without mutating any state;
  // recorded on rows where the run stops before stepping
  double peek_eta(int t) const {
    if (const auto* c = std::get_if<NsgdmConfig>(&config_.optimizer)) {
      return nsgdm_eta(*c, t);
    }
    if (const auto* c = std::get_if<GnmmConfig>(&config_.optimizer)) {
      return c->eta * std::pow(static_cast<double>(t), -c->alpha);
    }
    if (std::holds_alternative<BacktrackConfig>(config_.optimizer)) {
      return backtrack_.eta_prev;
    }
    if (const auto* c = std::get_if<ClippedSgdConfig>(&config_.optimizer)) {
      return c->eta;
    }
    return std::get<AdagradNormConfig>(config_.optimizer).eta;
  }

 private:
  const RunConfig& config_;
  NsgdmState nsgdm_;
  GnmmState gnmm_;
  BacktrackState backtrack_;
  AdagradNormState adagrad_;
};

}  // namespace

RunResult run(const RunConfig& config) {
  const Objective& f = config.objective;
  if (config.horizon < 1) {
    throw std::invalid_argument("run: horizon must be >= 1");
  }
  if (config.target_eps && !(*config.target_eps > 0.0)) {
    throw std::invalid_argument("run: target_eps must be > 0");
  }
  if (std::holds_alternative<BacktrackConfig>(config.optimizer) &&
      config.sigma != 0.0) {
    throw std::invalid_argument(
        "run: backtracking line search requires a deterministic oracle "
        "(sigma = 0)");
  }
  Vector x = config.start.value_or(f.start);
  if (x.dim() != f.dim) {
    throw std::invalid_argument("run: start dimension does not match objective");
  }

  NoisyOracle oracle(f, config.sigma, config.noise_kind, config.seed);
  Stepper stepper(config, f.dim);
  RunResult result{RunTrace(f.dim), std::nullopt, false};
  RunTrace& trace = result.trace;

  // previous step's data, for the opt-in descent certification
  std::optional<StepRecord> prev;
  std::optional<Vector> prev_grad;

  for (int t = 1; t <= config.horizon; ++t) {
    try {
      const double fx = f.value(x);
      OracleSample s = oracle.sample(x);
      const double true_norm = norm(s.true_grad);
      if (!std::isfinite(fx) || !std::isfinite(true_norm)) {
        throw DivergedError("run: non-finite objective value or gradient",
                            std::move(trace));
      }

      if (config.check_descent && prev && prev->t >= 2 && prev_grad &&
          prev->m) {
        const auto check = descent_step_check(
            f.params, prev->f_value, fx, *prev_grad, *prev->m, prev->eta);
        if (!check.holds) {
          throw std::runtime_error(
              "run: descent certification failed at step t=" +
              std::to_string(prev->t));
        }
      }

      // the target is a property of x_t: stop before attempting a step
      if (config.target_eps && true_norm <= *config.target_eps) {
        trace.append({t, x, stepper.peek_eta(t), std::nullopt, true_norm,
                      norm(s.g), fx});
        result.t_eps = t;
        break;
      }

      StepData out = stepper.step(x, s.g, t);

      StepRecord rec{t,
                     x,
                     out.eta,
                     out.m,
                     true_norm,
                     norm(s.g),
                     fx};
      trace.append(rec);

      if (out.stationary) {
        result.stopped_stationary = true;
        break;
      }

      prev = std::move(rec);
      prev_grad = std::move(s.true_grad);
      x = std::move(out.x_next);
    } catch (const std::invalid_argument& e) {
      // only non-finite vector constructions can throw here mid-run
      throw DivergedError(std::string("run: diverged: ") + e.what(),
                          std::move(trace));
    }
  }
  return result;
}

}  // namespace rso
