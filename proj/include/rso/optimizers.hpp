#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "rso/oracle.hpp"
#include "rso/trace.hpp"

namespace rso {

// ---------------------------------------------------------------------------
// Normalized SGD with momentum:
//   m_t = beta_t m_{t-1} + (1 - beta_t) g_t,   beta_t = 1 - t^{-1/2}
//   x_{t+1} = x_t - (eta_t/||m_t||) m_t,       eta_t = eta t^{-3/4}
// beta_1 = 0, so m_1 = g_1. Every step has length exactly eta_t; the
// measure-zero event m_t = 0 takes a zero step and is recorded as such.

struct NsgdmConfig {
  enum class Mode { agnostic, informed, custom };
  Mode mode = Mode::agnostic;
  double eta = 1.0 / 7.0;  // base stepsize; fixed to 1/7 in agnostic mode

  // agnostic: eta = 1/7; informed: eta = 1/(12 L1) for the given L1.
  static NsgdmConfig agnostic();
  static NsgdmConfig informed(double L1);
  static NsgdmConfig custom(double eta);
};

double nsgdm_beta(int t);                       // 1 - t^{-1/2}
double nsgdm_eta(const NsgdmConfig& c, int t);  // eta t^{-3/4}

struct NsgdmState {
  Vector m;
  explicit NsgdmState(std::size_t dim) : m(Vector::zeros(dim)) {}
};

struct StepOutcome {
  Vector x_next;
  Vector m;        // momentum after the update (methods without one: g_t)
  double eta = 0;  // stepsize used
};

StepOutcome nsgdm_step(NsgdmState& state, const NsgdmConfig& config,
                       const Vector& x, const Vector& g, int t);

// ---------------------------------------------------------------------------
// General normalized momentum family:
//   choose m_t in cone(g_1..g_t) \ {0},  x_{t+1} = x_t - (eta/t^alpha) m_t/||m_t||

enum class MomentumRule { last_gradient, uniform_average, nsgdm_weights, custom };

struct GnmmConfig {
  double eta = 1.0;
  double alpha = 0.75;  // in (0,1)
  MomentumRule rule = MomentumRule::last_gradient;
  // For MomentumRule::custom: maps the gradient history g_1..g_t to a
  // nonzero cone combination. The caller owns the cone contract; the step
  // only rejects the zero vector.
  std::function<Vector(std::span<const Vector>)> custom_rule;
};

struct GnmmState {
  Vector m;
  // When tracking is on, lambda[i] are the cone coefficients of g_{i+1} in
  // m_t and grads keeps the sampled gradients, so tests can reconstruct m.
  // The custom rule always keeps the gradient history.
  bool track_cone = false;
  std::vector<double> lambda;
  std::vector<Vector> grads;
  explicit GnmmState(std::size_t dim, bool track = false)
      : m(Vector::zeros(dim)), track_cone(track) {}
};

StepOutcome gnmm_step(GnmmState& state, const GnmmConfig& config,
                      const Vector& x, const Vector& g, int t);

// ---------------------------------------------------------------------------
// Gradient descent with backtracking line search (deterministic oracles
// only). At step t picks the minimal k with beta^k <= eta_{t-1} and
//   F(x_t - beta^k grad) <= F(x_t) - beta^k gamma ||grad||^2,
// so accepted stepsizes never increase. Throws past max_trials rejections.

struct BacktrackConfig {
  double beta = 0.5;   // in (0,1)
  double gamma = 0.5;  // in (0,1)
  int max_trials = 200;
};

struct BacktrackState {
  double eta_prev = 1.0;  // eta_0 = 1
  int k_prev = 0;
};

struct BacktrackOutcome {
  Vector x_next;
  double eta = 0;
  int trials = 0;            // Armijo evaluations spent
  bool stationary = false;   // gradient was exactly zero; no step taken
};

BacktrackOutcome backtracking_gd_step(BacktrackState& state,
                                      const BacktrackConfig& config,
                                      const Objective& f, const Vector& x,
                                      int t);

// ---------------------------------------------------------------------------
// Baselines.

struct ClippedSgdConfig {
  double eta = 1.0;
  double clip = 0.25;  // threshold tau
};

struct AdagradNormConfig {
  double eta = 1.0;
  double b0 = 1e-6;
};

struct AdagradNormState {
  double b_sq;  // running sum b_t^2
  explicit AdagradNormState(double b0) : b_sq(b0 * b0) {}
};

// x - eta min(1, clip/||g||) g; zero gradient moves nothing.
Vector clipped_sgd_step(const ClippedSgdConfig& config, const Vector& x,
                        const Vector& g);

// b_t^2 = b_{t-1}^2 + ||g||^2; x - (eta/b_t) g.
Vector adagrad_norm_step(AdagradNormState& state,
                         const AdagradNormConfig& config, const Vector& x,
                         const Vector& g);

// ---------------------------------------------------------------------------
// Run driver.

using OptimizerSpec = std::variant<NsgdmConfig, GnmmConfig, BacktrackConfig,
                                   ClippedSgdConfig, AdagradNormConfig>;

struct RunConfig {
  std::uint64_t seed = 1;
  int horizon = 100;                     // T >= 1
  std::optional<double> target_eps;      // stop at ||grad F(x_t)|| <= eps
  double sigma = 0.0;
  NoiseKind noise_kind = NoiseKind::gaussian_isotropic;
  OptimizerSpec optimizer;
  Objective objective;
  std::optional<Vector> start;           // defaults to objective.start
  bool check_descent = false;            // verify the per-step descent bound
};

struct RunResult {
  RunTrace trace;
  std::optional<int> t_eps;  // first t with ||grad F(x_t)|| <= target_eps
  bool stopped_stationary = false;
};

// Executes up to `horizon` steps, stopping early at the gradient target or
// at an exactly stationary point (backtracking). The trace records true
// gradient norms from instrumentation; optimizers only ever see oracle
// samples. Throws DivergedError with the partial trace if an iterate or
// objective value leaves the finite range, and std::invalid_argument for
// inconsistent configs (e.g. backtracking with sigma > 0).
RunResult run(const RunConfig& config);

const char* optimizer_kind_name(const OptimizerSpec& spec);

}  // namespace rso
