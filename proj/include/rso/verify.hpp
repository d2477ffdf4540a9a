#pragma once

#include <functional>
#include <vector>

#include "rso/objective.hpp"
#include "rso/optimizers.hpp"
#include "rso/trace.hpp"

namespace rso {

struct StepCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Per-step descent certification for a normalized step of length eta:
//   f_next - f_t <= -eta ||grad|| + 2 eta ||grad - m|| +
//                   (eta^2/2)(L0 b0(L1 eta) + L1 b1(L1 eta) ||grad||)
// with multiplicative slack 1e-9 plus a roundoff guard on the f-difference.
StepCheck descent_step_check(const SmoothnessParams& p, double f_t,
                             double f_next, const Vector& grad,
                             const Vector& m, double eta);

struct TraceCheckReport {
  bool holds = true;
  int first_violation_t = 0;
  double worst_excess = 0.0;  // max of lhs - rhs_allowed over steps
};

// Applies descent_step_check along an NSGD-M trace (transitions from every
// t >= 2 with a recorded successor). Gradients are recomputed from the
// objective at the stored iterates.
TraceCheckReport check_descent_along_trace(const Objective& f,
                                           const RunTrace& trace);

// Momentum-deviation envelope
//   sigma sqrt( sum_tau (prod_{k=tau+1}^t beta_k)^2 (1-beta_tau)^2 )
//   + sum_{tau=2}^t (prod_{k=tau}^t beta_k) drift_tau
// evaluated for every t = 1..grad_norms.size(). grad_norms[tau-1] supplies
// E||grad F(x_tau)|| (exact values for deterministic runs).
//
// The stated form takes drift_tau = eta_tau (L0 b0(L1 eta_tau)
// + L1 b1(L1 eta_tau) grad_norms[tau-1]). The prev_step form instead
// bounds the gradient change over the step actually taken, of length
// eta_{tau-1}, via the definitional kernels:
// drift_tau = eta_{tau-1} (L0 a0(L1 eta_{tau-1})
// + L1 a1(L1 eta_{tau-1}) grad_norms[tau-1]).
enum class DeviationForm { stated, prev_step };

std::vector<double> momentum_deviation_bound(
    const std::vector<double>& grad_norms, double sigma,
    const SmoothnessParams& p, const std::function<double(int)>& eta_of_t,
    const std::function<double(int)>& beta_of_t,
    DeviationForm form = DeviationForm::stated);

// Checks ||m_t - grad F(x_t)|| against the envelope above at every step of
// a deterministic NSGD-M trace. Multiplicative slack 1e-9.
TraceCheckReport check_momentum_deviation_along_trace(
    const Objective& f, const RunTrace& trace, const NsgdmConfig& config,
    DeviationForm form = DeviationForm::stated);

// Re-verifies, post hoc, that every accepted backtracking stepsize satisfies
// the Armijo inequality and that the stepsize sequence never increases.
// Works from the stored f-values and exact gradient norms.
TraceCheckReport check_armijo_along_trace(const RunTrace& trace, double gamma);

}  // namespace rso
