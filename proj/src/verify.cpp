#include "rso/verify.hpp"

#include <cmath>
#include <stdexcept>

#include "rso/smoothness.hpp"

namespace rso {

StepCheck descent_step_check(const SmoothnessParams& p, double f_t,
                             double f_next, const Vector& grad,
                             const Vector& m, double eta) {
  const double gn = norm(grad);
  const double c = p.L1 * eta;
  const double lhs = f_next - f_t;
  const double rhs = -eta * gn + 2.0 * eta * norm(sub(grad, m)) +
                     0.5 * eta * eta *
                         (p.L0 * kernel_b0(c) + p.L1 * kernel_b1(c) * gn);
  const double slack = 1e-9 * std::abs(rhs) +
                       1e-12 * (std::abs(f_t) + std::abs(f_next));
  return {lhs <= rhs + slack, lhs, rhs};
}

TraceCheckReport check_descent_along_trace(const Objective& f,
                                           const RunTrace& trace) {
  TraceCheckReport report;
  const auto& steps = trace.steps();
  for (std::size_t i = 1; i + 1 < steps.size(); ++i) {
    const StepRecord& cur = steps[i];
    const StepRecord& next = steps[i + 1];
    if (cur.t < 2 || !cur.m) continue;
    const Vector grad = f.gradient(cur.x);
    const StepCheck c = descent_step_check(f.params, cur.f_value, next.f_value,
                                           grad, *cur.m, cur.eta);
    const double excess = c.lhs - c.rhs;
    if (excess > report.worst_excess) report.worst_excess = excess;
    if (!c.holds && report.holds) {
      report.holds = false;
      report.first_violation_t = cur.t;
    }
  }
  return report;
}

std::vector<double> momentum_deviation_bound(
    const std::vector<double>& grad_norms, double sigma,
    const SmoothnessParams& p, const std::function<double(int)>& eta_of_t,
    const std::function<double(int)>& beta_of_t, DeviationForm form) {
  if (grad_norms.empty()) return {};
  if (beta_of_t(1) != 0.0) {
    throw std::invalid_argument(
        "momentum_deviation_bound: requires beta_1 = 0");
  }
  std::vector<double> rhs(grad_norms.size());
  double noise_sq = 0.0;  // sum_tau (prod_{k=tau+1}^t beta_k)^2 (1-beta_tau)^2
  double drift = 0.0;     // sum_{tau=2}^t (prod_{k=tau}^t beta_k) drift_tau
  for (std::size_t i = 0; i < grad_norms.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const double beta = beta_of_t(t);
    noise_sq = beta * beta * noise_sq + (1.0 - beta) * (1.0 - beta);
    if (t >= 2) {
      double step_len, k0, k1;
      if (form == DeviationForm::stated) {
        step_len = eta_of_t(t);
        k0 = kernel_b0(p.L1 * step_len);
        k1 = kernel_b1(p.L1 * step_len);
      } else {
        step_len = eta_of_t(t - 1);
        k0 = kernel_a0(p.L1 * step_len);
        k1 = kernel_a1(p.L1 * step_len);
      }
      const double drift_t =
          step_len * (p.L0 * k0 + p.L1 * k1 * grad_norms[i]);
      drift = beta * (drift + drift_t);
    }
    rhs[i] = sigma * std::sqrt(noise_sq) + drift;
  }
  return rhs;
}

TraceCheckReport check_momentum_deviation_along_trace(
    const Objective& f, const RunTrace& trace, const NsgdmConfig& config,
    DeviationForm form) {
  TraceCheckReport report;
  const auto& steps = trace.steps();
  std::vector<double> grad_norms;
  grad_norms.reserve(steps.size());
  for (const auto& s : steps) grad_norms.push_back(s.grad_norm);
  const auto rhs = momentum_deviation_bound(
      grad_norms, 0.0, f.params,
      [&config](int t) { return nsgdm_eta(config, t); },
      [](int t) { return nsgdm_beta(t); }, form);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!steps[i].m) continue;
    const double lhs = norm(sub(*steps[i].m, f.gradient(steps[i].x)));
    const double allowed = rhs[i] * (1.0 + 1e-9) + 1e-15;
    const double excess = lhs - rhs[i];
    if (excess > report.worst_excess) report.worst_excess = excess;
    if (lhs > allowed && report.holds) {
      report.holds = false;
      report.first_violation_t = steps[i].t;
    }
  }
  return report;
}

TraceCheckReport check_armijo_along_trace(const RunTrace& trace,
                                          double gamma) {
  TraceCheckReport report;
  const auto& steps = trace.steps();
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    const StepRecord& cur = steps[i];
    const StepRecord& next = steps[i + 1];
    // non-increasing stepsizes
    if (next.eta > cur.eta && report.holds) {
      report.holds = false;
      report.first_violation_t = next.t;
    }
    // Armijo at the accepted stepsize: F(x_{t+1}) <= F(x_t) - eta gamma ||g||^2
    const double gsq = cur.grad_norm * cur.grad_norm;
    const double bound = cur.f_value - cur.eta * gamma * gsq;
    const double slack = 1e-12 * (std::abs(cur.f_value) + std::abs(bound));
    const double excess = next.f_value - bound;
    if (excess > report.worst_excess) report.worst_excess = excess;
    if (next.f_value > bound + slack && report.holds) {
      report.holds = false;
      report.first_violation_t = cur.t;
    }
  }
  return report;
}

}  // namespace rso
