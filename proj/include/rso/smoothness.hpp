#pragma once

#include "rso/vector.hpp"

namespace rso {

struct Objective;

// Constants of the relaxed smoothness certificate: the gradient-Lipschitz
// modulus at x is allowed to grow as L0 + L1*||grad f(x)||.
struct SmoothnessParams {
  double L0 = 0.0;
  double L1 = 0.0;
};

// Kernels entering the first-order characterization and the descent bound:
//   a0(c) = 1 + e^c - (e^c - 1)/c
//   a1(c) = (e^c - 1)/c
//   b0(c) = 1 + 2(e^c - 1)/c - 4(e^c - 1 - c)/c^2
//   b1(c) = 2(e^c - 1 - c)/c^2
// All four have removable singularities at c = 0 with limit 1, and all are
// evaluated by Taylor expansion below c = 1e-4 where the direct expressions
// cancel catastrophically. Domain c >= 0.
double kernel_a0(double c);
double kernel_a1(double c);
double kernel_b0(double c);
double kernel_b1(double c);

struct InequalityCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Checks ||grad f(x) - grad f(y)|| <= (a0(c) L0 + a1(c) L1 ||grad f(x)||) ||x-y||
// at the binding modulus c = L1 ||x-y||, and spot-checks one larger c (the
// kernels increase in c, so larger c only weakens the right side).
// Multiplicative tolerance 1e-9.
InequalityCheck check_definition(const Objective& f, const Vector& x,
                                 const Vector& y, const SmoothnessParams& p);

// Spectral-norm test ||hess f(x)|| <= L0 + L1 ||grad f(x)|| + 1e-4. Falls
// back to a central finite-difference Hessian (h = 1e-5 (1 + ||x||)) when
// the objective has no analytic one. Dense; refuses dim > 64.
bool check_hessian_equivalence(const Objective& f, const Vector& x,
                               const SmoothnessParams& p);

// Right side of the descent bound
//   f(y) <= f(x) + grad f(x)^T (y-x)
//           + 1/2 (b0(c) L0 + b1(c) L1 ||grad f(x)||) ||x-y||^2.
double descent_upper_bound(const Objective& f, const Vector& x,
                           const Vector& y, const SmoothnessParams& p);

// min{ ||grad f(x)||/L1, ||grad f(x)||^2/L0 } <= 8 (f(x) - f_star).
// L0 = 0 is accepted: the squared branch is then +inf and only the L1
// branch binds. Throws if f(x) < f_star.
InequalityCheck gradient_bound_check(const Objective& f, const Vector& x,
                                     double f_star, const SmoothnessParams& p);

// 8 L1 delta1 + min{ L0/L1, sqrt(8 L0 delta1) }, an a-priori cap on the
// initial gradient norm from the suboptimality gap. Requires L1 > 0.
double initial_grad_norm_bound(double delta1, const SmoothnessParams& p);

}  // namespace rso
