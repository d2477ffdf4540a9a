#pragma once

#include <array>
#include <string>

#include "rso/objective.hpp"

namespace rso {

// f(x) = (L/2)||x||^2, certificate (L, 0), infimum 0 at the origin.
// Canonical start is the all-ones vector.
Objective make_quadratic(double L, std::size_t dim);

// f(x) = 2 cosh(a x)/a, certificate (2a, a) since f'' = 2a cosh(ax)
// <= 2a + a|f'|, infimum 2/a at 0. Canonical start x = 3.
Objective make_cosh(double a);

// f(x) = e^x, certificate (0, 1) with f'' = |f'| exactly; infimum 0 is not
// attained. Canonical start x = 0.
Objective make_exp1d();

// f(x) = x^4, certificate (108, 1): 12 x^2 <= 108 + 4|x|^3 for all x.
// Canonical start x = 3.
Objective make_quartic();

// Which plateau height enters z3 of the hard instance. `construction`
// uses the exact value the pieces integrate to,
//   C = delta1 + (2/L1)(e^{L1(eta/2 - z1)} - 1);
// `certified` uses the weaker constant that appears in the iteration
// bound, M = delta1 + (2/L1)(e^{eta L1/4} - 1) <= C.
enum class PlateauHeight { construction, certified };

// One-dimensional piecewise objective whose derivative rises exponentially
// on [z1, eta/2], forcing any normalized method with steps eta/t^alpha to
// spend many iterations crossing the -2eps plateau [z2, z3].
//
// F'(x):  -1           on (-inf, 0)
//         L0 x - 1     on [0, z1)
//         e^{L1(x-z1)} on [z1, eta/2)
//         e^{L1(eta-z1-x)} on [eta/2, eta-z1)
//         L0(eta-x)-1  on [eta-z1, z2)
//         -2 eps       on [z2, z3)
//         L0(x-z3)-2eps on [z3, z4)
//         0            on [z4, inf)
// with z1 = 2/L0, z2 = eta - z1 + (1+2eps)/L0, z3 = eta + height/(2 eps),
// z4 = z3 + 2 eps/L0. F(x) = delta1 + integral of F' from 0, evaluated by
// per-piece antiderivatives with the prefix integral precomputed at every
// knot. F(0) = delta1 exactly.
class HardInstance {
 public:
  HardInstance(double eps, double eta, double L0, double L1, double delta1,
               PlateauHeight variant = PlateauHeight::construction);

  double eps() const { return eps_; }
  double eta() const { return eta_; }
  double L0() const { return L0_; }
  double L1() const { return L1_; }
  double delta1() const { return delta1_; }
  double z1() const { return z1_; }
  double z2() const { return z2_; }
  double z3() const { return z3_; }
  double z4() const { return z4_; }
  double height() const { return height_; }

  // 0, z1, eta/2, eta-z1, z2, z3, z4
  std::array<double, 7> knots() const;

  double value(double x) const;
  double deriv(double x) const;

  // Wraps the evaluators as a 1-d objective with certificate (L0, L1),
  // canonical start 0 and declared infimum 0.
  Objective objective() const;

  // {eps, eta, L0, L1, delta1, z1, z2, z3, z4, C} as a JSON text
  std::string to_json() const;

 private:
  double eps_, eta_, L0_, L1_, delta1_;
  double z1_, z2_, z3_, z4_, height_;
  std::array<double, 7> knot_x_;
  std::array<double, 7> knot_f_;  // prefix integral of F' at each knot
};

HardInstance make_hard_instance(double eps, double eta, double L0, double L1,
                                double delta1,
                                PlateauHeight variant = PlateauHeight::construction);

// Worst relative disagreement between the analytic gradient and central
// finite differences at `trials` random points in the box scale of the
// canonical start.
double finite_diff_gradient_check(const Objective& f, int trials,
                                  std::uint64_t seed = 7);

}  // namespace rso
