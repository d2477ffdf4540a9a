#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "rso/rng.hpp"
#include "rso/smoothness.hpp"
#include "rso/testfns.hpp"

using namespace rso;

namespace {
double rel_err(double got, long double want) {
  const long double w = want == 0.0L ? 1.0L : want;
  return static_cast<double>(std::fabs((static_cast<long double>(got) - want) / w));
}
}  // namespace

TEST_CASE("kernel limits at zero are exactly one") {
  CHECK(kernel_a0(0.0) == 1.0);
  CHECK(kernel_a1(0.0) == 1.0);
  CHECK(kernel_b0(0.0) == 1.0);
  CHECK(kernel_b1(0.0) == 1.0);
}

TEST_CASE("kernels match the series oracle within 1e-12") {
  for (double c : {0.0, 1e-9, 1e-4, 1e-3, 0.02, 0.1, 0.5, 1.0, 5.0, 20.0}) {
    CAPTURE(c);
    CHECK(rel_err(kernel_a0(c), oracle::a0_series(c)) < 1e-12);
    CHECK(rel_err(kernel_a1(c), oracle::a1_series(c)) < 1e-12);
    CHECK(rel_err(kernel_b0(c), oracle::b0_series(c)) < 1e-12);
    CHECK(rel_err(kernel_b1(c), oracle::b1_series(c)) < 1e-12);
  }
}

TEST_CASE("closed-form kernel values") {
  // a0(1) collapses to 2 exactly; a1(1) = e-1; b1(1) = 2(e-2)
  CHECK(kernel_a0(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(kernel_a1(1.0) ==
        doctest::Approx(1.7182818284590452).epsilon(1e-14));
  CHECK(kernel_b1(1.0) ==
        doctest::Approx(1.4365636569180905).epsilon(1e-14));
}

TEST_CASE("small-argument a1 matches its first-order expansion") {
  const double c = 1e-9;
  CHECK(std::abs(kernel_a1(c) - (1.0 + c / 2.0)) < 1e-6 * (1.0 + c / 2.0));
}

TEST_CASE("kernels reject negative arguments") {
  CHECK_THROWS_AS(kernel_a0(-1e-9), std::domain_error);
  CHECK_THROWS_AS(kernel_a1(-1.0), std::domain_error);
  CHECK_THROWS_AS(kernel_b0(-0.5), std::domain_error);
  CHECK_THROWS_AS(kernel_b1(-2.0), std::domain_error);
}

TEST_CASE("kernel envelopes and monotonicity on [0, 20]") {
  double prev_b1 = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double c = 20.0 * i / 200.0;
    CHECK(kernel_a0(c) <= 1.0 + std::exp(c) + 1e-12);
    CHECK(kernel_a1(c) <= std::exp(c) + 1e-12);
    CHECK(kernel_b1(c) >= prev_b1);
    prev_b1 = kernel_b1(c);
    if (c > 0.0) {
      // b0(c) <= 2(e^c - 1)/c
      CHECK(kernel_b0(c) <= 2.0 * std::expm1(c) / c * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("b-kernels equal their integral representations") {
  for (double c : {0.1, 1.0, 5.0}) {
    CAPTURE(c);
    const double i0 =
        oracle::integrate([c](double t) { return t * kernel_a0(t * c); }, 0, 1);
    const double i1 =
        oracle::integrate([c](double t) { return t * kernel_a1(t * c); }, 0, 1);
    CHECK(std::abs(i0 - 0.5 * kernel_b0(c)) < 1e-8);
    CHECK(std::abs(i1 - 0.5 * kernel_b1(c)) < 1e-8);
  }
}

TEST_CASE("definition check is tight on the exactly L-smooth quadratic") {
  const Objective f = make_quadratic(1.0, 1);
  const auto c = check_definition(f, Vector{0.0}, Vector{1.0}, {1.0, 0.0});
  CHECK(c.holds);
  CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("definition check holds for cosh over random pairs") {
  const Objective f = make_cosh(1.0);
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Vector x{-3.0 + 6.0 * rng.next_unit()};
    const Vector y{-3.0 + 6.0 * rng.next_unit()};
    if (x == y) continue;
    const auto c = check_definition(f, x, y, f.params);
    CAPTURE(x[0]);
    CAPTURE(y[0]);
    REQUIRE(c.holds);
  }
}

TEST_CASE("hessian-norm test accepts the declared certificates") {
  const Objective q = make_quadratic(1.0, 3);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    CHECK(check_hessian_equivalence(q, rng.next_normal_vector(3), q.params));
  }
  // f''(x) = e^x = |f'(x)|: equality case
  const Objective e = make_exp1d();
  CHECK(check_hessian_equivalence(e, Vector{2.0}, e.params));
  // quartic: 12x^2 <= 108 + 4|x|^3 scanned over the grid
  const Objective quart = make_quartic();
  double worst_violation = -1e300;
  for (int i = 0; i <= 1000; ++i) {
    const double x = -5.0 + 10.0 * i / 1000.0;
    worst_violation = std::max(
        worst_violation, 12.0 * x * x - (108.0 + 4.0 * std::abs(x * x * x)));
    CHECK(check_hessian_equivalence(quart, Vector{x}, quart.params));
  }
  CHECK(worst_violation <= 0.0);
}

TEST_CASE("hessian check refuses large dimensions") {
  const Objective q = make_quadratic(1.0, 65);
  CHECK_THROWS_AS(check_hessian_equivalence(q, Vector::zeros(65), q.params),
                  std::invalid_argument);
}

TEST_CASE("hessian check falls back to finite differences") {
  Objective f = make_cosh(1.0);
  f.hessian = nullptr;
  for (double x : {-3.0, -1.0, 0.0, 0.7, 3.0}) {
    CHECK(check_hessian_equivalence(f, Vector{x}, f.params));
  }
}

TEST_CASE("descent upper bound") {
  const Objective q = make_quadratic(1.0, 1);
  // zero displacement returns f(x)
  CHECK(descent_upper_bound(q, Vector{1.5}, Vector{1.5}, q.params) ==
        doctest::Approx(q.value(Vector{1.5})).epsilon(1e-15));
  // quadratic tightness: 0 + 0 + 1/2 = f(1)
  CHECK(descent_upper_bound(q, Vector{0.0}, Vector{1.0}, q.params) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // cosh sweep: the bound dominates the value
  const Objective f = make_cosh(1.0);
  Rng rng(17);
  for (int i = 0; i < 10000; ++i) {
    const Vector x{-2.0 + 4.0 * rng.next_unit()};
    const Vector y{-2.0 + 4.0 * rng.next_unit()};
    REQUIRE(f.value(y) <=
            descent_upper_bound(f, x, y, f.params) * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("gradient bound from the suboptimality gap") {
  const Objective f = make_cosh(1.0);
  // stationary point: 0 <= 0
  const auto at_min = gradient_bound_check(f, Vector{0.0}, 2.0, f.params);
  CHECK(at_min.holds);
  CHECK(at_min.lhs == 0.0);
  CHECK(at_min.rhs == doctest::Approx(0.0).epsilon(1e-12));
  // x = 1 and a grid
  CHECK(gradient_bound_check(f, Vector{1.0}, 2.0, f.params).holds);
  for (int i = 0; i <= 100; ++i) {
    const double x = -4.0 + 8.0 * i / 100.0;
    CHECK(gradient_bound_check(f, Vector{x}, 2.0, f.params).holds);
  }
  // inconsistent infimum
  CHECK_THROWS_AS(gradient_bound_check(f, Vector{0.0}, 3.0, f.params),
                  std::domain_error);
}

TEST_CASE("gradient bound with L0 = 0 uses the L1 branch only") {
  const Objective e = make_exp1d();
  for (double x : {-1.0, 0.0, 2.0}) {
    const auto c = gradient_bound_check(e, Vector{x}, 0.0, e.params);
    CHECK(c.holds);
    // e^x / 1 <= 8 e^x
    CHECK(c.lhs == doctest::Approx(std::exp(x)).epsilon(1e-12));
  }
}

TEST_CASE("initial gradient-norm bound") {
  CHECK(initial_grad_norm_bound(0.0, {1.0, 1.0}) == 0.0);
  CHECK(initial_grad_norm_bound(1.0, {1.0, 1.0}) ==
        doctest::Approx(9.0).epsilon(1e-14));
  CHECK_THROWS_AS(initial_grad_norm_bound(1.0, {1.0, 0.0}), std::domain_error);
  double prev = -1.0;
  for (int i = 0; i <= 50; ++i) {
    const double d1 = i * 0.2;
    const double v = initial_grad_norm_bound(d1, {2.0, 0.5});
    CHECK(v >= prev);
    prev = v;
  }
}
