#include <doctest.h>

#include <cmath>

#include "rso/bounds.hpp"
#include "rso/optimizers.hpp"
#include "rso/smoothness.hpp"
#include "rso/testfns.hpp"
#include "rso/verify.hpp"

using namespace rso;

TEST_CASE("log-space arithmetic") {
  const LogValue a = LogValue::from_linear(3.0);
  const LogValue b = LogValue::from_linear(4.0);
  CHECK((a + b).linear() == doctest::Approx(7.0).epsilon(1e-14));
  CHECK((a * b).linear() == doctest::Approx(12.0).epsilon(1e-14));
  CHECK((b / a).linear() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(log_sub(b, a).linear() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(LogValue::from_linear(0.0).is_zero());
  CHECK((LogValue::from_linear(0.0) + a).linear() ==
        doctest::Approx(3.0).epsilon(1e-14));
  // overflow marker
  const LogValue huge = LogValue::from_log(1000.0);
  CHECK(huge.overflows());
  CHECK(std::isinf(huge.linear()));
  CHECK((huge + huge).log() == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK_THROWS_AS(log_sub(a, b), std::domain_error);
}

TEST_CASE("nsgdm sum bound: L-smooth specialization and frozen value") {
  // L1 = 0 collapses every exponential to 1
  const auto r = nsgdm_sum_bound(100, 1.0, 2.0, 3.0, 0.0, 0.5, 4.0);
  const double logT = std::log(100.0);
  const double expected = 1.0 +
                          0.5 * 2.0 * (7.0 + 2.0 * std::sqrt(2.0) * std::exp(1.0) * logT) +
                          0.25 * 3.0 * (45.0 + 14.0 * logT) +
                          21.0 * 0.25 * 3.0 + 6.0 * 0.5 * 4.0;
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));

  // frozen from an independent high-precision evaluation
  const auto f = nsgdm_sum_bound(10000, 1.0, 1.0, 1.0, 1.0, 1.0 / 7.0, 9.0);
  CHECK(f.value == doctest::Approx(37.422355291282913).epsilon(1e-12));
  CHECK(f.constants.at("t0") == 9.0);  // ceil((12/7)^4)

  // T = 1: no log terms
  const auto t1 = nsgdm_sum_bound(1, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0);
  CHECK(t1.value == doctest::Approx(1.0 + 7.0 + 45.0 + 21.0).epsilon(1e-12));

  // the 1/L1 replacement activates once eta L1 >= 1/2
  const auto informed = nsgdm_sum_bound(10, 1.0, 0.0, 0.0, 2.0, 1.0, 3.0);
  CHECK(informed.constants.at("grad_coef") == doctest::Approx(0.5));
}

TEST_CASE("nsgdm agnostic average bound") {
  // L1 = 0: exponential factors are exactly 1
  const auto r0 = nsgdm_avg_bound_agnostic(16, 1.0, 1.0, 1.0, 0.0);
  const double logT = std::log(16.0);
  const double expected =
      (14.0 + (14.0 + 9.0 * logT + 2.0) + 12.0 * std::exp(1.0) * logT +
       6.0 * std::sqrt(8.0)) /
      2.0;  // T^{1/4} = 2
  CHECK(r0.value == doctest::Approx(expected).epsilon(1e-12));

  // T -> 16T scales the bound by about 1/2 (log growth aside)
  const auto r_base = nsgdm_avg_bound_agnostic(1000, 1.0, 1.0, 1.0, 1.0);
  const auto r16 = nsgdm_avg_bound_agnostic(16000, 1.0, 1.0, 1.0, 1.0);
  const double ratio = r16.value / r_base.value;
  CHECK(ratio > 0.45);
  CHECK(ratio < 0.60);

  // improved branch takes over at L1 >= 7/2
  const auto big = nsgdm_avg_bound_agnostic(1000000, 1.0, 1.0, 1.0, 4.0);
  CHECK(big.constants.at("branch") == 2.0);
  CHECK(big.log_value <
        std::log(108888871.0));  // strictly below the first branch
}

TEST_CASE("nsgdm informed average bound") {
  CHECK_THROWS_AS(nsgdm_avg_bound_informed(100, 1.0, 1.0, 1.0, 0.0),
                  std::domain_error);
  // explicit formula agreement
  const auto r = nsgdm_avg_bound_informed(100, 1.0, 1.0, 1.0, 2.0);
  const double logT = std::log(100.0);
  const double expected =
      (24.0 * 2.0 + (14.0 + 4.0 * std::sqrt(2.0) * std::exp(1.0) * logT) +
       (10.0 + 4.0 * logT) / 2.0) /
      std::pow(100.0, 0.25);
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));

  // no faster-than-polynomial growth in L1
  double prev = nsgdm_avg_bound_informed(1000, 1.0, 1.0, 1.0, 1.0).value;
  for (double L1 = 2.0; L1 <= 64.0; L1 *= 2.0) {
    const double cur = nsgdm_avg_bound_informed(1000, 1.0, 1.0, 1.0, L1).value;
    CHECK(cur / prev < 2.05);
    prev = cur;
  }

  // informed beats agnostic once the exponential bites (L1 = 5, T = 1e6)
  const auto inf5 = nsgdm_avg_bound_informed(1000000, 1.0, 1.0, 1.0, 5.0);
  const auto agn5 = nsgdm_avg_bound_agnostic(1000000, 1.0, 1.0, 1.0, 5.0);
  CHECK(inf5.log_value < agn5.log_value);
}

TEST_CASE("backtracking bound") {
  const auto r = backtracking_bound(100, 1.0, 1.0, 1.0, 0.5, 0.5);
  CHECK(r.value == doctest::Approx(1.44).epsilon(1e-14));
  // L1 = 0 specialization
  const auto r0 = backtracking_bound(100, 1.0, 1.0, 0.0, 0.5, 0.5);
  CHECK(r0.value == doctest::Approx(4.0 / 12.5).epsilon(1e-14));
  // gamma = 1/2 minimizes gamma(1-gamma) in the denominator
  const double at_half = backtracking_bound(10, 1.0, 1.0, 1.0, 0.5, 0.5).value;
  for (double gamma : {0.1, 0.3, 0.7, 0.9}) {
    CHECK(at_half <= backtracking_bound(10, 1.0, 1.0, 1.0, 0.5, gamma).value);
  }
  CHECK_THROWS_AS(backtracking_bound(10, 1.0, 1.0, 1.0, 1.0, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(backtracking_bound(10, 1.0, 1.0, 1.0, 0.5, 0.0),
                  std::domain_error);
}

TEST_CASE("iteration lower bound") {
  const auto r = lower_bound_iterations(0.1, 1.0, 0.5, 1.0, 4.0);
  CHECK(r.value == doctest::Approx(21.602530868513657).epsilon(1e-12));

  // alpha = 3/4 gives an eps^{-4} dependence: halving eps multiplies by 16
  const auto e1 = lower_bound_iterations(0.1, 1.0, 0.75, 1.0, 4.0);
  const auto e2 = lower_bound_iterations(0.05, 1.0, 0.75, 1.0, 4.0);
  CHECK(e2.value / e1.value == doctest::Approx(16.0).epsilon(1e-12));

  // continuity as eta L1 -> 0: the exponential term tends to 1/2
  const auto tiny = lower_bound_iterations(0.1, 1.0, 0.5, 1.0, 1e-12);
  CHECK(tiny.constants.at("exp_term") == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(lower_bound_iterations(0.6, 1.0, 0.5, 1.0, 1.0),
                       "lower_bound_iterations: requires 0 < eps < 1/2",
                       std::domain_error);
  CHECK_THROWS_WITH_AS(lower_bound_iterations(0.1, 1.0, 1.5, 1.0, 1.0),
                       "lower_bound_iterations: requires alpha in (0,1)",
                       std::domain_error);
  CHECK_THROWS_WITH_AS(lower_bound_iterations(0.1, 1.0, 0.5, 0.1, 1.0),
                       "lower_bound_iterations: requires delta1 >= 1/4",
                       std::domain_error);
}

TEST_CASE("bound reports serialize with their constants") {
  const auto r = backtracking_bound(100, 1.0, 2.0, 1.0, 0.5, 0.5);
  const std::string j = r.to_json();
  CHECK(j.find("\"kind\": \"backtracking\"") != std::string::npos);
  CHECK(j.find("\"gamma\"") != std::string::npos);
  CHECK(j.find("\"value\"") != std::string::npos);
}

TEST_CASE("momentum deviation envelope basics") {
  const NsgdmConfig cfg = NsgdmConfig::agnostic();
  auto eta = [&cfg](int t) { return nsgdm_eta(cfg, t); };
  auto beta = [](int t) { return nsgdm_beta(t); };
  // t = 1 with sigma = 0: the envelope is exactly 0
  const auto rhs = momentum_deviation_bound({1.0}, 0.0, {1.0, 0.0}, eta, beta);
  REQUIRE(rhs.size() == 1);
  CHECK(rhs[0] == 0.0);
  // sigma enters through the noise root: at t = 1 it is exactly sigma
  const auto rhs_s = momentum_deviation_bound({1.0}, 2.0, {1.0, 0.0}, eta, beta);
  CHECK(rhs_s[0] == doctest::Approx(2.0).epsilon(1e-15));
  // beta_1 != 0 violates the hypothesis
  CHECK_THROWS_AS(momentum_deviation_bound({1.0}, 0.0, {1.0, 0.0}, eta,
                                           [](int) { return 0.5; }),
                  std::invalid_argument);
  // the prev-step variant dominates the stated one on a pure L0 certificate
  const std::vector<double> gn{1.0, 0.9, 0.8, 0.7, 0.6};
  const auto stated = momentum_deviation_bound(gn, 0.0, {1.0, 0.0}, eta, beta,
                                               DeviationForm::stated);
  const auto prev = momentum_deviation_bound(gn, 0.0, {1.0, 0.0}, eta, beta,
                                             DeviationForm::prev_step);
  for (std::size_t i = 1; i < gn.size(); ++i) CHECK(stated[i] < prev[i]);
}

TEST_CASE("technical lemma, general form: worked points") {
  // part i at a = b = 2, q = 1/2
  const auto p1 = tech_lemma_general(2, 2, 0.5, 0.5, GeneralPart::i);
  CHECK(p1.lhs == doctest::Approx(0.29289321881345248).epsilon(1e-14));
  CHECK(p1.rhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p1.holds);

  // part iii at p = q = 1/2, a = 2, b = 100
  const auto p3 = tech_lemma_general(2, 100, 0.5, 0.5, GeneralPart::iii);
  CHECK(p3.lhs == doctest::Approx(0.99999999869804948).epsilon(1e-12));
  CHECK(p3.rhs == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-14));
  CHECK(p3.holds);

  // preconditions
  std::string why;
  CHECK(!tech_lemma_general_applicable(2, 5, 0.25, 0.5, GeneralPart::ii, &why));
  CHECK(why == "part ii requires p >= q");
  CHECK_THROWS_AS(tech_lemma_general(2, 5, 0.25, 0.5, GeneralPart::ii),
                  std::domain_error);
}

TEST_CASE("technical lemma, general form: full grids hold") {
  for (int a : {2, 3, 5, 10}) {
    for (double p : {0.5, 0.75, 1.0, 2.0}) {
      for (double q : {0.25, 0.5, 0.75}) {
        // incremental sweep over the whole b range
        double prod = 1.0;       // part i LHS
        double sum_ii = 0.0;     // part ii LHS
        double sum_iii = 0.0;    // part iii LHS (backward recurrence)
        const double inv1q = 1.0 / (1.0 - q);
        std::string why;
        const bool ii_ok =
            tech_lemma_general_applicable(a, a, p, q, GeneralPart::ii, &why);
        const bool iii_ok =
            tech_lemma_general_applicable(a, a, p, q, GeneralPart::iii, &why);
        for (int b = a; b <= a + 500; ++b) {
          const double factor = 1.0 - std::pow(b, -q);
          prod *= factor;
          sum_ii += std::pow(b, -p) * prod;
          sum_iii = sum_iii * factor + std::pow(b, -p);
          const double rhs_i =
              std::exp(inv1q * (std::pow(a, 1.0 - q) - std::pow(b, 1.0 - q)));
          REQUIRE(prod <= rhs_i * (1.0 + 1e-12));
          // the sharper pre-weakening display with b+1 also dominates
          const double rhs_i_sharp = std::exp(
              inv1q * (std::pow(a, 1.0 - q) - std::pow(b + 1.0, 1.0 - q)));
          REQUIRE(prod <= rhs_i_sharp * (1.0 + 1e-12));
          if (ii_ok) {
            const double rhs_ii =
                std::pow(a - 1.0, q - p) *
                std::exp(inv1q * (std::pow(a, 1.0 - q) -
                                  std::pow(a - 1.0, 1.0 - q)));
            REQUIRE(sum_ii <= rhs_ii * (1.0 + 1e-12));
          }
          if (iii_ok) {
            const double rhs_iii =
                2.0 * std::exp(inv1q) * std::pow(b + 1.0, q - p);
            REQUIRE(sum_iii <= rhs_iii * (1.0 + 1e-12));
          }
        }
        // spot-check agreement with the library entry points at b = a+500
        const auto ci = tech_lemma_general(a, a + 500, p, q, GeneralPart::i);
        CHECK(ci.lhs == doctest::Approx(prod).epsilon(1e-12));
        if (ii_ok) {
          const auto cii = tech_lemma_general(a, a + 500, p, q, GeneralPart::ii);
          CHECK(cii.lhs == doctest::Approx(sum_ii).epsilon(1e-12));
          CHECK(cii.holds);
          REQUIRE(cii.rhs_aux.has_value());
          CHECK(*cii.holds_aux);
        }
        if (iii_ok) {
          const auto ciii =
              tech_lemma_general(a, a + 500, p, q, GeneralPart::iii);
          CHECK(ciii.lhs == doctest::Approx(sum_iii).epsilon(1e-12));
          CHECK(ciii.holds);
        }
      }
    }
  }
}

TEST_CASE("technical lemma, explicit schedules: worked points") {
  // a.i at T = 1: LHS = eta <= 3.5 eta
  const auto a1 = tech_lemma_explicit(1, 2.0, 1.0, ExplicitPart::a_i);
  CHECK(a1.lhs == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(a1.holds);

  // a.i at T = 1e4, eta = 1 (frozen from an independent evaluation)
  const auto a2 = tech_lemma_explicit(10000, 1.0, 1.0, ExplicitPart::a_i);
  CHECK(a2.lhs == doctest::Approx(1.27360819671).epsilon(1e-9));
  CHECK(a2.rhs == doctest::Approx(3.5).epsilon(1e-14));

  // c.i single-term sum at b = 2, eta = L1 = 1 (frozen)
  const auto c1 = tech_lemma_explicit(2, 1.0, 1.0, ExplicitPart::c_i);
  CHECK(c1.lhs == doctest::Approx(1.6738455974522958).epsilon(1e-12));
  CHECK(c1.rhs == doctest::Approx(23.978748415660241).epsilon(1e-12));
  CHECK(c1.holds);

  // preconditions
  std::string why;
  CHECK(!tech_lemma_explicit_applicable(100, 1.0, 0.1, ExplicitPart::c_iii,
                                        &why));
  CHECK(why == "part c.iii requires eta L1 >= 1/2");
  CHECK(!tech_lemma_explicit_applicable(100, 1.0, 0.0, ExplicitPart::b_i,
                                        &why));
  CHECK(!tech_lemma_explicit_applicable(1, 1.0, 1.0, ExplicitPart::c_i, &why));
}

TEST_CASE("technical lemma, explicit schedules: default grid holds") {
  for (const auto& point : default_explicit_grid()) {
    std::string why;
    if (!tech_lemma_explicit_applicable(point.T, point.eta, point.L1,
                                        point.part, &why)) {
      continue;
    }
    const auto c = tech_lemma_explicit(point.T, point.eta, point.L1, point.part);
    CAPTURE(point.T);
    CAPTURE(point.eta);
    CAPTURE(point.L1);
    CAPTURE(explicit_part_name(point.part));
    REQUIRE(c.holds);
  }
}

TEST_CASE("sum bound dominates deterministic runs across the suite") {
  for (const Objective& f :
       {make_quadratic(1.0, 2), make_cosh(1.0), make_quartic(),
        make_exp1d()}) {
    RunConfig cfg;
    cfg.horizon = 2000;
    cfg.objective = f;
    cfg.optimizer = NsgdmConfig::agnostic();
    const auto result = run(cfg);
    double weighted_sum = 0.0;
    for (const auto& s : result.trace.steps()) {
      weighted_sum += 0.5 * s.eta * s.grad_norm;
    }
    const double g1 = result.trace.steps().front().grad_norm;
    const auto bound = nsgdm_sum_bound(2000, f.delta1(), 0.0, f.params.L0,
                                       f.params.L1, 1.0 / 7.0, g1);
    CAPTURE(f.name);
    CHECK(weighted_sum <= bound.value);
  }
}

TEST_CASE("backtracking bound dominates deterministic runs across the suite") {
  for (const Objective& f :
       {make_quadratic(1.0, 2), make_cosh(1.0), make_quartic()}) {
    RunConfig cfg;
    cfg.horizon = 500;
    cfg.objective = f;
    cfg.optimizer = BacktrackConfig{};
    const auto result = run(cfg);
    double sum_sq = 0.0;
    for (const auto& s : result.trace.steps()) {
      sum_sq += s.grad_norm * s.grad_norm;
    }
    const auto bound =
        backtracking_bound(500, f.delta1(), f.params.L0, f.params.L1, 0.5, 0.5);
    CAPTURE(f.name);
    CHECK(sum_sq / 500.0 <= bound.value);
  }
}
