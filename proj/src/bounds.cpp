#include "rso/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rso/smoothness.hpp"
#include "rso/trace.hpp"

namespace rso {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogMax = std::log(std::numeric_limits<double>::max());
}  // namespace

LogValue LogValue::zero() { return LogValue(kNegInf); }

LogValue LogValue::from_linear(double v) {
  if (v < 0.0 || std::isnan(v)) {
    throw std::domain_error("LogValue: negative or NaN");
  }
  return LogValue(std::log(v));
}

LogValue LogValue::from_log(double lg) { return LogValue(lg); }

double LogValue::linear() const { return std::exp(lg_); }

bool LogValue::overflows() const { return lg_ > kLogMax; }

bool LogValue::is_zero() const { return lg_ == kNegInf; }

LogValue operator+(LogValue a, LogValue b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double hi = std::max(a.lg_, b.lg_);
  const double lo = std::min(a.lg_, b.lg_);
  return LogValue(hi + std::log1p(std::exp(lo - hi)));
}

LogValue operator*(LogValue a, LogValue b) {
  if (a.is_zero() || b.is_zero()) return LogValue::zero();
  return LogValue(a.lg_ + b.lg_);
}

LogValue operator/(LogValue a, LogValue b) {
  if (b.is_zero()) throw std::domain_error("LogValue: division by zero");
  if (a.is_zero()) return LogValue::zero();
  return LogValue(a.lg_ - b.lg_);
}

LogValue log_sub(LogValue a, LogValue b) {
  if (b.is_zero()) return a;
  if (b.lg_ > a.lg_) throw std::domain_error("log_sub: negative result");
  if (b.lg_ == a.lg_) return LogValue::zero();
  return LogValue(a.lg_ + std::log1p(-std::exp(b.lg_ - a.lg_)));
}

std::string BoundReport::to_json() const {
  std::ostringstream os;
  os << "{\"kind\": \"" << kind << "\", \"value\": ";
  if (std::isinf(value)) {
    os << "\"overflow\"";
  } else {
    os << format_double(value);
  }
  os << ", \"log_value\": " << format_double(log_value) << ", \"constants\": {";
  bool first = true;
  for (const auto& [name, v] : constants) {
    if (!first) os << ", ";
    first = false;
    os << "\"" << name << "\": " << format_double(v);
  }
  os << "}}";
  return os.str();
}

namespace {

BoundReport make_report(std::string kind, LogValue v,
                        std::map<std::string, double> constants) {
  BoundReport r;
  r.kind = std::move(kind);
  r.value = v.overflows() ? std::numeric_limits<double>::infinity()
                          : v.linear();
  r.log_value = v.log();
  r.constants = std::move(constants);
  return r;
}

LogValue lv(double x) { return LogValue::from_linear(x); }

}  // namespace

BoundReport nsgdm_sum_bound(int T, double delta1, double sigma, double L0,
                            double L1, double eta, double grad_norm_x1) {
  if (T < 1) throw std::domain_error("nsgdm_sum_bound: T >= 1 required");
  if (!(eta > 0.0)) throw std::domain_error("nsgdm_sum_bound: eta > 0");
  if (delta1 < 0 || sigma < 0 || L0 < 0 || L1 < 0 || grad_norm_x1 < 0) {
    throw std::domain_error("nsgdm_sum_bound: parameters must be >= 0");
  }
  const double logT = std::log(static_cast<double>(T));
  const double x = eta * L1;
  const LogValue exp48 = LogValue::from_log(48.0 * x * x);
  const double sqrt2e2 = std::sqrt(2.0) * std::exp(1.0);

  LogValue total = lv(delta1);
  total = total + lv(eta * sigma * (7.0 + 2.0 * sqrt2e2 * logT));
  total = total + lv(eta * eta * L0 * (45.0 * kernel_a1(x) + 14.0 * logT));
  total = total + lv(21.0 * eta * eta * L0) * exp48;
  const double coef = (L1 > 0.0 && x >= 0.5) ? 1.0 / L1 : 6.0 * eta;
  total = total + lv(coef * grad_norm_x1) * exp48;

  const double t0 = std::ceil(std::pow(12.0 * x, 4.0));
  return make_report("nsgdm-sum", total,
                     {{"T", static_cast<double>(T)},
                      {"delta1", delta1},
                      {"sigma", sigma},
                      {"L0", L0},
                      {"L1", L1},
                      {"eta", eta},
                      {"grad_norm_x1", grad_norm_x1},
                      {"grad_coef", coef},
                      {"t0", std::max(t0, 1.0)}});
}

BoundReport nsgdm_avg_bound_agnostic(int T, double delta1, double sigma,
                                     double L0, double L1) {
  if (T < 2) throw std::domain_error("nsgdm_avg_bound_agnostic: T >= 2");
  if (delta1 < 0 || sigma < 0 || L0 < 0 || L1 < 0) {
    throw std::domain_error("nsgdm_avg_bound_agnostic: parameters >= 0");
  }
  const double logT = std::log(static_cast<double>(T));
  const LogValue expL1sq = LogValue::from_log(L1 * L1);
  const LogValue t_quarter = LogValue::from_log(0.25 * logT);
  const double min_term =
      L1 > 0.0 ? std::min(L0 / L1, std::sqrt(8.0 * L0 * delta1))
               : std::sqrt(8.0 * L0 * delta1);

  LogValue b1 = lv(14.0 * delta1);
  b1 = b1 + lv(96.0 * L1 * delta1) * expL1sq;
  b1 = b1 + lv(L0 * (14.0 * std::exp(L1 / 7.0) + 9.0 * logT));
  b1 = b1 + lv(2.0 * L0) * expL1sq;
  b1 = b1 + lv(12.0 * std::exp(1.0) * logT * sigma);
  b1 = b1 + lv(6.0 * min_term) * expL1sq;
  b1 = b1 / t_quarter;

  LogValue best = b1;
  double branch = 1.0;
  if (L1 >= 3.5) {
    LogValue b2 = lv(126.0 * delta1) * expL1sq;
    b2 = b2 + lv(12.0 * std::exp(1.0) * logT * sigma);
    b2 = b2 + (lv(4.0 * L0) * expL1sq + lv(9.0 * logT * L0));
    b2 = b2 / t_quarter;
    if (b2 < best) {
      best = b2;
      branch = 2.0;
    }
  }
  return make_report("nsgdm-agnostic", best,
                     {{"T", static_cast<double>(T)},
                      {"delta1", delta1},
                      {"sigma", sigma},
                      {"L0", L0},
                      {"L1", L1},
                      {"eta", 1.0 / 7.0},
                      {"branch", branch},
                      {"min_term", min_term}});
}

BoundReport nsgdm_avg_bound_informed(int T, double delta1, double sigma,
                                     double L0, double L1) {
  if (T < 2) throw std::domain_error("nsgdm_avg_bound_informed: T >= 2");
  if (!(L1 > 0.0)) {
    throw std::domain_error(
        "nsgdm_avg_bound_informed: the informed schedule needs L1 > 0");
  }
  if (delta1 < 0 || sigma < 0 || L0 < 0) {
    throw std::domain_error("nsgdm_avg_bound_informed: parameters >= 0");
  }
  const double logT = std::log(static_cast<double>(T));
  const double sqrt2e2 = std::sqrt(2.0) * std::exp(1.0);
  const double v = (24.0 * L1 * delta1 + (14.0 + 4.0 * sqrt2e2 * logT) * sigma +
                    (10.0 + 4.0 * logT) * L0 / L1) /
                   std::pow(static_cast<double>(T), 0.25);
  return make_report("nsgdm-informed", lv(v),
                     {{"T", static_cast<double>(T)},
                      {"delta1", delta1},
                      {"sigma", sigma},
                      {"L0", L0},
                      {"L1", L1},
                      {"eta", 1.0 / (12.0 * L1)}});
}

BoundReport backtracking_bound(int T, double delta1, double L0, double L1,
                               double beta, double gamma) {
  if (T < 1) throw std::domain_error("backtracking_bound: T >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::domain_error("backtracking_bound: beta must be in (0,1)");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::domain_error("backtracking_bound: gamma must be in (0,1)");
  }
  if (delta1 < 0 || L0 < 0 || L1 < 0) {
    throw std::domain_error("backtracking_bound: parameters >= 0");
  }
  const double v = (4.0 * L0 * delta1 + 14.0 * L1 * L1 * delta1 * delta1) /
                   (beta * gamma * (1.0 - gamma) * T);
  return make_report("backtracking", lv(v),
                     {{"T", static_cast<double>(T)},
                      {"delta1", delta1},
                      {"L0", L0},
                      {"L1", L1},
                      {"beta", beta},
                      {"gamma", gamma}});
}

BoundReport lower_bound_iterations(double eps, double eta, double alpha,
                                   double delta1, double L1) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::domain_error("lower_bound_iterations: requires 0 < eps < 1/2");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("lower_bound_iterations: requires alpha in (0,1)");
  }
  if (!(eta > 0.0)) {
    throw std::domain_error("lower_bound_iterations: requires eta > 0");
  }
  if (!(delta1 >= 0.25)) {
    throw std::domain_error("lower_bound_iterations: requires delta1 >= 1/4");
  }
  if (!(L1 > 0.0)) {
    throw std::domain_error("lower_bound_iterations: requires L1 > 0");
  }
  const double x = eta * L1;
  // (2/x)(e^{x/4} - 1), continuous limit 1/2 as x -> 0
  const double exp_term = 2.0 * std::expm1(x / 4.0) / x;
  const double inner = delta1 / eta + exp_term;
  const double inv = 1.0 / (1.0 - alpha);
  const LogValue v = LogValue::from_log(
      inv * (std::log((1.0 - alpha) / 2.0) + std::log(inner) - std::log(eps)));
  return make_report("lower-bound", v,
                     {{"eps", eps},
                      {"eta", eta},
                      {"alpha", alpha},
                      {"delta1", delta1},
                      {"L1", L1},
                      {"exp_term", exp_term}});
}

// ---------------------------------------------------------------------------
// Technical lemmas.

namespace {

LemmaCheck finish(LogValue lhs, LogValue rhs) {
  LemmaCheck c;
  c.lhs_log = lhs.log();
  c.rhs_log = rhs.log();
  c.lhs = lhs.overflows() ? std::numeric_limits<double>::infinity()
                          : lhs.linear();
  c.rhs = rhs.overflows() ? std::numeric_limits<double>::infinity()
                          : rhs.linear();
  c.holds = lhs.log() <= rhs.log() + std::log1p(1e-12);
  return c;
}

}  // namespace

bool tech_lemma_general_applicable(int a, int b, double p, double q,
                                   GeneralPart part, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (a < 2) return fail("requires a >= 2");
  if (b < a) return fail("requires b >= a");
  if (!(q > 0.0 && q < 1.0)) return fail("requires q in (0,1)");
  if (p < 0.0) return fail("requires p >= 0");
  if (part == GeneralPart::ii && p < q) return fail("part ii requires p >= q");
  if (part == GeneralPart::iii) {
    if (a < std::pow(p, 1.0 / (1.0 - q))) {
      return fail("part iii requires a >= p^{1/(1-q)}");
    }
    if (p > q && a < std::pow((p - q) / 2.0, 1.0 / (1.0 - q))) {
      return fail("part iii requires a >= ((p-q)/2)^{1/(1-q)}");
    }
  }
  return true;
}

LemmaCheck tech_lemma_general(int a, int b, double p, double q,
                              GeneralPart part) {
  std::string why;
  if (!tech_lemma_general_applicable(a, b, p, q, part, &why)) {
    throw std::domain_error("tech_lemma_general: " + why);
  }
  const double inv1q = 1.0 / (1.0 - q);
  switch (part) {
    case GeneralPart::i: {
      double prod = 1.0;
      for (int t = a; t <= b; ++t) prod *= 1.0 - std::pow(t, -q);
      const double rhs =
          std::exp(inv1q * (std::pow(a, 1.0 - q) - std::pow(b, 1.0 - q)));
      return finish(lv(prod), lv(rhs));
    }
    case GeneralPart::ii: {
      double sum = 0.0, prod = 1.0;
      for (int t = a; t <= b; ++t) {
        prod *= 1.0 - std::pow(t, -q);
        sum += std::pow(t, -p) * prod;
      }
      const double head =
          std::pow(a - 1.0, q - p) *
          std::exp(inv1q *
                   (std::pow(a, 1.0 - q) - std::pow(a - 1.0, 1.0 - q)));
      LemmaCheck c = finish(lv(sum), lv(head));
      // sharper companion display
      const double tail =
          std::pow(b, q - p) *
          std::exp(inv1q * (std::pow(a, 1.0 - q) - std::pow(b, 1.0 - q)));
      const double aux =
          (head - tail) / (1.0 + (p - q) * std::pow(b, q - 1.0));
      c.rhs_aux = aux;
      c.holds_aux = sum <= aux * (1.0 + 1e-12);
      return c;
    }
    case GeneralPart::iii: {
      // sum_{t=a}^b t^{-p} prod_{tau=t+1}^b (1 - tau^{-q}) via the backward
      // recurrence S_b = S_{b-1}(1 - b^{-q}) + b^{-p}
      double s = 0.0;
      for (int t = a; t <= b; ++t) {
        s = s * (1.0 - std::pow(t, -q)) + std::pow(t, -p);
      }
      const double rhs = 2.0 * std::exp(inv1q) * std::pow(b + 1.0, q - p);
      return finish(lv(s), lv(rhs));
    }
  }
  throw std::logic_error("tech_lemma_general: unreachable");
}

bool tech_lemma_explicit_applicable(int T, double eta, double L1,
                                    ExplicitPart part, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (T < 1) return fail("requires T >= 1");
  if (!(eta > 0.0)) return fail("requires eta > 0");
  switch (part) {
    case ExplicitPart::a_i:
    case ExplicitPart::a_ii:
      return true;
    case ExplicitPart::b_i:
    case ExplicitPart::b_ii:
      if (!(L1 > 0.0)) return fail("parts b require L1 > 0");
      return true;
    case ExplicitPart::c_i:
    case ExplicitPart::c_ii:
      if (!(L1 > 0.0)) return fail("parts c require L1 > 0");
      if (T < 2) return fail("parts c require the horizon b >= 2");
      return true;
    case ExplicitPart::c_iii:
      if (!(L1 > 0.0)) return fail("parts c require L1 > 0");
      if (T < 2) return fail("parts c require the horizon b >= 2");
      if (!(eta * L1 >= 0.5)) return fail("part c.iii requires eta L1 >= 1/2");
      return true;
  }
  return fail("unknown part");
}

namespace {

double sched_eta(double eta, int t) { return eta * std::pow(t, -0.75); }
double sched_beta(int t) { return t == 1 ? 0.0 : 1.0 - std::pow(t, -0.5); }
double sched_d(double eta, int t) {
  return 4.0 * eta * std::pow(t - 1.0, 0.25) - 3.0 * eta;
}

}  // namespace

LemmaCheck tech_lemma_explicit(int T, double eta, double L1,
                               ExplicitPart part) {
  std::string why;
  if (!tech_lemma_explicit_applicable(T, eta, L1, part, &why)) {
    throw std::domain_error("tech_lemma_explicit: " + why);
  }
  const double x = eta * L1;
  switch (part) {
    case ExplicitPart::a_i: {
      double sum = 0.0, prod = 1.0;
      for (int t = 1; t <= T; ++t) {
        if (t >= 2) prod *= sched_beta(t);
        sum += sched_eta(eta, t) * prod;
      }
      return finish(lv(sum), lv(3.5 * eta));
    }
    case ExplicitPart::a_ii: {
      double sum = 0.0, inner = 0.0;
      for (int t = 1; t <= T; ++t) {
        const double b = sched_beta(t);
        inner = b * b * inner + (1.0 - b) * (1.0 - b);
        sum += sched_eta(eta, t) * std::sqrt(inner);
      }
      const double rhs =
          eta * (3.5 + std::sqrt(2.0) * std::exp(1.0) * std::log(T));
      return finish(lv(sum), lv(rhs));
    }
    case ExplicitPart::b_i: {
      double sum = 0.0;
      for (int t = 1; t <= T; ++t) {
        const double et = sched_eta(eta, t);
        sum += et * et * kernel_b0(L1 * et);
      }
      return finish(lv(sum), lv(6.0 * eta * eta * kernel_a1(x)));
    }
    case ExplicitPart::b_ii: {
      double sum = 0.0, inner = 0.0;
      for (int t = 1; t <= T; ++t) {
        const double et = sched_eta(eta, t);
        if (t >= 2) inner = sched_beta(t) * (inner + et * kernel_b0(L1 * et));
        sum += et * inner;
      }
      const double rhs =
          7.0 * eta * eta * (3.0 * kernel_a1(x) + std::log(T));
      return finish(lv(sum), lv(rhs));
    }
    case ExplicitPart::c_i: {
      LogValue sum = LogValue::zero();
      for (int t = 2; t <= T; ++t) {
        const double et = sched_eta(eta, t);
        const double dt = sched_d(eta, t);
        const double base =
            L1 * et * kernel_b1(L1 * et) * std::pow(t, -0.25) * dt;
        sum = sum + LogValue::from_log(std::log(base) + L1 * dt);
      }
      const LogValue first = LogValue::from_log(
          std::log(0.5 * eta * eta * L1) + 2.0 * x);
      const LogValue diff =
          log_sub(LogValue::from_log(4.0 * x * std::pow(T, 0.25)),
                  LogValue::from_log(4.0 * x));
      const LogValue second =
          LogValue::from_log(std::log(4.0 * eta) - 2.5 * x) * diff;
      return finish(sum, first + second);
    }
    case ExplicitPart::c_ii:
    case ExplicitPart::c_iii: {
      LogValue sum = LogValue::zero();
      for (int t = 1; t <= T; ++t) {
        const double et = sched_eta(eta, t);
        const double dt = sched_d(eta, t);
        const double base =
            L1 * et * kernel_b1(L1 * et) * std::pow(t, -0.25);
        sum = sum + LogValue::from_log(std::log(base) + L1 * dt);
      }
      const LogValue first =
          LogValue::from_log(std::log(1.5 * x) + (5.0 / 3.0) * x);
      LogValue bracket_hi = LogValue::from_log(4.0 * x * std::pow(T, 0.25));
      if (part == ExplicitPart::c_iii) {
        bracket_hi = lv(2.0 * std::pow(T, -0.25)) * bracket_hi;
      }
      const LogValue diff = log_sub(bracket_hi, LogValue::from_log(4.0 * x));
      const LogValue second = LogValue::from_log(-2.5 * x) * diff;
      return finish(sum, first + second);
    }
  }
  throw std::logic_error("tech_lemma_explicit: unreachable");
}

const char* general_part_name(GeneralPart part) {
  switch (part) {
    case GeneralPart::i:
      return "i";
    case GeneralPart::ii:
      return "ii";
    case GeneralPart::iii:
      return "iii";
  }
  return "?";
}

const char* explicit_part_name(ExplicitPart part) {
  switch (part) {
    case ExplicitPart::a_i:
      return "a.i";
    case ExplicitPart::a_ii:
      return "a.ii";
    case ExplicitPart::b_i:
      return "b.i";
    case ExplicitPart::b_ii:
      return "b.ii";
    case ExplicitPart::c_i:
      return "c.i";
    case ExplicitPart::c_ii:
      return "c.ii";
    case ExplicitPart::c_iii:
      return "c.iii";
  }
  return "?";
}

std::vector<GeneralGridPoint> default_general_grid() {
  std::vector<GeneralGridPoint> grid;
  const int a_values[] = {2, 3, 5, 10};
  const int b_offsets[] = {0, 1, 2, 5, 10, 25, 50, 100, 250, 500};
  const double p_values[] = {0.5, 0.75, 1.0, 2.0};
  const double q_values[] = {0.25, 0.5, 0.75};
  const GeneralPart parts[] = {GeneralPart::i, GeneralPart::ii,
                               GeneralPart::iii};
  for (int a : a_values)
    for (int off : b_offsets)
      for (double p : p_values)
        for (double q : q_values)
          for (GeneralPart part : parts)
            grid.push_back({a, a + off, p, q, part});
  return grid;
}

std::vector<ExplicitGridPoint> default_explicit_grid() {
  std::vector<ExplicitGridPoint> grid;
  const int T_values[] = {1, 10, 100, 5000};
  const double eta_values[] = {1.0 / 7.0, 1.0, 3.0};
  const double L1_values[] = {0.1, 1.0, 4.0};
  const ExplicitPart parts[] = {
      ExplicitPart::a_i, ExplicitPart::a_ii, ExplicitPart::b_i,
      ExplicitPart::b_ii, ExplicitPart::c_i, ExplicitPart::c_ii,
      ExplicitPart::c_iii};
  for (int T : T_values)
    for (double eta : eta_values)
      for (double L1 : L1_values)
        for (ExplicitPart part : parts) grid.push_back({T, eta, L1, part});
  return grid;
}

}  // namespace rso
