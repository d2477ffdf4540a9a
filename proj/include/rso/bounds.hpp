#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rso {

// Nonnegative real carried in log-space. The exponentials in these bounds
// (e^{48 (eta L1)^2} and friends) overflow doubles long before the formulas
// stop being meaningful, so every bound is accumulated here and converted
// to linear only at the end.
class LogValue {
 public:
  static LogValue zero();
  static LogValue from_linear(double v);  // v >= 0
  static LogValue from_log(double lg);

  double log() const { return lg_; }
  // +inf when the linear value overflows; use overflows() to distinguish
  double linear() const;
  bool overflows() const;
  bool is_zero() const;

  friend LogValue operator+(LogValue a, LogValue b);  // log-sum-exp
  friend LogValue operator*(LogValue a, LogValue b);
  friend LogValue operator/(LogValue a, LogValue b);
  // requires a >= b; log(e^a - e^b)
  friend LogValue log_sub(LogValue a, LogValue b);
  friend bool operator<(LogValue a, LogValue b) { return a.lg_ < b.lg_; }
  friend bool operator<=(LogValue a, LogValue b) { return a.lg_ <= b.lg_; }

 private:
  explicit LogValue(double lg) : lg_(lg) {}
  double lg_;
};

// A computed theoretical bound with every constituent constant preserved,
// so reports can be audited term by term.
struct BoundReport {
  std::string kind;
  double value = 0.0;      // +inf if the linear value overflows
  double log_value = 0.0;  // always finite (unless the bound is 0)
  std::map<std::string, double> constants;

  std::string to_json() const;
};

// Upper bound on sum_t (eta_t/2) E||grad F(x_t)|| for NSGD-M with
// eta_t = eta t^{-3/4}, beta_t = 1 - t^{-1/2}:
//   Delta1 + eta sigma (7 + 2 sqrt(2e^2) log T)
//   + eta^2 L0 (45 (e^{eta L1}-1)/(eta L1) + 14 log T)
//   + 21 eta^2 L0 e^{48 (eta L1)^2} + coef e^{48 (eta L1)^2} ||grad F(x_1)||
// where coef = 6 eta, improved to 1/L1 once eta L1 >= 1/2. Also reports the
// adaptation threshold t0 = ceil((12 eta L1)^4) in the constants map.
BoundReport nsgdm_sum_bound(int T, double delta1, double sigma, double L0,
                            double L1, double eta, double grad_norm_x1);

// Upper bound on (1/T) sum_t E||grad F(x_t)|| for the eta = 1/7 schedule;
// minimum of the general display and (when L1 >= 7/2) the improved one.
BoundReport nsgdm_avg_bound_agnostic(int T, double delta1, double sigma,
                                     double L0, double L1);

// Same average for the L1-informed schedule eta_t = t^{-3/4}/(12 L1):
//   (24 L1 Delta1 + (14 + 4 sqrt(2e^2) log T) sigma
//    + (10 + 4 log T) L0/L1) / T^{1/4}. Requires L1 > 0.
BoundReport nsgdm_avg_bound_informed(int T, double delta1, double sigma,
                                     double L0, double L1);

// (4 L0 Delta1 + 14 L1^2 Delta1^2) / (beta gamma (1-gamma) T) bounding
// (1/T) sum_t ||grad F(x_t)||^2 for backtracking GD.
BoundReport backtracking_bound(int T, double delta1, double L0, double L1,
                               double beta, double gamma);

// Iteration floor for normalized momentum methods with steps eta/t^alpha on
// the matching hard instance:
//   ((1-alpha)/2)^{1/(1-alpha)}
//   (Delta1/eta + (2/(eta L1))(e^{eta L1/4} - 1))^{1/(1-alpha)}
//   eps^{-1/(1-alpha)}.
BoundReport lower_bound_iterations(double eps, double eta, double alpha,
                                   double delta1, double L1);

// ---------------------------------------------------------------------------
// Technical lemma verifiers. Each computes its LHS by direct summation /
// products (prefix recurrences keep this O(n)) and its RHS from the closed
// form, both in log-space, and reports holds = lhs <= rhs (1 + 1e-12).

struct LemmaCheck {
  double lhs = 0.0;  // +inf when overflowed; exact values in logs below
  double rhs = 0.0;
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  bool holds = false;
  // Part ii of the general lemma has a sharper companion display; when
  // computed it lands here.
  std::optional<double> rhs_aux;
  std::optional<bool> holds_aux;
};

enum class GeneralPart { i, ii, iii };

// part i:  prod_{t=a}^b (1-t^{-q}) <= exp((a^{1-q} - b^{1-q})/(1-q))
// part ii (p >= q):
//   sum_{t=a}^b t^{-p} prod_{tau=a}^t (1-tau^{-q})
//     <= (a-1)^{q-p} exp((a^{1-q} - (a-1)^{1-q})/(1-q))        [primary]
//   with the sharper display, divided by 1 + (p-q) b^{q-1}, as aux.
// part iii (a >= p^{1/(1-q)} and, when p > q, a >= ((p-q)/2)^{1/(1-q)}):
//   sum_{t=a}^b t^{-p} prod_{tau=t+1}^b (1-tau^{-q})
//     <= 2 exp(1/(1-q)) (b+1)^{q-p}
LemmaCheck tech_lemma_general(int a, int b, double p, double q,
                              GeneralPart part);

bool tech_lemma_general_applicable(int a, int b, double p, double q,
                                   GeneralPart part, std::string* why);

enum class ExplicitPart { a_i, a_ii, b_i, b_ii, c_i, c_ii, c_iii };

// Schedules eta_t = eta t^{-3/4}, beta_t = 1 - t^{-1/2};
// C_t = b0(L1 eta_t), D_t = b1(L1 eta_t), d_t = 4 eta (t-1)^{1/4} - 3 eta.
//
// a.i   sum_t eta_t prod_{tau=2}^t beta_tau <= (7/2) eta
// a.ii  sum_t eta_t sqrt(sum_tau (1-beta_tau)^2 prod beta^2)
//         <= eta (7/2 + sqrt(2e^2) log T)
// b.i   sum_t eta_t^2 C_t <= 6 eta^2 (e^{L1 eta}-1)/(L1 eta)
// b.ii  sum_t eta_t sum_{tau=2}^t eta_tau C_tau prod_{k=tau}^t beta_k
//         <= 7 eta^2 (3 (e^{eta L1}-1)/(eta L1) + log T)
// c.i   sum_{t=2}^b L1 eta_t D_t t^{-1/4} d_t e^{L1 d_t}
//         <= (1/2) eta^2 L1 e^{2 eta L1}
//            + 4 eta e^{-(5/2) eta L1} (e^{4 eta L1 b^{1/4}} - e^{4 eta L1})
// c.ii  sum_{t=1}^b L1 eta_t D_t t^{-1/4} e^{L1 d_t}
//         <= (3/2) eta L1 e^{(5/3) eta L1}
//            + e^{-(5/2) eta L1} (e^{4 eta L1 b^{1/4}} - e^{4 eta L1})
// c.iii (eta L1 >= 1/2) as c.ii with the bracket
//            (2 b^{-1/4} e^{4 eta L1 b^{1/4}} - e^{4 eta L1})
// Parts b and c require L1 > 0; parts c require the horizon >= 2.
LemmaCheck tech_lemma_explicit(int T, double eta, double L1,
                               ExplicitPart part);

bool tech_lemma_explicit_applicable(int T, double eta, double L1,
                                    ExplicitPart part, std::string* why);

const char* general_part_name(GeneralPart part);
const char* explicit_part_name(ExplicitPart part);

// Default verification grids (the ones the acceptance suite and the
// verify-lemmas command run).
struct GeneralGridPoint {
  int a, b;
  double p, q;
  GeneralPart part;
};
struct ExplicitGridPoint {
  int T;
  double eta, L1;
  ExplicitPart part;
};
std::vector<GeneralGridPoint> default_general_grid();
std::vector<ExplicitGridPoint> default_explicit_grid();

}  // namespace rso
