#include "rso/smoothness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rso/objective.hpp"

namespace rso {

namespace {

// Below this, 4-term Taylor expansions are exact to double precision.
constexpr double kTaylorCutoff = 1e-4;
// Below this, the direct expressions still cancel too many digits for a
// 1e-12 target; sum the defining series instead (converges in ~15 terms).
constexpr double kSeriesCutoff = 0.03;

void require_nonnegative(double c) {
  if (c < 0.0 || !std::isfinite(c)) {
    throw std::domain_error("smoothness kernel: c must be finite and >= 0");
  }
}

// sum_{k>=1} num(k) c^k / (k+den_shift)!  added to 1
double one_plus_series(double c, double scale,
                       double (*weight)(int)) {
  double sum = 0.0;
  double ck = 1.0;
  for (int k = 1; k <= 30; ++k) {
    ck *= c;
    const double term = scale * weight(k) * ck;
    sum += term;
    if (term < 1e-18) break;
  }
  return 1.0 + sum;
}

double inv_fact(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return 1.0 / f;
}

}  // namespace

double kernel_a1(double c) {
  require_nonnegative(c);
  if (c < kTaylorCutoff) {
    return 1.0 + c * (1.0 / 2 + c * (1.0 / 6 + c * (1.0 / 24)));
  }
  if (c < kSeriesCutoff) {
    // (e^c - 1)/c = sum_k c^k/(k+1)!
    return one_plus_series(c, 1.0, [](int k) { return inv_fact(k + 1); });
  }
  return std::expm1(c) / c;
}

double kernel_a0(double c) {
  require_nonnegative(c);
  if (c < kTaylorCutoff) {
    return 1.0 + c * (1.0 / 2 + c * (1.0 / 3 + c * (1.0 / 8)));
  }
  if (c < kSeriesCutoff) {
    // 1 + e^c - (e^c-1)/c = 1 + sum_k k c^k/(k+1)!
    return one_plus_series(c, 1.0,
                           [](int k) { return k * inv_fact(k + 1); });
  }
  return 1.0 + std::exp(c) - std::expm1(c) / c;
}

double kernel_b1(double c) {
  require_nonnegative(c);
  if (c < kTaylorCutoff) {
    return 1.0 + c * (1.0 / 3 + c * (1.0 / 12 + c * (1.0 / 60)));
  }
  if (c < kSeriesCutoff) {
    // 2(e^c-1-c)/c^2 = 1 + 2 sum_k c^k/(k+2)!
    return one_plus_series(c, 2.0, [](int k) { return inv_fact(k + 2); });
  }
  return 2.0 * (std::expm1(c) - c) / (c * c);
}

double kernel_b0(double c) {
  require_nonnegative(c);
  if (c < kTaylorCutoff) {
    return 1.0 + c * (1.0 / 3 + c * (1.0 / 6 + c * (1.0 / 20)));
  }
  if (c < kSeriesCutoff) {
    // 1 + 2(e^c-1)/c - 4(e^c-1-c)/c^2 = 1 + 2 sum_k k c^k/(k+2)!
    return one_plus_series(c, 2.0,
                           [](int k) { return k * inv_fact(k + 2); });
  }
  return 1.0 + 2.0 * std::expm1(c) / c - 2.0 * kernel_b1(c);
}

namespace {

double definition_rhs(double c, double dist, double grad_norm_x,
                      const SmoothnessParams& p) {
  return (kernel_a0(c) * p.L0 + kernel_a1(c) * p.L1 * grad_norm_x) * dist;
}

}  // namespace

InequalityCheck check_definition(const Objective& f, const Vector& x,
                                 const Vector& y, const SmoothnessParams& p) {
  const Vector gx = f.gradient(x);
  const Vector gy = f.gradient(y);
  const double lhs = norm(sub(gx, gy));
  if (!std::isfinite(lhs)) {
    throw std::runtime_error("check_definition: non-finite gradient");
  }
  const double dist = norm(sub(x, y));
  const double gnx = norm(gx);
  const double c = p.L1 * dist;
  const double rhs = definition_rhs(c, dist, gnx, p);
  // The definition quantifies over every c >= L1 ||x-y||; the kernels are
  // increasing so c = L1 ||x-y|| binds, but probe one larger c as well.
  const double rhs_larger = definition_rhs(2.0 * c + 1.0, dist, gnx, p);
  const bool holds =
      lhs <= rhs * (1.0 + 1e-9) && lhs <= rhs_larger * (1.0 + 1e-9);
  return {holds, lhs, rhs};
}

namespace {

// Largest |eigenvalue| of a symmetric matrix by power iteration.
double spectral_norm(const std::vector<double>& h, std::size_t d) {
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> w(d);
  double lambda = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += h[i * d + j] * v[j];
      w[i] = s;
    }
    double nw = 0.0;
    for (double z : w) nw += z * z;
    nw = std::sqrt(nw);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / nw;
    if (std::abs(nw - lambda) <= 1e-14 * std::max(1.0, nw)) return nw;
    lambda = nw;
  }
  return lambda;
}

std::vector<double> finite_diff_hessian(const Objective& f, const Vector& x) {
  const std::size_t d = f.dim;
  const double h = 1e-5 * (1.0 + norm(x));
  std::vector<double> out(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> xp(x.components().begin(), x.components().end());
    std::vector<double> xm = xp;
    xp[j] += h;
    xm[j] -= h;
    const Vector gp = f.gradient(Vector(xp));
    const Vector gm = f.gradient(Vector(xm));
    for (std::size_t i = 0; i < d; ++i) {
      out[i * d + j] = (gp[i] - gm[i]) / (2.0 * h);
    }
  }
  // symmetrize
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double s = 0.5 * (out[i * d + j] + out[j * d + i]);
      out[i * d + j] = s;
      out[j * d + i] = s;
    }
  }
  return out;
}

}  // namespace

bool check_hessian_equivalence(const Objective& f, const Vector& x,
                               const SmoothnessParams& p) {
  if (f.dim > 64) {
    throw std::invalid_argument(
        "check_hessian_equivalence: dense Hessian unsupported for dim > 64");
  }
  const std::vector<double> h =
      f.hessian ? f.hessian(x) : finite_diff_hessian(f, x);
  const double hn = spectral_norm(h, f.dim);
  return hn <= p.L0 + p.L1 * norm(f.gradient(x)) + 1e-4;
}

double descent_upper_bound(const Objective& f, const Vector& x,
                           const Vector& y, const SmoothnessParams& p) {
  const Vector gx = f.gradient(x);
  const Vector d = sub(y, x);
  const double dist = norm(d);
  const double c = p.L1 * dist;
  return f.value(x) + dot(gx, d) +
         0.5 * (kernel_b0(c) * p.L0 + kernel_b1(c) * p.L1 * norm(gx)) * dist *
             dist;
}

InequalityCheck gradient_bound_check(const Objective& f, const Vector& x,
                                     double f_star,
                                     const SmoothnessParams& p) {
  if (!(p.L1 > 0.0)) {
    throw std::domain_error("gradient_bound_check: requires L1 > 0");
  }
  const double fx = f.value(x);
  if (fx < f_star) {
    throw std::domain_error(
        "gradient_bound_check: f(x) < f_star, inconsistent infimum");
  }
  const double g = norm(f.gradient(x));
  const double by_l1 = g / p.L1;
  const double by_l0 = p.L0 > 0.0 ? g * g / p.L0
                                  : std::numeric_limits<double>::infinity();
  const double lhs = std::min(by_l1, by_l0);
  const double rhs = 8.0 * (fx - f_star);
  return {lhs <= rhs + 1e-12, lhs, rhs};
}

double initial_grad_norm_bound(double delta1, const SmoothnessParams& p) {
  if (!(p.L1 > 0.0)) {
    throw std::domain_error("initial_grad_norm_bound: requires L1 > 0");
  }
  if (delta1 < 0.0) {
    throw std::domain_error("initial_grad_norm_bound: delta1 must be >= 0");
  }
  return 8.0 * p.L1 * delta1 +
         std::min(p.L0 / p.L1, std::sqrt(8.0 * p.L0 * delta1));
}

}  // namespace rso
