#include "rso/testfns.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rso/rng.hpp"
#include "rso/trace.hpp"

namespace rso {

Objective make_quadratic(double L, std::size_t dim) {
  if (!(L > 0.0)) throw std::invalid_argument("make_quadratic: L must be > 0");
  if (dim < 1) throw std::invalid_argument("make_quadratic: dim must be >= 1");
  Objective f;
  f.name = "quadratic";
  f.dim = dim;
  f.value = [L](const Vector& x) { return 0.5 * L * dot(x, x); };
  f.gradient = [L](const Vector& x) { return scale(L, x); };
  f.hessian = [L, dim](const Vector&) {
    std::vector<double> h(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) h[i * dim + i] = L;
    return h;
  };
  f.params = {L, 0.0};
  f.f_star = 0.0;
  f.start = Vector(std::vector<double>(dim, 1.0));
  return f;
}

Objective make_cosh(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("make_cosh: a must be > 0");
  Objective f;
  f.name = "cosh";
  f.dim = 1;
  f.value = [a](const Vector& x) { return 2.0 * std::cosh(a * x[0]) / a; };
  f.gradient = [a](const Vector& x) {
    return Vector{2.0 * std::sinh(a * x[0])};
  };
  f.hessian = [a](const Vector& x) {
    return std::vector<double>{2.0 * a * std::cosh(a * x[0])};
  };
  f.params = {2.0 * a, a};
  f.f_star = 2.0 / a;
  f.start = Vector{3.0};
  return f;
}

Objective make_exp1d() {
  Objective f;
  f.name = "exp1d";
  f.dim = 1;
  f.value = [](const Vector& x) { return std::exp(x[0]); };
  f.gradient = [](const Vector& x) { return Vector{std::exp(x[0])}; };
  f.hessian = [](const Vector& x) {
    return std::vector<double>{std::exp(x[0])};
  };
  f.params = {0.0, 1.0};
  f.f_star = 0.0;
  f.infimum_attained = false;
  f.start = Vector{0.0};
  return f;
}

Objective make_quartic() {
  Objective f;
  f.name = "quartic";
  f.dim = 1;
  f.value = [](const Vector& x) {
    const double v = x[0];
    return v * v * v * v;
  };
  f.gradient = [](const Vector& x) {
    const double v = x[0];
    return Vector{4.0 * v * v * v};
  };
  f.hessian = [](const Vector& x) {
    return std::vector<double>{12.0 * x[0] * x[0]};
  };
  f.params = {108.0, 1.0};
  f.f_star = 0.0;
  f.start = Vector{3.0};
  return f;
}

HardInstance::HardInstance(double eps, double eta, double L0, double L1,
                           double delta1, PlateauHeight variant)
    : eps_(eps), eta_(eta), L0_(L0), L1_(L1), delta1_(delta1) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::invalid_argument("hard instance: requires 0 < eps < 1/2");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("hard instance: requires eta > 0");
  }
  if (!(delta1 >= 0.25)) {
    throw std::invalid_argument("hard instance: requires delta1 >= 1/4");
  }
  if (!(L0 >= 8.0 / eta)) {
    throw std::invalid_argument("hard instance: requires L0 >= 8/eta");
  }
  if (!(L1 > 0.0)) {
    throw std::invalid_argument("hard instance: requires L1 > 0");
  }

  z1_ = 2.0 / L0;
  const double construction_height =
      delta1 + (2.0 / L1) * std::expm1(L1 * (eta / 2.0 - z1_));
  const double certified_height =
      delta1 + (2.0 / L1) * std::expm1(L1 * eta / 4.0);
  height_ = variant == PlateauHeight::construction ? construction_height
                                                   : certified_height;
  z2_ = eta - z1_ + (1.0 + 2.0 * eps) / L0;
  z3_ = eta + height_ / (2.0 * eps);
  z4_ = z3_ + 2.0 * eps / L0;

  knot_x_ = {0.0, z1_, eta / 2.0, eta - z1_, z2_, z3_, z4_};
  // prefix integral of F' at each knot, analytic per piece
  knot_f_[0] = delta1;
  knot_f_[1] = delta1 + 0.5 * L0 * z1_ * z1_ - z1_;
  knot_f_[2] = knot_f_[1] + std::expm1(L1 * (eta / 2.0 - z1_)) / L1;
  knot_f_[3] = knot_f_[2] + std::expm1(L1 * (eta / 2.0 - z1_)) / L1;
  knot_f_[4] = knot_f_[3] + 0.5 * L0 * (z1_ * z1_ - (eta - z2_) * (eta - z2_)) -
               (z2_ - (eta - z1_));
  knot_f_[5] = knot_f_[4] - 2.0 * eps * (z3_ - z2_);
  knot_f_[6] = knot_f_[5] + 0.5 * L0 * (z4_ - z3_) * (z4_ - z3_) -
               2.0 * eps * (z4_ - z3_);
}

std::array<double, 7> HardInstance::knots() const { return knot_x_; }

double HardInstance::deriv(double x) const {
  if (x < 0.0) return -1.0;
  if (x < z1_) return L0_ * x - 1.0;
  if (x < eta_ / 2.0) return std::exp(L1_ * (x - z1_));
  if (x < eta_ - z1_) return std::exp(L1_ * (eta_ - z1_ - x));
  if (x < z2_) return L0_ * (eta_ - x) - 1.0;
  if (x < z3_) return -2.0 * eps_;
  if (x < z4_) return L0_ * (x - z3_) - 2.0 * eps_;
  return 0.0;
}

double HardInstance::value(double x) const {
  if (x < 0.0) return delta1_ - x;
  if (x < z1_) return delta1_ + 0.5 * L0_ * x * x - x;
  if (x < eta_ / 2.0) {
    return knot_f_[1] + std::expm1(L1_ * (x - z1_)) / L1_;
  }
  if (x < eta_ - z1_) {
    return knot_f_[2] + (std::exp(L1_ * (eta_ / 2.0 - z1_)) -
                         std::exp(L1_ * (eta_ - z1_ - x))) /
                            L1_;
  }
  if (x < z2_) {
    return knot_f_[3] +
           0.5 * L0_ * (z1_ * z1_ - (eta_ - x) * (eta_ - x)) -
           (x - (eta_ - z1_));
  }
  if (x < z3_) return knot_f_[4] - 2.0 * eps_ * (x - z2_);
  if (x < z4_) {
    return knot_f_[5] + 0.5 * L0_ * (x - z3_) * (x - z3_) -
           2.0 * eps_ * (x - z3_);
  }
  return knot_f_[6];
}

Objective HardInstance::objective() const {
  Objective f;
  f.name = "hard_instance";
  f.dim = 1;
  const HardInstance self = *this;
  f.value = [self](const Vector& x) { return self.value(x[0]); };
  f.gradient = [self](const Vector& x) { return Vector{self.deriv(x[0])}; };
  f.params = {L0_, L1_};
  f.f_star = 0.0;
  f.infimum_attained = false;
  f.start = Vector{0.0};
  return f;
}

std::string HardInstance::to_json() const {
  std::ostringstream os;
  os << "{\"eps\": " << format_double(eps_) << ", \"eta\": "
     << format_double(eta_) << ", \"L0\": " << format_double(L0_)
     << ", \"L1\": " << format_double(L1_) << ", \"delta1\": "
     << format_double(delta1_) << ", \"z1\": " << format_double(z1_)
     << ", \"z2\": " << format_double(z2_) << ", \"z3\": "
     << format_double(z3_) << ", \"z4\": " << format_double(z4_)
     << ", \"C\": " << format_double(height_) << "}";
  return os.str();
}

HardInstance make_hard_instance(double eps, double eta, double L0, double L1,
                                double delta1, PlateauHeight variant) {
  return HardInstance(eps, eta, L0, L1, delta1, variant);
}

double finite_diff_gradient_check(const Objective& f, int trials,
                                  std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("finite_diff_gradient_check: trials >= 1");
  }
  Rng rng(seed);
  const double box = std::max(1.0, 2.0 * norm(f.start));
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    std::vector<double> p(f.dim);
    for (auto& v : p) v = box * (2.0 * rng.next_unit() - 1.0);
    const Vector x(p);
    const Vector g = f.gradient(x);
    const double h = 1e-6 * (1.0 + norm(x));
    for (std::size_t j = 0; j < f.dim; ++j) {
      std::vector<double> xp(p), xm(p);
      xp[j] += h;
      xm[j] -= h;
      const double fd = (f.value(Vector(xp)) - f.value(Vector(xm))) / (2.0 * h);
      const double rel =
          std::abs(fd - g[j]) / std::max(1.0, std::abs(g[j]));
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace rso
