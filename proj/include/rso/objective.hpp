#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rso/smoothness.hpp"
#include "rso/vector.hpp"

namespace rso {

// A differentiable objective with declared smoothness constants and a known
// infimum. Evaluators are pure; instances are immutable after construction
// and safe to share across threads.
struct Objective {
  std::string name;
  std::size_t dim = 1;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  // Row-major dim x dim analytic Hessian; empty when unavailable.
  std::function<std::vector<double>(const Vector&)> hessian;
  SmoothnessParams params;
  double f_star = 0.0;
  bool infimum_attained = true;
  Vector start{std::vector<double>{0.0}};  // canonical x_1

  double delta1() const { return value(start) - f_star; }
};

}  // namespace rso
