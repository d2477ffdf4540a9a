#include "rso/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace rso {

NoisyOracle::NoisyOracle(Objective objective, double sigma, NoiseKind kind,
                         std::uint64_t seed)
    : objective_(std::move(objective)), sigma_(sigma), kind_(kind), rng_(seed) {
  if (sigma < 0.0) {
    throw std::invalid_argument("NoisyOracle: sigma must be >= 0");
  }
}

OracleSample NoisyOracle::sample(const Vector& x) {
  Vector g = objective_.gradient(x);
  if (sigma_ == 0.0) {
    return {g, g};
  }
  Vector noisy = g;
  switch (kind_) {
    case NoiseKind::gaussian_isotropic: {
      const double sd = sigma_ / std::sqrt(static_cast<double>(g.dim()));
      noisy = axpy(g, sd, rng_.next_normal_vector(g.dim()));
      break;
    }
    case NoiseKind::bounded_uniform_sphere:
      noisy = axpy(g, sigma_, rng_.next_unit_sphere(g.dim()));
      break;
  }
  return {std::move(noisy), std::move(g)};
}

}  // namespace rso
