#pragma once

#include <cstdint>

#include "rso/objective.hpp"
#include "rso/rng.hpp"

namespace rso {

enum class NoiseKind {
  gaussian_isotropic,   // per-component sd sigma/sqrt(d); total variance sigma^2
  bounded_uniform_sphere,  // uniform on the sphere of radius sigma; exact norm
};

struct OracleSample {
  Vector g;          // what the optimizer sees
  Vector true_grad;  // instrumentation only; optimizers never receive this
};

// Unbiased stochastic gradient oracle around an objective. sigma = 0 returns
// the true gradient bit-exactly. Single-owner: one oracle per run, parallel
// runs construct their own with split seeds.
class NoisyOracle {
 public:
  NoisyOracle(Objective objective, double sigma, NoiseKind kind,
              std::uint64_t seed);

  OracleSample sample(const Vector& x);

  const Objective& objective() const { return objective_; }
  double sigma() const { return sigma_; }

 private:
  Objective objective_;
  double sigma_;
  NoiseKind kind_;
  Rng rng_;
};

}  // namespace rso
