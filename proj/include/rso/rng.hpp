#pragma once

#include <cstdint>

#include "rso/vector.hpp"

namespace rso {

// Counter-based pseudo-random stream (SplitMix64, version 1).
//
// Draw i is a pure function of (seed, i): the 64-bit finalizer applied to
// seed + i*golden_gamma. Equal seeds give equal streams; the algorithm is
// fixed here so that serialized runs replay across builds. Parallel runs
// must derive their own streams (e.g. seed ^ run index), never share one.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();

  // uniform on (0,1], 53-bit resolution
  double next_unit();

  // standard normal via Box-Muller; second draw of each pair is cached
  double next_normal();

  // isotropic standard normal components
  Vector next_normal_vector(std::size_t dim);

  // uniform on the unit sphere surface (Rademacher sign for dim 1)
  Vector next_unit_sphere(std::size_t dim);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rso
