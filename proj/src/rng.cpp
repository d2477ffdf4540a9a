#include "rso/rng.hpp"

#include <cmath>
#include <numbers>

namespace rso {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix(seed_ + counter_ * kGoldenGamma);
}

double Rng::next_unit() {
  // (0,1]: never 0, so log() below is safe
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Vector Rng::next_normal_vector(std::size_t dim) {
  std::vector<double> out(dim);
  for (auto& v : out) v = next_normal();
  return Vector(std::move(out));
}

Vector Rng::next_unit_sphere(std::size_t dim) {
  for (;;) {
    Vector g = next_normal_vector(dim);
    const double n = norm(g);
    if (n > 1e-12) return scale(1.0 / n, g);
  }
}

}  // namespace rso
