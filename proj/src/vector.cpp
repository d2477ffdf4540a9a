#include "rso/vector.hpp"

#include <cmath>

namespace rso {

namespace {
void require_same_dim(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("Vector: dimension mismatch");
  }
}
}  // namespace

double norm(const Vector& v) {
  // scaled to survive underflow/overflow of the squares
  double m = 0.0;
  for (double x : v.components()) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v.components()) {
    const double r = x / m;
    s += r * r;
  }
  return m * std::sqrt(s);
}

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

Vector add(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return Vector(std::move(out));
}

Vector sub(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return Vector(std::move(out));
}

Vector scale(double s, const Vector& v) {
  std::vector<double> out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = s * v[i];
  return Vector(std::move(out));
}

Vector axpy(const Vector& a, double s, const Vector& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + s * b[i];
  return Vector(std::move(out));
}

}  // namespace rso
