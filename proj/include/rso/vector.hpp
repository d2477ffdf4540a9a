#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace rso {

// Dense real vector. Components must be finite on construction and the
// dimension never changes afterwards.
class Vector {
 public:
  explicit Vector(std::vector<double> components)
      : data_(std::move(components)) {
    if (data_.empty()) {
      throw std::invalid_argument("Vector: dimension must be >= 1");
    }
    for (double v : data_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("Vector: non-finite component");
      }
    }
  }

  Vector(std::initializer_list<double> components)
      : Vector(std::vector<double>(components)) {}

  static Vector zeros(std::size_t dim) {
    return Vector(std::vector<double>(dim, 0.0));
  }

  std::size_t dim() const { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  std::span<const double> components() const { return data_; }

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.data_ == b.data_;
  }

 private:
  std::vector<double> data_;
};

double norm(const Vector& v);
double dot(const Vector& a, const Vector& b);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(double s, const Vector& v);

// a + s*b, the one fused form every optimizer update needs
Vector axpy(const Vector& a, double s, const Vector& b);

}  // namespace rso
