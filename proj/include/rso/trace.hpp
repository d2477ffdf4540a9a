#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rso/vector.hpp"

namespace rso {

struct StepRecord {
  int t = 0;                 // iteration, 1-based
  Vector x;                  // iterate x_t
  double eta = 0.0;          // stepsize eta_t
  std::optional<Vector> m;   // momentum m_t, when the method has one
  double grad_norm = 0.0;    // ||grad F(x_t)||, true gradient
  double stoch_grad_norm = 0.0;
  double f_value = 0.0;
};

// Per-iteration history of one run. Iterations are strictly increasing
// from 1 and every stepsize is positive; append enforces both.
class RunTrace {
 public:
  explicit RunTrace(std::size_t dim) : dim_(dim) {}

  void append(StepRecord rec);

  std::size_t dim() const { return dim_; }
  const std::vector<StepRecord>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }
  const StepRecord& back() const { return steps_.back(); }

  // Header t,eta,f,grad_norm,stoch_grad_norm,x0..x{d-1}; floats with 17
  // significant digits so replays are byte-identical.
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;

 private:
  std::size_t dim_;
  std::vector<StepRecord> steps_;
};

// Formats a double with 17 significant digits (shared by every CSV writer).
std::string format_double(double v);

// A run left the finite domain; carries the trace accumulated so far.
struct DivergedError : std::runtime_error {
  DivergedError(std::string msg, RunTrace partial_trace)
      : std::runtime_error(std::move(msg)), partial(std::move(partial_trace)) {}
  RunTrace partial;
};

}  // namespace rso
