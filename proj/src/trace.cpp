#include "rso/trace.hpp"

#include <cstdio>
#include <sstream>

namespace rso {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void RunTrace::append(StepRecord rec) {
  const int expected = steps_.empty() ? 1 : steps_.back().t + 1;
  if (rec.t != expected) {
    throw std::invalid_argument("RunTrace: iterations must increase from 1");
  }
  if (!(rec.eta > 0.0)) {
    throw std::invalid_argument("RunTrace: eta_t must be positive");
  }
  if (rec.x.dim() != dim_) {
    throw std::invalid_argument("RunTrace: iterate dimension mismatch");
  }
  steps_.push_back(std::move(rec));
}

void RunTrace::write_csv(std::ostream& os) const {
  os << "t,eta,f,grad_norm,stoch_grad_norm";
  for (std::size_t i = 0; i < dim_; ++i) os << ",x" << i;
  os << "\n";
  for (const auto& s : steps_) {
    os << s.t << ',' << format_double(s.eta) << ',' << format_double(s.f_value)
       << ',' << format_double(s.grad_norm) << ','
       << format_double(s.stoch_grad_norm);
    for (std::size_t i = 0; i < dim_; ++i) os << ',' << format_double(s.x[i]);
    os << "\n";
  }
}

std::string RunTrace::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

}  // namespace rso
