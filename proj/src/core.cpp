#include "relaxflow/core.hpp"

namespace relaxflow {

namespace {

bool all_finite(const double* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

}  // namespace

std::optional<Violation> validate_state(const RelaxState& s, double floor) {
  const StateVec a = to_array(s);
  if (!all_finite(a.data(), a.size()))
    return Violation{0, "non-finite state entry", s.rho};
  if (!(s.rho > floor)) return Violation{0, "rho", s.rho};
  return std::nullopt;
}

std::optional<Violation> validate_state(const NSState& s, double floor) {
  const double a[4] = {s.rho, s.mom[0], s.mom[1], s.mom[2]};
  if (!all_finite(a, 4)) return Violation{0, "non-finite state entry", s.rho};
  if (!(s.rho > floor)) return Violation{0, "rho", s.rho};
  return std::nullopt;
}

std::optional<Violation> validate_field(const RelaxField& f, double floor) {
  for (std::size_t c = 0; c < f.cells.size(); ++c) {
    if (auto v = validate_state(f.cells[c], floor)) {
      v->cell = c;
      return v;
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate_field(const NSField& f, double floor) {
  for (std::size_t c = 0; c < f.cells.size(); ++c) {
    if (auto v = validate_state(f.cells[c], floor)) {
      v->cell = c;
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace relaxflow
