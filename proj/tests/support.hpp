#pragma once

#include <cmath>

#include "cqnc/params.hpp"

namespace cqnc::test {

inline SystemParams reference() { return reference_defaults().first; }
inline DriveParams reference_drive() { return reference_defaults().second; }

inline double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Reference set at the SQL coupling on resonance, g = G' = sqrt(kappa gamma_m)/2.
inline SystemParams reference_at_gsql() {
  SystemParams p = reference();
  p.g = p.g_prime = 0.5 * std::sqrt(p.kappa * p.gamma_m);
  return p;
}

}  // namespace cqnc::test
