#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace cqnc {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 exact values.
namespace codata {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
}  // namespace codata

inline constexpr const char* version = "1.0.0";

// Raised for inputs outside an operation's domain: poles, unstable regimes,
// invalid parameter sets.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// The only Hz <-> rad/s conversion site. Everything inside the library is
// angular; configuration files and CSV columns labelled *_hz are ordinary
// frequency.
constexpr double to_angular(double hz) noexcept { return 2.0 * pi * hz; }
constexpr double to_hz(double angular) noexcept { return angular / (2.0 * pi); }

}  // namespace cqnc
