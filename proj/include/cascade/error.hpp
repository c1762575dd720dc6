#ifndef CASCADE_ERROR_HPP
#define CASCADE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cascade {

enum class ErrorKind {
  invalid_input,
  configuration,
  subcritical_speed,
  no_convergence,
  no_front,
  insufficient_data,
  numerical_blowup,
  domain_exhausted,
  instability,
  tolerance_not_met,
  not_converged,
  no_data,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::subcritical_speed: return "subcritical-speed";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::no_front: return "no-front";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::numerical_blowup: return "numerical-blowup";
    case ErrorKind::domain_exhausted: return "domain-exhausted";
    case ErrorKind::instability: return "instability";
    case ErrorKind::tolerance_not_met: return "tolerance-not-met";
    case ErrorKind::not_converged: return "not-converged";
    case ErrorKind::no_data: return "no-data";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace cascade

#endif  // CASCADE_ERROR_HPP
