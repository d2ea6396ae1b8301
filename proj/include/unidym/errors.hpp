#ifndef UNIDYM_ERRORS_HPP
#define UNIDYM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace unidym {

enum class ErrorKind {
  domain,
  pole,
  flatness,
  degenerate_configuration,
  not_diffeo,
  parameter,
  critical_point,
  hypothesis,
  precondition,
  numeric,
  usage,
  io,
  invariant,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::flatness: return "flatness";
    case ErrorKind::degenerate_configuration: return "degenerate-configuration";
    case ErrorKind::not_diffeo: return "not-diffeo";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::critical_point: return "critical-point";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
    case ErrorKind::invariant: return "invariant";
  }
  return "unknown";
}

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define UNIDYM_DEFINE_ERROR(Name, Kind)                              \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

UNIDYM_DEFINE_ERROR(DomainError, domain)
UNIDYM_DEFINE_ERROR(PoleError, pole)
UNIDYM_DEFINE_ERROR(FlatnessError, flatness)
UNIDYM_DEFINE_ERROR(DegenerateConfigurationError, degenerate_configuration)
UNIDYM_DEFINE_ERROR(NotDiffeoError, not_diffeo)
UNIDYM_DEFINE_ERROR(ParameterError, parameter)
UNIDYM_DEFINE_ERROR(CriticalPointError, critical_point)
UNIDYM_DEFINE_ERROR(HypothesisError, hypothesis)
UNIDYM_DEFINE_ERROR(PreconditionError, precondition)
UNIDYM_DEFINE_ERROR(NumericError, numeric)
UNIDYM_DEFINE_ERROR(UsageError, usage)
UNIDYM_DEFINE_ERROR(IoError, io)
UNIDYM_DEFINE_ERROR(InvariantError, invariant)

#undef UNIDYM_DEFINE_ERROR

}  // namespace unidym

#endif  // UNIDYM_ERRORS_HPP
