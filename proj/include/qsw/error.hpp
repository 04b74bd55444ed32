#ifndef QSW_ERROR_HPP
#define QSW_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsw {

enum class ErrorKind {
  NonUnitary,
  DegenerateCoin,
  EndpointRegime,
  TraceDrift,
  NormDrift,
  BranchStarved,
  NonConvergence,
  LemmaViolation,
  EigenvalueAmbiguity,
  QuadratureDisagreement,
  ParityViolation,
  ImaginaryResidual,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for an error: 2 config, 3 numerical invariant, 4 I/O.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qsw

#endif  // QSW_ERROR_HPP
