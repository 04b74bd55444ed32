#include "qsw/error.hpp"

namespace qsw {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::DegenerateCoin: return "DegenerateCoin";
    case ErrorKind::EndpointRegime: return "EndpointRegime";
    case ErrorKind::TraceDrift: return "TraceDrift";
    case ErrorKind::NormDrift: return "NormDrift";
    case ErrorKind::BranchStarved: return "BranchStarved";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::LemmaViolation: return "LemmaViolation";
    case ErrorKind::EigenvalueAmbiguity: return "EigenvalueAmbiguity";
    case ErrorKind::QuadratureDisagreement: return "QuadratureDisagreement";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::ImaginaryResidual: return "ImaginaryResidual";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "UnknownError";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::DegenerateCoin:
    case ErrorKind::EndpointRegime:
    case ErrorKind::NonUnitary:
      return 2;
    case ErrorKind::Io:
      return 4;
    default:
      return 3;
  }
}

}  // namespace qsw
