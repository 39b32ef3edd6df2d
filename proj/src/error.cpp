#include "entswitch/error.hpp"

namespace entswitch {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::UnstableRegime: return "UnstableRegime";
    case ErrorKind::NotInS: return "NotInS";
    case ErrorKind::NotInterior: return "NotInterior";
    case ErrorKind::UnreachableTarget: return "UnreachableTarget";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::NotInEj: return "NotInEj";
    case ErrorKind::TailBoundViolated: return "TailBoundViolated";
    case ErrorKind::DivergentRegime: return "DivergentRegime";
    case ErrorKind::RecursionDomain: return "RecursionDomain";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::CertificationFailed: return "CertificationFailed";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::CapTooSmall: return "CapTooSmall";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

}  // namespace entswitch
