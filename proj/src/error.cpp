#include "xtree/error.hpp"

namespace xtree {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::SupportViolation: return "SupportViolation";
    case Errc::DomainError: return "DomainError";
    case Errc::RegularityError: return "RegularityError";
    case Errc::NumericalError: return "NumericalError";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::HeavyTail: return "HeavyTail";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::DegenerateSample: return "DegenerateSample";
    case Errc::InvalidScale: return "InvalidScale";
    case Errc::ShapeOutOfRange: return "ShapeOutOfRange";
    case Errc::ZeroParentScore: return "ZeroParentScore";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::RootUnfittable: return "RootUnfittable";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MemberFitFailure: return "MemberFitFailure";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::CorruptModel: return "CorruptModel";
    case Errc::IncompleteDay: return "IncompleteDay";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool is_user_error(Errc code) noexcept {
  switch (code) {
    case Errc::NumericalError:
    case Errc::IllConditioned:
      return false;
    default:
      return true;
  }
}

}  // namespace xtree
