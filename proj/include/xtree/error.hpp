#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xtree {

enum class Errc {
  SupportViolation,
  DomainError,
  RegularityError,
  NumericalError,
  IllConditioned,
  HeavyTail,
  TooFewSamples,
  DegenerateSample,
  InvalidScale,
  ShapeOutOfRange,
  ZeroParentScore,
  EmptyDataset,
  RootUnfittable,
  DimensionMismatch,
  MemberFitFailure,
  EmptySeries,
  FileNotFound,
  SchemaMismatch,
  ParseError,
  VersionMismatch,
  CorruptModel,
  IncompleteDay,
  InvalidConfig,
};

std::string_view to_string(Errc code) noexcept;

// Input/user errors map to CLI exit code 2, everything else to 1.
bool is_user_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace xtree
