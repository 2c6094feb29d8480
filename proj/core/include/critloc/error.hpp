#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace critloc {

enum class ErrorCode {
  UnsupportedDegree,
  NotDivisible,
  HypothesisViolated,
  NotReducible,
  NotReducibleOverQ,
  InvalidParams,
  DegenerateInstance,
  SamplingFailed,
  IncidenceMismatch,
  RankDeficient,
  DegenerateImage,
  OnCenter,
  DependentPoints,
  InvalidConfig,
  NoInvertibleBlock,
  CenterMismatch,
  ImageAtInfinity,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace critloc
