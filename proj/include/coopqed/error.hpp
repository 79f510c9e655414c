#pragma once

#include <stdexcept>
#include <string>

namespace coopqed {

enum class ErrorCode {
  InvalidArgument,
  InvalidRange,
  DegenerateSpectrum,
  ClusterMismatch,
  FrameError,
  StepTooLarge,
  NormDrift,
  BadSubsystem,
  NoPlateau,
  ConfigParse,
  Validation,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C interface can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coopqed
