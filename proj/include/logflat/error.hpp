#pragma once

#include <stdexcept>
#include <string>

namespace logflat {

enum class ErrorCode {
  AmbientMismatch,
  NotSurjective,
  NotSubmonoid,
  OwnerMismatch,
  UnsupportedModuleClass,
  NotFinitelyGenerated,
  NotPointed,
  NotHomogeneous,
  UnsupportedIdealClass,
  UnsupportedShape,
  ChartInvalid,
  NotInjectiveH,
  ChartsUnrelated,
  HomotopyInvalid,
  LiftsIncompatible,
  KernelNotFinitelyGenerated,
  GateFailed,
  NotFiniteDimensional,
  UnknownGallery,
  InvalidArgument,
  Parse,
  Validation,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace logflat
