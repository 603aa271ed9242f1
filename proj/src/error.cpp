#include "logflat/error.hpp"

namespace logflat {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NotSubmonoid: return "NotSubmonoid";
    case ErrorCode::OwnerMismatch: return "OwnerMismatch";
    case ErrorCode::UnsupportedModuleClass: return "UnsupportedModuleClass";
    case ErrorCode::NotFinitelyGenerated: return "NotFinitelyGenerated";
    case ErrorCode::NotPointed: return "NotPointed";
    case ErrorCode::NotHomogeneous: return "NotHomogeneous";
    case ErrorCode::UnsupportedIdealClass: return "UnsupportedIdealClass";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::ChartInvalid: return "ChartInvalid";
    case ErrorCode::NotInjectiveH: return "NotInjectiveH";
    case ErrorCode::ChartsUnrelated: return "ChartsUnrelated";
    case ErrorCode::HomotopyInvalid: return "HomotopyInvalid";
    case ErrorCode::LiftsIncompatible: return "LiftsIncompatible";
    case ErrorCode::KernelNotFinitelyGenerated: return "KernelNotFinitelyGenerated";
    case ErrorCode::GateFailed: return "GateFailed";
    case ErrorCode::NotFiniteDimensional: return "NotFiniteDimensional";
    case ErrorCode::UnknownGallery: return "UnknownGallery";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace logflat
