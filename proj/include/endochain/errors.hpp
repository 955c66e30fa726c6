#ifndef ENDOCHAIN_ERRORS_HPP
#define ENDOCHAIN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace endochain {

enum class ErrorCode {
    NotAUnit,
    NoFiniteConductor,
    NotUnital,
    NotCoprime,
    NotLocal,
    NotIdempotentFactor,
    ResidueFieldTooLarge,
    AmbientMismatch,
    NotAnOverring,
    NotASubmodule,
    NotDvrProduct,
    NotFullRank,
    AlreadyNormal,
    ChainDiverged,
    ClaimViolation,
    NotTorsionFree,
    FailedDecomposition,
    NotIndecomposable,
    DuplicateSummand,
    CharacteristicTooSmall,
    MissingFreeSummand,
    SchemaError,
    IoError,
    Internal,
};

constexpr std::string_view to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NoFiniteConductor: return "NoFiniteConductor";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::NotLocal: return "NotLocal";
    case ErrorCode::NotIdempotentFactor: return "NotIdempotentFactor";
    case ErrorCode::ResidueFieldTooLarge: return "ResidueFieldTooLarge";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::NotAnOverring: return "NotAnOverring";
    case ErrorCode::NotASubmodule: return "NotASubmodule";
    case ErrorCode::NotDvrProduct: return "NotDvrProduct";
    case ErrorCode::NotFullRank: return "NotFullRank";
    case ErrorCode::AlreadyNormal: return "AlreadyNormal";
    case ErrorCode::ChainDiverged: return "ChainDiverged";
    case ErrorCode::ClaimViolation: return "ClaimViolation";
    case ErrorCode::NotTorsionFree: return "NotTorsionFree";
    case ErrorCode::FailedDecomposition: return "FailedDecomposition";
    case ErrorCode::NotIndecomposable: return "NotIndecomposable";
    case ErrorCode::DuplicateSummand: return "DuplicateSummand";
    case ErrorCode::CharacteristicTooSmall: return "CharacteristicTooSmall";
    case ErrorCode::MissingFreeSummand: return "MissingFreeSummand";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

/* Every failure the engine reports. The CLI maps SchemaError/IoError to exit
 * status 2 and everything else to exit status 1. */
class EngineError : public std::runtime_error {
  public:
    EngineError(ErrorCode code, const std::string& message, std::string context = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code),
          message_(message), context_(std::move(context))
    {
    }

    ErrorCode code() const { return code_; }
    const std::string& message() const { return message_; }
    const std::string& context() const { return context_; }

  private:
    ErrorCode code_;
    std::string message_;
    std::string context_;
};

} // namespace endochain

#endif
