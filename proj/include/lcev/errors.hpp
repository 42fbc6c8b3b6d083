// Error taxonomy shared by every module.
//
// Each failure mode named in the public contracts has its own exception
// type so callers (and tests) can catch exactly the condition they expect.
// All of them derive from lcev::Error, which carries an ErrorCode that the
// command-line front end maps onto process exit codes.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcev {

enum class ErrorCode {
    ZeroDenominator,
    DomainError,
    ParseError,
    InvalidParams,
    UnsupportedPotential,
    OddPoleOrder,
    ZeroLeadingCoefficient,
    NotRetained,
    OutOfPipelineScope,
    PochhammerZero,
    NotTruncating,
    Unavailable,
    DegenerateDrift,
    NegativeDiscriminant,
    IrrationalExponent,
    ParamMismatch,
    StepSizeUnderflow,
    VerificationFailed,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::UnsupportedPotential: return "UnsupportedPotential";
    case ErrorCode::OddPoleOrder: return "OddPoleOrder";
    case ErrorCode::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorCode::NotRetained: return "NotRetained";
    case ErrorCode::OutOfPipelineScope: return "OutOfPipelineScope";
    case ErrorCode::PochhammerZero: return "PochhammerZero";
    case ErrorCode::NotTruncating: return "NotTruncating";
    case ErrorCode::Unavailable: return "Unavailable";
    case ErrorCode::DegenerateDrift: return "DegenerateDrift";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::IrrationalExponent: return "IrrationalExponent";
    case ErrorCode::ParamMismatch: return "ParamMismatch";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

template <ErrorCode C>
class CodedError : public Error {
public:
    explicit CodedError(const std::string& what) : Error(C, what) {}
};

using ZeroDenominator = CodedError<ErrorCode::ZeroDenominator>;
using DomainError = CodedError<ErrorCode::DomainError>;
using ParseError = CodedError<ErrorCode::ParseError>;
using InvalidParams = CodedError<ErrorCode::InvalidParams>;
using UnsupportedPotential = CodedError<ErrorCode::UnsupportedPotential>;
using OddPoleOrder = CodedError<ErrorCode::OddPoleOrder>;
using ZeroLeadingCoefficient = CodedError<ErrorCode::ZeroLeadingCoefficient>;
using NotRetained = CodedError<ErrorCode::NotRetained>;
using OutOfPipelineScope = CodedError<ErrorCode::OutOfPipelineScope>;
using PochhammerZero = CodedError<ErrorCode::PochhammerZero>;
using NotTruncating = CodedError<ErrorCode::NotTruncating>;
using Unavailable = CodedError<ErrorCode::Unavailable>;
using DegenerateDrift = CodedError<ErrorCode::DegenerateDrift>;
using NegativeDiscriminant = CodedError<ErrorCode::NegativeDiscriminant>;
using IrrationalExponent = CodedError<ErrorCode::IrrationalExponent>;
using ParamMismatch = CodedError<ErrorCode::ParamMismatch>;
using StepSizeUnderflow = CodedError<ErrorCode::StepSizeUnderflow>;
using VerificationFailed = CodedError<ErrorCode::VerificationFailed>;

} // namespace lcev
