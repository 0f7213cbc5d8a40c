#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dirsim {

enum class Errc {
    NonPositiveLoss,
    GammaExceedsLoss,
    NegativeMagnitude,
    NonFinite,
    InvalidArgument,
    UnstableSystem,
    MarginallyStable,
    BothEmpty,
    DivergentSteadyState,
    DetunedClosedForm,
    TraceDrift,
    CutoffTooSmall,
    ParseError,
    ValidationError,
    UnknownKey,
    ToleranceExceeded,
};

constexpr std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::NonPositiveLoss: return "NonPositiveLoss";
    case Errc::GammaExceedsLoss: return "GammaExceedsLoss";
    case Errc::NegativeMagnitude: return "NegativeMagnitude";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::UnstableSystem: return "UnstableSystem";
    case Errc::MarginallyStable: return "MarginallyStable";
    case Errc::BothEmpty: return "BothEmpty";
    case Errc::DivergentSteadyState: return "DivergentSteadyState";
    case Errc::DetunedClosedForm: return "DetunedClosedForm";
    case Errc::TraceDrift: return "TraceDrift";
    case Errc::CutoffTooSmall: return "CutoffTooSmall";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::ToleranceExceeded: return "ToleranceExceeded";
    }
    return "Unknown";
}

/// Exception carrying one of the library error codes.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), m_code(code)
    {
    }

    Errc code() const noexcept { return m_code; }

private:
    Errc m_code;
};

} // namespace dirsim
