#include "sprony/error.hpp"

namespace sprony
{

std::string_view to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidCycle: return "InvalidCycle";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::UnknownEigenvalue: return "UnknownEigenvalue";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MultiplicativityViolation: return "MultiplicativityViolation";
    case ErrorKind::SpectralMismatch: return "SpectralMismatch";
    case ErrorKind::RankDeficientHankel: return "RankDeficientHankel";
    case ErrorKind::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorKind::AmbiguousTag: return "AmbiguousTag";
    case ErrorKind::UnmatchedRate: return "UnmatchedRate";
    case ErrorKind::ObservabilityFailure: return "ObservabilityFailure";
    case ErrorKind::NonSimpleEigenvalue: return "NonSimpleEigenvalue";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    }
    return "Unknown";
}

bool is_mathematical(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidCycle:
    case ErrorKind::NegativeTime:
    case ErrorKind::InsufficientSamples:
    case ErrorKind::UnknownEigenvalue:
    case ErrorKind::ParseError:
        return false;
    default:
        return true;
    }
}

namespace
{
std::string compose(ErrorKind kind, const std::string& stage,
                    const std::string& message)
{
    std::string out(to_string(kind));
    if (!stage.empty())
    {
        out += " [" + stage + "]";
    }
    return out + ": " + message;
}
} // namespace

Error::Error(ErrorKind kind, const std::string& message, std::string stage)
    : std::runtime_error(compose(kind, stage, message)),
      kind_(kind),
      stage_(std::move(stage)),
      detail_(message)
{
}

Error Error::with_stage(std::string stage) const
{
    return Error(kind_, detail_, std::move(stage));
}

} // namespace sprony
