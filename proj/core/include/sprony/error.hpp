#ifndef SPRONY_ERROR_HPP
#define SPRONY_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sprony
{

enum class ErrorKind
{
    // input validation
    InvalidArgument,
    InvalidCycle,
    NegativeTime,
    InsufficientSamples,
    UnknownEigenvalue,
    ParseError,
    // hypothesis violations of the underlying theory
    MultiplicativityViolation,
    SpectralMismatch,
    RankDeficientHankel,
    NodeOutOfRange,
    AmbiguousTag,
    UnmatchedRate,
    ObservabilityFailure,
    NonSimpleEigenvalue,
    DegenerateParameters,
    SingularJacobian,
};

std::string_view to_string(ErrorKind kind);

/// True for kinds that signal a violated mathematical hypothesis rather than
/// malformed input.
bool is_mathematical(ErrorKind kind);

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message, std::string stage = {});

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Same error, tagged with the pipeline stage it surfaced from.
    Error with_stage(std::string stage) const;

private:
    ErrorKind kind_;
    std::string stage_;
    std::string detail_;
};

} // namespace sprony

#endif // SPRONY_ERROR_HPP
