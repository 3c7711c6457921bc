#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sentivol {

enum class ErrorCode {
    // ingest
    MissingFile,
    MissingColumn,
    UnparsableValue,
    InvariantViolation,
    EmptyIntersection,
    DuplicateDate,
    SchemaMismatch,
    // pricing and surfaces
    NonPositiveInput,
    PriceOutOfBounds,
    NoConvergence,
    InsufficientQuotes,
    AllInversionsFailed,
    OutOfHull,
    TooFewPoints,
    NonUniformSpacing,
    DegenerateSmile,
    UnknownLevel,
    SurfaceInvariant,
    // sentiment
    NonPositiveFloatCap,
    NonPositiveNav,
    ConstantColumn,
    TooFewDates,
    EmptyDocument,
    CountOverflow,
    // decomposition
    SeriesTooShort,
    ConstantSeries,
    TooShort,
    TooFewImfs,
    // estimation
    MisalignedDates,
    RankDeficient,
    InsufficientSample,
    MissingExogenous,
    UnknownVariable,
    // evaluation
    WindowTooShort,
    ZeroRealized,
    Empty,
    DateMismatch,
    // generators and configuration
    UnstableSpec,
    ConfigError,
};

/// Coarse grouping used for CLI exit statuses.
enum class ErrorCategory { Config, Data, Numeric };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;
std::string_view to_string(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_of(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace sentivol
