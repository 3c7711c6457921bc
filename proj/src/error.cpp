#include "sentivol/error.hpp"

namespace sentivol {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparsableValue: return "UnparsableValue";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::PriceOutOfBounds: return "PriceOutOfBounds";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InsufficientQuotes: return "InsufficientQuotes";
    case ErrorCode::AllInversionsFailed: return "AllInversionsFailed";
    case ErrorCode::OutOfHull: return "OutOfHull";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonUniformSpacing: return "NonUniformSpacing";
    case ErrorCode::DegenerateSmile: return "DegenerateSmile";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::SurfaceInvariant: return "SurfaceInvariant";
    case ErrorCode::NonPositiveFloatCap: return "NonPositiveFloatCap";
    case ErrorCode::NonPositiveNav: return "NonPositiveNav";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::TooFewDates: return "TooFewDates";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::CountOverflow: return "CountOverflow";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooFewImfs: return "TooFewImfs";
    case ErrorCode::MisalignedDates: return "MisalignedDates";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InsufficientSample: return "InsufficientSample";
    case ErrorCode::MissingExogenous: return "MissingExogenous";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::ZeroRealized: return "ZeroRealized";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::DateMismatch: return "DateMismatch";
    case ErrorCode::UnstableSpec: return "UnstableSpec";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::ConfigError:
    case ErrorCode::UnknownVariable:
    case ErrorCode::UnknownLevel:
        return ErrorCategory::Config;
    case ErrorCode::NoConvergence:
    case ErrorCode::AllInversionsFailed:
    case ErrorCode::RankDeficient:
    case ErrorCode::SurfaceInvariant:
    case ErrorCode::DegenerateSmile:
    case ErrorCode::UnstableSpec:
        return ErrorCategory::Numeric;
    default:
        return ErrorCategory::Data;
    }
}

std::string_view to_string(ErrorCategory category) noexcept {
    switch (category) {
    case ErrorCategory::Config: return "config-error";
    case ErrorCategory::Data: return "data-error";
    case ErrorCategory::Numeric: return "numeric-failure";
    }
    return "unknown";
}

} // namespace sentivol
