#pragma once

#include <stdexcept>
#include <string>

namespace strata {

struct StrataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSparse : StrataError {
    using StrataError::StrataError;
};
struct LengthMismatch : StrataError {
    using StrataError::StrataError;
};
struct NotCovering : StrataError {
    using StrataError::StrataError;
};
struct InvalidModule : StrataError {
    using StrataError::StrataError;
};
struct IncompatibleField : StrataError {
    using StrataError::StrataError;
};
struct NotInStratum : StrataError {
    using StrataError::StrataError;
};
struct NotInDeepStratum : StrataError {
    using StrataError::StrataError;
};
struct PreconditionViolated : StrataError {
    using StrataError::StrataError;
};
struct InvalidDatum : StrataError {
    using StrataError::StrataError;
};
struct NotTopDimensional : StrataError {
    using StrataError::StrataError;
};
struct WrongDimension : StrataError {
    using StrataError::StrataError;
};
struct TooLarge : StrataError {
    using StrataError::StrataError;
};
struct DimensionOutOfRange : StrataError {
    using StrataError::StrataError;
};
struct OddCycle : StrataError {
    using StrataError::StrataError;
};
struct DiagramNotCommuting : StrataError {
    using StrataError::StrataError;
};
struct InfeasibleProfile : StrataError {
    using StrataError::StrataError;
};
struct UsageError : StrataError {
    using StrataError::StrataError;
};

}  // namespace strata
