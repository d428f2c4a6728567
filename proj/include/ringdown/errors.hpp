#pragma once

#include <stdexcept>
#include <string>

namespace ringdown {

// Error categories map 1:1 onto CLI exit codes:
//   2 usage, 3 ingestion, 4 numerical, 5 segmentation.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SegmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- usage --
struct NyquistViolation : UsageError {
    using UsageError::UsageError;
};
struct NonPositiveStep : UsageError {
    using UsageError::UsageError;
};
struct MissingFaMode : UsageError {
    using UsageError::UsageError;
};
struct EmptyWindow : UsageError {
    using UsageError::UsageError;
};
struct UnknownChannel : UsageError {
    using UsageError::UsageError;
};
struct ZeroStep : UsageError {
    using UsageError::UsageError;
};
struct LengthMismatch : UsageError {
    using UsageError::UsageError;
};
struct ChannelMismatch : UsageError {
    using UsageError::UsageError;
};

// -- ingestion --
struct MalformedHeader : IngestError {
    using IngestError::IngestError;
};
struct NonUniformSampling : IngestError {
    using IngestError::IngestError;
};
struct NonMonotoneTime : IngestError {
    using IngestError::IngestError;
};
struct EmptyFile : IngestError {
    using IngestError::IngestError;
};
struct IoFailure : IngestError {
    using IngestError::IngestError;
};

// -- numerical --
struct TooFewSamples : NumericError {
    using NumericError::NumericError;
};
struct TooManyModes : NumericError {
    using NumericError::NumericError;
};
struct IllConditioned : NumericError {
    using NumericError::NumericError;
};
struct NotEquilibrium : NumericError {
    using NumericError::NumericError;
};
struct StepTooSmall : NumericError {
    using NumericError::NumericError;
};
struct DefectiveMatrix : NumericError {
    using NumericError::NumericError;
};
struct NoConvergence : NumericError {
    using NumericError::NumericError;
};
struct AllZeroColumn : NumericError {
    using NumericError::NumericError;
};
struct ZeroReference : NumericError {
    using NumericError::NumericError;
};

// -- segmentation --
struct SplitNotFound : SegmentError {
    using SegmentError::SegmentError;
};
struct SegmentTooShort : SegmentError {
    using SegmentError::SegmentError;
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IngestError*>(&e)) return 3;
    if (dynamic_cast<const NumericError*>(&e)) return 4;
    if (dynamic_cast<const SegmentError*>(&e)) return 5;
    return 2;
}

} // namespace ringdown
