#pragma once

#include <stdexcept>
#include <string>

namespace pennate {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input is structurally valid but carries no usable signal
/// (constant image, vertical point set, aponeuroses too close, ...).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Too few samples to run the requested statistic.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Aponeurosis segmentation did not find two usable segments.
class SegmentationError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pennate
