#ifndef MERWS_ERRORS_HPP
#define MERWS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace merws {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter validation failures (model module).
class InvalidDimension : public Error {
public:
    using Error::Error;
};
class InvalidStopProbability : public Error {
public:
    using Error::Error;
};
class SimplexViolation : public Error {
public:
    using Error::Error;
};

// Asking a regime-specific quantity in the wrong regime.
class WrongRegime : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Special-function evaluation refused outside the certified domain.
class OutOfEvaluationRange : public Error {
public:
    using Error::Error;
};

class NonPositiveArgument : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class CheckpointOutOfRange : public Error {
public:
    using Error::Error;
};

// The conditional-covariance trace increment went negative: state corruption.
class NegativeIncrement : public Error {
public:
    using Error::Error;
};

class InsufficientHorizon : public Error {
public:
    using Error::Error;
};

class ConfigInvalid : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

} // namespace merws

#endif
