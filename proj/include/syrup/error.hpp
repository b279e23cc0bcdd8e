#pragma once

#include <stdexcept>
#include <string>

namespace syrup {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A domain type invariant does not hold. The message names the field.
struct InvariantViolation : Error {
    InvariantViolation(const std::string& field, const std::string& why)
        : Error(field + ": " + why), field(field) {}
    std::string field;
};

struct ConfigError : Error {
    using Error::Error;
};

struct UnknownTaskKind : Error {
    using Error::Error;
};

struct ParseFailure : Error {
    using Error::Error;
};

struct EmptySequence : Error {
    using Error::Error;
};

struct OutOfRange : Error {
    using Error::Error;
};

struct ProviderError : Error {
    ProviderError(const std::string& what, int status = 0) : Error(what), status(status) {}
    int status;
};

struct AuthError : Error {
    using Error::Error;
};

struct CacheMiss : Error {
    using Error::Error;
};

struct NoAlternative : Error {
    using Error::Error;
};

struct EmptyPopulation : Error {
    using Error::Error;
};

struct MissingConfidenceGroup : Error {
    using Error::Error;
};

struct TooFewQuestions : Error {
    using Error::Error;
};

struct DegenerateLabels : Error {
    using Error::Error;
};

struct ZeroVariance : Error {
    using Error::Error;
};

struct CalibratorMismatch : Error {
    using Error::Error;
};

}  // namespace syrup
