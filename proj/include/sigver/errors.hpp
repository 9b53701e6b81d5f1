#pragma once

#include <stdexcept>
#include <string>

namespace sigver {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad values handed to an operation (too few points, non-finite coordinates, ...).
struct InputError : Error {
    using Error::Error;
};

// Malformed text in a point file (carries the offending line number in the message).
struct ParseError : Error {
    using Error::Error;
};

// Manifest/catalog level problems: duplicates, missing files, bad labels.
struct CatalogError : Error {
    using Error::Error;
};

// Reference set unusable for enrollment (too few references, a reference with no segments).
struct EnrollmentError : Error {
    using Error::Error;
};

struct ScoringError : Error {
    using Error::Error;
};

// An experiment cannot run as specified (insufficient samples for the protocol).
struct ProtocolError : Error {
    using Error::Error;
};

struct GenerationError : Error {
    using Error::Error;
};

struct TallyError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace sigver
