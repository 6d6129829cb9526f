#pragma once

#include <stdexcept>
#include <string>

namespace tagc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// File decoded but has an unsupported property (bit depth, layout, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

// Image dimensions incompatible with the requested operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A tunable parameter is outside its valid range.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Manifest or model file violates its schema.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Sample set cannot support a distribution fit.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// No patch survived the sharpness gate (or a corpus yielded none).
class EmptySelectionError : public Error {
public:
    using Error::Error;
};

}  // namespace tagc
