#pragma once

#include <stdexcept>
#include <string>

namespace arctyrex {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand sizes disagree (polynomial length, LWE dimension, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid parameter set or key/parameter mismatch.
class ParamError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid schedule construction (bad worker count, mixed-opcode batch).
class ScheduleError : public Error {
public:
    using Error::Error;
};

/// Failure inside the parallel runtime.
class RuntimeError : public Error {
public:
    using Error::Error;
};

}  // namespace arctyrex
