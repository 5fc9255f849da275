#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cpir {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero in field arithmetic") {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct Singular : Error {
    using Error::Error;
};

struct InvalidParams : Error {
    using Error::Error;
};

struct RetryLimitExceeded : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct InconsistentResponse : Error {
    using Error::Error;
};

struct BadMagic : Error {
    using Error::Error;
};

struct UnsupportedVersion : Error {
    using Error::Error;
};

struct ParamMismatch : Error {
    using Error::Error;
};

struct ConnectionFailed : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

// Error raised on behalf of a remote peer; carries the wire error code.
struct ServerError : Error {
    uint16_t code;
    ServerError(uint16_t c, const std::string& msg)
        : Error("server error " + std::to_string(c) + ": " + msg), code(c) {}
};

} // namespace cpir
