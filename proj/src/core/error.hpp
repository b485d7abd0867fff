#pragma once

#include <stdexcept>
#include <string>

namespace csf {

enum class ErrorKind {
    InvalidArgument,
    Config,
    PoleProximity,
    DegenerateEdge,
    NonFinite,
    NonPositiveOmega,
    ShapeMismatch,
    InsufficientSamples,
    Io,
    Internal,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message) {
    throw Error(kind, message);
}

} // namespace csf
