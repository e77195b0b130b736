#pragma once

#include <stdexcept>
#include <string>

namespace conjlim {

enum class ErrorKind {
    InvalidInput,
    NotPsd,
    PreconditionViolation,
    NotAGoodPath,
    InvalidPath,
    RigidityViolation,
    PathSingular,
    NotConjugationFamily,
    UnknownSuite,
    Parse,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace conjlim
