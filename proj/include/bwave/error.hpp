#pragma once

#include <stdexcept>
#include <string>

namespace bwave {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    Configuration,
    Numeric,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Configuration, what) {}
};

// Vector length does not match the operator it is fed to.
struct ShapeError : Error {
    explicit ShapeError(const std::string& what) : Error(ErrorKind::Configuration, what) {}
};

struct RangeError : Error {
    explicit RangeError(const std::string& what) : Error(ErrorKind::Configuration, what) {}
};

// Total water depth became non-positive.
struct DepthError : Error {
    explicit DepthError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

struct CflError : Error {
    explicit CflError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

struct DivergenceError : Error {
    explicit DivergenceError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

struct IntegrationError : Error {
    explicit IntegrationError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace bwave
