#pragma once

#include <stdexcept>
#include <string>

namespace ecograph {

/// Error categories; each maps to a distinct CLI exit code.
enum class ErrorKind {
    Parse = 2,
    Graph = 3,
    Fit = 4,
    Io = 5,
};

/// Base error for all library failures. Carries the module that raised it
/// and a remediation hint shown by the CLI.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message, std::string hint = {})
        : std::runtime_error(message), kind_(kind), module_(std::move(module)), hint_(std::move(hint)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }
    const std::string& hint() const noexcept { return hint_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
    std::string module_;
    std::string hint_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::string hint = {})
        : Error(ErrorKind::Parse, "registry-ingest", message, std::move(hint)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class GraphError : public Error {
public:
    explicit GraphError(const std::string& module, const std::string& message, std::string hint = {})
        : Error(ErrorKind::Graph, module, message, std::move(hint)) {}
};

class FitError : public Error {
public:
    explicit FitError(const std::string& message, std::string hint = {})
        : Error(ErrorKind::Fit, "structure-metrics", message, std::move(hint)) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& module, const std::string& message, std::string hint = {})
        : Error(ErrorKind::Io, module, message, std::move(hint)) {}
};

} // namespace ecograph
