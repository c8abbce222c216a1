#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tgcut {

// Base of every error raised by the library. `reason()` is a short
// machine-readable slug that the service layer forwards to clients.
class Error : public std::runtime_error {
public:
    Error(std::string reason, const std::string& what)
        : std::runtime_error(what), reason_(std::move(reason)) {}

    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
};

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what, std::string reason = "invalid-argument")
        : Error(std::move(reason), what) {}
};

class IndexError : public Error {
public:
    explicit IndexError(const std::string& what) : Error("index-out-of-range", what) {}
};

/// Malformed input document (NRRD header, JSON schema violation, ...).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::string reason = "parse-error")
        : Error(std::move(reason), what) {}
};

class UnsupportedFormatError : public ParseError {
public:
    explicit UnsupportedFormatError(const std::string& what)
        : ParseError(what, "unsupported-format") {}
};

class TruncationError : public ParseError {
public:
    explicit TruncationError(const std::string& what) : ParseError(what, "truncated-payload") {}
};

/// Template/seed/ray configuration that cannot produce a graph.
class GeometryError : public Error {
public:
    GeometryError(std::string reason, const std::string& what) : Error(std::move(reason), what) {}
};

/// Operation not allowed in the current session state.
class StateError : public Error {
public:
    StateError(std::string reason, const std::string& what) : Error(std::move(reason), what) {}
};

class InterpolationError : public Error {
public:
    explicit InterpolationError(const std::string& what)
        : Error("interpolation-gap", what) {}
};

/// A broken internal invariant. Never expected on valid inputs.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error("internal-invariant", what) {}
};

} // namespace tgcut
