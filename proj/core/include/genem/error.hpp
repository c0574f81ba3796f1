#pragma once

#include <stdexcept>
#include <string>

namespace genem {

// Base of every error raised by the library. `code()` is the stable
// machine-readable name used in reports, logs and HTTP error envelopes.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& message) : Error("PreconditionViolation", message) {}
};

class UnknownEmbodiment : public Error {
public:
    explicit UnknownEmbodiment(const std::string& id) : Error("UnknownEmbodiment", "unknown embodiment '" + id + "'") {}
};

class UnknownScenario : public Error {
public:
    explicit UnknownScenario(const std::string& id) : Error("UnknownScenario", "unknown scenario '" + id + "'") {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error("FormatError", message) {}
};

}  // namespace genem
