#pragma once

#include <stdexcept>
#include <string>

namespace hdi {

// Error categories map onto distinct process exit codes in the CLI.
enum class ErrorCategory {
    Parse,       // malformed input files
    Validation,  // inputs violate a documented precondition or invariant
    Estimation,  // the survey design cannot support the requested method
    Io           // filesystem failures
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& msg)
        : Error(ErrorCategory::Validation, msg) {}
};

// A group carries zero mass (p_j or q_j) where the requested divergence
// needs a logarithm or a negative power of it.
struct ZeroMassGroupError : Error {
    explicit ZeroMassGroupError(const std::string& msg)
        : Error(ErrorCategory::Validation, msg) {}
};

// Grouped-data counterpart of ZeroMassGroupError: a group mean of zero.
struct ZeroMeanGroupError : Error {
    explicit ZeroMeanGroupError(const std::string& msg)
        : Error(ErrorCategory::Validation, msg) {}
};

struct InvalidParameterError : Error {
    explicit InvalidParameterError(const std::string& msg)
        : Error(ErrorCategory::Validation, msg) {}
};

struct NonFiniteError : Error {
    explicit NonFiniteError(const std::string& msg)
        : Error(ErrorCategory::Estimation, msg) {}
};

struct EmptyGroupError : Error {
    explicit EmptyGroupError(const std::string& msg)
        : Error(ErrorCategory::Validation, msg) {}
};

struct NonBinaryOutcomeError : Error {
    explicit NonBinaryOutcomeError(const std::string& msg)
        : Error(ErrorCategory::Validation, msg) {}
};

struct SingletonStratumError : Error {
    explicit SingletonStratumError(const std::string& msg)
        : Error(ErrorCategory::Estimation, msg) {}
};

struct NotTwoPsuDesignError : Error {
    explicit NotTwoPsuDesignError(const std::string& msg)
        : Error(ErrorCategory::Estimation, msg) {}
};

struct HadamardUnavailableError : Error {
    explicit HadamardUnavailableError(const std::string& msg)
        : Error(ErrorCategory::Estimation, msg) {}
};

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& msg)
        : Error(ErrorCategory::Parse, "line " + std::to_string(line) + ": " + msg),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& msg)
        : Error(ErrorCategory::Parse, msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg)
        : Error(ErrorCategory::Validation, msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg)
        : Error(ErrorCategory::Io, msg) {}
};

inline const char* category_name(ErrorCategory c) noexcept {
    switch (c) {
        case ErrorCategory::Parse: return "parse";
        case ErrorCategory::Validation: return "validation";
        case ErrorCategory::Estimation: return "estimation";
        case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

}  // namespace hdi
