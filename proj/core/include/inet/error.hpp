#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace inet {

struct SourcePos {
    int line = 0;
    int column = 0;

    bool known() const { return line > 0; }
    std::string to_string() const {
        if (!known()) return "?";
        return std::to_string(line) + ":" + std::to_string(column);
    }
};

/// Any error raised while loading a program: lexing, parsing, symbol
/// interning, or compilation. Carries the source position when known.
class LoadError : public std::runtime_error {
public:
    explicit LoadError(const std::string& message, SourcePos pos = {})
        : std::runtime_error(pos.known() ? pos.to_string() + ": " + message : message),
          pos_(pos) {}

    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

class ParseError : public LoadError {
public:
    using LoadError::LoadError;
};

struct Diagnostic {
    std::string message;
    SourcePos pos;

    std::string to_string() const {
        return pos.known() ? pos.to_string() + ": " + message : message;
    }
};

/// Thrown by check() when validation finds at least one violation.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics)
        : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    static std::string summarize(const std::vector<Diagnostic>& ds) {
        if (ds.empty()) return "validation failed";
        std::string s = ds.front().to_string();
        if (ds.size() > 1) s += " (+" + std::to_string(ds.size() - 1) + " more)";
        return s;
    }

    std::vector<Diagnostic> diagnostics_;
};

}  // namespace inet
