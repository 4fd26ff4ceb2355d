#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xml2jsp/source_position.hpp"

namespace xml2jsp {

enum class Severity { Error, Warning, Note };

std::string_view to_string(Severity s);

/// A message attached to a position in the input file. `code` is a stable
/// short identifier (see README for the full list).
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    SourcePosition position;
    std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);

/// `<file>:<line>:<col>: <severity> <code>: <message>`
std::string format_diagnostic(std::string_view file, const Diagnostic& d);

/// Thrown by the individual handlers and parsers; the translation driver
/// turns it into an error Diagnostic.
class TranslationError : public std::runtime_error {
public:
    TranslationError(std::string code, SourcePosition pos, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), position_(pos)
    {
    }

    const std::string& code() const noexcept { return code_; }
    const SourcePosition& position() const noexcept { return position_; }

    Diagnostic to_diagnostic() const { return {Severity::Error, code_, position_, what()}; }

private:
    std::string code_;
    SourcePosition position_;
};

}  // namespace xml2jsp
