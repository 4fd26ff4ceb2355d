#include "xml2jsp/diagnostic.hpp"

#include <algorithm>
#include <sstream>

namespace xml2jsp {

std::string_view to_string(Severity s)
{
    switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
    }
    return "?";
}

bool has_errors(const Diagnostics& diags)
{
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(std::string_view file, const Diagnostic& d)
{
    std::ostringstream os;
    os << file << ':' << d.position.line << ':' << d.position.column << ": " << to_string(d.severity) << ' ' << d.code << ": "
       << d.message;
    return os.str();
}

}  // namespace xml2jsp
