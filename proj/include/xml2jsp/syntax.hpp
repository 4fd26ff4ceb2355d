#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xml2jsp/dsl_type.hpp"
#include "xml2jsp/source_position.hpp"

// Parsers for the free-text content of individual tags. All of them trim
// their input and throw TranslationError on malformed text.
namespace xml2jsp {

/// `_*[A-Za-z][A-Za-z0-9_]*`, i.e. the identifier facet without padding.
bool is_identifier(std::string_view s);

enum class LiteralKind { String, Int, Real };

/// Double-quoted string, optionally signed integer, or decimal with one dot.
std::optional<LiteralKind> classify_literal(std::string_view text);

/// Type of the right-hand side of a `var` binding. Throws UnrecognizedLiteral.
DslType infer_literal_type(std::string_view text, SourcePosition pos = {});

/// Maps integer/real/string (and the int/double aliases) to a scalar kind.
std::optional<DslType::Kind> scalar_keyword(std::string_view word);

struct Binding {
    std::string name;
    std::string value;
};

/// `name = value` (var, pname, session set). Throws MalformedBinding.
Binding parse_binding(std::string_view text, SourcePosition pos = {});

struct ArrayDecl {
    DslType::Kind element = DslType::Kind::Int;
    std::string name;
    std::size_t size = 0;
};

/// `integer v[5]`. Throws ZeroArraySize, UnrecognizedLiteral or MalformedArray.
ArrayDecl parse_array_decl(std::string_view text, SourcePosition pos = {});

struct Parameter {
    DslType type;
    std::string name;
};

struct FunctionHeader {
    DslType return_type;
    std::string name;
    std::vector<Parameter> params;
};

/// `real avg(real a[], integer n)`. Throws MalformedHeader.
FunctionHeader parse_function_header(std::string_view text, SourcePosition pos = {});

struct SetCall {
    std::string keyword;
    int index = 0;
    std::string argument;
};

/// `int(1,b)`. Throws BadSetSyntax.
SetCall parse_set_call(std::string_view text, SourcePosition pos = {});

struct GetCall {
    std::string target;
    std::string keyword;
    int index = 0;
};

/// `v=int(2)`. Throws BadGetSyntax.
GetCall parse_get_call(std::string_view text, SourcePosition pos = {});

struct QuerySpec {
    std::string name;
    std::string sql;
};

/// `name="sql text"`. Throws BadQuerySyntax.
QuerySpec parse_query(std::string_view text, SourcePosition pos = {});

struct ClassDecl {
    std::string class_name;
    std::string object;
};

/// `Date d`. Throws MalformedClassDecl.
ClassDecl parse_class_decl(std::string_view text, SourcePosition pos = {});

/// Identifiers referenced by a free-form expression: tokens matching the
/// identifier form that are not inside string/char literals, not Java
/// literals or keywords, not preceded by '.', and not followed by '.' or '('.
std::vector<std::string> expression_identifiers(std::string_view expr);

}  // namespace xml2jsp
