#include "xml2jsp/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "xml2jsp/diagnostic.hpp"
#include "xml2jsp/document_walker.hpp"

namespace xml2jsp {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }
bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

std::optional<int> small_positive(std::string_view s)
{
    if (!all_digits(s) || s.size() > 9)
        return std::nullopt;
    int v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    if (v <= 0)
        return std::nullopt;
    return v;
}

// Splits `word(rest)` into its keyword and the text inside the parentheses.
bool split_call(std::string_view text, std::string_view& keyword, std::string_view& inner)
{
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')')
        return false;
    keyword = trim(text.substr(0, open));
    inner = trim(text.substr(open + 1, text.size() - open - 2));
    return !keyword.empty() && std::all_of(keyword.begin(), keyword.end(), is_word);
}

}  // namespace

std::string to_string(const DslType& t)
{
    switch (t.kind) {
    case DslType::Kind::Int: return "IntType";
    case DslType::Kind::Real: return "RealType";
    case DslType::Kind::String: return "StringType";
    case DslType::Kind::ArrayOf: return "ArrayOf(" + to_string(DslType::of(t.element)) + ")";
    case DslType::Kind::Connection: return "ConnectionType";
    case DslType::Kind::PreparedStmt: return "PreparedStmtType";
    case DslType::Kind::ResultCount: return "ResultCountType";
    case DslType::Kind::Object: return "ObjectType(" + t.class_name + ")";
    case DslType::Kind::Void: return "Void";
    }
    return "?";
}

std::string java_type(const DslType& t)
{
    switch (t.kind) {
    case DslType::Kind::Int: return "int";
    case DslType::Kind::Real: return "double";
    case DslType::Kind::String: return "String";
    case DslType::Kind::ArrayOf: return java_type(DslType::of(t.element)) + "[]";
    case DslType::Kind::Connection: return "Connection";
    case DslType::Kind::PreparedStmt: return "PreparedStatement";
    case DslType::Kind::ResultCount: return "int";
    case DslType::Kind::Object: return t.class_name;
    case DslType::Kind::Void: return "void";
    }
    return "?";
}

bool is_identifier(std::string_view s)
{
    std::size_t i = 0;
    while (i < s.size() && s[i] == '_')
        ++i;
    if (i == s.size() || !is_alpha(s[i]))
        return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(), is_word);
}

std::optional<LiteralKind> classify_literal(std::string_view text)
{
    const auto t = trim(text);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
        // An unescaped quote inside would end the literal early.
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            if (t[i] == '\\')
                ++i;
            else if (t[i] == '"')
                return std::nullopt;
        }
        if (t.size() >= 3 && t[t.size() - 2] == '\\') {
            std::size_t slashes = 0;
            for (std::size_t i = t.size() - 2; i > 0 && t[i] == '\\'; --i)
                ++slashes;
            if (slashes % 2 == 1)
                return std::nullopt;
        }
        return LiteralKind::String;
    }
    auto digits = t;
    if (!digits.empty() && (digits.front() == '+' || digits.front() == '-'))
        digits.remove_prefix(1);
    if (all_digits(digits))
        return LiteralKind::Int;
    const auto dot = digits.find('.');
    if (dot != std::string_view::npos && all_digits(digits.substr(0, dot)) && all_digits(digits.substr(dot + 1)))
        return LiteralKind::Real;
    return std::nullopt;
}

DslType infer_literal_type(std::string_view text, SourcePosition pos)
{
    const auto kind = classify_literal(text);
    if (!kind)
        throw TranslationError("UnrecognizedLiteral", pos, "cannot infer a type for '" + std::string(trim(text)) + "'");
    switch (*kind) {
    case LiteralKind::String: return DslType::string_type();
    case LiteralKind::Int: return DslType::int_type();
    case LiteralKind::Real: return DslType::real_type();
    }
    return DslType::int_type();
}

std::optional<DslType::Kind> scalar_keyword(std::string_view word)
{
    if (word == "integer" || word == "int")
        return DslType::Kind::Int;
    if (word == "real" || word == "double")
        return DslType::Kind::Real;
    if (word == "string" || word == "String")
        return DslType::Kind::String;
    return std::nullopt;
}

Binding parse_binding(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
        throw TranslationError("MalformedBinding", pos, "expected 'name = value', got '" + std::string(t) + "'");
    Binding b{std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1)))};
    if (!is_identifier(b.name))
        throw TranslationError("MalformedBinding", pos, "'" + b.name + "' is not a valid identifier");
    if (b.value.empty())
        throw TranslationError("MalformedBinding", pos, "missing value after '" + b.name + " ='");
    return b;
}

ArrayDecl parse_array_decl(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    const auto fail = [&](const std::string& why) -> ArrayDecl {
        throw TranslationError("MalformedArray", pos, "expected 'data_type name[size]': " + why);
    };
    const auto space = t.find_first_of(" \t\r\n");
    if (space == std::string_view::npos)
        return fail("missing name");
    const auto kind = scalar_keyword(t.substr(0, space));
    if (!kind)
        return fail("unknown data type '" + std::string(t.substr(0, space)) + "'");
    const auto rest = trim(t.substr(space));
    const auto open = rest.find('[');
    if (open == std::string_view::npos || rest.back() != ']')
        return fail("missing [size]");
    ArrayDecl decl;
    decl.element = *kind;
    decl.name = std::string(trim(rest.substr(0, open)));
    if (!is_identifier(decl.name))
        return fail("'" + decl.name + "' is not a valid identifier");
    const auto size_text = trim(rest.substr(open + 1, rest.size() - open - 2));
    if (!all_digits(size_text) || size_text.size() > 9)
        throw TranslationError("UnrecognizedLiteral", pos, "array size '" + std::string(size_text) + "' is not an integer literal");
    std::from_chars(size_text.data(), size_text.data() + size_text.size(), decl.size);
    if (decl.size == 0)
        throw TranslationError("ZeroArraySize", pos, "array '" + decl.name + "' must have a non-zero size");
    return decl;
}

FunctionHeader parse_function_header(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    const auto fail = [&](const std::string& why) -> FunctionHeader {
        throw TranslationError("MalformedHeader", pos, "function header '" + std::string(t) + "': " + why);
    };
    const auto open = t.find('(');
    if (open == std::string_view::npos)
        return fail("missing '('");
    if (t.back() != ')')
        return fail("missing ')'");
    const auto head = trim(t.substr(0, open));
    const auto space = head.find_first_of(" \t\r\n");
    if (space == std::string_view::npos)
        return fail("expected 'return_type name'");
    FunctionHeader h;
    const auto ret = head.substr(0, space);
    if (ret == "void")
        h.return_type = DslType::of(DslType::Kind::Void);
    else if (auto k = scalar_keyword(ret))
        h.return_type = DslType::of(*k);
    else
        return fail("unknown return type '" + std::string(ret) + "'");
    h.name = std::string(trim(head.substr(space)));
    if (!is_identifier(h.name))
        return fail("'" + h.name + "' is not a valid function name");

    auto params = trim(t.substr(open + 1, t.size() - open - 2));
    while (!params.empty()) {
        const auto comma = params.find(',');
        const auto item = trim(params.substr(0, comma));
        params = comma == std::string_view::npos ? std::string_view{} : trim(params.substr(comma + 1));
        if (item.empty() || (comma != std::string_view::npos && params.empty()))
            return fail("empty parameter");
        const auto sp = item.find_first_of(" \t\r\n");
        if (sp == std::string_view::npos)
            return fail("parameter '" + std::string(item) + "' needs a type and a name");
        const auto kind = scalar_keyword(item.substr(0, sp));
        if (!kind)
            return fail("unknown parameter type '" + std::string(item.substr(0, sp)) + "'");
        auto name = trim(item.substr(sp));
        Parameter p{DslType::of(*kind), {}};
        if (name.size() >= 2 && name.substr(name.size() - 2) == "[]") {
            p.type = DslType::array_of(*kind);
            name = trim(name.substr(0, name.size() - 2));
        }
        p.name = std::string(name);
        if (!is_identifier(p.name))
            return fail("'" + p.name + "' is not a valid parameter name");
        h.params.push_back(std::move(p));
    }
    return h;
}

SetCall parse_set_call(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    const auto fail = [&]() -> SetCall {
        throw TranslationError("BadSetSyntax", pos, "expected 'data_type(arg_no,value)', got '" + std::string(t) + "'");
    };
    std::string_view keyword, inner;
    if (t.empty() || !split_call(t, keyword, inner))
        return fail();
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos)
        return fail();
    const auto index = small_positive(trim(inner.substr(0, comma)));
    const auto arg = trim(inner.substr(comma + 1));
    if (!index || arg.empty() || !scalar_keyword(keyword))
        return fail();
    return {std::string(keyword), *index, std::string(arg)};
}

GetCall parse_get_call(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    const auto fail = [&]() -> GetCall {
        throw TranslationError("BadGetSyntax", pos, "expected 'name=data_type(arg_no)', got '" + std::string(t) + "'");
    };
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
        return fail();
    const auto target = trim(t.substr(0, eq));
    const auto call = trim(t.substr(eq + 1));
    std::string_view keyword, inner;
    if (!is_identifier(target) || call.empty() || !split_call(call, keyword, inner) || !scalar_keyword(keyword))
        return fail();
    const auto index = small_positive(inner);
    if (!index)
        return fail();
    return {std::string(target), std::string(keyword), *index};
}

QuerySpec parse_query(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
        throw TranslationError("BadQuerySyntax", pos, "expected 'statement_name=\"sql\"', got '" + std::string(t) + "'");
    QuerySpec q{std::string(trim(t.substr(0, eq))), {}};
    if (!is_identifier(q.name))
        throw TranslationError("BadQuerySyntax", pos, "'" + q.name + "' is not a valid statement name");
    auto sql = trim(t.substr(eq + 1));
    if (sql.size() >= 2 && sql.front() == '"' && sql.back() == '"')
        sql = sql.substr(1, sql.size() - 2);
    if (trim(sql).empty())
        throw TranslationError("BadQuerySyntax", pos, "empty SQL text");
    q.sql = std::string(sql);
    return q;
}

ClassDecl parse_class_decl(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    const auto fail = [&]() -> ClassDecl {
        throw TranslationError("MalformedClassDecl", pos, "expected 'class_name object_name', got '" + std::string(t) + "'");
    };
    const auto sp = t.find_first_of(" \t\r\n");
    if (sp == std::string_view::npos)
        return fail();
    ClassDecl c{std::string(t.substr(0, sp)), std::string(trim(t.substr(sp)))};
    const bool class_ok = !c.class_name.empty() && (is_alpha(c.class_name.front()) || c.class_name.front() == '_')
        && c.class_name.back() != '.'
        && std::all_of(c.class_name.begin(), c.class_name.end(), [](char ch) { return is_word(ch) || ch == '.'; });
    if (!class_ok || !is_identifier(c.object))
        return fail();
    return c;
}

std::vector<std::string> expression_identifiers(std::string_view expr)
{
    static constexpr std::array<std::string_view, 6> reserved = {"true", "false", "null", "new", "instanceof", "this"};
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < expr.size()) {
        const char c = expr[i];
        if (c == '"' || c == '\'') {
            ++i;
            while (i < expr.size() && expr[i] != c) {
                if (expr[i] == '\\')
                    ++i;
                ++i;
            }
            ++i;
            continue;
        }
        if (is_digit(c)) {
            while (i < expr.size() && (is_word(expr[i]) || expr[i] == '.'))
                ++i;
            continue;
        }
        if (is_word(c)) {
            const auto start = i;
            while (i < expr.size() && is_word(expr[i]))
                ++i;
            const auto word = expr.substr(start, i - start);
            std::size_t before = start;
            while (before > 0 && is_ws(expr[before - 1]))
                --before;
            std::size_t after = i;
            while (after < expr.size() && is_ws(expr[after]))
                ++after;
            const bool member = before > 0 && expr[before - 1] == '.';
            const bool qualifier_or_call = after < expr.size() && (expr[after] == '.' || expr[after] == '(');
            const bool is_reserved = std::find(reserved.begin(), reserved.end(), word) != reserved.end();
            if (!member && !qualifier_or_call && !is_reserved && is_identifier(word))
                out.emplace_back(word);
            continue;
        }
        ++i;
    }
    return out;
}

}  // namespace xml2jsp
