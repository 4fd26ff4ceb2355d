#include "xml2jsp/statements.hpp"

#include <sstream>

#include "xml2jsp/document_walker.hpp"
#include "xml2jsp/syntax.hpp"

namespace xml2jsp {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_letter(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

[[noreturn]] void malformed(SourcePosition pos, const std::string& why)
{
    throw TranslationError("MalformedStatement", pos, why);
}

// Index of the ')' matching the '(' at `open`, skipping quoted text.
std::size_t matching_paren(std::string_view s, std::size_t open)
{
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '"' || c == '\'') {
            for (++i; i < s.size() && s[i] != c; ++i)
                if (s[i] == '\\')
                    ++i;
            continue;
        }
        if (c == '(')
            ++depth;
        else if (c == ')' && --depth == 0)
            return i;
    }
    return std::string_view::npos;
}

// Position of `word` as a stand-alone token: preceded by whitespace (or at
// `from` == 0 when allowed) and followed by whitespace, end, or one of `after`.
std::size_t find_keyword(std::string_view s, std::string_view word, std::string_view after)
{
    for (std::size_t p = s.find(word); p != std::string_view::npos; p = s.find(word, p + 1)) {
        const bool left = p > 0 && is_ws(s[p - 1]);
        const std::size_t e = p + word.size();
        const bool right = e == s.size() || is_ws(s[e]) || after.find(s[e]) != std::string_view::npos;
        if (left && right)
            return p;
    }
    return std::string_view::npos;
}

LoopHeader parse_loop(std::string_view rest, SourcePosition pos)
{
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos)
        malformed(pos, "loop header needs 'from <index> = <start>'");
    LoopHeader h;
    h.index = std::string(trim(rest.substr(0, eq)));
    if (!is_identifier(h.index))
        malformed(pos, "loop index '" + h.index + "' is not a valid identifier");

    const auto after = rest.substr(eq + 1);
    const auto to = find_keyword(after, "to", "(");
    if (to == std::string_view::npos)
        malformed(pos, "loop header is missing 'to'");
    h.start = std::string(trim(after.substr(0, to)));
    if (h.start.empty())
        malformed(pos, "loop header is missing a start value");

    const auto bound = trim(after.substr(to + 2));
    std::string_view step_part;
    if (!bound.empty() && bound.front() == '(') {
        const auto close = matching_paren(bound, 0);
        if (close == std::string_view::npos)
            malformed(pos, "unbalanced parentheses in loop condition");
        h.bound = {LoopBound::Kind::Condition, std::string(bound.substr(0, close + 1))};
        const auto tail = trim(bound.substr(close + 1));
        if (tail.size() < 4 || tail.substr(0, 4) != "step" || (tail.size() > 4 && !is_ws(tail[4])))
            malformed(pos, "loop header is missing 'step'");
        step_part = tail.substr(4);
    } else {
        const std::string padded = " " + std::string(bound);
        const auto step = find_keyword(padded, "step", "");
        if (step == std::string_view::npos)
            malformed(pos, "loop header is missing 'step'");
        h.bound = {LoopBound::Kind::Limit, std::string(trim(std::string_view(padded).substr(0, step)))};
        if (h.bound.text.empty())
            malformed(pos, "loop header is missing a limit");
        step_part = bound.substr(std::min(bound.size(), step + 4 - 1));
    }
    h.step = std::string(trim(step_part));
    if (h.step.empty())
        malformed(pos, "loop step must not be empty");
    return h;
}

}  // namespace

Statement parse_statement(std::string_view text, SourcePosition pos)
{
    const auto t = trim(text);
    std::size_t n = 0;
    while (n < t.size() && is_letter(t[n]))
        ++n;
    const auto word = t.substr(0, n);
    const auto rest = trim(t.substr(n));

    Statement s;
    if (word == "if") {
        if (rest.empty() || rest.front() != '(')
            malformed(pos, "the condition of 'if' must be enclosed in parentheses");
        const auto close = matching_paren(rest, 0);
        if (close == std::string_view::npos)
            malformed(pos, "unbalanced parentheses in 'if' condition");
        s.kind = Statement::Kind::If;
        s.condition = std::string(trim(rest.substr(1, close - 1)));
        if (s.condition.empty())
            malformed(pos, "empty 'if' condition");
        const auto tail = trim(rest.substr(close + 1));
        if (!tail.empty() && tail != "then")
            malformed(pos, "unexpected '" + std::string(tail) + "' after 'if' condition");
        return s;
    }
    if (word == "else") {
        if (!rest.empty())
            malformed(pos, rest.substr(0, 2) == "if" ? "'else if' chains are not supported" : "unexpected text after 'else'");
        s.kind = Statement::Kind::Else;
        return s;
    }
    if (word == "endif" || word == "endloop") {
        if (!rest.empty())
            malformed(pos, "unexpected text after '" + std::string(word) + "'");
        s.kind = word == "endif" ? Statement::Kind::EndIf : Statement::Kind::EndLoop;
        return s;
    }
    if (word == "loop") {
        if (rest.size() < 5 || rest.substr(0, 4) != "from" || !is_ws(rest[4]))
            malformed(pos, "expected 'loop from <index> = <start> to <bound> step <step>'");
        s.kind = Statement::Kind::Loop;
        s.loop = parse_loop(rest.substr(4), pos);
        return s;
    }
    malformed(pos, "unknown statement '" + std::string(t) + "'");
}

std::string render_statement(const Statement& s)
{
    switch (s.kind) {
    case Statement::Kind::If: return "if (" + s.condition + ")";
    case Statement::Kind::Else: return "else";
    case Statement::Kind::EndIf: return "endif";
    case Statement::Kind::EndLoop: return "endloop";
    case Statement::Kind::Loop:
        return "loop from " + s.loop.index + " = " + s.loop.start + " to " + s.loop.bound.text + " step " + s.loop.step;
    }
    return {};
}

std::string translate_loop_header(const LoopHeader& h, bool strict, const SymbolTable& table, const ScopeChain& chain, SourcePosition pos)
{
    const Symbol* sym = table.lookup(h.index, chain);
    std::string decl;
    if (!sym) {
        if (strict)
            throw TranslationError("UndeclaredVar", pos, "loop index '" + h.index + "' is not declared");
        decl = "int ";
    } else if (sym->implicit) {
        decl = "int ";
    }
    const auto& i = h.index;
    const std::string cond = h.bound.kind == LoopBound::Kind::Limit ? i + "<=" + h.bound.text : h.bound.text;
    return "for(" + decl + i + "=" + h.start + ";" + cond + ";" + i + "=" + i + "+" + h.step + "){";
}

std::string translate_loop_header(const LoopHeader& h, bool strict, const SymbolTable& table, SourcePosition pos)
{
    return translate_loop_header(h, strict, table, table.body_chain(), pos);
}

std::optional<BlockKind> BlockTracker::top() const
{
    if (stack_.empty())
        return std::nullopt;
    return stack_.back().kind;
}

namespace {

std::string_view block_name(BlockKind k)
{
    switch (k) {
    case BlockKind::If: return "if";
    case BlockKind::Loop: return "loop";
    case BlockKind::Try: return "dB";
    }
    return "?";
}

}  // namespace

std::optional<Diagnostic> BlockTracker::track(const Statement& s, SourcePosition pos)
{
    auto unbalanced = [&](const std::string& what) {
        std::ostringstream msg;
        msg << what;
        if (!stack_.empty())
            msg << " (innermost open block: " << block_name(stack_.back().kind) << " at " << stack_.back().opened_at << ")";
        return Diagnostic{Severity::Error, "UnbalancedBlock", pos, msg.str()};
    };
    switch (s.kind) {
    case Statement::Kind::If: push(BlockKind::If, pos); break;
    case Statement::Kind::Loop: push(BlockKind::Loop, pos); break;
    case Statement::Kind::Else:
        if (top() != BlockKind::If)
            return unbalanced("'else' without an open 'if'");
        if (stack_.back().has_else)
            return unbalanced("second 'else' for the same 'if'");
        stack_.back().has_else = true;
        break;
    case Statement::Kind::EndIf:
        if (top() != BlockKind::If)
            return unbalanced("'endif' without an open 'if'");
        pop();
        break;
    case Statement::Kind::EndLoop:
        if (top() != BlockKind::Loop)
            return unbalanced("'endloop' without an open 'loop'");
        pop();
        break;
    }
    return std::nullopt;
}

std::vector<Diagnostic> BlockTracker::finish() const
{
    std::vector<Diagnostic> out;
    for (const auto& b : stack_) {
        const std::string closer = b.kind == BlockKind::If ? "endif" : b.kind == BlockKind::Loop ? "endloop" : "end of the dB context";
        out.push_back({Severity::Error, "UnbalancedBlock", b.opened_at,
            "'" + std::string(block_name(b.kind)) + "' block is never closed (missing " + closer + ")"});
    }
    return out;
}

}  // namespace xml2jsp
