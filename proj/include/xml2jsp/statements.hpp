#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xml2jsp/diagnostic.hpp"
#include "xml2jsp/symbols.hpp"

namespace xml2jsp {

struct LoopBound {
    enum class Kind { Limit, Condition } kind = Kind::Limit;
    std::string text;  // Condition keeps its parentheses
};

struct LoopHeader {
    std::string index;
    std::string start;
    LoopBound bound;
    std::string step;

    friend bool operator==(const LoopHeader&, const LoopHeader&) = default;
};

inline bool operator==(const LoopBound& a, const LoopBound& b) { return a.kind == b.kind && a.text == b.text; }

struct Statement {
    enum class Kind { If, Else, EndIf, Loop, EndLoop } kind = Kind::EndIf;
    std::string condition;  // If: text inside the parentheses
    LoopHeader loop;        // Loop only

    friend bool operator==(const Statement&, const Statement&) = default;
};

/// Parses the content of an `<s>` tag:
///   if (<cond>) [then] | else | endif | loop from <i> = <expr> to <bound> step <expr> | endloop
/// A bound starting with '(' is a condition, anything else an inclusive limit.
/// Throws TranslationError with code MalformedStatement.
Statement parse_statement(std::string_view text, SourcePosition pos = {});

/// Canonical source form; parse_statement(render_statement(s)) == s.
std::string render_statement(const Statement& s);

/// Java `for(...){` for a loop header. The index gets an `int ` declaration
/// when it is an implicitly declared loop index or (lenient mode) unknown.
/// Throws UndeclaredVar in strict mode when the index is not declared.
std::string translate_loop_header(const LoopHeader& h, bool strict, const SymbolTable& table, const ScopeChain& chain,
    SourcePosition pos = {});
std::string translate_loop_header(const LoopHeader& h, bool strict, const SymbolTable& table, SourcePosition pos = {});

enum class BlockKind { If, Loop, Try };

/// Open if/loop/try blocks of one code unit, checked at every statement so
/// that each block is closed by its own terminator.
class BlockTracker {
public:
    struct OpenBlock {
        BlockKind kind;
        SourcePosition opened_at;
        bool has_else = false;
    };

    /// Applies a statement. On an UnbalancedBlock diagnostic the tracker is
    /// left unchanged.
    std::optional<Diagnostic> track(const Statement& s, SourcePosition pos);

    void push(BlockKind kind, SourcePosition pos) { stack_.push_back({kind, pos}); }
    void pop() { stack_.pop_back(); }

    const std::vector<OpenBlock>& open_blocks() const noexcept { return stack_; }
    bool empty() const noexcept { return stack_.empty(); }
    std::optional<BlockKind> top() const;

    /// One UnbalancedBlock per block still open, at its opening position.
    std::vector<Diagnostic> finish() const;

private:
    std::vector<OpenBlock> stack_;
};

}  // namespace xml2jsp
