#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xml2jsp/diagnostic.hpp"
#include "xml2jsp/document_source.hpp"
#include "xml2jsp/dsl_type.hpp"
#include "xml2jsp/schema.hpp"
#include "xml2jsp/source_position.hpp"

namespace xml2jsp {

enum class ScopeKind { Declarations, Body, Function };

struct Symbol {
    std::string name;
    DslType dsl_type;
    SourcePosition declared_at;
    ScopeKind scope = ScopeKind::Body;
    std::string function;         // owning function for ScopeKind::Function
    bool is_read_target = false;  // some <read> assigns this name
    bool implicit = false;        // loop index declared by the lenient rule
};

struct Scope {
    ScopeKind kind = ScopeKind::Body;
    std::string function;
    std::map<std::string, Symbol, std::less<>> symbols;
};

/// Indices into SymbolTable::scopes, outermost first.
using ScopeChain = std::vector<std::size_t>;

/// Declared names of one document. Scope 0 holds the `declare` block and
/// function names, scope 1 the page body; every function gets its own scope
/// whose chain is {0, that scope}. The table is filled by analyze() and only
/// read afterwards.
class SymbolTable {
public:
    static constexpr std::size_t declarations_scope = 0;
    static constexpr std::size_t body_scope = 1;

    SymbolTable();

    ScopeChain body_chain() const { return {declarations_scope, body_scope}; }

    std::size_t add_function_scope(std::string name, SourcePosition function_start);
    /// Chain for the function starting at `function_start`, or the body chain
    /// if no such function was recorded.
    ScopeChain function_chain(SourcePosition function_start) const;

    /// Innermost-first resolution along `chain`.
    const Symbol* lookup(std::string_view name, const ScopeChain& chain) const;
    const Symbol* lookup(std::string_view name) const { return lookup(name, body_chain()); }

    const Symbol* find_in(std::size_t scope, std::string_view name) const;
    Symbol* find_in(std::size_t scope, std::string_view name);

    /// Adds `sym` to `scope`; returns the existing symbol instead if the name
    /// is already declared there.
    std::pair<const Symbol*, bool> declare(std::size_t scope, Symbol sym);

    const std::vector<Scope>& scopes() const noexcept { return scopes_; }
    std::size_t size() const;

private:
    std::vector<Scope> scopes_;
    std::map<std::uint64_t, std::size_t> function_scopes_;
};

struct AnalysisResult {
    SymbolTable table;
    Diagnostics diagnostics;
};

/// First pass: declares every var, array, conn_name, prepared statement,
/// result, function, parameter, class object and loop index, marks read
/// targets (which become StringType), and reports RepeatedDecl and
/// UndeclaredVar. Only symbol-related problems are reported here; malformed
/// tag text is left to the emission pass.
///
/// In lenient mode an undeclared loop index is declared implicitly as an
/// IntType with an ImplicitLoopVar note; strict mode reports UndeclaredVar.
AnalysisResult analyze(EventReader& events, const Schema& schema, bool strict);
AnalysisResult analyze(const DocumentSource& source, const Schema& schema, bool strict);

/// Java name of the n-th (0-based) prepared statement in a code unit: ps, ps2, ps3, ...
std::string prepared_statement_name(std::size_t ordinal);

}  // namespace xml2jsp
