#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xml2jsp/diagnostic.hpp"
#include "xml2jsp/document_source.hpp"
#include "xml2jsp/document_walker.hpp"
#include "xml2jsp/symbols.hpp"
#include "xml2jsp/syntax.hpp"

namespace xml2jsp {

struct TranslationOptions {
    bool strict = false;          // undeclared loop indices are errors
    bool emit_excep_msg = false;  // print <excep_msg> in the dB catch block
    bool response_out = false;    // out.println instead of System.out.println
    bool emit_imports = false;    // page directive importing java.sql.*
    bool check_only = false;      // validate and analyze, write nothing
};

/// One generated line. `depth` is the block nesting level used for indentation.
struct Fragment {
    std::string text;
    SourcePosition origin;
    int depth = 0;
};

struct BodyItem {
    enum class Kind { Scriptlet, Action } kind = Kind::Scriptlet;
    Fragment fragment;
};

/// Declarations render inside a single `<%! %>` block; consecutive scriptlet
/// items share one `<% %>` block and actions sit between blocks.
struct JspProgram {
    std::vector<Fragment> declarations;
    std::vector<BodyItem> body;

    bool empty() const { return declarations.empty() && body.empty(); }
};

class ProgramSink {
public:
    virtual ~ProgramSink() = default;
    virtual void declaration(Fragment f) = 0;
    virtual void body(BodyItem item) = 0;
};

class ProgramCollector final : public ProgramSink {
public:
    void declaration(Fragment f) override { program.declarations.push_back(std::move(f)); }
    void body(BodyItem item) override { program.body.push_back(std::move(item)); }

    JspProgram program;
};

/// Open database connection of a code unit.
struct DbContext {
    std::string conn_name;
    bool open = false;
    std::optional<std::string> excep_msg;
    SourcePosition opened_at;
};

/// A handler output line, indented relative to the current block.
struct CodeLine {
    std::string text;
    int indent = 0;

    friend bool operator==(const CodeLine&, const CodeLine&) = default;
};

using CodeLines = std::vector<CodeLine>;

/// Java string literal for `text`: quotes and backslashes escaped, line
/// breaks written as \n and \r.
std::string java_string_literal(std::string_view text);

/// Quotes `%>` as `%\>` so that Java text cannot end its scriptlet early.
std::string scriptlet_safe(std::string_view java);

/// Value of a `name=value` pair used as a Java expression: literals and
/// in-scope identifiers pass through, anything else becomes a string literal.
std::string render_value(std::string_view value, const SymbolTable& table, const ScopeChain& chain);

// Per-tag handlers. Each returns Java (or JSP action) text and throws
// TranslationError on bad input.

/// `<type> <name> = <value>;`, or `String <name>="";` when the variable is
/// assigned by a <read>.
std::string handle_var(std::string_view text, const SymbolTable& table, std::size_t scope, SourcePosition pos = {});

/// `integer v[5]` -> `int[] v = new int[5];`
std::string handle_array(std::string_view text, SourcePosition pos = {});

struct ReadSpec {
    std::string target;
    std::string object;  // request | session, any case
    std::string type;    // parameter | attribute, any case
    std::string name;
};

ReadSpec read_spec(const Element& read);

/// `<target>=request.getParameter("<name>");` and the attribute forms.
/// Throws InvalidReadCombo for session parameters and unknown words.
std::string handle_read(const ReadSpec& spec, SourcePosition pos = {});

struct OutPiece {
    enum class Kind { Write, Writev } kind = Kind::Write;
    std::string text;
    SourcePosition position;
};

/// Print statement for an <out> group (`in_out`) or a bare write/writev.
/// Throws UndeclaredVar for a writev naming an unknown variable.
std::string handle_out(const std::vector<OutPiece>& pieces, bool in_out, const SymbolTable& table, const ScopeChain& chain,
    const TranslationOptions& options, SourcePosition pos = {});

struct DbSpec {
    std::string driver;
    std::string url;
    std::string uid;
    std::string pwd;
    std::string conn_name;
    std::optional<std::string> excep_msg;
};

DbSpec db_spec(const Element& db);

/// Opens `ctx` and returns the try block header and connection lines.
/// Throws NestedDb if `ctx` is already open.
CodeLines handle_db(const DbSpec& spec, DbContext& ctx, SourcePosition pos = {});

/// Closes `ctx`: `}` and the catch clause.
CodeLines close_db(DbContext& ctx, const TranslationOptions& options);

/// Prepared statement block for a <ps> element, using the connection of `ctx`.
/// `stmt` is the Java variable name of the statement. Setter choice follows
/// the argument's type; a disagreeing keyword adds a SetterKeywordMismatch
/// note to `notes`. Throws NoDbContext, ResultAndGetMix, BadSetSyntax,
/// BadGetSyntax, BadQuerySyntax, InvalidReadCombo.
CodeLines handle_ps(const Element& ps, const std::string& stmt, const DbContext& ctx, const SymbolTable& table,
    const ScopeChain& chain, Diagnostics& notes);

/// `double avg(double[] a, int n){`
std::string function_signature(const FunctionHeader& h);

/// Fallback return statement for non-void functions, which have no return tag.
std::optional<std::string> default_return(const FunctionHeader& h);

/// `Date d = new Date();` followed by one bean setter per pname.
CodeLines handle_class(std::string_view text, const std::vector<std::string>& pnames, const SymbolTable& table,
    const ScopeChain& chain, SourcePosition pos = {});

/// JSP action text.
std::string handle_include(std::string_view file);
std::string handle_forward(std::string_view file, const std::vector<std::string>& pnames, SourcePosition pos = {});

std::string handle_redirect(std::string_view url);

/// `session.setAttribute("p",v);` per set.
CodeLines handle_session(const std::vector<std::string>& sets, const SymbolTable& table, const ScopeChain& chain,
    SourcePosition pos = {});

/// Second pass: streams the document through the per-tag handlers into `sink`.
/// The document must be schema-valid and analyzed into `table`.
Diagnostics translate(EventReader& events, const SymbolTable& table, const TranslationOptions& options, ProgramSink& sink);

struct TranslationResult {
    JspProgram program;
    Diagnostics diagnostics;
};

TranslationResult translate(const DocumentSource& source, const SymbolTable& table, const TranslationOptions& options);

}  // namespace xml2jsp
