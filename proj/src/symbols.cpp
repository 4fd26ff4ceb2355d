#include "xml2jsp/symbols.hpp"

#include <sstream>

#include "xml2jsp/document_walker.hpp"
#include "xml2jsp/statements.hpp"
#include "xml2jsp/syntax.hpp"

namespace xml2jsp {

SymbolTable::SymbolTable()
{
    scopes_.push_back({ScopeKind::Declarations, {}, {}});
    scopes_.push_back({ScopeKind::Body, {}, {}});
}

std::size_t SymbolTable::add_function_scope(std::string name, SourcePosition function_start)
{
    scopes_.push_back({ScopeKind::Function, std::move(name), {}});
    const auto index = scopes_.size() - 1;
    function_scopes_[function_start.byte_offset] = index;
    return index;
}

ScopeChain SymbolTable::function_chain(SourcePosition function_start) const
{
    auto it = function_scopes_.find(function_start.byte_offset);
    if (it == function_scopes_.end())
        return body_chain();
    return {declarations_scope, it->second};
}

const Symbol* SymbolTable::lookup(std::string_view name, const ScopeChain& chain) const
{
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        if (const Symbol* s = find_in(*it, name))
            return s;
    return nullptr;
}

const Symbol* SymbolTable::find_in(std::size_t scope, std::string_view name) const
{
    const auto& syms = scopes_.at(scope).symbols;
    auto it = syms.find(name);
    return it == syms.end() ? nullptr : &it->second;
}

Symbol* SymbolTable::find_in(std::size_t scope, std::string_view name)
{
    auto& syms = scopes_.at(scope).symbols;
    auto it = syms.find(name);
    return it == syms.end() ? nullptr : &it->second;
}

std::pair<const Symbol*, bool> SymbolTable::declare(std::size_t scope, Symbol sym)
{
    auto& s = scopes_.at(scope);
    sym.scope = s.kind;
    sym.function = s.function;
    auto [it, inserted] = s.symbols.emplace(sym.name, std::move(sym));
    return {&it->second, inserted};
}

std::size_t SymbolTable::size() const
{
    std::size_t n = 0;
    for (const auto& s : scopes_)
        n += s.symbols.size();
    return n;
}

std::string prepared_statement_name(std::size_t ordinal)
{
    return ordinal == 0 ? "ps" : "ps" + std::to_string(ordinal + 1);
}

namespace {

class Analyzer final : public DocumentVisitor {
public:
    Analyzer(const Schema& schema, bool strict) : identifier_(schema.identifier_pattern), strict_(strict) {}

    AnalysisResult take() { return {std::move(table_), std::move(diags_)}; }

    void enter_function(const Element& header, SourcePosition function_start) override
    {
        std::string name;
        std::vector<Parameter> params;
        try {
            auto h = parse_function_header(header.text, header.position);
            name = h.name;
            params = std::move(h.params);
            declare(SymbolTable::declarations_scope, h.name, h.return_type, header.position);
        } catch (const TranslationError&) {
            // reported by the emission pass
        }
        const auto scope = table_.add_function_scope(name, function_start);
        chain_ = table_.function_chain(function_start);
        saved_ps_count_ = ps_count_;
        ps_count_ = 0;
        for (const auto& p : params)
            declare(scope, p.name, p.type, header.position);
    }

    void leave_function(SourcePosition) override
    {
        chain_ = table_.body_chain();
        ps_count_ = saved_ps_count_;
    }

    void end_document(SourcePosition) override {}

    void element(const Element& el, Context ctx) override
    {
        const std::size_t scope = ctx == Context::Declarations ? SymbolTable::declarations_scope : chain_.back();
        const auto& n = el.name;
        if (n == "var") {
            on_var(el, scope);
        } else if (n == "array") {
            try {
                const auto a = parse_array_decl(el.text, el.position);
                declare(scope, a.name, DslType::array_of(a.element), el.position);
            } catch (const TranslationError&) {
            }
        } else if (n == "read") {
            on_read(el);
        } else if (n == "out") {
            for (const auto* w : el.children_named("writev"))
                use(w->trimmed_text(), w->position);
        } else if (n == "writev") {
            use(el.trimmed_text(), el.position);
        } else if (n == "dB") {
            if (const auto* c = el.child("conn_name"))
                declare(scope, c->trimmed_text(), DslType::of(DslType::Kind::Connection), c->position);
        } else if (n == "ps") {
            on_ps(el, scope);
        } else if (n == "s") {
            on_statement(el, scope);
        } else if (n == "class") {
            try {
                const auto c = parse_class_decl(el.text, el.position);
                declare(scope, c.object, DslType::object(c.class_name), el.position);
            } catch (const TranslationError&) {
            }
        }
    }

private:
    void declare(std::size_t scope, const std::string& name, DslType type, SourcePosition pos, bool implicit = false)
    {
        Symbol sym;
        sym.name = name;
        sym.dsl_type = std::move(type);
        sym.declared_at = pos;
        sym.implicit = implicit;
        auto [existing, inserted] = table_.declare(scope, std::move(sym));
        if (!inserted) {
            std::ostringstream msg;
            msg << "'" << name << "' is already declared at " << existing->declared_at;
            diags_.push_back({Severity::Error, "RepeatedDecl", pos, msg.str()});
        }
    }

    void use(const std::string& name, SourcePosition pos)
    {
        if (!table_.lookup(name, chain_))
            diags_.push_back({Severity::Error, "UndeclaredVar", pos, "'" + name + "' is used but not declared"});
    }

    void use_expression(std::string_view expr, SourcePosition pos)
    {
        for (const auto& id : expression_identifiers(expr))
            if (identifier_.matches(id))
                use(id, pos);
    }

    void on_var(const Element& el, std::size_t scope)
    {
        Binding b;
        try {
            b = parse_binding(el.text, el.position);
        } catch (const TranslationError&) {
            return;
        }
        DslType type;
        try {
            type = infer_literal_type(b.value, el.position);
        } catch (const TranslationError& e) {
            diags_.push_back(e.to_diagnostic());
            return;
        }
        declare(scope, b.name, type, el.position);
    }

    void on_read(const Element& el)
    {
        const auto target = el.trimmed_text();
        if (!is_identifier(target))
            return;
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) {
            if (Symbol* s = table_.find_in(*it, target)) {
                s->is_read_target = true;
                s->dsl_type = DslType::string_type();
                return;
            }
        }
        diags_.push_back({Severity::Error, "UndeclaredVar", el.position, "read target '" + target + "' is not declared"});
    }

    void on_ps(const Element& el, std::size_t scope)
    {
        const auto ordinal = ps_count_++;
        for (const auto& c : el.children) {
            if (c.name == "var") {
                on_var(c, scope);
            } else if (c.name == "query") {
                declare(scope, prepared_statement_name(ordinal), DslType::of(DslType::Kind::PreparedStmt), c.position);
            } else if (c.name == "read") {
                on_read(c);
            } else if (c.name == "set") {
                try {
                    const auto call = parse_set_call(c.text, c.position);
                    if (!classify_literal(call.argument) && is_identifier(call.argument))
                        use(call.argument, c.position);
                } catch (const TranslationError&) {
                }
            } else if (c.name == "result") {
                declare(scope, c.trimmed_text(), DslType::of(DslType::Kind::ResultCount), c.position);
            } else if (c.name == "get") {
                try {
                    use(parse_get_call(c.text, c.position).target, c.position);
                } catch (const TranslationError&) {
                }
            }
        }
    }

    void on_statement(const Element& el, std::size_t scope)
    {
        Statement s;
        try {
            s = parse_statement(el.text, el.position);
        } catch (const TranslationError&) {
            return;
        }
        if (s.kind == Statement::Kind::If) {
            use_expression(s.condition, el.position);
        } else if (s.kind == Statement::Kind::Loop) {
            const auto& h = s.loop;
            if (!table_.lookup(h.index, chain_)) {
                if (strict_) {
                    diags_.push_back({Severity::Error, "UndeclaredVar", el.position,
                        "loop index '" + h.index + "' must be declared before the loop"});
                } else {
                    declare(scope, h.index, DslType::int_type(), el.position, true);
                    diags_.push_back({Severity::Note, "ImplicitLoopVar", el.position,
                        "loop index '" + h.index + "' is not declared; declaring it as integer"});
                }
            }
            use_expression(h.start, el.position);
            use_expression(h.bound.text, el.position);
            use_expression(h.step, el.position);
        }
    }

    Pattern identifier_;
    bool strict_;
    SymbolTable table_;
    Diagnostics diags_;
    ScopeChain chain_ = table_.body_chain();
    std::size_t ps_count_ = 0;
    std::size_t saved_ps_count_ = 0;
};

}  // namespace

AnalysisResult analyze(EventReader& events, const Schema& schema, bool strict)
{
    Analyzer a(schema, strict);
    walk_document(events, a);
    return a.take();
}

AnalysisResult analyze(const DocumentSource& source, const Schema& schema, bool strict)
{
    auto in = source.open();
    EventReader reader(*in);
    return analyze(reader, schema, strict);
}

}  // namespace xml2jsp
