#include "xml2jsp/codegen.hpp"

#include <algorithm>
#include <cctype>

#include "xml2jsp/statements.hpp"

namespace xml2jsp {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to)
{
    for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
        s.replace(p, from.size(), to);
    return s;
}

// Attribute value inside a standard-syntax JSP action.
std::string jsp_attribute(std::string_view value)
{
    std::string out;
    for (char c : value) {
        if (c == '\\' || c == '"')
            out += '\\';
        out += c;
    }
    out = replace_all(std::move(out), "%>", "%\\>");
    return replace_all(std::move(out), "<%", "<\\%");
}

std::string unquote(std::string_view v)
{
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return std::string(v.substr(1, v.size() - 2));
    return std::string(v);
}

std::string print_call(const TranslationOptions& options)
{
    return options.response_out ? "out.println" : "System.out.println";
}

}  // namespace

std::string java_string_literal(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string scriptlet_safe(std::string_view java)
{
    return replace_all(std::string(java), "%>", "%\\>");
}

std::string render_value(std::string_view value, const SymbolTable& table, const ScopeChain& chain)
{
    const auto v = trim(value);
    if (classify_literal(v))
        return std::string(v);
    if (is_identifier(v) && table.lookup(v, chain))
        return std::string(v);
    return java_string_literal(v);
}

std::string handle_var(std::string_view text, const SymbolTable& table, std::size_t scope, SourcePosition pos)
{
    const auto b = parse_binding(text, pos);
    const Symbol* sym = table.find_in(scope, b.name);
    if (sym && sym->is_read_target)
        return "String " + b.name + "=\"\";";
    const auto type = infer_literal_type(b.value, pos);
    return java_type(type) + " " + b.name + " = " + b.value + ";";
}

std::string handle_array(std::string_view text, SourcePosition pos)
{
    const auto a = parse_array_decl(text, pos);
    const auto elem = java_type(DslType::of(a.element));
    return elem + "[] " + a.name + " = new " + elem + "[" + std::to_string(a.size) + "];";
}

ReadSpec read_spec(const Element& read)
{
    ReadSpec r;
    r.target = read.trimmed_text();
    if (const auto* c = read.child("object"))
        r.object = c->trimmed_text();
    if (const auto* c = read.child("type"))
        r.type = c->trimmed_text();
    if (const auto* c = read.child("name"))
        r.name = c->trimmed_text();
    return r;
}

std::string handle_read(const ReadSpec& spec, SourcePosition pos)
{
    if (!is_identifier(spec.target))
        throw TranslationError("PatternMismatch", pos, "read target '" + spec.target + "' is not a valid identifier");
    const auto object = lower(spec.object);
    const auto type = lower(spec.type);
    const auto name = java_string_literal(spec.name);
    if (object == "request" && type == "parameter")
        return spec.target + "=request.getParameter(" + name + ");";
    if ((object == "request" || object == "session") && type == "attribute")
        return spec.target + "=(String)" + object + ".getAttribute(" + name + ");";
    throw TranslationError("InvalidReadCombo", pos,
        "cannot read a '" + spec.type + "' from '" + spec.object + "' (use request parameter, request attribute or session attribute)");
}

std::string handle_out(const std::vector<OutPiece>& pieces, bool in_out, const SymbolTable& table, const ScopeChain& chain,
    const TranslationOptions& options, SourcePosition pos)
{
    auto render = [&](const OutPiece& p) {
        const auto text = std::string(trim(p.text));
        if (p.kind == OutPiece::Kind::Write)
            return java_string_literal(text);
        if (!table.lookup(text, chain))
            throw TranslationError("UndeclaredVar", p.position, "'" + text + "' is used but not declared");
        return text;
    };
    const auto print = print_call(options);
    if (!in_out) {
        if (pieces.size() != 1)
            throw TranslationError("IllegalChild", pos, "a bare write/writev prints exactly one item");
        const auto& p = pieces.front();
        return p.kind == OutPiece::Kind::Write ? print + "(" + render(p) + ");" : print + "(" + render(p) + "+\"\");";
    }
    if (pieces.empty())
        return print + "(\"\");";
    std::string joined;
    for (const auto& p : pieces) {
        if (!joined.empty())
            joined += " + ";
        joined += render(p);
    }
    return print + "(" + joined + " +\"\");";
}

DbSpec db_spec(const Element& db)
{
    DbSpec s;
    auto text_of = [&](std::string_view tag) {
        const auto* c = db.child(tag);
        return c ? c->trimmed_text() : std::string{};
    };
    s.driver = text_of("driver");
    s.url = text_of("url");
    s.uid = text_of("uid");
    s.pwd = text_of("pwd");
    s.conn_name = text_of("conn_name");
    if (const auto* c = db.child("excep_msg"))
        s.excep_msg = c->trimmed_text();
    return s;
}

CodeLines handle_db(const DbSpec& spec, DbContext& ctx, SourcePosition pos)
{
    if (ctx.open)
        throw TranslationError("NestedDb", pos, "a dB connection '" + ctx.conn_name + "' is already open inside an enclosing block");
    if (!is_identifier(spec.conn_name))
        throw TranslationError("PatternMismatch", pos, "connection name '" + spec.conn_name + "' is not a valid identifier");
    ctx = {spec.conn_name, true, spec.excep_msg, pos};
    return {
        {"try{", 0},
        {"Class.forName(" + java_string_literal(spec.driver) + ");", 1},
        {"Connection " + spec.conn_name + "= DriverManager.getConnection(" + java_string_literal(spec.url) + ","
                + java_string_literal(spec.uid) + "," + java_string_literal(spec.pwd) + ");",
            1},
    };
}

CodeLines close_db(DbContext& ctx, const TranslationOptions& options)
{
    std::string handler = "e.printStackTrace();";
    if (options.emit_excep_msg && ctx.excep_msg)
        handler = print_call(options) + "(" + java_string_literal(*ctx.excep_msg) + ");" + handler;
    ctx.open = false;
    return {{"}", 0}, {"catch(Exception e){" + handler + "}", 0}};
}

namespace {

std::string setter_for(const SetCall& call, const SymbolTable& table, const ScopeChain& chain, SourcePosition pos,
    DslType::Kind& inferred)
{
    if (const auto lit = classify_literal(call.argument)) {
        switch (*lit) {
        case LiteralKind::String: inferred = DslType::Kind::String; return "setString";
        case LiteralKind::Int: inferred = DslType::Kind::Int; return "setInt";
        case LiteralKind::Real: inferred = DslType::Kind::Real; return "setDouble";
        }
    }
    if (!is_identifier(call.argument))
        throw TranslationError("BadSetSyntax", pos, "cannot infer the type of argument '" + call.argument + "'");
    const Symbol* sym = table.lookup(call.argument, chain);
    if (!sym)
        throw TranslationError("UndeclaredVar", pos, "'" + call.argument + "' is used but not declared");
    switch (sym->dsl_type.kind) {
    case DslType::Kind::String: inferred = DslType::Kind::String; return "setString";
    case DslType::Kind::Int:
    case DslType::Kind::ResultCount: inferred = DslType::Kind::Int; return "setInt";
    case DslType::Kind::Real: inferred = DslType::Kind::Real; return "setDouble";
    default: break;
    }
    throw TranslationError("BadSetSyntax", pos,
        "'" + call.argument + "' has type " + to_string(sym->dsl_type) + ", which cannot be bound to a statement parameter");
}

std::string getter_for(const GetCall& call)
{
    switch (*scalar_keyword(call.keyword)) {
    case DslType::Kind::Int: return "getInt";
    case DslType::Kind::Real: return "getDouble";
    default: return "getString";
    }
}

}  // namespace

CodeLines handle_ps(const Element& ps, const std::string& stmt, const DbContext& ctx, const SymbolTable& table,
    const ScopeChain& chain, Diagnostics& notes)
{
    if (!ctx.open)
        throw TranslationError("NoDbContext", ps.position, "<ps> needs an open <dB> connection before it");
    const Element* query = ps.child("query");
    if (!query)
        throw TranslationError("BadQuerySyntax", ps.position, "<ps> has no <query>");
    const auto q = parse_query(query->text, query->position);

    const auto results = ps.children_named("result");
    const auto gets = ps.children_named("get");
    if (!results.empty() && !gets.empty())
        throw TranslationError("ResultAndGetMix", gets.front()->position, "<result> and <get> cannot be combined in one <ps>");

    CodeLines lines;
    lines.push_back({"PreparedStatement " + stmt + "= " + ctx.conn_name + ".prepareStatement(" + java_string_literal(q.sql) + ");"});
    for (const auto& c : ps.children) {
        if (c.name == "var") {
            lines.push_back({handle_var(c.text, table, chain.back(), c.position)});
        } else if (c.name == "read") {
            lines.push_back({handle_read(read_spec(c), c.position)});
        } else if (c.name == "set") {
            const auto call = parse_set_call(c.text, c.position);
            DslType::Kind inferred{};
            const auto setter = setter_for(call, table, chain, c.position, inferred);
            if (scalar_keyword(call.keyword) != inferred)
                notes.push_back({Severity::Note, "SetterKeywordMismatch", c.position,
                    "keyword '" + call.keyword + "' disagrees with the type of '" + call.argument + "'; using " + setter});
            lines.push_back({stmt + "." + setter + "(" + std::to_string(call.index) + "," + call.argument + ");"});
        }
    }
    if (!results.empty()) {
        const auto r = results.front()->trimmed_text();
        lines.push_back({"int " + r + "=0;"});
        lines.push_back({r + "=" + stmt + ".executeUpdate();"});
    } else if (!gets.empty()) {
        const auto rs = "rs_" + stmt;
        lines.push_back({"ResultSet " + rs + " = " + stmt + ".executeQuery();"});
        lines.push_back({"if(" + rs + ".next()){"});
        for (const auto* g : gets) {
            const auto call = parse_get_call(g->text, g->position);
            if (!table.lookup(call.target, chain))
                throw TranslationError("UndeclaredVar", g->position, "'" + call.target + "' is used but not declared");
            lines.push_back({call.target + "=" + rs + "." + getter_for(call) + "(" + std::to_string(call.index) + ");", 1});
        }
        lines.push_back({"}"});
    } else {
        lines.push_back({stmt + ".execute();"});
    }
    return lines;
}

std::string function_signature(const FunctionHeader& h)
{
    std::string params;
    for (const auto& p : h.params) {
        if (!params.empty())
            params += ", ";
        params += java_type(p.type) + " " + p.name;
    }
    return java_type(h.return_type) + " " + h.name + "(" + params + "){";
}

std::optional<std::string> default_return(const FunctionHeader& h)
{
    switch (h.return_type.kind) {
    case DslType::Kind::Int: return "return 0;";
    case DslType::Kind::Real: return "return 0.0;";
    case DslType::Kind::String: return "return \"\";";
    default: return std::nullopt;
    }
}

CodeLines handle_class(std::string_view text, const std::vector<std::string>& pnames, const SymbolTable& table,
    const ScopeChain& chain, SourcePosition pos)
{
    const auto c = parse_class_decl(text, pos);
    CodeLines lines{{c.class_name + " " + c.object + " = new " + c.class_name + "();"}};
    for (const auto& p : pnames) {
        const auto b = parse_binding(p, pos);
        std::string prop = b.name;
        // Leading underscores stay; the first letter after them is capitalized.
        const auto first_letter = prop.find_first_not_of('_');
        prop[first_letter] = static_cast<char>(std::toupper(static_cast<unsigned char>(prop[first_letter])));
        lines.push_back({c.object + ".set" + prop + "(" + render_value(b.value, table, chain) + ");"});
    }
    return lines;
}

std::string handle_include(std::string_view file)
{
    return "<jsp:include page=\"" + jsp_attribute(trim(file)) + "\" />";
}

std::string handle_forward(std::string_view file, const std::vector<std::string>& pnames, SourcePosition pos)
{
    const auto page = "<jsp:forward page=\"" + jsp_attribute(trim(file)) + "\"";
    if (pnames.empty())
        return page + " />";
    std::string out = page + ">";
    for (const auto& p : pnames) {
        const auto b = parse_binding(p, pos);
        out += "<jsp:param name=\"" + b.name + "\" value=\"" + jsp_attribute(unquote(b.value)) + "\"/>";
    }
    return out + "</jsp:forward>";
}

std::string handle_redirect(std::string_view url)
{
    return "response.sendRedirect(" + java_string_literal(trim(url)) + ");";
}

CodeLines handle_session(const std::vector<std::string>& sets, const SymbolTable& table, const ScopeChain& chain, SourcePosition pos)
{
    CodeLines lines;
    for (const auto& s : sets) {
        const auto b = parse_binding(s, pos);
        lines.push_back({"session.setAttribute(" + java_string_literal(b.name) + "," + render_value(b.value, table, chain) + ");"});
    }
    return lines;
}

namespace {

std::vector<std::string> texts_of(const Element& el, std::string_view child)
{
    std::vector<std::string> out;
    for (const auto* c : el.children_named(child))
        out.push_back(c->trimmed_text());
    return out;
}

// One code unit: the page body or a single function.
struct Unit {
    ScopeChain chain;
    BlockTracker tracker;
    DbContext db;
    int depth = 0;
    std::size_t ps_count = 0;
    bool is_function = false;
    std::vector<Fragment> buffer;  // function lines, flushed to declarations at the end
};

class Translator final : public DocumentVisitor {
public:
    Translator(const SymbolTable& table, const TranslationOptions& options, ProgramSink& sink)
        : table_(table), options_(options), sink_(sink)
    {
        body_.chain = table.body_chain();
    }

    Diagnostics take() { return std::move(diags_); }

    void enter_function(const Element& header, SourcePosition function_start) override
    {
        function_ = Unit{};
        function_->is_function = true;
        function_->chain = table_.function_chain(function_start);
        try {
            header_ = parse_function_header(header.text, header.position);
            emit(*function_, {{function_signature(*header_)}}, function_start);
        } catch (const TranslationError& e) {
            header_.reset();
            diags_.push_back(e.to_diagnostic());
        }
        function_->depth = 1;
    }

    void leave_function(SourcePosition function_end) override
    {
        finish_unit(*function_, function_end);
        if (header_) {
            if (auto r = default_return(*header_))
                emit(*function_, {{*r}}, function_end);
            function_->depth = 0;
            emit(*function_, {{"}"}}, function_end);
        }
        for (auto& f : function_->buffer)
            sink_.declaration(std::move(f));
        function_.reset();
        header_.reset();
    }

    void end_document(SourcePosition root_end) override { finish_unit(body_, root_end); }

    void element(const Element& el, Context ctx) override
    {
        try {
            if (ctx == Context::Declarations)
                declaration(el);
            else
                statement(el, function_ ? *function_ : body_);
        } catch (const TranslationError& e) {
            diags_.push_back(e.to_diagnostic());
        }
    }

private:
    void emit(Unit& u, const CodeLines& lines, SourcePosition origin)
    {
        for (const auto& l : lines) {
            Fragment f{scriptlet_safe(l.text), origin, u.depth + l.indent};
            if (u.is_function)
                u.buffer.push_back(std::move(f));
            else
                sink_.body({BodyItem::Kind::Scriptlet, std::move(f)});
        }
    }

    void emit_action(Unit& u, std::string text, const Element& el)
    {
        if (u.is_function)
            throw TranslationError("ActionInFunction", el.position, "<" + el.name + "> cannot be used inside a function");
        sink_.body({BodyItem::Kind::Action, {std::move(text), el.position, u.depth}});
    }

    void declaration(const Element& el)
    {
        std::string text;
        if (el.name == "var")
            text = handle_var(el.text, table_, SymbolTable::declarations_scope, el.position);
        else
            text = handle_array(el.text, el.position);
        sink_.declaration({scriptlet_safe(text), el.position, 0});
    }

    void close_db(Unit& u, SourcePosition origin)
    {
        --u.depth;
        u.tracker.pop();
        emit(u, xml2jsp::close_db(u.db, options_), origin);
    }

    void finish_unit(Unit& u, SourcePosition end)
    {
        if (u.db.open && u.tracker.top() == BlockKind::Try)
            close_db(u, end);
        for (auto& d : u.tracker.finish())
            diags_.push_back(std::move(d));
    }

    void statement(const Element& el, Unit& u)
    {
        const auto& n = el.name;
        if (u.is_function && (n == "read" || n == "redirect" || n == "session"))
            throw TranslationError("PageObjectInFunction", el.position,
                "<" + n + "> needs the request, response or session object, which functions cannot reach");
        if (n == "var") {
            emit(u, {{handle_var(el.text, table_, u.chain.back(), el.position)}}, el.position);
        } else if (n == "array") {
            emit(u, {{handle_array(el.text, el.position)}}, el.position);
        } else if (n == "read") {
            emit(u, {{handle_read(read_spec(el), el.position)}}, el.position);
        } else if (n == "out") {
            std::vector<OutPiece> pieces;
            for (const auto& c : el.children)
                pieces.push_back({c.name == "write" ? OutPiece::Kind::Write : OutPiece::Kind::Writev, c.text, c.position});
            emit(u, {{handle_out(pieces, true, table_, u.chain, options_, el.position)}}, el.position);
        } else if (n == "write" || n == "writev") {
            const OutPiece piece{n == "write" ? OutPiece::Kind::Write : OutPiece::Kind::Writev, el.text, el.position};
            emit(u, {{handle_out({piece}, false, table_, u.chain, options_, el.position)}}, el.position);
        } else if (n == "dB") {
            if (u.db.open && u.tracker.top() == BlockKind::Try)
                close_db(u, el.position);
            emit(u, handle_db(db_spec(el), u.db, el.position), el.position);
            u.tracker.push(BlockKind::Try, el.position);
            ++u.depth;
        } else if (n == "ps") {
            const auto stmt = prepared_statement_name(u.ps_count++);
            Diagnostics notes;
            const auto lines = handle_ps(el, stmt, u.db, table_, u.chain, notes);
            diags_.insert(diags_.end(), notes.begin(), notes.end());
            emit(u, lines, el.position);
        } else if (n == "s") {
            control(el, u);
        } else if (n == "redirect") {
            emit(u, {{handle_redirect(el.text)}}, el.position);
        } else if (n == "include") {
            emit_action(u, handle_include(el.text), el);
        } else if (n == "forward") {
            emit_action(u, handle_forward(el.text, texts_of(el, "pname"), el.position), el);
        } else if (n == "class") {
            emit(u, handle_class(el.text, texts_of(el, "pname"), table_, u.chain, el.position), el.position);
        } else if (n == "session") {
            emit(u, handle_session(texts_of(el, "set"), table_, u.chain, el.position), el.position);
        } else {
            throw TranslationError("UnknownTag", el.position, "no handler for <" + n + ">");
        }
    }

    void control(const Element& el, Unit& u)
    {
        Statement s;
        try {
            s = parse_statement(el.text, el.position);
        } catch (const TranslationError&) {
            // Keep the block structure so one bad header does not cascade.
            const auto t = trim(el.text);
            if (t.substr(0, 2) == "if" && (t.size() == 2 || !std::isalpha(static_cast<unsigned char>(t[2]))))
                u.tracker.push(BlockKind::If, el.position);
            else if (t.substr(0, 5) == "loop ")
                u.tracker.push(BlockKind::Loop, el.position);
            throw;
        }

        const bool closes = s.kind == Statement::Kind::Else || s.kind == Statement::Kind::EndIf || s.kind == Statement::Kind::EndLoop;
        if (closes && u.db.open && u.tracker.top() == BlockKind::Try)
            close_db(u, el.position);

        if (auto d = u.tracker.track(s, el.position))
            throw TranslationError(d->code, d->position, d->message);

        switch (s.kind) {
        case Statement::Kind::If:
            emit(u, {{"if(" + s.condition + "){"}}, el.position);
            ++u.depth;
            break;
        case Statement::Kind::Loop:
            emit(u, {{translate_loop_header(s.loop, options_.strict, table_, u.chain, el.position)}}, el.position);
            ++u.depth;
            break;
        case Statement::Kind::Else:
            --u.depth;
            emit(u, {{"}"}, {"else {"}}, el.position);
            ++u.depth;
            break;
        case Statement::Kind::EndIf:
        case Statement::Kind::EndLoop:
            --u.depth;
            emit(u, {{"}"}}, el.position);
            break;
        }
    }

    const SymbolTable& table_;
    const TranslationOptions& options_;
    ProgramSink& sink_;
    Diagnostics diags_;
    Unit body_;
    std::optional<Unit> function_;
    std::optional<FunctionHeader> header_;
};

}  // namespace

Diagnostics translate(EventReader& events, const SymbolTable& table, const TranslationOptions& options, ProgramSink& sink)
{
    Translator t(table, options, sink);
    walk_document(events, t);
    return t.take();
}

TranslationResult translate(const DocumentSource& source, const SymbolTable& table, const TranslationOptions& options)
{
    auto in = source.open();
    EventReader reader(*in);
    ProgramCollector collector;
    auto diags = translate(reader, table, options, collector);
    return {std::move(collector.program), std::move(diags)};
}

}  // namespace xml2jsp
