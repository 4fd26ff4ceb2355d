#include "xml2jsp/emitter.hpp"

#include <algorithm>
#include <sstream>

namespace xml2jsp {

namespace {

void write_line(std::ostream& out, const Fragment& f)
{
    out << std::string(static_cast<std::size_t>(std::max(f.depth, 0)) * 4, ' ') << f.text << '\n';
}

}  // namespace

void StreamingEmitter::body(BodyItem item)
{
    const bool scriptlet = item.kind == BodyItem::Kind::Scriptlet;
    if (scriptlet != in_scriptlet_) {
        body_ << (scriptlet ? "<%\n" : "%>\n");
        in_scriptlet_ = scriptlet;
    }
    write_line(body_, item.fragment);
}

void StreamingEmitter::finish_body()
{
    if (in_scriptlet_)
        body_ << "%>\n";
    in_scriptlet_ = false;
}

void StreamingEmitter::write_header(std::ostream& out, const TranslationOptions& options) const
{
    if (options.emit_imports)
        out << "<%@ page import=\"java.sql.*\" %>\n";
    if (declarations_.empty())
        return;
    out << "<%!\n";
    for (const auto& f : declarations_)
        write_line(out, f);
    out << "%>\n";
}

void emit_program(const JspProgram& program, std::ostream& out, const TranslationOptions& options)
{
    std::ostringstream body;
    StreamingEmitter emitter(body);
    for (const auto& f : program.declarations)
        emitter.declaration(f);
    for (const auto& item : program.body)
        emitter.body(item);
    emitter.finish_body();
    emitter.write_header(out, options);
    out << body.str();
}

std::string render_program(const JspProgram& program, const TranslationOptions& options)
{
    std::ostringstream out;
    emit_program(program, out, options);
    return out.str();
}

}  // namespace xml2jsp
