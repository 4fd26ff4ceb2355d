#include "xml2jsp/schema.hpp"

#include <algorithm>
#include <sstream>

namespace xml2jsp {

namespace {

bool is_blank(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

std::string quote_tag(std::string_view t) { return "<" + std::string(t) + ">"; }

std::string xml_attr_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::shared_ptr<const Pattern> compiled(std::string_view p) { return std::make_shared<const Pattern>(std::string(p)); }

Schema make_builtin()
{
    Schema s;
    s.identifier_pattern = std::string(identifier_pattern);
    const auto ident = compiled(identifier_pattern);
    const auto binding = compiled(R"(\s*_*[A-Za-z][\w_]*\s*=[\s\S]*)");

    const std::vector<std::string> body = {"var", "array", "read", "out", "write", "writev", "dB", "ps", "s",
        "redirect", "include", "forward", "class", "session"};
    std::vector<std::string> top_body = body;
    top_body.push_back("function");

    auto add = [&](std::string name, ContentModel model) {
        TagRule r;
        r.tag_name = name;
        r.content = std::move(model);
        s.rules.emplace(std::move(name), std::move(r));
    };
    auto text = [&](std::string name, std::shared_ptr<const Pattern> p = nullptr) { add(std::move(name), TextOnly{std::move(p)}); };

    add("root", Sequence{{{{"declare"}, Cardinality::Optional}, {top_body, Cardinality::ZeroOrMore}}});
    add("declare", Choice{{"var", "array"}});
    text("var", binding);
    text("array");
    add("read", Mixed{nullptr, {{{"object"}, Cardinality::Required}, {{"type"}, Cardinality::Required}, {{"name"}, Cardinality::Required}}});
    text("object");
    text("type");
    text("name");
    add("out", Choice{{"write", "writev"}});
    text("write");
    text("writev", ident);
    add("dB", Unordered{{"driver", "url", "uid", "pwd", "conn_name"}, {"excep_msg"}});
    text("driver");
    text("url");
    text("uid");
    text("pwd");
    text("conn_name", ident);
    text("excep_msg");
    text("s");
    add("function", Sequence{{{{"header"}, Cardinality::Required}, {body, Cardinality::ZeroOrMore}}});
    text("header");
    text("redirect");
    add("ps", Sequence{{{{"var"}, Cardinality::ZeroOrMore}, {{"query"}, Cardinality::Required},
                  {{"read", "set"}, Cardinality::ZeroOrMore}, {{"result"}, Cardinality::Optional}, {{"get"}, Cardinality::ZeroOrMore}}});
    text("query");
    text("set");
    text("result", ident);
    text("get");
    add("class", Mixed{nullptr, {{{"pname"}, Cardinality::ZeroOrMore}}});
    text("pname");
    text("include");
    add("forward", Mixed{nullptr, {{{"pname"}, Cardinality::ZeroOrMore}}});
    add("session", Sequence{{{{"set"}, Cardinality::Required}, {{"set"}, Cardinality::ZeroOrMore}}});

    for (const auto& [name, rule] : s.rules)
        for (const auto& child : rule.child_names())
            s.rules.at(child).allowed_parents.insert(name);
    return s;
}

}  // namespace

bool Particle::contains(std::string_view name) const
{
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::set<std::string> TagRule::child_names() const
{
    std::set<std::string> out;
    auto from_particles = [&](const std::vector<Particle>& ps) {
        for (const auto& p : ps)
            out.insert(p.names.begin(), p.names.end());
    };
    std::visit(overloaded{
                   [](const TextOnly&) {},
                   [&](const Sequence& m) { from_particles(m.particles); },
                   [&](const Choice& m) { out.insert(m.names.begin(), m.names.end()); },
                   [&](const Unordered& m) {
                       out.insert(m.required.begin(), m.required.end());
                       out.insert(m.optional.begin(), m.optional.end());
                   },
                   [&](const Mixed& m) { from_particles(m.particles); },
               },
        content);
    return out;
}

const TagRule* Schema::find(std::string_view tag) const
{
    auto it = rules.find(tag);
    return it == rules.end() ? nullptr : &it->second;
}

const Schema& builtin_schema()
{
    static const Schema schema = make_builtin();
    return schema;
}

std::string_view to_string(ValidationCode c)
{
    switch (c) {
    case ValidationCode::UnknownTag: return "UnknownTag";
    case ValidationCode::IllegalChild: return "IllegalChild";
    case ValidationCode::MissingChild: return "MissingChild";
    case ValidationCode::OutOfOrderChild: return "OutOfOrderChild";
    case ValidationCode::PatternMismatch: return "PatternMismatch";
    case ValidationCode::TextWhereForbidden: return "TextWhereForbidden";
    case ValidationCode::AttributePresent: return "AttributePresent";
    }
    return "?";
}

Diagnostic ValidationDiagnostic::to_diagnostic() const
{
    return {Severity::Error, std::string(to_string(code)), position, message};
}

struct Validator::Frame {
    const TagRule* rule = nullptr;  // null: subtree already rejected, not checked further
    std::string tag;
    SourcePosition position;
    std::size_t particle = 0;
    std::size_t count = 0;
    std::set<std::string> seen;
    std::string text;
    bool text_reported = false;
};

Validator::Validator(const Schema& schema) : schema_(schema) {}

Validator::~Validator() = default;

void Validator::report(ValidationCode code, SourcePosition pos, std::string tag, std::string message)
{
    diags_.push_back({code, pos, std::move(tag), std::move(message)});
}

void Validator::feed(const XmlEvent& ev)
{
    switch (ev.kind) {
    case EventKind::StartElement: start_element(ev); break;
    case EventKind::EndElement: end_element(ev); break;
    case EventKind::Characters: characters(ev); break;
    default: break;
    }
}

namespace {

const std::vector<Particle>* particles_of(const ContentModel& m)
{
    if (const auto* s = std::get_if<Sequence>(&m))
        return &s->particles;
    if (const auto* x = std::get_if<Mixed>(&m))
        return &x->particles;
    return nullptr;
}

bool particle_satisfied(const Particle& p, std::size_t count)
{
    return p.cardinality != Cardinality::Required || count > 0;
}

}  // namespace

bool Validator::accept_child(Frame& parent, const std::string& name, SourcePosition pos)
{
    const auto& model = parent.rule->content;
    const std::string where = "under " + quote_tag(parent.tag);

    if (std::holds_alternative<TextOnly>(model)) {
        report(ValidationCode::IllegalChild, pos, name, quote_tag(name) + " is not allowed " + where + ", which holds text only");
        return false;
    }
    if (const auto* choice = std::get_if<Choice>(&model)) {
        if (std::find(choice->names.begin(), choice->names.end(), name) != choice->names.end())
            return true;
        report(ValidationCode::IllegalChild, pos, name, quote_tag(name) + " is not allowed " + where);
        return false;
    }
    if (const auto* all = std::get_if<Unordered>(&model)) {
        const bool known = std::find(all->required.begin(), all->required.end(), name) != all->required.end()
            || std::find(all->optional.begin(), all->optional.end(), name) != all->optional.end();
        if (!known) {
            report(ValidationCode::IllegalChild, pos, name, quote_tag(name) + " is not allowed " + where);
            return false;
        }
        if (!parent.seen.insert(name).second) {
            report(ValidationCode::IllegalChild, pos, name, "duplicate " + quote_tag(name) + " " + where);
            return false;
        }
        return true;
    }

    const auto& particles = *particles_of(model);
    for (std::size_t j = parent.particle; j < particles.size(); ++j) {
        const std::size_t count = j == parent.particle ? parent.count : 0;
        const auto& p = particles[j];
        if (p.contains(name) && (p.cardinality == Cardinality::ZeroOrMore || count == 0)) {
            for (std::size_t k = parent.particle; k < j; ++k) {
                const std::size_t c = k == parent.particle ? parent.count : 0;
                if (!particle_satisfied(particles[k], c))
                    report(ValidationCode::MissingChild, pos, parent.tag,
                        quote_tag(parent.tag) + " requires " + quote_tag(particles[k].names.front()) + " before " + quote_tag(name));
            }
            parent.particle = j;
            parent.count = count + 1;
            return true;
        }
    }
    const bool anywhere = std::any_of(particles.begin(), particles.end(), [&](const Particle& p) { return p.contains(name); });
    if (anywhere)
        report(ValidationCode::OutOfOrderChild, pos, name, quote_tag(name) + " is out of order or repeated " + where);
    else
        report(ValidationCode::IllegalChild, pos, name, quote_tag(name) + " is not allowed " + where);
    return false;
}

void Validator::start_element(const XmlEvent& ev)
{
    Frame frame;
    frame.tag = ev.name;
    frame.position = ev.position;

    const bool parent_skipped = !stack_.empty() && stack_.back().rule == nullptr;
    if (!parent_skipped) {
        for (const auto& a : ev.attributes)
            report(ValidationCode::AttributePresent, a.position, ev.name,
                "attribute '" + a.name + "' on " + quote_tag(ev.name) + ": the dialect uses no attributes");

        const TagRule* rule = schema_.find(ev.name);
        if (!rule) {
            report(ValidationCode::UnknownTag, ev.position, ev.name, "unknown tag " + quote_tag(ev.name));
        } else if (stack_.empty()) {
            if (ev.name == schema_.root_tag)
                frame.rule = rule;
            else
                report(ValidationCode::IllegalChild, ev.position, ev.name,
                    "document element must be " + quote_tag(schema_.root_tag) + ", not " + quote_tag(ev.name));
        } else if (accept_child(stack_.back(), ev.name, ev.position)) {
            frame.rule = rule;
        }
    }
    stack_.push_back(std::move(frame));
}

void Validator::characters(const XmlEvent& ev)
{
    if (stack_.empty())
        return;
    Frame& f = stack_.back();
    if (!f.rule)
        return;
    const auto& model = f.rule->content;
    if (std::holds_alternative<TextOnly>(model) || std::holds_alternative<Mixed>(model)) {
        f.text += ev.text;
        return;
    }
    if (!f.text_reported && !is_blank(ev.text)) {
        f.text_reported = true;
        report(ValidationCode::TextWhereForbidden, ev.position, f.tag, "text is not allowed directly inside " + quote_tag(f.tag));
    }
}

void Validator::end_element(const XmlEvent& ev)
{
    if (stack_.empty())
        return;
    Frame f = std::move(stack_.back());
    stack_.pop_back();
    if (!f.rule)
        return;

    const auto& model = f.rule->content;
    const Pattern* pattern = nullptr;
    if (const auto* t = std::get_if<TextOnly>(&model))
        pattern = t->pattern.get();
    else if (const auto* m = std::get_if<Mixed>(&model))
        pattern = m->pattern.get();
    if (pattern && !pattern->matches(f.text))
        report(ValidationCode::PatternMismatch, f.position, f.tag,
            "text '" + f.text + "' of " + quote_tag(f.tag) + " does not match pattern " + pattern->source());

    if (const auto* all = std::get_if<Unordered>(&model)) {
        for (const auto& req : all->required)
            if (!f.seen.contains(req))
                report(ValidationCode::MissingChild, ev.position, f.tag, quote_tag(f.tag) + " requires " + quote_tag(req));
    }
    if (const auto* particles = particles_of(model)) {
        for (std::size_t k = f.particle; k < particles->size(); ++k) {
            const std::size_t c = k == f.particle ? f.count : 0;
            if (!particle_satisfied((*particles)[k], c))
                report(ValidationCode::MissingChild, ev.position, f.tag,
                    quote_tag(f.tag) + " requires " + quote_tag((*particles)[k].names.front()));
        }
    }
}

std::vector<ValidationDiagnostic> validate_stream(EventReader& events, const Schema& schema)
{
    Validator v(schema);
    while (auto ev = events.next())
        v.feed(*ev);
    return v.diagnostics();
}

namespace {

void write_occurs(std::ostream& os, Cardinality c)
{
    switch (c) {
    case Cardinality::Required: break;
    case Cardinality::Optional: os << " minOccurs=\"0\""; break;
    case Cardinality::ZeroOrMore: os << " minOccurs=\"0\" maxOccurs=\"unbounded\""; break;
    }
}

void write_element(std::ostream& os, const std::string& indent, const std::string& name, std::string_view occurs = {})
{
    os << indent << "<xs:element name=\"" << name << "\" type=\"" << name << "\"" << occurs << "/>\n";
}

void write_particles(std::ostream& os, const std::vector<Particle>& particles)
{
    os << "    <xs:sequence>\n";
    for (const auto& p : particles) {
        std::ostringstream occurs;
        write_occurs(occurs, p.cardinality);
        if (p.names.size() == 1) {
            write_element(os, "      ", p.names.front(), occurs.str());
        } else {
            os << "      <xs:choice" << occurs.str() << ">\n";
            for (const auto& n : p.names)
                write_element(os, "        ", n);
            os << "      </xs:choice>\n";
        }
    }
    os << "    </xs:sequence>\n";
}

void write_simple(std::ostream& os, const std::string& name, const Pattern* pattern)
{
    os << "  <xs:simpleType name=\"" << name << "\">\n";
    if (pattern) {
        os << "    <xs:restriction base=\"xs:string\">\n";
        os << "      <xs:pattern value=\"" << xml_attr_escape(to_xsd_pattern(pattern->source())) << "\"/>\n";
        os << "    </xs:restriction>\n";
    } else {
        os << "    <xs:restriction base=\"xs:string\"/>\n";
    }
    os << "  </xs:simpleType>\n";
}

}  // namespace

void export_xsd(const Schema& schema, std::ostream& sink)
{
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\">\n";
    os << "  <xs:element name=\"" << schema.root_tag << "\" type=\"" << schema.root_tag << "\"/>\n";
    for (const auto& [name, rule] : schema.rules) {
        std::visit(overloaded{
                       [&](const TextOnly& m) { write_simple(os, name, m.pattern.get()); },
                       [&](const Sequence& m) {
                           os << "  <xs:complexType name=\"" << name << "\">\n";
                           write_particles(os, m.particles);
                           os << "  </xs:complexType>\n";
                       },
                       [&](const Choice& m) {
                           os << "  <xs:complexType name=\"" << name << "\">\n";
                           os << "    <xs:choice minOccurs=\"0\" maxOccurs=\"unbounded\">\n";
                           for (const auto& n : m.names)
                               write_element(os, "      ", n);
                           os << "    </xs:choice>\n";
                           os << "  </xs:complexType>\n";
                       },
                       [&](const Unordered& m) {
                           os << "  <xs:complexType name=\"" << name << "\">\n";
                           os << "    <xs:all>\n";
                           for (const auto& n : m.required)
                               write_element(os, "      ", n);
                           for (const auto& n : m.optional)
                               write_element(os, "      ", n, " minOccurs=\"0\"");
                           os << "    </xs:all>\n";
                           os << "  </xs:complexType>\n";
                       },
                       [&](const Mixed& m) {
                           // Text facets cannot constrain mixed content in XSD 1.0.
                           if (m.pattern)
                               throw std::logic_error("mixed content with a text pattern has no XSD 1.0 equivalent");
                           os << "  <xs:complexType name=\"" << name << "\" mixed=\"true\">\n";
                           write_particles(os, m.particles);
                           os << "  </xs:complexType>\n";
                       },
                   },
            rule.content);
    }
    os << "</xs:schema>\n";
    sink << os.str();
    if (!sink)
        throw std::runtime_error("failed to write XSD");
}

}  // namespace xml2jsp
