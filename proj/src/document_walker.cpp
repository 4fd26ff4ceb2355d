#include "xml2jsp/document_walker.hpp"

#include <optional>
#include <stdexcept>

namespace xml2jsp {

std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

const Element* Element::child(std::string_view child_name) const
{
    for (const auto& c : children)
        if (c.name == child_name)
            return &c;
    return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const
{
    std::vector<const Element*> out;
    for (const auto& c : children)
        if (c.name == child_name)
            out.push_back(&c);
    return out;
}

std::string Element::trimmed_text() const
{
    return std::string(trim(text));
}

Element collect_element(EventReader& reader, const XmlEvent& start)
{
    Element el;
    el.name = start.name;
    el.position = start.position;
    while (auto ev = reader.next()) {
        switch (ev->kind) {
        case EventKind::Characters: el.text += ev->text; break;
        case EventKind::StartElement: el.children.push_back(collect_element(reader, *ev)); break;
        case EventKind::EndElement: el.end_position = ev->position; return el;
        default: throw std::logic_error("unexpected document boundary inside <" + el.name + ">");
        }
    }
    throw std::logic_error("event stream ended inside <" + el.name + ">");
}

namespace {

// Streams the children of an already-opened container until its end tag.
template <class OnChild>
SourcePosition stream_children(EventReader& reader, OnChild&& on_child)
{
    while (auto ev = reader.next()) {
        if (ev->kind == EventKind::StartElement)
            on_child(*ev);
        else if (ev->kind == EventKind::EndElement)
            return ev->position;
        else if (ev->kind != EventKind::Characters)
            break;
    }
    throw std::logic_error("event stream ended inside a container element");
}

}  // namespace

void walk_document(EventReader& reader, DocumentVisitor& visitor)
{
    std::optional<XmlEvent> ev;
    while ((ev = reader.next()) && ev->kind != EventKind::StartElement) {
    }
    if (!ev)
        throw std::logic_error("document has no root element");

    const SourcePosition root_end = stream_children(reader, [&](const XmlEvent& child) {
        if (child.name == "declare") {
            stream_children(reader, [&](const XmlEvent& decl) { visitor.element(collect_element(reader, decl), Context::Declarations); });
        } else if (child.name == "function") {
            bool in_body = false;
            const SourcePosition end = stream_children(reader, [&](const XmlEvent& part) {
                Element el = collect_element(reader, part);
                if (!in_body) {
                    in_body = true;
                    visitor.enter_function(el, child.position);
                } else {
                    visitor.element(el, Context::Function);
                }
            });
            if (!in_body)
                visitor.enter_function(Element{}, child.position);
            visitor.leave_function(end);
        } else {
            visitor.element(collect_element(reader, child), Context::Body);
        }
    });
    visitor.end_document(root_end);
    while (reader.next()) {
    }
}

}  // namespace xml2jsp
