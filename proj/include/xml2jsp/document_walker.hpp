#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "xml2jsp/event_reader.hpp"

namespace xml2jsp {

/// A small subtree gathered from the event stream. Only leaf-level
/// statements are collected this way; `root`, `declare` and `function`
/// bodies are streamed element by element.
struct Element {
    std::string name;
    std::string text;  // concatenated direct character data
    SourcePosition position;
    SourcePosition end_position;
    std::vector<Element> children;

    const Element* child(std::string_view child_name) const;
    std::vector<const Element*> children_named(std::string_view child_name) const;
    std::string trimmed_text() const;
};

/// Reads the rest of the element opened by `start` (already consumed).
Element collect_element(EventReader& reader, const XmlEvent& start);

enum class Context { Declarations, Body, Function };

class DocumentVisitor {
public:
    virtual ~DocumentVisitor() = default;

    virtual void enter_function(const Element& header, SourcePosition function_start) = 0;
    virtual void leave_function(SourcePosition function_end) = 0;
    virtual void element(const Element& el, Context ctx) = 0;
    virtual void end_document(SourcePosition root_end) = 0;
};

/// Streams a schema-valid document through `visitor`. ReaderError propagates.
void walk_document(EventReader& reader, DocumentVisitor& visitor);

std::string_view trim(std::string_view s);

}  // namespace xml2jsp
