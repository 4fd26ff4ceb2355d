#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xml2jsp/source_position.hpp"

namespace xml2jsp {

enum class EventKind { StartDocument, EndDocument, StartElement, EndElement, Characters };

std::string_view to_string(EventKind k);

struct Attribute {
    std::string name;
    std::string value;
    SourcePosition position;
};

/// One streaming parse event. `name` is set for element events, `text` for
/// Characters. Attributes are reported on StartElement so that consumers can
/// reject them; the dialect itself uses none.
struct XmlEvent {
    EventKind kind = EventKind::StartDocument;
    std::string name;
    std::string text;
    SourcePosition position;
    std::vector<Attribute> attributes;
};

enum class ReaderErrorCode {
    UnexpectedEof,
    MismatchedCloseTag,
    IllegalCharacter,
    BadEntity,
    MultipleRoots,
    BadProlog,
    DepthExceeded,
};

std::string_view to_string(ReaderErrorCode c);

class ReaderError : public std::runtime_error {
public:
    ReaderError(ReaderErrorCode code, SourcePosition pos, const std::string& detail);

    ReaderErrorCode code() const noexcept { return code_; }
    const SourcePosition& position() const noexcept { return position_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ReaderErrorCode code_;
    SourcePosition position_;
    std::string detail_;
};

/// Pull reader over a UTF-8 byte stream. Supports the XML subset used by the
/// dialect: elements, attributes (reported, never interpreted), character
/// data with the predefined and numeric entities, comments and an optional
/// XML declaration. DOCTYPE, CDATA and processing instructions are rejected.
///
/// Memory held is bounded by the longest text node plus the nesting depth.
/// A reader is single-consumer; the stream must outlive it.
class EventReader {
public:
    static constexpr std::size_t max_depth = 256;

    explicit EventReader(std::istream& in);

    EventReader(const EventReader&) = delete;
    EventReader& operator=(const EventReader&) = delete;

    /// Next event, or nullopt once EndDocument has been returned.
    /// Throws ReaderError on malformed input; the reader is unusable afterwards.
    std::optional<XmlEvent> next();

    std::size_t depth() const noexcept { return open_.size(); }

private:
    int peek();
    int get();
    void expect(std::string_view s, ReaderErrorCode code);
    void skip_space();

    void read_xml_declaration(SourcePosition start);
    void skip_comment(SourcePosition start);
    std::string read_name(ReaderErrorCode code);
    void read_entity(std::string& out);
    void read_markup(SourcePosition start);
    void read_start_tag(SourcePosition start);
    void read_end_tag(SourcePosition start);
    void flush_text();
    void fill();

    [[noreturn]] void fail(ReaderErrorCode code, SourcePosition pos, const std::string& detail);

    std::istream& in_;
    SourcePosition pos_;
    std::deque<XmlEvent> pending_;
    std::vector<std::pair<std::string, SourcePosition>> open_;
    std::string text_;
    SourcePosition text_start_;
    bool started_ = false;
    bool root_seen_ = false;
    bool finished_ = false;
    bool done_ = false;
    std::uint64_t content_start_ = 0;
    std::string utf8_tail_;
};

}  // namespace xml2jsp
