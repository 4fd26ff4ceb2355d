#include "xml2jsp/event_reader.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>
#include <string>

namespace xml2jsp {

namespace {

constexpr int eof = std::char_traits<char>::eof();

bool is_space(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(int c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':'; }

bool is_name_char(int c) { return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.'; }

bool is_xml_char(std::uint32_t cp)
{
    return cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) || (cp >= 0xE000 && cp <= 0xFFFD)
        || (cp >= 0x10000 && cp <= 0x10FFFF);
}

void append_utf8(std::string& out, std::uint32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::string_view to_string(EventKind k)
{
    switch (k) {
    case EventKind::StartDocument: return "StartDocument";
    case EventKind::EndDocument: return "EndDocument";
    case EventKind::StartElement: return "StartElement";
    case EventKind::EndElement: return "EndElement";
    case EventKind::Characters: return "Characters";
    }
    return "?";
}

std::string_view to_string(ReaderErrorCode c)
{
    switch (c) {
    case ReaderErrorCode::UnexpectedEof: return "UnexpectedEof";
    case ReaderErrorCode::MismatchedCloseTag: return "MismatchedCloseTag";
    case ReaderErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ReaderErrorCode::BadEntity: return "BadEntity";
    case ReaderErrorCode::MultipleRoots: return "MultipleRoots";
    case ReaderErrorCode::BadProlog: return "BadProlog";
    case ReaderErrorCode::DepthExceeded: return "DepthExceeded";
    }
    return "?";
}

ReaderError::ReaderError(ReaderErrorCode code, SourcePosition pos, const std::string& detail)
    : std::runtime_error(detail), code_(code), position_(pos), detail_(detail)
{
}

EventReader::EventReader(std::istream& in) : in_(in) {}

void EventReader::fail(ReaderErrorCode code, SourcePosition pos, const std::string& detail)
{
    done_ = true;
    throw ReaderError(code, pos, detail);
}

int EventReader::peek()
{
    return in_.rdbuf()->sgetc();
}

// Consumes one byte, validating UTF-8 structure and XML character rules and
// normalizing line ends to '\n'. Multi-byte sequences are passed through
// byte by byte; only the lead byte advances the column.
int EventReader::get()
{
    auto* buf = in_.rdbuf();
    const SourcePosition here = pos_;
    utf8_tail_.clear();
    int c = buf->sbumpc();
    if (c == eof)
        return eof;
    ++pos_.byte_offset;
    const auto b = static_cast<unsigned char>(c);

    if (b == '\r') {
        if (buf->sgetc() == '\n') {
            buf->sbumpc();
            ++pos_.byte_offset;
        }
        ++pos_.line;
        pos_.column = 1;
        return '\n';
    }
    if (b == '\n') {
        ++pos_.line;
        pos_.column = 1;
        return c;
    }
    if (b < 0x80) {
        if (b < 0x20 && b != '\t')
            fail(ReaderErrorCode::IllegalCharacter, here, "control character 0x" + std::to_string(b) + " is not allowed");
        ++pos_.column;
        return c;
    }

    int continuation = 0;
    std::uint32_t cp = 0;
    if (b >= 0xC2 && b <= 0xDF) {
        continuation = 1;
        cp = b & 0x1F;
    } else if (b >= 0xE0 && b <= 0xEF) {
        continuation = 2;
        cp = b & 0x0F;
    } else if (b >= 0xF0 && b <= 0xF4) {
        continuation = 3;
        cp = b & 0x07;
    } else {
        fail(ReaderErrorCode::IllegalCharacter, here, "invalid UTF-8 lead byte");
    }
    // The continuation bytes are validated here but handed to the caller one
    // at a time via the pushback buffer.
    std::string seq(1, static_cast<char>(b));
    for (int i = 0; i < continuation; ++i) {
        int n = buf->sgetc();
        if (n == eof || (static_cast<unsigned char>(n) & 0xC0) != 0x80)
            fail(ReaderErrorCode::IllegalCharacter, here, "truncated UTF-8 sequence");
        cp = (cp << 6) | (static_cast<unsigned char>(n) & 0x3F);
        seq += static_cast<char>(buf->sbumpc());
    }
    if (!is_xml_char(cp) || (continuation == 2 && cp < 0x800) || (continuation == 3 && cp < 0x10000))
        fail(ReaderErrorCode::IllegalCharacter, here, "code point is not a legal XML character");
    pos_.byte_offset += static_cast<std::uint64_t>(continuation);
    ++pos_.column;
    utf8_tail_.assign(seq.begin() + 1, seq.end());
    return c;
}

void EventReader::expect(std::string_view s, ReaderErrorCode code)
{
    for (char ch : s) {
        const SourcePosition here = pos_;
        int c = get();
        if (c == eof)
            fail(ReaderErrorCode::UnexpectedEof, here, "unexpected end of input, expected '" + std::string(s) + "'");
        if (c != static_cast<unsigned char>(ch))
            fail(code, here, "expected '" + std::string(s) + "'");
    }
}

void EventReader::skip_space()
{
    while (is_space(peek()))
        get();
}

std::string EventReader::read_name(ReaderErrorCode code)
{
    const SourcePosition here = pos_;
    int c = peek();
    if (c == eof)
        fail(ReaderErrorCode::UnexpectedEof, here, "unexpected end of input, expected a name");
    if (!is_name_start(c))
        fail(code, here, "illegal character in name");
    std::string name;
    while (is_name_char(peek()))
        name += static_cast<char>(get());
    return name;
}

void EventReader::read_entity(std::string& out)
{
    const SourcePosition start = pos_;
    get();  // '&'
    std::string ref;
    for (;;) {
        int c = get();
        if (c == eof)
            fail(ReaderErrorCode::UnexpectedEof, start, "unterminated entity reference");
        if (c == ';')
            break;
        if (ref.size() > 10 || is_space(c) || c == '<' || c == '&')
            fail(ReaderErrorCode::BadEntity, start, "malformed entity reference");
        ref += static_cast<char>(c);
    }
    if (ref == "lt") {
        out += '<';
    } else if (ref == "gt") {
        out += '>';
    } else if (ref == "amp") {
        out += '&';
    } else if (ref == "quot") {
        out += '"';
    } else if (ref == "apos") {
        out += '\'';
    } else if (ref.size() > 1 && ref[0] == '#') {
        const bool hex = ref[1] == 'x';
        const std::string digits = ref.substr(hex ? 2 : 1);
        if (digits.empty() || digits.size() > 8)
            fail(ReaderErrorCode::BadEntity, start, "malformed character reference &" + ref + ";");
        std::uint32_t cp = 0;
        for (char d : digits) {
            int v = -1;
            if (d >= '0' && d <= '9')
                v = d - '0';
            else if (hex && d >= 'a' && d <= 'f')
                v = d - 'a' + 10;
            else if (hex && d >= 'A' && d <= 'F')
                v = d - 'A' + 10;
            if (v < 0)
                fail(ReaderErrorCode::BadEntity, start, "malformed character reference &" + ref + ";");
            cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        }
        if (!is_xml_char(cp))
            fail(ReaderErrorCode::BadEntity, start, "character reference &" + ref + "; is not a legal XML character");
        append_utf8(out, cp);
    } else {
        fail(ReaderErrorCode::BadEntity, start, "unknown entity &" + ref + ";");
    }
}

void EventReader::skip_comment(SourcePosition start)
{
    int dashes = 0;
    for (;;) {
        int c = get();
        if (c == eof)
            fail(ReaderErrorCode::UnexpectedEof, start, "unterminated comment");
        if (c == '>' && dashes >= 2)
            return;
        dashes = c == '-' ? dashes + 1 : 0;
    }
}

void EventReader::read_xml_declaration(SourcePosition start)
{
    if (start.byte_offset != content_start_)
        fail(ReaderErrorCode::BadProlog, start, "XML declaration is only allowed at the start of the document");

    bool saw_version = false;
    bool first = true;
    for (;;) {
        const bool spaced = is_space(peek());
        skip_space();
        int c = peek();
        if (c == eof)
            fail(ReaderErrorCode::BadProlog, start, "unterminated XML declaration");
        if (c == '?') {
            get();
            if (get() != '>')
                fail(ReaderErrorCode::BadProlog, start, "malformed XML declaration terminator");
            break;
        }
        if (!spaced || !is_name_start(c))
            fail(ReaderErrorCode::BadProlog, pos_, "malformed XML declaration");
        std::string name;
        while (is_name_char(peek()))
            name += static_cast<char>(get());
        skip_space();
        if (get() != '=')
            fail(ReaderErrorCode::BadProlog, pos_, "expected '=' in XML declaration");
        skip_space();
        int quote = get();
        if (quote != '"' && quote != '\'')
            fail(ReaderErrorCode::BadProlog, pos_, "expected quoted value in XML declaration");
        std::string value;
        for (int v = get(); v != quote; v = get()) {
            if (v == eof || v == '<')
                fail(ReaderErrorCode::BadProlog, start, "unterminated value in XML declaration");
            value += static_cast<char>(v);
            value += utf8_tail_;
        }
        if (first && name != "version")
            fail(ReaderErrorCode::BadProlog, start, "XML declaration must start with version");
        first = false;
        if (name == "version") {
            if (value.size() < 3 || value.compare(0, 2, "1.") != 0)
                fail(ReaderErrorCode::BadProlog, start, "unsupported XML version '" + value + "'");
            saw_version = true;
        } else if (name == "encoding") {
            const auto enc = lower(value);
            if (enc != "utf-8" && enc != "utf8")
                fail(ReaderErrorCode::BadProlog, start, "only UTF-8 input is supported, got '" + value + "'");
        } else if (name == "standalone") {
            if (value != "yes" && value != "no")
                fail(ReaderErrorCode::BadProlog, start, "standalone must be yes or no");
        } else {
            fail(ReaderErrorCode::BadProlog, start, "unknown XML declaration field '" + name + "'");
        }
    }
    if (!saw_version)
        fail(ReaderErrorCode::BadProlog, start, "XML declaration without version");
}

void EventReader::flush_text()
{
    if (text_.empty())
        return;
    XmlEvent ev;
    ev.kind = EventKind::Characters;
    ev.text = std::move(text_);
    ev.position = text_start_;
    pending_.push_back(std::move(ev));
    text_.clear();
}

void EventReader::read_start_tag(SourcePosition start)
{
    if (root_seen_ && open_.empty())
        fail(ReaderErrorCode::MultipleRoots, start, "a document has exactly one root element");
    if (open_.size() >= max_depth)
        fail(ReaderErrorCode::DepthExceeded, start, "nesting deeper than " + std::to_string(max_depth) + " elements");

    XmlEvent ev;
    ev.kind = EventKind::StartElement;
    ev.position = start;
    ev.name = read_name(ReaderErrorCode::IllegalCharacter);

    bool self_closing = false;
    SourcePosition end_pos;
    for (;;) {
        const bool spaced = is_space(peek());
        skip_space();
        const SourcePosition here = pos_;
        int c = peek();
        if (c == eof)
            fail(ReaderErrorCode::UnexpectedEof, start, "unterminated start tag <" + ev.name + ">");
        if (c == '/') {
            get();
            if (get() != '>')
                fail(ReaderErrorCode::IllegalCharacter, here, "expected '/>'");
            self_closing = true;
            end_pos = here;
            break;
        }
        if (c == '>') {
            get();
            break;
        }
        if (!spaced)
            fail(ReaderErrorCode::IllegalCharacter, here, "expected whitespace before attribute");
        Attribute attr;
        attr.position = here;
        attr.name = read_name(ReaderErrorCode::IllegalCharacter);
        skip_space();
        if (get() != '=')
            fail(ReaderErrorCode::IllegalCharacter, here, "expected '=' after attribute name");
        skip_space();
        int quote = get();
        if (quote != '"' && quote != '\'')
            fail(ReaderErrorCode::IllegalCharacter, here, "attribute value must be quoted");
        for (;;) {
            int v = peek();
            if (v == eof)
                fail(ReaderErrorCode::UnexpectedEof, here, "unterminated attribute value");
            if (v == quote) {
                get();
                break;
            }
            if (v == '<')
                fail(ReaderErrorCode::IllegalCharacter, pos_, "'<' is not allowed in attribute values");
            if (v == '&') {
                read_entity(attr.value);
                continue;
            }
            attr.value += static_cast<char>(get());
            attr.value += utf8_tail_;
        }
        ev.attributes.push_back(std::move(attr));
    }

    root_seen_ = true;
    if (self_closing) {
        XmlEvent end;
        end.kind = EventKind::EndElement;
        end.name = ev.name;
        end.position = end_pos;
        pending_.push_back(std::move(ev));
        pending_.push_back(std::move(end));
    } else {
        open_.emplace_back(ev.name, start);
        pending_.push_back(std::move(ev));
    }
}

void EventReader::read_end_tag(SourcePosition start)
{
    const std::string name = read_name(ReaderErrorCode::IllegalCharacter);
    skip_space();
    const SourcePosition here = pos_;
    int c = get();
    if (c == eof)
        fail(ReaderErrorCode::UnexpectedEof, start, "unterminated end tag </" + name + ">");
    if (c != '>')
        fail(ReaderErrorCode::IllegalCharacter, here, "expected '>' to close end tag");
    if (open_.empty())
        fail(ReaderErrorCode::MismatchedCloseTag, start, "end tag </" + name + "> without an open element");
    const auto& [open_name, open_pos] = open_.back();
    if (open_name != name) {
        std::ostringstream msg;
        msg << "end tag </" << name << "> does not match <" << open_name << "> opened at " << open_pos;
        fail(ReaderErrorCode::MismatchedCloseTag, start, msg.str());
    }
    open_.pop_back();
    XmlEvent ev;
    ev.kind = EventKind::EndElement;
    ev.name = name;
    ev.position = start;
    pending_.push_back(std::move(ev));
}

void EventReader::read_markup(SourcePosition start)
{
    int c = peek();
    if (c == '!') {
        get();
        if (peek() == '-') {
            expect("--", ReaderErrorCode::IllegalCharacter);
            skip_comment(start);
            return;
        }
        if (peek() == '[')
            fail(ReaderErrorCode::IllegalCharacter, start, "CDATA sections are not supported");
        fail(ReaderErrorCode::IllegalCharacter, start, "DOCTYPE and markup declarations are not supported");
    }
    if (c == '?') {
        get();
        const std::string target = read_name(ReaderErrorCode::IllegalCharacter);
        if (lower(target) == "xml")
            read_xml_declaration(start);
        else
            fail(ReaderErrorCode::IllegalCharacter, start, "processing instructions are not supported");
        return;
    }
    flush_text();
    if (c == '/') {
        get();
        read_end_tag(start);
    } else {
        read_start_tag(start);
    }
}

void EventReader::fill()
{
    const SourcePosition here = pos_;
    int c = peek();
    if (c == eof) {
        if (!open_.empty()) {
            std::ostringstream msg;
            msg << "end of input inside <" << open_.back().first << "> opened at " << open_.back().second;
            fail(ReaderErrorCode::UnexpectedEof, here, msg.str());
        }
        if (!root_seen_)
            fail(ReaderErrorCode::UnexpectedEof, here, "document has no root element");
        XmlEvent ev;
        ev.kind = EventKind::EndDocument;
        ev.position = here;
        pending_.push_back(std::move(ev));
        finished_ = true;
        return;
    }
    if (c == '<') {
        get();
        read_markup(here);
        return;
    }
    if (open_.empty()) {
        get();
        if (!is_space(c))
            fail(ReaderErrorCode::IllegalCharacter, here, "character data outside the root element");
        return;
    }
    if (text_.empty())
        text_start_ = here;
    if (c == '&') {
        read_entity(text_);
        return;
    }
    text_ += static_cast<char>(get());
    text_ += utf8_tail_;
}

std::optional<XmlEvent> EventReader::next()
{
    if (done_)
        return std::nullopt;
    if (!started_) {
        started_ = true;
        // UTF-8 byte order mark
        auto* buf = in_.rdbuf();
        if (buf->sgetc() == 0xEF) {
            buf->sbumpc();
            if (buf->sgetc() != 0xBB || (buf->sbumpc(), buf->sgetc() != 0xBF))
                fail(ReaderErrorCode::IllegalCharacter, pos_, "invalid UTF-8 lead byte");
            buf->sbumpc();
            pos_.byte_offset = 3;
        }
        content_start_ = pos_.byte_offset;
        XmlEvent ev;
        ev.kind = EventKind::StartDocument;
        ev.position = pos_;
        return ev;
    }
    while (pending_.empty() && !finished_)
        fill();
    if (pending_.empty()) {
        done_ = true;
        return std::nullopt;
    }
    XmlEvent ev = std::move(pending_.front());
    pending_.pop_front();
    if (ev.kind == EventKind::EndDocument)
        done_ = true;
    return ev;
}

}  // namespace xml2jsp
