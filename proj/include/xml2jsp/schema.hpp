#pragma once

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xml2jsp/diagnostic.hpp"
#include "xml2jsp/event_reader.hpp"
#include "xml2jsp/pattern.hpp"

namespace xml2jsp {

enum class Cardinality { Required, Optional, ZeroOrMore };

/// One position in a sequence: any one of `names`, repeated per `cardinality`.
struct Particle {
    std::vector<std::string> names;
    Cardinality cardinality = Cardinality::Required;

    bool contains(std::string_view name) const;
};

struct TextOnly {
    std::shared_ptr<const Pattern> pattern;  // null: any text
};

struct Sequence {
    std::vector<Particle> particles;
};

/// Any number (including zero) of the listed children, in any order.
struct Choice {
    std::vector<std::string> names;
};

/// Each child at most once, in any order; `required` ones must be present.
struct Unordered {
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

/// Free text interleaved with a child sequence.
struct Mixed {
    std::shared_ptr<const Pattern> pattern;
    std::vector<Particle> particles;
};

using ContentModel = std::variant<TextOnly, Sequence, Choice, Unordered, Mixed>;

struct TagRule {
    std::string tag_name;
    std::set<std::string> allowed_parents;
    ContentModel content;

    /// Every child name that may appear directly inside this tag.
    std::set<std::string> child_names() const;
};

struct Schema {
    std::map<std::string, TagRule, std::less<>> rules;
    std::string root_tag = "root";
    std::string identifier_pattern;

    const TagRule* find(std::string_view tag) const;
};

/// The identifier facet applied to variable positions.
inline constexpr std::string_view identifier_pattern = R"(\s*_*[A-Za-z][\w_]*\s*)";

/// The compiled-in grammar of the tag dialect.
const Schema& builtin_schema();

enum class ValidationCode {
    UnknownTag,
    IllegalChild,
    MissingChild,
    OutOfOrderChild,
    PatternMismatch,
    TextWhereForbidden,
    AttributePresent,
};

std::string_view to_string(ValidationCode c);

struct ValidationDiagnostic {
    ValidationCode code;
    SourcePosition position;
    std::string tag;
    std::string message;

    Diagnostic to_diagnostic() const;
};

/// Single-pass streaming validator. Feed it every event of a well-formed
/// document in order; state is proportional to nesting depth plus the text
/// of the innermost text-only element.
class Validator {
public:
    explicit Validator(const Schema& schema);
    ~Validator();

    Validator(const Validator&) = delete;
    Validator& operator=(const Validator&) = delete;

    void feed(const XmlEvent& ev);

    const std::vector<ValidationDiagnostic>& diagnostics() const noexcept { return diags_; }

private:
    struct Frame;

    void start_element(const XmlEvent& ev);
    void end_element(const XmlEvent& ev);
    void characters(const XmlEvent& ev);
    bool accept_child(Frame& parent, const std::string& name, SourcePosition pos);
    void report(ValidationCode code, SourcePosition pos, std::string tag, std::string message);

    const Schema& schema_;
    std::vector<Frame> stack_;
    std::vector<ValidationDiagnostic> diags_;
};

/// Drains `events` through a Validator. ReaderError propagates.
std::vector<ValidationDiagnostic> validate_stream(EventReader& events, const Schema& schema);

/// Writes a W3C XML Schema 1.0 document accepting the same attribute-free
/// documents as Validator.
void export_xsd(const Schema& schema, std::ostream& sink);

}  // namespace xml2jsp
