#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xml2jsp {

class PatternError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Compiled regular expression with XSD facet semantics: a match always
/// covers the whole text. The syntax is the subset shared by XSD patterns
/// and ECMAScript: literals, `.`, classes with ranges and negation, the
/// escapes \s \S \w \W \d \D, groups, `|`, and the quantifiers * + ? {n} {n,} {n,m}.
///
/// \w, \d and \s are ASCII classes. Text is matched code point by code point
/// in time linear in its length.
class Pattern {
public:
    /// Throws PatternError on a malformed expression.
    explicit Pattern(std::string source);

    bool matches(std::string_view text) const;

    const std::string& source() const noexcept { return source_; }

    struct CharClass {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges;
        bool negated = false;

        bool contains(std::uint32_t cp) const;
    };

    struct Instruction {
        enum class Op { Char, Split, Jump, Match } op = Op::Match;
        std::uint32_t cls = 0;  // index into classes_ for Char
        std::uint32_t x = 0;
        std::uint32_t y = 0;
    };

private:
    std::string source_;
    std::vector<CharClass> classes_;
    std::vector<Instruction> program_;

    friend class PatternCompiler;
};

/// Anchored whole-text match; compiles `pattern` on every call.
bool check_content_pattern(std::string_view text, const std::string& pattern);

/// Rewrites a pattern so that an XSD processor gives it the same meaning as
/// Pattern does: \w and \d are Unicode-aware in XSD, so they are expanded to
/// their ASCII ranges.
std::string to_xsd_pattern(std::string_view pattern);

}  // namespace xml2jsp
