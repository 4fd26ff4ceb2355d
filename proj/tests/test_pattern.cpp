#include <doctest.h>

#include <random>
#include <regex>

#include "xml2jsp/pattern.hpp"
#include "xml2jsp/schema.hpp"

using namespace xml2jsp;

namespace {

const std::string ident(identifier_pattern);

}  // namespace

TEST_CASE("identifier facet")
{
    CHECK(check_content_pattern(" xx ", ident));
    CHECK(check_content_pattern("_a1", ident));
    CHECK_FALSE(check_content_pattern("a b", ident));
    CHECK_FALSE(check_content_pattern("9abc", ident));
    CHECK_FALSE(check_content_pattern(" 9abc ", ident));
    CHECK_FALSE(check_content_pattern("", ident));
    CHECK_FALSE(check_content_pattern("__", ident));
    CHECK(check_content_pattern("\n\tconn \n", ident));
}

TEST_CASE("matching is anchored")
{
    const Pattern p("ab");
    CHECK(p.matches("ab"));
    CHECK_FALSE(p.matches("abc"));
    CHECK_FALSE(p.matches("xab"));
}

TEST_CASE("syntax coverage")
{
    CHECK(Pattern("a|bc").matches("bc"));
    CHECK(Pattern("(ab)+").matches("ababab"));
    CHECK_FALSE(Pattern("(ab)+").matches(""));
    CHECK(Pattern("a{2,3}").matches("aaa"));
    CHECK_FALSE(Pattern("a{2,3}").matches("aaaa"));
    CHECK(Pattern("a{2,}").matches("aaaaa"));
    CHECK(Pattern("a{2}b?").matches("aa"));
    CHECK(Pattern("[^a-c]x").matches("dx"));
    CHECK_FALSE(Pattern("[^a-c]x").matches("bx"));
    CHECK(Pattern(R"([\d.]+)").matches("3.14"));
    CHECK(Pattern(R"(\S\W\D)").matches("a-x"));
    CHECK(Pattern(R"(\.\*)").matches(".*"));
    CHECK(Pattern(".").matches("\xC3\xA9"));
    CHECK_FALSE(Pattern(".").matches("\n"));
    CHECK(Pattern(R"([\s\S]*)").matches("a\nb"));
}

TEST_CASE("malformed patterns are rejected")
{
    CHECK_THROWS_AS(Pattern("(a"), PatternError);
    CHECK_THROWS_AS(Pattern("a)"), PatternError);
    CHECK_THROWS_AS(Pattern("[a"), PatternError);
    CHECK_THROWS_AS(Pattern("*a"), PatternError);
    CHECK_THROWS_AS(Pattern("a{3,2}"), PatternError);
    CHECK_THROWS_AS(Pattern("[z-a]"), PatternError);
    CHECK_THROWS_AS(Pattern("a{5000}"), PatternError);
}

TEST_CASE("XSD pattern spelling")
{
    CHECK(to_xsd_pattern(R"(\s*_*[A-Za-z][\w_]*\s*)") == R"(\s*_*[A-Za-z][A-Za-z0-9__]*\s*)");
    CHECK(to_xsd_pattern(R"(\d+)") == "[0-9]+");
    CHECK(to_xsd_pattern(R"(\W)") == "[^A-Za-z0-9_]");
}

TEST_CASE("agrees with std::regex on random strings")
{
    const std::vector<std::string> patterns{
        ident,
        R"(\s*_*[A-Za-z][\w_]*\s*=[\s\S]*)",
        R"((ab|a)*b?)",
        R"([a-c]{1,3}\d?)",
        R"(a(b|c)*d+)",
    };
    std::mt19937 rng(42);
    const std::string alphabet = "abcd_A9 =\t1x";
    for (const auto& src : patterns) {
        const Pattern ours(src);
        const std::regex reference(src, std::regex::ECMAScript);
        for (int i = 0; i < 1000; ++i) {
            std::string s;
            for (int n = static_cast<int>(rng() % 9); n > 0; --n)
                s += alphabet[rng() % alphabet.size()];
            CHECK_MESSAGE(ours.matches(s) == std::regex_match(s, reference), "pattern " << src << " on '" << s << "'");
        }
    }
}
