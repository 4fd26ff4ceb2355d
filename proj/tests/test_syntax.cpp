#include <doctest.h>

#include "xml2jsp/diagnostic.hpp"
#include "xml2jsp/syntax.hpp"

using namespace xml2jsp;

namespace {

std::string code_of(auto&& f)
{
    try {
        f();
    } catch (const TranslationError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("identifiers and literals")
{
    CHECK(is_identifier("a"));
    CHECK(is_identifier("__a_1"));
    CHECK_FALSE(is_identifier("_"));
    CHECK_FALSE(is_identifier("1a"));
    CHECK_FALSE(is_identifier("a-b"));
    CHECK(classify_literal("\"x\"") == LiteralKind::String);
    CHECK(classify_literal("+4") == LiteralKind::Int);
    CHECK(classify_literal("-0.5") == LiteralKind::Real);
    CHECK_FALSE(classify_literal(".5"));
    CHECK_FALSE(classify_literal("\"a\"b\""));
    CHECK(scalar_keyword("integer") == DslType::Kind::Int);
    CHECK(scalar_keyword("double") == DslType::Kind::Real);
    CHECK(scalar_keyword("String") == DslType::Kind::String);
    CHECK_FALSE(scalar_keyword("long"));
}

TEST_CASE("bindings")
{
    const auto b = parse_binding(R"( a="this is how!" )");
    CHECK(b.name == "a");
    CHECK(b.value == R"("this is how!")");
    CHECK(parse_binding("x = 1 = 2").value == "1 = 2");
    CHECK(code_of([] { parse_binding("= 1"); }) == "MalformedBinding");
    CHECK(code_of([] { parse_binding("a"); }) == "MalformedBinding");
    CHECK(code_of([] { parse_binding("a b = 1"); }) == "MalformedBinding");
    CHECK(code_of([] { parse_binding("a ="); }) == "MalformedBinding");
}

TEST_CASE("arrays")
{
    const auto a = parse_array_decl("integer v[5]");
    CHECK(a.element == DslType::Kind::Int);
    CHECK(a.name == "v");
    CHECK(a.size == 5);
    CHECK(parse_array_decl(" real w[1] ").element == DslType::Kind::Real);
    CHECK(code_of([] { parse_array_decl("integer v[0]"); }) == "ZeroArraySize");
    CHECK(code_of([] { parse_array_decl("integer v[x]"); }) == "UnrecognizedLiteral");
    CHECK(code_of([] { parse_array_decl("integer v"); }) == "MalformedArray");
    CHECK(code_of([] { parse_array_decl("bool v[2]"); }) == "MalformedArray");
}

TEST_CASE("function headers")
{
    const auto h = parse_function_header("real avg(real a[], integer n)");
    CHECK(h.return_type == DslType::real_type());
    CHECK(h.name == "avg");
    REQUIRE(h.params.size() == 2);
    CHECK(h.params[0].type == DslType::array_of(DslType::Kind::Real));
    CHECK(h.params[0].name == "a");
    CHECK(h.params[1].type == DslType::int_type());
    CHECK(parse_function_header("integer one()").params.empty());
    CHECK(parse_function_header("void f( )").return_type.kind == DslType::Kind::Void);
    CHECK(code_of([] { parse_function_header("integer one"); }) == "MalformedHeader");
    CHECK(code_of([] { parse_function_header("integer one("); }) == "MalformedHeader");
    CHECK(code_of([] { parse_function_header("one()"); }) == "MalformedHeader");
    CHECK(code_of([] { parse_function_header("integer f(a)"); }) == "MalformedHeader");
    CHECK(code_of([] { parse_function_header("integer f(integer a,)"); }) == "MalformedHeader");
}

TEST_CASE("set, get and query")
{
    const auto s = parse_set_call(" int(1,b)");
    CHECK(s.keyword == "int");
    CHECK(s.index == 1);
    CHECK(s.argument == "b");
    CHECK(parse_set_call("string(2, \"a,b\")").argument == "\"a,b\"");
    CHECK(code_of([] { parse_set_call("int(0,b)"); }) == "BadSetSyntax");
    CHECK(code_of([] { parse_set_call("int(1)"); }) == "BadSetSyntax");
    CHECK(code_of([] { parse_set_call("long(1,b)"); }) == "BadSetSyntax");

    const auto g = parse_get_call("v=int(2)");
    CHECK(g.target == "v");
    CHECK(g.keyword == "int");
    CHECK(g.index == 2);
    CHECK(code_of([] { parse_get_call("v=int(2,3)"); }) == "BadGetSyntax");
    CHECK(code_of([] { parse_get_call("int(2)"); }) == "BadGetSyntax");

    const auto q = parse_query(R"( query="Update emp set phone=? and sal=? where eid=1011")");
    CHECK(q.name == "query");
    CHECK(q.sql == "Update emp set phone=? and sal=? where eid=1011");
    CHECK(code_of([] { parse_query("select 1"); }) == "BadQuerySyntax");
    CHECK(code_of([] { parse_query("q=\"\""); }) == "BadQuerySyntax");
}

TEST_CASE("class declarations")
{
    const auto c = parse_class_decl("Date d");
    CHECK(c.class_name == "Date");
    CHECK(c.object == "d");
    CHECK(parse_class_decl("java.util.Date d").class_name == "java.util.Date");
    CHECK(code_of([] { parse_class_decl("Date"); }) == "MalformedClassDecl");
    CHECK(code_of([] { parse_class_decl("Date 1d"); }) == "MalformedClassDecl");
}

TEST_CASE("identifiers referenced by an expression")
{
    CHECK(expression_identifiers(" r!=0") == std::vector<std::string>{"r"});
    CHECK(expression_identifiers("a > b.c && f(x) || s.length() > 0") == std::vector<std::string>{"a", "x"});
    CHECK(expression_identifiers("name == \"bob x\" && c != 'q' && 3.5e2 > n2") == std::vector<std::string>{"name", "c", "n2"});
    CHECK(expression_identifiers("ok == true || p != null").size() == 2);
}
