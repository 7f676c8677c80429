#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mathwiki/omdoc.h"
#include "mathwiki/xml.h"
#include "support/fixtures.h"
#include "support/generators.h"

using namespace mathwiki;

namespace {

ParseError parse_failure(std::string_view src) {
  auto r = parse_document(src);
  REQUIRE_FALSE(r.ok());
  return r.error();
}

std::string wrap(std::string_view body) {
  return "<omdoc>\n  <theory xml:id=\"th\">\n" + std::string(body) + "\n  </theory>\n</omdoc>\n";
}

}  // namespace

TEST_CASE("xml reader basics") {
  auto r = xml::parse(R"(<?xml version="1.0"?><!-- c --><a x="1" y='&lt;2&gt;'>t&amp;<![CDATA[<raw>]]>&#65;&#x42;<b/></a>)");
  REQUIRE(r.ok());
  const auto& a = *r;
  CHECK(a.name == "a");
  CHECK(*a.attribute("x") == "1");
  CHECK(*a.attribute("y") == "<2>");
  CHECK(a.attribute("z") == nullptr);
  REQUIRE(a.children.size() >= 2);
  std::string text;
  for (const auto& c : a.children) {
    if (!c.is_element()) text += c.text;
  }
  CHECK(text == "t&<raw>AB");
  CHECK(a.children.back().name == "b");
}

TEST_CASE("xml reader rejects malformed input with positions") {
  auto mismatch = xml::parse("<a>\n  <b></a>");
  REQUIRE_FALSE(mismatch.ok());
  CHECK(mismatch.error().pos.line == 2);

  CHECK_FALSE(xml::parse("<a x='1' x='2'/>").ok());
  CHECK_FALSE(xml::parse("<a>&bogus;</a>").ok());
  CHECK_FALSE(xml::parse("<!DOCTYPE a><a/>").ok());
  CHECK_FALSE(xml::parse("<a/><b/>").ok());
  CHECK_FALSE(xml::parse("<a>").ok());
  CHECK_FALSE(xml::parse("").ok());
  CHECK_FALSE(xml::parse("<a>&#0;</a>").ok());

  std::string deep;
  for (int i = 0; i < 5000; ++i) deep += "<a>";
  CHECK_FALSE(xml::parse(deep).ok());
}

TEST_CASE("xml escaping") {
  CHECK(xml::escape_text("a<b>&c") == "a&lt;b&gt;&amp;c");
  CHECK(xml::escape_attribute("\"x\"\n") == "&quot;x&quot;&#10;");
  auto r = xml::parse("<a v=\"" + xml::escape_attribute("tab\tnl\ncr\r\"&<") + "\"/>");
  REQUIRE(r.ok());
  CHECK(*r->attribute("v") == "tab\tnl\ncr\r\"&<");
}

TEST_CASE("the proof fixture parses to the expected statement") {
  auto d = parse_document(fixture::kPythProof);
  REQUIRE(d.ok());
  REQUIRE(d->theories.size() == 1);
  const Theory& t = d->theories[0];
  CHECK(t.id == "geometry");
  REQUIRE(t.statements.size() == 1);
  const Statement& s = t.statements[0];
  CHECK(s.id == "pyth-proof");
  CHECK(s.kind == StatementKind::Proof);
  CHECK(s.home_theory == "geometry");
  REQUIRE(s.target_page());
  CHECK(*s.target_page() == "pythagoras");
  CHECK(serialize_document(*d) == fixture::kPythProof);
  CHECK(parse_document(serialize_document(*d)).value() == *d);
}

TEST_CASE("the arithmetic fixture round-trips byte for byte") {
  auto d = parse_document(fixture::kArith);
  REQUIRE(d.ok());
  CHECK(serialize_document(*d) == fixture::kArith);
  const auto& stmts = d->theories[0].statements;
  REQUIRE(stmts.size() == 7);
  CHECK(stmts[4].id == "notation-arith-plus");
  CHECK(stmts[4].notation->precedence == 10);
  CHECK(d->theories[0].metadata.title == "Elementary arithmetic");
}

TEST_CASE("document structure") {
  CHECK(serialize_document(Document{}) == "<omdoc/>\n");
  CHECK(parse_document("<omdoc/>").value() == Document{});
  CHECK(parse_document("<omdoc xmlns=\"http://omdoc.org/ns\"/>").ok());
  CHECK(parse_failure("<omdoc xmlns=\"urn:other\"/>").code == ParseErrorCode::Malformed);

  auto d = parse_document(wrap("<notation id=\"plus-n\" for=\"arith#plus\" fixity=\"mixfix\" "
                               "operator=\"#1 plus #2\" precedence=\"-3\"/>"));
  REQUIRE(d.ok());
  const auto& n = d->theories[0].statements[0];
  CHECK(n.id == "plus-n");
  CHECK(n.notation->fixity == Fixity::Mixfix);
  CHECK(n.notation->precedence == -3);
  CHECK(serialize_document(*d).find("id=\"plus-n\"") != std::string::npos);
}

TEST_CASE("parse errors carry codes and positions") {
  auto e = parse_failure(wrap("    <lemma id=\"x\"/>"));
  CHECK(e.code == ParseErrorCode::UnknownElement);
  CHECK(e.line == 3);
  CHECK(e.column == 5);
  CHECK(e.to_string().rfind("3:5: UnknownElement: ", 0) == 0);

  CHECK(parse_failure(wrap("<proof id=\"p\"/>")).code == ParseErrorCode::MissingAttr);
  CHECK(parse_failure(wrap("<axiom/>")).code == ParseErrorCode::MissingAttr);
  CHECK(parse_failure("<omdoc><theory/></omdoc>").code == ParseErrorCode::MissingAttr);
  CHECK(parse_failure(wrap("<proof id=\"p\" for=\"a b\"/>")).code == ParseErrorCode::BadRef);
  CHECK(parse_failure(wrap("<notation for=\"plus\" fixity=\"infix\" operator=\"+\" precedence=\"1\"/>")).code ==
        ParseErrorCode::BadRef);
  CHECK(parse_failure(wrap("<notation for=\"a#b\" fixity=\"infix\" operator=\"+\" precedence=\"x\"/>")).code ==
        ParseErrorCode::BadInteger);
  CHECK(parse_failure(wrap("<axiom id=\"a\"><FMP><OMI>1.5</OMI></FMP></axiom>")).code ==
        ParseErrorCode::BadInteger);
  CHECK(parse_failure(wrap("<axiom id=\"a\"><FMP><OMA><OMS cd=\"a\" name=\"f\"/></OMA></FMP></axiom>")).code ==
        ParseErrorCode::Malformed);
  CHECK(parse_failure(wrap("<axiom id=\"a\" colour=\"red\"/>")).code == ParseErrorCode::Malformed);
  CHECK(parse_failure(wrap("<axiom id=\"a\">stray</axiom>")).code == ParseErrorCode::Malformed);
  CHECK(parse_failure(wrap("<axiom id=\"a\"><FMP/></axiom>")).code == ParseErrorCode::Malformed);
  CHECK(parse_failure(wrap("<symbol id=\"a\"><FMP><OMI>1</OMI></FMP></symbol>")).code ==
        ParseErrorCode::UnknownElement);
  CHECK(parse_failure("<omdoc><theory xml:id=\"t\"><imports from=\"t\"/></theory></omdoc>").code ==
        ParseErrorCode::BadRef);
  CHECK(parse_failure(wrap("<proof id=\"p\" for=\"t\"><axiom id=\"f1\"/></proof>")).code ==
        ParseErrorCode::Malformed);
  CHECK(parse_failure("<theory xml:id=\"t\"/>").code == ParseErrorCode::UnknownElement);
  CHECK(parse_failure("<omdoc>\n<theory xml:id=\"t\">\n</omdoc>").line == 3);
}

TEST_CASE("ASCII formula notation") {
  auto f = parse_formula_ascii("arith#times(arith#plus(1, 2), $x)");
  REQUIRE(f.ok());
  using namespace formula;
  CHECK(*f == apply(sym("arith", "times"), {apply(sym("arith", "plus"), {integer(1), integer(2)}), var("x")}));
  CHECK(print_formula_ascii(*f) == "arith#times(arith#plus(1, 2), $x)");

  CHECK(parse_formula_ascii("  arith # plus ( 1 ,-2 ) ").value() ==
        apply(sym("arith", "plus"), {integer(1), integer(-2)}));
  CHECK(parse_formula_ascii("f#compose(f#g)(3)").value() ==
        apply(apply(sym("f", "compose"), {sym("f", "g")}), {integer(3)}));
  CHECK(parse_formula_ascii("-007").value() == integer(-7));

  CHECK(parse_formula_ascii("").error().code == ParseErrorCode::Malformed);
  CHECK(parse_formula_ascii("plus(1)").error().code == ParseErrorCode::Malformed);
  CHECK(parse_formula_ascii("a#b(").error().code == ParseErrorCode::Malformed);
  CHECK(parse_formula_ascii("a#b()").error().code == ParseErrorCode::Malformed);
  CHECK(parse_formula_ascii("a#b(1) 2").error().code == ParseErrorCode::Malformed);
  CHECK(parse_formula_ascii("-").error().code == ParseErrorCode::BadInteger);
  auto e = parse_formula_ascii("a#b(1, ?)");
  REQUIRE_FALSE(e.ok());
  CHECK(e.error().column == 8);

  std::string deep;
  for (int i = 0; i < 1000; ++i) deep += "a#f(";
  CHECK_FALSE(parse_formula_ascii(deep + "1" + std::string(1000, ')')).ok());
}

TEST_CASE("generated documents round-trip") {
  testgen::Rng rng(1001);
  for (int i = 0; i < 300; ++i) {
    Document d = testgen::document(rng);
    std::string xml = serialize_document(d);
    auto back = parse_document(xml);
    INFO(xml);
    REQUIRE(back.ok());
    CHECK(*back == d);
    CHECK(serialize_document(*back) == xml);
  }
}

TEST_CASE("generated formulae round-trip through both notations") {
  testgen::Rng rng(2002);
  std::vector<SymbolRef> syms{{"arith", "plus"}, {"arith", "times"}, {"set-theory", "in"}};
  for (int i = 0; i < 300; ++i) {
    FormulaNode f = testgen::formula(rng, syms, 5);
    std::string ascii = print_formula_ascii(f);
    auto back = parse_formula_ascii(ascii);
    INFO(ascii);
    REQUIRE(back.ok());
    CHECK(*back == f);
    CHECK(print_formula_ascii(*back) == ascii);

    xml::Writer w;
    write_formula_xml(w, f);
    auto node = xml::parse(w.str());
    REQUIRE(node.ok());
    CHECK(formula_from_xml(*node).value() == f);
  }
}
