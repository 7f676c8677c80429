#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mathwiki/extraction.h"
#include "mathwiki/omdoc.h"
#include "support/fixtures.h"
#include "support/generators.h"

using namespace mathwiki;

namespace {

std::set<Fact> facts(const std::set<Triple>& ts) {
  std::set<Fact> out;
  for (const auto& t : ts) out.insert(t.fact());
  return out;
}

Statement only_statement(const char* xml) {
  return parse_document(xml).value().theories.at(0).statements.at(0);
}

}  // namespace

TEST_CASE("proof page yields the type and proves triples") {
  auto ts = extract("pyth-proof", only_statement(fixture::kPythProof));
  CHECK(facts(ts) == std::set<Fact>{{"pyth-proof", "type", "Proof"},
                                    {"pyth-proof", "proves", "pythagoras"},
                                    {"geometry", "homeTheoryOf", "pyth-proof"}});
  for (const auto& t : ts) CHECK(t.provenance == Provenance::extracted("pyth-proof"));
}

TEST_CASE("theory pages yield type and imports") {
  Theory t{"group", {"monoid", "sets"}, {}, {}};
  CHECK(facts(extract("group", t)) == std::set<Fact>{{"group", "type", "Theory"},
                                                     {"group", "imports", "monoid"},
                                                     {"group", "imports", "sets"}});
}

TEST_CASE("formulae and symbol uses") {
  auto doc = parse_document(fixture::kArith).value();
  const auto& stmts = doc.theories[0].statements;
  auto example = facts(extract("arith/distrib", stmts[6]));
  CHECK(example == std::set<Fact>{{"arith", "homeTheoryOf", "arith/distrib"},
                                  {"arith/distrib", "type", "Example"},
                                  {"arith/distrib", "exemplifies", "arith/times"},
                                  {"arith/distrib", "contains", "arith/distrib#f1"},
                                  {"arith/distrib#f1", "type", "Formula"},
                                  {"arith/distrib#f1", "uses", "arith#plus"},
                                  {"arith/distrib#f1", "uses", "arith#times"}});

  auto notation = facts(extract("arith/notation-arith-plus", stmts[4]));
  CHECK(notation == std::set<Fact>{{"arith", "homeTheoryOf", "arith/notation-arith-plus"},
                                   {"arith/notation-arith-plus", "type", "NotationDefinition"},
                                   {"arith/notation-arith-plus", "renders", "arith#plus"},
                                   {"arith#plus", "type", "Symbol"}});

  auto definition = facts(extract("arith/plus-def", stmts[2]));
  CHECK(definition.count({"arith/plus-def", "defines", "arith/plus"}));
}

TEST_CASE("proof steps get skolem nodes and formulae are numbered in pre-order") {
  auto s = only_statement(R"(<omdoc><theory xml:id="t">
    <proof id="p" for="t/thm">
      <FMP><OMS cd="t" name="a"/></FMP>
      <assertion id="s1"><FMP><OMS cd="t" name="b"/></FMP></assertion>
      <proof id="s2" for="t/s1">
        <axiom id="s3"><FMP><OMS cd="t" name="c"/></FMP></axiom>
      </proof>
      <example id="s4"><FMP><OMS cd="t" name="d"/></FMP></example>
    </proof>
  </theory></omdoc>)");
  auto f = facts(extract("t/p", s));
  CHECK(f.count({"t/p", "contains", "t/p#f1"}));
  CHECK(f.count({"t/p#f1", "uses", "t#a"}));
  CHECK(f.count({"t/p", "contains", "t/p#s1"}));
  CHECK(f.count({"t/p#s1", "type", "Assertion"}));
  CHECK(f.count({"t/p#s1", "contains", "t/p#f2"}));
  CHECK(f.count({"t/p#f2", "uses", "t#b"}));
  CHECK(f.count({"t/p#s2", "proves", "t/s1"}));
  CHECK(f.count({"t/p#s2", "contains", "t/p#s3"}));
  CHECK_FALSE(f.count({"t/p", "contains", "t/p#s3"}));
  CHECK(f.count({"t/p#s3", "contains", "t/p#f3"}));
  CHECK(f.count({"t/p#f3", "uses", "t#c"}));
  CHECK(f.count({"t/p#s4", "contains", "t/p#f4"}));
  CHECK(f.count({"t/p#f4", "uses", "t#d"}));
}

TEST_CASE("extraction is deterministic and page-local") {
  testgen::Rng rng(7007);
  for (int i = 0; i < 100; ++i) {
    Document d = testgen::document(rng);
    for (const auto& t : d.theories) {
      for (const auto& s : t.statements) {
        const std::string page = t.id + "/" + s.id;
        auto a = extract(page, s);
        CHECK(a == extract(page, s));
        for (const auto& tr : a) {
          CHECK(tr.provenance.page() == page);
          const bool local = tr.subject == page || tr.subject.rfind(page + "#", 0) == 0 ||
                             tr.predicate == "homeTheoryOf" ||
                             (tr.predicate == "type" && tr.object == "Symbol");
          CHECK(local);
        }
      }
    }
  }
}
