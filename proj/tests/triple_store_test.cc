#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mathwiki/ontology.h"
#include "mathwiki/triple_store.h"
#include "support/generators.h"
#include "support/oracles.h"

using namespace mathwiki;

namespace {

Triple ex(std::string s, std::string p, std::string o, std::string page) {
  return Triple{std::move(s), std::move(p), std::move(o), Provenance::extracted(std::move(page))};
}

Triple inf(std::string s, std::string p, std::string o) {
  return Triple{std::move(s), std::move(p), std::move(o), Provenance::inferred()};
}

TriplePattern pat(const std::string& s, const std::string& p, const std::string& o) {
  return TriplePattern{Term::parse(s), p, Term::parse(o)};
}

std::optional<std::string> opt(const std::string& s) {
  return s == "*" ? std::nullopt : std::optional<std::string>(s);
}

std::optional<std::string_view> view(const std::optional<std::string>& s) {
  return s ? std::optional<std::string_view>(*s) : std::nullopt;
}

}  // namespace

TEST_CASE("insert and match the proof fixture") {
  TripleStore st;
  st.insert(ex("pyth-proof", "type", "Proof", "pyth-proof"));
  st.insert(ex("pyth-proof", "proves", "pythagoras", "pyth-proof"));
  st.insert(ex("pyth-proof", "proves", "pythagoras", "pyth-proof"));
  CHECK(st.size() == 2);
  CHECK(st.match("pyth-proof", std::nullopt, std::nullopt).size() == 2);
  auto m = st.match(std::nullopt, "proves", std::nullopt);
  REQUIRE(m.size() == 1);
  CHECK(m[0] == ex("pyth-proof", "proves", "pythagoras", "pyth-proof"));
  CHECK(st.match("nobody", std::nullopt, std::nullopt).empty());
}

TEST_CASE("provenance keeps copies apart") {
  TripleStore st;
  st.insert(ex("a", "imports", "b", "p1"));
  st.insert(ex("a", "imports", "b", "p2"));
  st.insert(inf("a", "dependsOn", "b"));
  CHECK(st.size() == 3);
  CHECK(st.facts(true).size() == 2);
  CHECK(st.facts(false).size() == 1);
  CHECK(st.retract_page("p1") == 1);
  CHECK(st.match("a", "imports", "b").size() == 1);
  CHECK(st.retract_page("p1") == 0);
  st.replace_inferred({inf("x", "type", "Theory")});
  CHECK(st.match("a", "dependsOn", std::nullopt).empty());
  CHECK(st.match("x", "type", "Theory").size() == 1);
  CHECK(st.retract_page("p2") == 1);
  CHECK(st.size() == 1);
}

TEST_CASE("dump lines round-trip") {
  auto t = ex("a", "proves", "b", "a");
  CHECK(dump_line(t) == "a proves b extracted:a");
  CHECK(parse_dump_line(dump_line(t)) == t);
  CHECK(parse_dump_line(dump_line(inf("a", "type", "Statement"))) == inf("a", "type", "Statement"));
  CHECK_FALSE(parse_dump_line("a b"));
  CHECK_FALSE(parse_dump_line("a b c what"));
}

TEST_CASE("match agrees with a linear scan") {
  testgen::Rng rng(4004);
  for (int round = 0; round < 50; ++round) {
    TripleStore st;
    std::set<Triple> all;
    int nodes = testgen::uniform(rng, 1, 12);
    const std::vector<std::string> preds{"type", "proves", "imports", "contains"};
    for (int i = 0; i < 60; ++i) {
      auto node = [&] { return "n" + std::to_string(testgen::uniform(rng, 0, nodes - 1)); };
      Triple t = testgen::chance(rng, 0.3)
                     ? inf(node(), testgen::pick(rng, preds), node())
                     : ex(node(), testgen::pick(rng, preds), node(), "p" + std::to_string(testgen::uniform(rng, 0, 3)));
      st.insert(t);
      all.insert(t);
    }
    if (testgen::chance(rng, 0.5)) {
      std::string page = "p" + std::to_string(testgen::uniform(rng, 0, 3));
      st.retract_page(page);
      std::erase_if(all, [&](const Triple& t) { return t.provenance.page() == page; });
    }
    std::vector<Triple> flat(all.begin(), all.end());
    CHECK(st.size() == flat.size());
    std::vector<std::string> probes{"*", "n0", "n1", "n2", "missing"};
    std::vector<std::string> pprobes{"*", "type", "proves", "imports", "missing"};
    for (const auto& s : probes) {
      for (const auto& p : pprobes) {
        for (const auto& o : probes) {
          CHECK(st.match(view(opt(s)), view(opt(p)), view(opt(o))) == oracle::scan(flat, opt(s), opt(p), opt(o)));
        }
      }
    }
  }
}

TEST_CASE("the unproven-theorem query") {
  TripleStore st;
  st.insert(ex("A", "type", "Assertion", "A"));
  st.insert(ex("B", "type", "Assertion", "B"));
  st.insert(ex("P", "type", "Proof", "P"));
  st.insert(ex("P", "proves", "A", "P"));
  QueryPattern q{{pat("?t", "type", "Assertion")}, {pat("?p", "proves", "?t")}};
  auto r = st.query(q);
  REQUIRE(r.ok());
  REQUIRE(r->size() == 1);
  CHECK(r->front() == Binding{{"t", "B"}});
}

TEST_CASE("query edge cases") {
  TripleStore st;
  st.insert(ex("a", "contains", "a", "x"));
  st.insert(ex("a", "contains", "b", "x"));
  st.insert(ex("b", "contains", "c", "x"));

  CHECK(st.query(QueryPattern{}).value() == std::vector<Binding>{Binding{}});
  CHECK(st.query({{pat("?x", "contains", "?x")}, {}}).value() == std::vector<Binding>{{{"x", "a"}}});
  auto chain = st.query({{pat("?x", "contains", "?y"), pat("?y", "contains", "?z")}, {}}).value();
  CHECK(chain.size() == 3);  // a-a-a, a-a-b, a-b-c
  CHECK(st.query({{pat("a", "contains", "b")}, {}}).value().size() == 1);
  CHECK(st.query({{pat("a", "contains", "z")}, {}}).value().empty());

  auto unsafe = st.query({{pat("?x", "contains", "?y")}, {pat("?p", "proves", "?q")}});
  REQUIRE_FALSE(unsafe.ok());
  CHECK(unsafe.error().code == QueryError::Code::UnsafeNegation);
  CHECK_FALSE(st.query({{pat("?x", "contains", "?y")}, {pat("a", "contains", "b")}}).ok());

  // ?z only in the negation: nodes that contain nothing.
  auto leaves = st.query({{pat("?x", "contains", "?y")}, {pat("?y", "contains", "?z")}}).value();
  CHECK(leaves == std::vector<Binding>{{{"x", "b"}, {"y", "c"}}});
  // Same free variable twice in a negation means a self-loop.
  auto loops = st.query({{pat("?x", "contains", "?y")}, {pat("?y", "contains", "?y")}}).value();
  CHECK(loops == std::vector<Binding>{{{"x", "a"}, {"y", "b"}}, {{"x", "b"}, {"y", "c"}}});
}

TEST_CASE("query agrees with a nested-loop join") {
  testgen::Rng rng(5005);
  const std::vector<std::string> preds{"type", "proves", "contains"};
  const std::vector<std::string> terms{"?a", "?b", "?c", "n0", "n1", "Assertion"};
  for (int round = 0; round < 300; ++round) {
    TripleStore st;
    std::vector<Triple> flat;
    int n = testgen::uniform(rng, 0, 30);
    for (int i = 0; i < n; ++i) {
      auto node = [&] {
        return testgen::chance(rng, 0.1) ? std::string("Assertion")
                                         : "n" + std::to_string(testgen::uniform(rng, 0, 5));
      };
      Triple t = ex(node(), testgen::pick(rng, preds), node(), "p" + std::to_string(i % 3));
      st.insert(t);
      flat.push_back(t);
    }
    QueryPattern q;
    int np = testgen::uniform(rng, 1, 3);
    for (int i = 0; i < np; ++i) {
      q.patterns.push_back(pat(testgen::pick(rng, terms), testgen::pick(rng, preds), testgen::pick(rng, terms)));
    }
    std::set<std::string> bound;
    for (const auto& p : q.patterns) {
      for (const Term* t : {&p.subject, &p.object}) {
        if (t->is_variable) bound.insert(t->value);
      }
    }
    if (!bound.empty() && testgen::chance(rng, 0.6)) {
      std::string v = "?" + *bound.begin();
      q.negations.push_back(testgen::chance(rng, 0.5)
                                ? pat(v, testgen::pick(rng, preds), testgen::pick(rng, terms))
                                : pat(testgen::pick(rng, terms), testgen::pick(rng, preds), v));
    }
    auto got = st.query(q);
    REQUIRE(got.ok());
    CHECK(*got == oracle::nested_loop_query(flat, q));
  }
}

TEST_CASE("reachable agrees with Warshall on random DAGs") {
  testgen::Rng rng(6006);
  for (int round = 0; round < 100; ++round) {
    int n = testgen::uniform(rng, 1, 40);
    auto edges = testgen::dag(rng, n);
    TripleStore st;
    for (const auto& [a, b] : edges) {
      st.insert(ex("v" + std::to_string(a), "dependsOn", "v" + std::to_string(b), "g"));
      st.insert(ex("v" + std::to_string(a), "imports", "v" + std::to_string(a), "g"));
    }
    auto reach = oracle::warshall(n, edges);
    for (int i = 0; i < n; ++i) {
      std::set<std::string> expected;
      for (int j = 0; j < n; ++j) {
        if (reach[i][j]) expected.insert("v" + std::to_string(j));
      }
      CHECK(st.reachable("v" + std::to_string(i), "dependsOn") == expected);
    }
  }
}

TEST_CASE("reachable on a cycle includes the start") {
  TripleStore st;
  st.insert(ex("a", "contains", "b", "x"));
  st.insert(ex("b", "contains", "a", "x"));
  CHECK(st.reachable("a", "contains") == std::set<std::string>{"a", "b"});
  CHECK(st.reachable("z", "contains").empty());
}
