#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cctype>

#include "mathwiki/omdoc.h"
#include "mathwiki/renderer.h"
#include "support/generators.h"

using namespace mathwiki;
using namespace mathwiki::formula;

namespace {

const SymbolRef kPlus{"arith", "plus"};
const SymbolRef kTimes{"arith", "times"};
const SymbolRef kPow{"arith", "pow"};
const SymbolRef kFact{"arith", "fact"};
const SymbolRef kF{"fn", "f"};
const SymbolRef kG{"fn", "g"};
const SymbolRef kChoose{"comb", "choose"};

NotationTable arith_table() {
  NotationTable t;
  t.add({kPlus, Fixity::Infix, "+", 10});
  t.add({kTimes, Fixity::Infix, "·", 20});
  t.add({kPow, Fixity::Infix, "^", 30});
  t.add({kFact, Fixity::Postfix, "!", 40});
  t.add({kF, Fixity::Prefix, "f", 25});
  t.add({kG, Fixity::Prefix, "g", 5});
  t.add({kChoose, Fixity::Mixfix, "#1 choose #2", 15});
  return t;
}

const std::set<SymbolRef> kDeclared{kPlus, kTimes, kPow, kFact, kF, kG, kChoose};

FormulaNode s(const SymbolRef& r) { return sym(r.theory, r.name); }

std::string plain(const FormulaNode& f, const NotationTable& t = arith_table(),
                  const std::set<SymbolRef>& declared = kDeclared) {
  return render_plain(render(f, t, declared).tree);
}

std::vector<Warning> warnings(const FormulaNode& f, const NotationTable& t = arith_table(),
                              const std::set<SymbolRef>& declared = kDeclared) {
  return render(f, t, declared).warnings;
}

bool has_warning(const std::vector<Warning>& ws, WarningCode code, const std::string& subject) {
  for (const auto& w : ws) {
    if (w.code == code && w.subject == subject) return true;
  }
  return false;
}

// Precedence-climbing reader for render_plain output over the operators of
// arith_table() (infix +, ·, ^ and prefix f, g). Chains of one operator
// become a single n-ary application.
class PlainReader {
 public:
  explicit PlainReader(const std::string& text) {
    for (std::size_t i = 0; i < text.size();) {
      unsigned char c = static_cast<unsigned char>(text[i]);
      if (c == ' ') {
        ++i;
      } else if (std::isdigit(c) || (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
        std::size_t j = i + 1;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        toks_.push_back(text.substr(i, j - i));
        i = j;
      } else if (std::isalpha(c) || c == '_') {
        std::size_t j = i + 1;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '-')) ++j;
        toks_.push_back(text.substr(i, j - i));
        i = j;
      } else if (text.compare(i, 2, "·") == 0) {
        toks_.push_back("·");
        i += 2;
      } else {
        toks_.push_back(std::string(1, text[i]));
        ++i;
      }
    }
  }

  FormulaNode read() {
    auto f = expr(0);
    REQUIRE(pos_ == toks_.size());
    return f;
  }

 private:
  std::optional<std::pair<SymbolRef, int>> infix(const std::string& tok) const {
    if (tok == "+") return std::pair{kPlus, 10};
    if (tok == "·") return std::pair{kTimes, 20};
    if (tok == "^") return std::pair{kPow, 30};
    return std::nullopt;
  }

  const std::string& peek() const {
    static const std::string end;
    return pos_ < toks_.size() ? toks_[pos_] : end;
  }

  FormulaNode expr(int min_prec) {
    FormulaNode lhs = primary();
    while (true) {
      auto op = infix(peek());
      if (!op || op->second < min_prec) return lhs;
      const std::string tok = peek();
      std::vector<FormulaNode> args{lhs};
      while (peek() == tok) {
        ++pos_;
        args.push_back(expr(op->second + 1));
      }
      lhs = apply(s(op->first), std::move(args));
    }
  }

  FormulaNode primary() {
    std::string tok = peek();
    ++pos_;
    if (tok == "(") {
      auto inner = expr(0);
      REQUIRE(peek() == ")");
      ++pos_;
      return inner;
    }
    if (tok == "f" || tok == "g") {
      REQUIRE(peek() == "(");
      ++pos_;
      std::vector<FormulaNode> args{expr(0)};
      while (peek() == ",") {
        ++pos_;
        args.push_back(expr(0));
      }
      REQUIRE(peek() == ")");
      ++pos_;
      return apply(s(tok == "f" ? kF : kG), std::move(args));
    }
    if (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-') {
      return integer(*BigInt::parse(tok));
    }
    return var(tok);
  }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

// Merges nested applications of the same infix operator, the one ambiguity
// the renderer leaves by never bracketing equal precedence.
FormulaNode flatten(const FormulaNode& f) {
  const auto* a = std::get_if<Apply>(&f.node);
  if (!a) return f;
  std::vector<FormulaNode> args;
  const auto* head = std::get_if<Sym>(&a->head->node);
  const bool is_infix = head && (head->ref == kPlus || head->ref == kTimes || head->ref == kPow);
  for (const auto& arg : a->args) {
    FormulaNode flat = flatten(arg);
    const auto* inner = std::get_if<Apply>(&flat.node);
    if (is_infix && inner && *inner->head == *a->head) {
      args.insert(args.end(), inner->args.begin(), inner->args.end());
    } else {
      args.push_back(std::move(flat));
    }
  }
  return apply(*a->head, std::move(args));
}

FormulaNode operator_formula(testgen::Rng& rng, int depth) {
  int c = testgen::uniform(rng, 0, depth > 0 ? 6 : 1);
  if (c == 0) return integer(testgen::uniform(rng, -20, 99));
  if (c == 1) return var(testgen::identifier(rng, "v"));
  static const std::vector<SymbolRef> infix{kPlus, kTimes, kPow};
  static const std::vector<SymbolRef> prefix{kF, kG};
  std::vector<FormulaNode> args;
  if (c <= 4) {
    int n = testgen::uniform(rng, 2, 3);
    for (int i = 0; i < n; ++i) args.push_back(operator_formula(rng, depth - 1));
    return apply(s(testgen::pick(rng, infix)), std::move(args));
  }
  int n = testgen::uniform(rng, 1, 2);
  for (int i = 0; i < n; ++i) args.push_back(operator_formula(rng, depth - 1));
  return apply(s(testgen::pick(rng, prefix)), std::move(args));
}

}  // namespace

TEST_CASE("sum inside a product is bracketed") {
  auto f = apply(s(kTimes), {apply(s(kPlus), {integer(1), integer(2)}), integer(3)});
  CHECK(plain(f) == "(1 + 2) · 3");
  CHECK(warnings(f).empty());
  auto g = apply(s(kPlus), {apply(s(kTimes), {integer(1), integer(2)}), integer(3)});
  CHECK(plain(g) == "1 · 2 + 3");
}

TEST_CASE("equal precedence is never bracketed") {
  CHECK(plain(apply(s(kPlus), {apply(s(kPlus), {var("a"), var("b")}), var("c")})) == "a + b + c");
  CHECK(plain(apply(s(kPlus), {var("a"), apply(s(kPlus), {var("b"), var("c")})})) == "a + b + c");
  CHECK(plain(apply(s(kPlus), {var("a"), var("b"), var("c")})) == "a + b + c");
}

TEST_CASE("prefix, postfix and mixfix layouts") {
  CHECK(plain(apply(s(kF), {var("x")})) == "f(x)");
  CHECK(plain(apply(s(kF), {var("x"), integer(2)})) == "f(x, 2)");
  CHECK(plain(apply(s(kFact), {var("n")})) == "n !");
  CHECK(plain(apply(s(kFact), {apply(s(kPlus), {var("n"), integer(1)})})) == "(n + 1) !");
  CHECK(plain(apply(s(kChoose), {var("n"), var("k")})) == "n choose k");
  CHECK(plain(apply(s(kChoose), {apply(s(kPlus), {var("n"), integer(1)}), var("k")})) == "(n + 1) choose k");
  CHECK(plain(apply(s(kTimes), {apply(s(kF), {var("x")}), integer(2)})) == "f(x) · 2");
  CHECK(plain(apply(s(kTimes), {apply(s(kG), {var("x")}), integer(2)})) == "(g(x)) · 2");
  CHECK(plain(apply(s(kF), {apply(s(kPlus), {var("a"), var("b")})})) == "f(a + b)");
  CHECK(plain(apply(s(kPlus), {var("x")})) == "+ x");
}

TEST_CASE("standalone symbols show their operator") {
  CHECK(plain(s(kPlus)) == "+");
  CHECK(plain(s(kChoose)) == "comb?choose");
  CHECK(plain(apply(s(kF), {s(kPlus)})) == "f(+)");
}

TEST_CASE("missing notation falls back to a qualified name") {
  SymbolRef mystery{"arith", "mystery"};
  std::set<SymbolRef> declared = kDeclared;
  declared.insert(mystery);
  auto f = apply(s(mystery), {integer(1), var("y")});
  CHECK(plain(f, arith_table(), declared) == "arith?mystery(1, y)");
  auto ws = warnings(f, arith_table(), declared);
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].code == WarningCode::MissingNotation);
  CHECK(ws[0].subject == "arith#mystery");
}

TEST_CASE("undeclared symbols are not linked") {
  auto f = apply(s(kPlus), {integer(1), integer(2)});
  auto r = render(f, arith_table(), {});
  CHECK(serialize_layout(r.tree) == "<m:row><m:n>1</m:n><m:o>+</m:o><m:n>2</m:n></m:row>");
  CHECK(has_warning(r.warnings, WarningCode::DanglingSymbol, "arith#plus"));

  auto linked = render(f, arith_table(), kDeclared);
  CHECK(serialize_layout(linked.tree) ==
        "<m:row><m:n>1</m:n><m:o href=\"arith\">+</m:o><m:n>2</m:n></m:row>");
}

TEST_CASE("layout dialect") {
  auto f = apply(s(kTimes), {apply(s(kPlus), {var("a&b"), integer(2)}), s(kChoose)});
  CHECK(serialize_layout(render(f, arith_table(), kDeclared).tree) ==
        "<m:row><m:fenced><m:row><m:i>a&amp;b</m:i><m:o href=\"arith\">+</m:o><m:n>2</m:n></m:row></m:fenced>"
        "<m:o href=\"arith\">·</m:o><m:i href=\"comb\">comb?choose</m:i></m:row>");
}

TEST_CASE("non-symbol heads") {
  auto f = apply(var("h"), {integer(1)});
  CHECK(plain(f) == "h(1)");
  CHECK(has_warning(warnings(f), WarningCode::OpaqueHead, "$h"));
  auto g = apply(apply(s(kF), {var("x")}), {integer(1)});
  CHECK(plain(g) == "f(x)(1)");
  CHECK(has_warning(warnings(g), WarningCode::OpaqueHead, "(application)"));
}

TEST_CASE("mixfix arity mismatches") {
  auto few = apply(s(kChoose), {var("n")});
  CHECK(plain(few) == "n choose");
  CHECK(has_warning(warnings(few), WarningCode::ArityMismatch, "comb#choose"));
  auto many = apply(s(kChoose), {var("n"), var("k"), var("j")});
  CHECK(plain(many) == "n choose k(j)");
  CHECK(has_warning(warnings(many), WarningCode::ArityMismatch, "comb#choose"));
}

TEST_CASE("notation table keeps the latest definition") {
  NotationTable t;
  std::vector<Warning> ws;
  t.add({kPlus, Fixity::Infix, "+", 10}, &ws);
  CHECK(ws.empty());
  t.add({kPlus, Fixity::Prefix, "add", 3}, &ws);
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].code == WarningCode::DuplicateNotation);
  CHECK(t.find(kPlus)->op == "add");
  CHECK(t.find(kTimes) == nullptr);
  CHECK(plain(apply(s(kPlus), {integer(1), integer(2)}), t) == "add(1, 2)");
}

TEST_CASE("rendering is a pure function of formula and table") {
  testgen::Rng rng(8008);
  std::vector<SymbolRef> syms{kPlus, kTimes, kPow, kFact, kF, kG, kChoose, {"x", "unknown"}};
  for (int i = 0; i < 200; ++i) {
    auto f = testgen::formula(rng, syms, 4);
    auto a = render(f, arith_table(), kDeclared);
    auto b = render(f, arith_table(), kDeclared);
    CHECK(a.tree == b.tree);
    CHECK(a.warnings == b.warnings);
    CHECK(std::is_sorted(a.warnings.begin(), a.warnings.end()));
  }
}

TEST_CASE("plain output reads back to the same formula") {
  testgen::Rng rng(9009);
  for (int i = 0; i < 500; ++i) {
    auto f = operator_formula(rng, 4);
    std::string text = plain(f);
    INFO(text);
    CHECK(PlainReader(text).read() == flatten(f));
  }
}
