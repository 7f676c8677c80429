// In-memory knowledge model: theories, statements, content formulae and
// notation definitions. Everything here is a plain value type.
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mathwiki {

// Identifier grammar shared by theory ids, statement ids, symbol names and
// variables: [A-Za-z_][A-Za-z0-9_-]*
bool is_identifier(std::string_view s);

// Page names are either a theory id or "<theory>/<statement-id>".
bool is_page_name(std::string_view s);

struct SymbolRef {
  std::string theory;
  std::string name;

  // Graph node for the symbol: "<theory>#<name>".
  std::string node_id() const { return theory + "#" + name; }

  friend auto operator<=>(const SymbolRef&, const SymbolRef&) = default;
};

std::optional<SymbolRef> parse_symbol_node(std::string_view node);

// Deep-copying owning pointer, used for recursive value types.
template <typename T>
class Box {
 public:
  Box(T value) : p_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : p_(std::make_unique<T>(*other.p_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) p_ = std::make_unique<T>(*other.p_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  const T& operator*() const { return *p_; }
  T& operator*() { return *p_; }
  const T* operator->() const { return p_.get(); }
  T* operator->() { return p_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.p_ == *b.p_; }

 private:
  std::unique_ptr<T> p_;
};

// Arbitrary-precision integer kept in canonical decimal form. Formulae never
// compute with integers, so no arithmetic is offered.
class BigInt {
 public:
  BigInt() : text_("0") {}
  explicit BigInt(std::int64_t v);

  // Accepts ["-"] digit+; leading zeros and "-0" are canonicalized.
  static std::optional<BigInt> parse(std::string_view s);

  const std::string& str() const { return text_; }

  friend bool operator==(const BigInt&, const BigInt&) = default;

 private:
  std::string text_;
};

struct FormulaNode;

struct Sym {
  SymbolRef ref;
  friend bool operator==(const Sym&, const Sym&) = default;
};
struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};
struct Int {
  BigInt value;
  friend bool operator==(const Int&, const Int&) = default;
};
struct Apply {
  Box<FormulaNode> head;
  std::vector<FormulaNode> args;  // at least one
  friend bool operator==(const Apply&, const Apply&) = default;
};

struct FormulaNode {
  std::variant<Sym, Var, Int, Apply> node;
  friend bool operator==(const FormulaNode&, const FormulaNode&) = default;
};

namespace formula {
FormulaNode sym(std::string theory, std::string name);
FormulaNode var(std::string name);
FormulaNode integer(std::int64_t v);
FormulaNode integer(BigInt v);
FormulaNode apply(FormulaNode head, std::vector<FormulaNode> args);
}  // namespace formula

std::set<SymbolRef> symbols_used(const FormulaNode& f);

struct Text {
  std::string text;
  friend bool operator==(const Text&, const Text&) = default;
};
struct PageLink {
  std::string target;
  std::string label;
  friend bool operator==(const PageLink&, const PageLink&) = default;
};
using TextBlock = std::variant<Text, PageLink>;

struct DublinCore {
  std::optional<std::string> title;
  std::optional<std::string> creator;
  std::optional<std::string> description;
  std::optional<std::string> date;

  bool empty() const { return !title && !creator && !description && !date; }
  friend bool operator==(const DublinCore&, const DublinCore&) = default;
};

enum class Fixity { Prefix, Infix, Postfix, Mixfix };

std::string_view fixity_name(Fixity f);
std::optional<Fixity> parse_fixity(std::string_view s);

struct NotationDefinition {
  SymbolRef for_symbol;
  Fixity fixity = Fixity::Prefix;
  std::string op;  // display text, or template with #1..#n slots for Mixfix
  std::int64_t precedence = 0;

  friend bool operator==(const NotationDefinition&,
                         const NotationDefinition&) = default;
};

// A piece of a mixfix template: either literal text or a 1-based slot index.
struct TemplatePart {
  std::string literal;
  int slot = 0;  // 0 for literals
};

// Splits "#1 choose #2" into parts. Returns nullopt on malformed slots
// (e.g. "#" not followed by digits, or "#0").
std::optional<std::vector<TemplatePart>> parse_template(std::string_view tmpl);

enum class StatementKind {
  SymbolDecl,
  Definition,
  Axiom,
  Assertion,
  Proof,
  Example,
  NotationDecl,
};

std::string_view element_name(StatementKind k);  // "symbol", "proof", ...
std::string_view class_name(StatementKind k);    // "Symbol", "Proof", ...

using Target = std::variant<std::string, SymbolRef>;

struct Statement {
  std::string id;
  StatementKind kind = StatementKind::Axiom;
  std::string home_theory;
  std::optional<Target> for_target;
  std::vector<TextBlock> informal;
  std::optional<FormulaNode> formal;
  std::vector<Statement> steps;
  std::optional<NotationDefinition> notation;
  DublinCore metadata;

  // The page-name target, when for_target holds one.
  const std::string* target_page() const {
    return for_target ? std::get_if<std::string>(&*for_target) : nullptr;
  }

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Theory {
  std::string id;
  std::vector<std::string> imports;
  DublinCore metadata;
  std::vector<Statement> statements;

  friend bool operator==(const Theory&, const Theory&) = default;
};

struct Document {
  std::vector<Theory> theories;
  friend bool operator==(const Document&, const Document&) = default;
};

// Proof steps flattened in pre-order; empty for non-proof statements.
std::vector<Statement> substatements(const Statement& s);

enum class ViolationCode {
  BadIdentifier,
  MissingTarget,
  UnexpectedTarget,
  BadTarget,
  UnexpectedSteps,
  MissingNotation,
  UnexpectedNotation,
  BadTemplate,
  EmptyOperator,
  UnexpectedFormal,
  UnexpectedInformal,
  EmptyLinkTarget,
  EmptyMetadata,
  DuplicateStepId,
  ReservedStepId,
  DuplicateImport,
  SelfImport,
};

std::string_view violation_name(ViolationCode c);

struct Violation {
  ViolationCode code;
  std::string message;
};

std::vector<Violation> validate_statement(const Statement& s);
std::vector<Violation> validate_theory(const Theory& t);
std::vector<Violation> validate_notation(const NotationDefinition& n);

}  // namespace mathwiki
