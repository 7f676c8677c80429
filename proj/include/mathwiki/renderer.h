// Notation-driven formula rendering into a layout tree, with plain-text and
// layout-XML serializations.
//
// Precedence: higher binds tighter. An operand is fenced iff it is an
// application whose notation precedence is strictly lower than its parent's.
// Equal precedence is never fenced.
#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mathwiki/model.h"

namespace mathwiki {

struct PresentationNode;

struct Row {
  std::vector<PresentationNode> children;
  friend bool operator==(const Row&, const Row&) = default;
};
struct Op {
  std::string text;
  friend bool operator==(const Op&, const Op&) = default;
};
struct Ident {
  std::string text;
  friend bool operator==(const Ident&, const Ident&) = default;
};
struct Num {
  std::string text;
  friend bool operator==(const Num&, const Num&) = default;
};
struct Link {
  std::string target;
  Box<PresentationNode> child;
  friend bool operator==(const Link&, const Link&) = default;
};
struct Fenced {
  Box<PresentationNode> child;
  friend bool operator==(const Fenced&, const Fenced&) = default;
};

struct PresentationNode {
  std::variant<Row, Op, Ident, Num, Link, Fenced> node;
  friend bool operator==(const PresentationNode&, const PresentationNode&) = default;
};

enum class WarningCode {
  MissingNotation,
  OpaqueHead,
  DanglingSymbol,
  DuplicateNotation,
  ArityMismatch,
};

std::string_view warning_name(WarningCode c);

struct Warning {
  WarningCode code;
  std::string subject;
  std::string message;

  friend auto operator<=>(const Warning&, const Warning&) = default;
};

class NotationTable {
 public:
  // A second definition for the same symbol replaces the first and reports
  // DuplicateNotation.
  void add(const NotationDefinition& def, std::vector<Warning>* warnings = nullptr);
  const NotationDefinition* find(const SymbolRef& r) const;

  const std::map<SymbolRef, NotationDefinition>& entries() const { return defs_; }
  friend bool operator==(const NotationTable&, const NotationTable&) = default;

 private:
  std::map<SymbolRef, NotationDefinition> defs_;
};

struct RenderResult {
  PresentationNode tree;
  std::vector<Warning> warnings;  // sorted, without duplicates
};

// `declared` lists the symbols that have a declaration; symbol tokens link
// to the declaring theory's page.
RenderResult render(const FormulaNode& f, const NotationTable& table,
                    const std::set<SymbolRef>& declared);

std::string render_plain(const PresentationNode& p);

// m:row, m:o, m:i, m:n, m:fenced; Link becomes an href on the wrapped element.
std::string serialize_layout(const PresentationNode& p);

}  // namespace mathwiki
