#include "mathwiki/extraction.h"

#include "mathwiki/ontology.h"

namespace mathwiki {

namespace {

class Extractor {
 public:
  explicit Extractor(const std::string& page) : page_(page) {}

  void theory(const Theory& t) {
    add(page_, vocab::kType, vocab::kTheory);
    for (const auto& imp : t.imports) add(page_, vocab::kImports, imp);
  }

  void statement(const Statement& s, const std::string& node) {
    add(node, vocab::kType, std::string(class_name(s.kind)));
    if (const auto* target = s.target_page()) {
      switch (s.kind) {
        case StatementKind::Proof: add(node, vocab::kProves, *target); break;
        case StatementKind::Definition: add(node, vocab::kDefines, *target); break;
        case StatementKind::Example: add(node, vocab::kExemplifies, *target); break;
        default: break;
      }
    }
    if (s.kind == StatementKind::NotationDecl && s.notation) {
      const std::string symbol = s.notation->for_symbol.node_id();
      add(node, vocab::kRenders, symbol);
      add(symbol, vocab::kType, vocab::kSymbol);
    }
    if (s.formal) {
      const std::string f = formula_node_id(page_, ++formula_count_);
      add(node, vocab::kContains, f);
      add(f, vocab::kType, vocab::kFormula);
      for (const auto& r : symbols_used(*s.formal)) add(f, vocab::kUses, r.node_id());
    }
    for (const auto& step : s.steps) {
      const std::string child = step_node_id(page_, step.id);
      add(node, vocab::kContains, child);
      statement(step, child);
    }
  }

  void add(const std::string& s, const std::string& p, const std::string& o) {
    out_.insert(Triple{s, p, o, Provenance::extracted(page_)});
  }

  std::set<Triple> take() { return std::move(out_); }

 private:
  const std::string& page_;
  std::size_t formula_count_ = 0;
  std::set<Triple> out_;
};

}  // namespace

std::string formula_node_id(const std::string& page, std::size_t k) {
  return page + "#f" + std::to_string(k);
}

std::string step_node_id(const std::string& page, const std::string& step_id) {
  return page + "#" + step_id;
}

std::set<Triple> extract(const std::string& page_name, const PageContent& content) {
  Extractor x(page_name);
  if (const auto* t = std::get_if<Theory>(&content)) {
    x.theory(*t);
  } else {
    const auto& s = std::get<Statement>(content);
    x.add(s.home_theory, vocab::kHomeTheoryOf, page_name);
    x.statement(s, page_name);
  }
  return x.take();
}

}  // namespace mathwiki
