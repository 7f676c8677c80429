#include "mathwiki/renderer.h"

#include <optional>

#include "mathwiki/xml.h"

namespace mathwiki {

namespace {

PresentationNode row(std::vector<PresentationNode> children) {
  return PresentationNode{Row{std::move(children)}};
}
PresentationNode op(std::string text) { return PresentationNode{Op{std::move(text)}}; }
PresentationNode fenced(PresentationNode child) {
  return PresentationNode{Fenced{Box<PresentationNode>(std::move(child))}};
}

std::string fallback_name(const SymbolRef& r) { return r.theory + "?" + r.name; }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

class Renderer {
 public:
  Renderer(const NotationTable& table, const std::set<SymbolRef>& declared)
      : table_(table), declared_(declared) {}

  struct Rendered {
    PresentationNode node;
    std::optional<std::int64_t> precedence;  // set for notated applications
  };

  Rendered node(const FormulaNode& f) {
    return std::visit(
        [&](const auto& n) -> Rendered {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Var>) {
            return {PresentationNode{Ident{n.name}}, std::nullopt};
          } else if constexpr (std::is_same_v<T, Int>) {
            return {PresentationNode{Num{n.value.str()}}, std::nullopt};
          } else if constexpr (std::is_same_v<T, Sym>) {
            return {standalone(n.ref), std::nullopt};
          } else {
            return application(n);
          }
        },
        f.node);
  }

  std::vector<Warning> warnings() const { return {warnings_.begin(), warnings_.end()}; }

 private:
  void warn(WarningCode code, const SymbolRef& r, std::string message) {
    warnings_.insert(Warning{code, r.node_id(), std::move(message)});
  }

  PresentationNode linked(const SymbolRef& r, PresentationNode inner) {
    if (!declared_.count(r)) {
      warn(WarningCode::DanglingSymbol, r, "no declaration for " + r.node_id());
      return inner;
    }
    return PresentationNode{Link{r.theory, Box<PresentationNode>(std::move(inner))}};
  }

  const NotationDefinition* lookup(const SymbolRef& r) {
    const auto* def = table_.find(r);
    if (!def) warn(WarningCode::MissingNotation, r, "no notation for " + r.node_id());
    return def;
  }

  PresentationNode standalone(const SymbolRef& r) {
    const auto* def = lookup(r);
    std::string display = fallback_name(r);
    if (def && def->fixity != Fixity::Mixfix && !def->op.empty()) display = def->op;
    return linked(r, PresentationNode{Ident{display}});
  }

  PresentationNode operand(const FormulaNode& f, std::int64_t parent) {
    Rendered r = node(f);
    if (r.precedence && *r.precedence < parent) return fenced(std::move(r.node));
    return std::move(r.node);
  }

  // Arguments inside explicit parentheses need no precedence bracketing.
  PresentationNode comma_list(const std::vector<FormulaNode>& args, std::size_t from = 0) {
    std::vector<PresentationNode> items;
    for (std::size_t i = from; i < args.size(); ++i) {
      if (i > from) items.push_back(op(","));
      items.push_back(node(args[i]).node);
    }
    return row(std::move(items));
  }

  Rendered application(const Apply& a) {
    const auto* head_sym = std::get_if<Sym>(&a.head->node);
    if (!head_sym) {
      warnings_.insert(Warning{WarningCode::OpaqueHead, print_head(*a.head),
                               "application head is not a symbol"});
      return {row({node(*a.head).node, fenced(comma_list(a.args))}), std::nullopt};
    }
    const SymbolRef& r = head_sym->ref;
    const auto* def = lookup(r);
    if (!def) {
      return {row({linked(r, PresentationNode{Ident{fallback_name(r)}}), fenced(comma_list(a.args))}),
              std::nullopt};
    }
    const std::int64_t prec = def->precedence;
    std::vector<PresentationNode> items;
    switch (def->fixity) {
      case Fixity::Infix:
        if (a.args.size() == 1) {
          items.push_back(linked(r, op(def->op)));
          items.push_back(operand(a.args[0], prec));
        } else {
          for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i) items.push_back(linked(r, op(def->op)));
            items.push_back(operand(a.args[i], prec));
          }
        }
        break;
      case Fixity::Prefix:
        items.push_back(linked(r, op(def->op)));
        items.push_back(fenced(comma_list(a.args)));
        break;
      case Fixity::Postfix:
        if (a.args.size() == 1) {
          items.push_back(operand(a.args[0], prec));
        } else {
          items.push_back(fenced(comma_list(a.args)));
        }
        items.push_back(linked(r, op(def->op)));
        break;
      case Fixity::Mixfix:
        mixfix(r, *def, a.args, items);
        break;
    }
    return {row(std::move(items)), prec};
  }

  void mixfix(const SymbolRef& r, const NotationDefinition& def,
              const std::vector<FormulaNode>& args, std::vector<PresentationNode>& items) {
    auto parts = parse_template(def.op);
    if (!parts) parts = std::vector<TemplatePart>{{def.op, 0}};
    std::size_t max_slot = 0;
    bool missing = false;
    for (const auto& part : *parts) {
      if (part.slot == 0) {
        std::string text = trim(part.literal);
        if (!text.empty()) items.push_back(linked(r, op(text)));
        continue;
      }
      max_slot = std::max<std::size_t>(max_slot, part.slot);
      if (static_cast<std::size_t>(part.slot) <= args.size()) {
        items.push_back(operand(args[part.slot - 1], def.precedence));
      } else {
        missing = true;
      }
    }
    if (args.size() > max_slot) {
      items.push_back(fenced(comma_list(args, max_slot)));
      missing = true;
    }
    if (missing) {
      warn(WarningCode::ArityMismatch, r,
           "template of " + r.node_id() + " does not match " +
               std::to_string(args.size()) + " argument(s)");
    }
  }

  static std::string print_head(const FormulaNode& f) {
    if (const auto* v = std::get_if<Var>(&f.node)) return "$" + v->name;
    if (const auto* i = std::get_if<Int>(&f.node)) return i->value.str();
    return "(application)";
  }

  const NotationTable& table_;
  const std::set<SymbolRef>& declared_;
  std::set<Warning> warnings_;
};

const PresentationNode& unlink(const PresentationNode& p) {
  const PresentationNode* cur = &p;
  while (const auto* l = std::get_if<Link>(&cur->node)) cur = &*l->child;
  return *cur;
}

const Op* as_op(const PresentationNode& p) { return std::get_if<Op>(&unlink(p).node); }

void plain(const PresentationNode& p, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Row>) {
          for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i > 0) {
              const Op* prev = as_op(n.children[i - 1]);
              const Op* cur = as_op(n.children[i]);
              const bool prefix_call = i == 1 && prev &&
                                       std::holds_alternative<Fenced>(unlink(n.children[i]).node);
              if (cur && cur->text == ",") {
                // no space before a comma
              } else if (prefix_call) {
                // "f(x)"
              } else if (prev || cur) {
                out += ' ';
              }
            }
            plain(n.children[i], out);
          }
        } else if constexpr (std::is_same_v<T, Link>) {
          plain(*n.child, out);
        } else if constexpr (std::is_same_v<T, Fenced>) {
          out += '(';
          plain(*n.child, out);
          out += ')';
        } else {
          out += n.text;
        }
      },
      p.node);
}

void layout(const PresentationNode& p, const std::string* href, std::string& out) {
  auto open = [&](const char* tag) {
    out += '<';
    out += tag;
    if (href) out += " href=\"" + xml::escape_attribute(*href) + "\"";
    out += '>';
  };
  auto close = [&](const char* tag) {
    out += "</";
    out += tag;
    out += '>';
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Link>) {
          layout(*n.child, href ? href : &n.target, out);
        } else if constexpr (std::is_same_v<T, Row>) {
          open("m:row");
          for (const auto& c : n.children) layout(c, nullptr, out);
          close("m:row");
        } else if constexpr (std::is_same_v<T, Fenced>) {
          open("m:fenced");
          layout(*n.child, nullptr, out);
          close("m:fenced");
        } else {
          const char* tag = std::is_same_v<T, Op> ? "m:o" : std::is_same_v<T, Ident> ? "m:i" : "m:n";
          open(tag);
          out += xml::escape_text(n.text);
          close(tag);
        }
      },
      p.node);
}

}  // namespace

std::string_view warning_name(WarningCode c) {
  switch (c) {
    case WarningCode::MissingNotation: return "MissingNotation";
    case WarningCode::OpaqueHead: return "OpaqueHead";
    case WarningCode::DanglingSymbol: return "DanglingSymbol";
    case WarningCode::DuplicateNotation: return "DuplicateNotation";
    case WarningCode::ArityMismatch: return "ArityMismatch";
  }
  return "Unknown";
}

void NotationTable::add(const NotationDefinition& def, std::vector<Warning>* warnings) {
  auto [it, inserted] = defs_.insert_or_assign(def.for_symbol, def);
  if (!inserted && warnings) {
    warnings->push_back(Warning{WarningCode::DuplicateNotation, def.for_symbol.node_id(),
                                "later notation for " + def.for_symbol.node_id() +
                                    " replaces an earlier one"});
  }
}

const NotationDefinition* NotationTable::find(const SymbolRef& r) const {
  auto it = defs_.find(r);
  return it == defs_.end() ? nullptr : &it->second;
}

RenderResult render(const FormulaNode& f, const NotationTable& table,
                    const std::set<SymbolRef>& declared) {
  Renderer r(table, declared);
  PresentationNode tree = r.node(f).node;
  return RenderResult{std::move(tree), r.warnings()};
}

std::string render_plain(const PresentationNode& p) {
  std::string out;
  plain(p, out);
  return out;
}

std::string serialize_layout(const PresentationNode& p) {
  std::string out;
  layout(p, nullptr, out);
  return out;
}

}  // namespace mathwiki
