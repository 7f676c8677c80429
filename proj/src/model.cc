#include "mathwiki/model.h"

#include <algorithm>
#include <cctype>

namespace mathwiki {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

void collect_symbols(const FormulaNode& f, std::set<SymbolRef>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Sym>) {
          out.insert(n.ref);
        } else if constexpr (std::is_same_v<T, Apply>) {
          collect_symbols(*n.head, out);
          for (const auto& a : n.args) collect_symbols(a, out);
        }
      },
      f.node);
}

void flatten_steps(const Statement& s, std::vector<Statement>& out) {
  for (const auto& step : s.steps) {
    out.push_back(step);
    flatten_steps(step, out);
  }
}

bool is_reserved_step_id(std::string_view id) {
  // Formula nodes are named "<page>#f<k>"; a step called "f3" would collide.
  if (id.size() < 2 || id[0] != 'f') return false;
  return std::all_of(id.begin() + 1, id.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

void add(std::vector<Violation>& out, ViolationCode code, std::string msg) {
  out.push_back({code, std::move(msg)});
}

void check_metadata(const DublinCore& dc, std::vector<Violation>& out) {
  auto check = [&](const std::optional<std::string>& v, const char* field) {
    if (v && v->empty()) {
      add(out, ViolationCode::EmptyMetadata,
          std::string("metadata field '") + field + "' is empty");
    }
  };
  check(dc.title, "title");
  check(dc.creator, "creator");
  check(dc.description, "description");
  check(dc.date, "date");
}

void validate_into(const Statement& s, bool is_step,
                   std::set<std::string>& seen_ids,
                   std::vector<Violation>& out) {
  const std::string where = "statement '" + s.id + "'";
  if (!is_identifier(s.id)) {
    add(out, ViolationCode::BadIdentifier, where + ": id is not an identifier");
  }
  if (!is_identifier(s.home_theory)) {
    add(out, ViolationCode::BadIdentifier,
        where + ": home theory '" + s.home_theory + "' is not an identifier");
  }
  if (is_step) {
    if (!seen_ids.insert(s.id).second) {
      add(out, ViolationCode::DuplicateStepId,
          where + ": step id used more than once");
    }
    if (is_reserved_step_id(s.id)) {
      add(out, ViolationCode::ReservedStepId,
          where + ": step ids of the form f<digits> are reserved");
    }
  }

  const bool wants_page_target = s.kind == StatementKind::Proof ||
                                 s.kind == StatementKind::Definition ||
                                 s.kind == StatementKind::Example;
  if (wants_page_target) {
    if (!s.for_target) {
      if (s.kind != StatementKind::Example) {
        add(out, ViolationCode::MissingTarget, where + ": 'for' is required");
      }
    } else if (const auto* page = s.target_page();
               page == nullptr || !is_page_name(*page)) {
      add(out, ViolationCode::BadTarget,
          where + ": 'for' must name a page");
    }
  } else if (s.kind == StatementKind::NotationDecl) {
    if (!s.for_target) {
      add(out, ViolationCode::MissingTarget,
          where + ": notation needs a target symbol");
    } else if (!std::holds_alternative<SymbolRef>(*s.for_target)) {
      add(out, ViolationCode::BadTarget,
          where + ": notation target must be a symbol");
    } else if (s.notation &&
               std::get<SymbolRef>(*s.for_target) != s.notation->for_symbol) {
      add(out, ViolationCode::BadTarget,
          where + ": notation target differs from the rendered symbol");
    }
  } else if (s.for_target) {
    add(out, ViolationCode::UnexpectedTarget,
        where + ": kind does not take a 'for' target");
  }

  if (s.kind == StatementKind::NotationDecl) {
    if (is_step) {
      add(out, ViolationCode::UnexpectedNotation,
          where + ": notation declarations cannot be proof steps");
    }
    if (!s.notation) {
      add(out, ViolationCode::MissingNotation,
          where + ": notation definition missing");
    } else {
      auto nv = validate_notation(*s.notation);
      for (auto& v : nv) {
        v.message = where + ": " + v.message;
        out.push_back(std::move(v));
      }
    }
    if (!s.informal.empty()) {
      add(out, ViolationCode::UnexpectedInformal,
          where + ": notation declarations carry no text");
    }
  } else if (s.notation) {
    add(out, ViolationCode::UnexpectedNotation,
        where + ": only notation declarations carry a notation");
  }

  if (s.formal && (s.kind == StatementKind::SymbolDecl ||
                   s.kind == StatementKind::NotationDecl)) {
    add(out, ViolationCode::UnexpectedFormal,
        where + ": kind does not take a formal part");
  }
  if (!s.steps.empty() && s.kind != StatementKind::Proof) {
    add(out, ViolationCode::UnexpectedSteps,
        where + ": only proofs have steps");
  }
  for (const auto& block : s.informal) {
    if (const auto* link = std::get_if<PageLink>(&block);
        link && link->target.empty()) {
      add(out, ViolationCode::EmptyLinkTarget, where + ": link without target");
    }
  }
  check_metadata(s.metadata, out);
  for (const auto& step : s.steps) validate_into(step, true, seen_ids, out);
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), ident_char);
}

bool is_page_name(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return is_identifier(s);
  return is_identifier(s.substr(0, slash)) &&
         is_identifier(s.substr(slash + 1));
}

std::optional<SymbolRef> parse_symbol_node(std::string_view node) {
  auto hash = node.find('#');
  if (hash == std::string_view::npos) return std::nullopt;
  SymbolRef r{std::string(node.substr(0, hash)),
              std::string(node.substr(hash + 1))};
  if (!is_identifier(r.theory) || !is_identifier(r.name)) return std::nullopt;
  return r;
}

BigInt::BigInt(std::int64_t v) : text_(std::to_string(v)) {}

std::optional<BigInt> BigInt::parse(std::string_view s) {
  bool negative = false;
  if (!s.empty() && s[0] == '-') {
    negative = true;
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  auto first = s.find_first_not_of('0');
  BigInt out;
  if (first == std::string_view::npos) return out;  // all zeros
  out.text_ = (negative ? "-" : "") + std::string(s.substr(first));
  return out;
}

namespace formula {
FormulaNode sym(std::string theory, std::string name) {
  return FormulaNode{Sym{SymbolRef{std::move(theory), std::move(name)}}};
}
FormulaNode var(std::string name) { return FormulaNode{Var{std::move(name)}}; }
FormulaNode integer(std::int64_t v) { return FormulaNode{Int{BigInt(v)}}; }
FormulaNode integer(BigInt v) { return FormulaNode{Int{std::move(v)}}; }
FormulaNode apply(FormulaNode head, std::vector<FormulaNode> args) {
  return FormulaNode{Apply{Box<FormulaNode>(std::move(head)), std::move(args)}};
}
}  // namespace formula

std::set<SymbolRef> symbols_used(const FormulaNode& f) {
  std::set<SymbolRef> out;
  collect_symbols(f, out);
  return out;
}

std::string_view fixity_name(Fixity f) {
  switch (f) {
    case Fixity::Prefix: return "prefix";
    case Fixity::Infix: return "infix";
    case Fixity::Postfix: return "postfix";
    case Fixity::Mixfix: return "mixfix";
  }
  return "prefix";
}

std::optional<Fixity> parse_fixity(std::string_view s) {
  if (s == "prefix") return Fixity::Prefix;
  if (s == "infix") return Fixity::Infix;
  if (s == "postfix") return Fixity::Postfix;
  if (s == "mixfix") return Fixity::Mixfix;
  return std::nullopt;
}

std::optional<std::vector<TemplatePart>> parse_template(std::string_view tmpl) {
  std::vector<TemplatePart> parts;
  std::string literal;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] != '#') {
      literal += tmpl[i++];
      continue;
    }
    std::size_t j = i + 1;
    int slot = 0;
    while (j < tmpl.size() && tmpl[j] >= '0' && tmpl[j] <= '9') {
      if (slot > 100000) return std::nullopt;
      slot = slot * 10 + (tmpl[j] - '0');
      ++j;
    }
    if (j == i + 1 || slot == 0) return std::nullopt;
    if (!literal.empty()) parts.push_back({std::move(literal), 0});
    literal.clear();
    parts.push_back({"", slot});
    i = j;
  }
  if (!literal.empty()) parts.push_back({std::move(literal), 0});
  return parts;
}

std::string_view element_name(StatementKind k) {
  switch (k) {
    case StatementKind::SymbolDecl: return "symbol";
    case StatementKind::Definition: return "definition";
    case StatementKind::Axiom: return "axiom";
    case StatementKind::Assertion: return "assertion";
    case StatementKind::Proof: return "proof";
    case StatementKind::Example: return "example";
    case StatementKind::NotationDecl: return "notation";
  }
  return "axiom";
}

std::string_view class_name(StatementKind k) {
  switch (k) {
    case StatementKind::SymbolDecl: return "Symbol";
    case StatementKind::Definition: return "Definition";
    case StatementKind::Axiom: return "Axiom";
    case StatementKind::Assertion: return "Assertion";
    case StatementKind::Proof: return "Proof";
    case StatementKind::Example: return "Example";
    case StatementKind::NotationDecl: return "NotationDefinition";
  }
  return "Statement";
}

std::vector<Statement> substatements(const Statement& s) {
  std::vector<Statement> out;
  flatten_steps(s, out);
  return out;
}

std::string_view violation_name(ViolationCode c) {
  switch (c) {
    case ViolationCode::BadIdentifier: return "BadIdentifier";
    case ViolationCode::MissingTarget: return "MissingTarget";
    case ViolationCode::UnexpectedTarget: return "UnexpectedTarget";
    case ViolationCode::BadTarget: return "BadTarget";
    case ViolationCode::UnexpectedSteps: return "UnexpectedSteps";
    case ViolationCode::MissingNotation: return "MissingNotation";
    case ViolationCode::UnexpectedNotation: return "UnexpectedNotation";
    case ViolationCode::BadTemplate: return "BadTemplate";
    case ViolationCode::EmptyOperator: return "EmptyOperator";
    case ViolationCode::UnexpectedFormal: return "UnexpectedFormal";
    case ViolationCode::UnexpectedInformal: return "UnexpectedInformal";
    case ViolationCode::EmptyLinkTarget: return "EmptyLinkTarget";
    case ViolationCode::EmptyMetadata: return "EmptyMetadata";
    case ViolationCode::DuplicateStepId: return "DuplicateStepId";
    case ViolationCode::ReservedStepId: return "ReservedStepId";
    case ViolationCode::DuplicateImport: return "DuplicateImport";
    case ViolationCode::SelfImport: return "SelfImport";
  }
  return "Unknown";
}

std::vector<Violation> validate_statement(const Statement& s) {
  std::vector<Violation> out;
  std::set<std::string> seen{s.id};
  validate_into(s, false, seen, out);
  return out;
}

std::vector<Violation> validate_theory(const Theory& t) {
  std::vector<Violation> out;
  if (!is_identifier(t.id)) {
    add(out, ViolationCode::BadIdentifier,
        "theory '" + t.id + "': id is not an identifier");
  }
  std::set<std::string> seen;
  for (const auto& imp : t.imports) {
    if (imp == t.id) {
      add(out, ViolationCode::SelfImport, "theory '" + t.id + "' imports itself");
    } else if (!seen.insert(imp).second) {
      add(out, ViolationCode::DuplicateImport,
          "theory '" + t.id + "' imports '" + imp + "' twice");
    }
    if (!is_identifier(imp)) {
      add(out, ViolationCode::BadIdentifier,
          "theory '" + t.id + "': import '" + imp + "' is not an identifier");
    }
  }
  check_metadata(t.metadata, out);
  for (const auto& s : t.statements) {
    auto sv = validate_statement(s);
    out.insert(out.end(), sv.begin(), sv.end());
    if (s.home_theory != t.id) {
      add(out, ViolationCode::BadIdentifier,
          "statement '" + s.id + "': home theory differs from enclosing theory");
    }
  }
  return out;
}

std::vector<Violation> validate_notation(const NotationDefinition& n) {
  std::vector<Violation> out;
  if (!is_identifier(n.for_symbol.theory) || !is_identifier(n.for_symbol.name)) {
    add(out, ViolationCode::BadIdentifier, "notation symbol is not theory#name");
  }
  if (n.fixity == Fixity::Infix && n.op.empty()) {
    add(out, ViolationCode::EmptyOperator, "infix operator is empty");
  }
  if (n.fixity == Fixity::Mixfix) {
    auto parts = parse_template(n.op);
    if (!parts) {
      add(out, ViolationCode::BadTemplate, "malformed slot in mixfix template");
    } else {
      std::vector<int> slots;
      for (const auto& p : *parts) {
        if (p.slot != 0) slots.push_back(p.slot);
      }
      std::sort(slots.begin(), slots.end());
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] != static_cast<int>(i) + 1) {
          add(out, ViolationCode::BadTemplate,
              "mixfix slots must be #1..#n, each exactly once");
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace mathwiki
