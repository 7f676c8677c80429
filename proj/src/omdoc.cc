#include "mathwiki/omdoc.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <initializer_list>

namespace mathwiki {

namespace {

constexpr std::string_view kNamespace = "http://omdoc.org/ns";

// Internal unwinding; converted to a Result at the public boundary.
struct Failure {
  ParseError error;
};

[[noreturn]] void fail(const xml::Node& at, ParseErrorCode code, std::string msg) {
  throw Failure{ParseError{at.pos.line, at.pos.column, code, std::move(msg)}};
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

void check_attributes(const xml::Node& n, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : n.attributes) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      fail(n, ParseErrorCode::Malformed,
           "unknown attribute '" + k + "' on <" + n.name + ">");
    }
  }
}

const std::string& required(const xml::Node& n, std::string_view key) {
  const std::string* v = n.attribute(key);
  if (!v) {
    fail(n, ParseErrorCode::MissingAttr,
         "<" + n.name + "> requires attribute '" + std::string(key) + "'");
  }
  return *v;
}

std::string identifier_attr(const xml::Node& n, std::string_view key) {
  const std::string& v = required(n, key);
  if (!is_identifier(v)) {
    fail(n, ParseErrorCode::BadRef,
         "attribute '" + std::string(key) + "' is not an identifier: '" + v + "'");
  }
  return v;
}

// Rejects any non-whitespace text directly inside a structural element.
void structural_text(const xml::Node& child) {
  if (!child.is_element() && !blank(child.text)) {
    fail(child, ParseErrorCode::Malformed, "unexpected text content");
  }
}

std::string text_only(const xml::Node& n) {
  std::string out;
  for (const auto& c : n.children) {
    if (c.is_element()) {
      fail(c, ParseErrorCode::UnknownElement,
           "<" + n.name + "> holds text only, found <" + c.name + ">");
    }
    out += c.text;
  }
  return out;
}

std::optional<StatementKind> statement_kind(std::string_view name) {
  if (name == "symbol") return StatementKind::SymbolDecl;
  if (name == "definition") return StatementKind::Definition;
  if (name == "axiom") return StatementKind::Axiom;
  if (name == "assertion") return StatementKind::Assertion;
  if (name == "proof") return StatementKind::Proof;
  if (name == "example") return StatementKind::Example;
  if (name == "notation") return StatementKind::NotationDecl;
  return std::nullopt;
}

FormulaNode read_formula(const xml::Node& n) {
  if (!n.is_element()) fail(n, ParseErrorCode::Malformed, "expected a formula element");
  if (n.name == "OMS") {
    check_attributes(n, {"cd", "name"});
    return formula::sym(identifier_attr(n, "cd"), identifier_attr(n, "name"));
  }
  if (n.name == "OMV") {
    check_attributes(n, {"name"});
    return formula::var(identifier_attr(n, "name"));
  }
  if (n.name == "OMI") {
    check_attributes(n, {});
    std::string digits = text_only(n);
    auto b = digits.find_first_not_of(" \t\r\n");
    auto e = digits.find_last_not_of(" \t\r\n");
    auto value = b == std::string::npos
                     ? std::nullopt
                     : BigInt::parse(std::string_view(digits).substr(b, e - b + 1));
    if (!value) fail(n, ParseErrorCode::BadInteger, "<OMI> must hold a decimal integer");
    return formula::integer(std::move(*value));
  }
  if (n.name == "OMA") {
    check_attributes(n, {});
    std::vector<FormulaNode> parts;
    for (const auto& c : n.children) {
      structural_text(c);
      if (c.is_element()) parts.push_back(read_formula(c));
    }
    if (parts.size() < 2) {
      fail(n, ParseErrorCode::Malformed, "<OMA> needs a head and at least one argument");
    }
    FormulaNode head = std::move(parts.front());
    parts.erase(parts.begin());
    return formula::apply(std::move(head), std::move(parts));
  }
  fail(n, ParseErrorCode::UnknownElement, "unknown formula element <" + n.name + ">");
}

void read_cmp(const xml::Node& n, std::vector<TextBlock>& out) {
  check_attributes(n, {});
  auto push_text = [&](const std::string& t) {
    if (t.empty()) return;
    if (!out.empty()) {
      if (auto* prev = std::get_if<Text>(&out.back())) {
        prev->text += t;
        return;
      }
    }
    out.push_back(Text{t});
  };
  for (const auto& c : n.children) {
    if (!c.is_element()) {
      push_text(c.text);
      continue;
    }
    if (c.name != "link") {
      fail(c, ParseErrorCode::UnknownElement, "unknown element <" + c.name + "> in <CMP>");
    }
    check_attributes(c, {"to"});
    const std::string& to = required(c, "to");
    if (!is_page_name(to)) {
      fail(c, ParseErrorCode::BadRef, "link target is not a page name: '" + to + "'");
    }
    out.push_back(PageLink{to, text_only(c)});
  }
}

DublinCore read_metadata(const xml::Node& n) {
  check_attributes(n, {});
  DublinCore dc;
  for (const auto& c : n.children) {
    structural_text(c);
    if (!c.is_element()) continue;
    std::optional<std::string>* field = nullptr;
    if (c.name == "dc-title") field = &dc.title;
    else if (c.name == "dc-creator") field = &dc.creator;
    else if (c.name == "dc-description") field = &dc.description;
    else if (c.name == "dc-date") field = &dc.date;
    else fail(c, ParseErrorCode::UnknownElement, "unknown metadata element <" + c.name + ">");
    check_attributes(c, {});
    if (*field) fail(c, ParseErrorCode::Malformed, "duplicate <" + c.name + ">");
    std::string value = text_only(c);
    if (value.empty()) fail(c, ParseErrorCode::Malformed, "<" + c.name + "> is empty");
    *field = std::move(value);
  }
  return dc;
}

ParseErrorCode code_for(ViolationCode v) {
  switch (v) {
    case ViolationCode::BadIdentifier:
    case ViolationCode::MissingTarget:
    case ViolationCode::UnexpectedTarget:
    case ViolationCode::BadTarget:
    case ViolationCode::DuplicateImport:
    case ViolationCode::SelfImport:
    case ViolationCode::EmptyLinkTarget:
      return ParseErrorCode::BadRef;
    default:
      return ParseErrorCode::Malformed;
  }
}

Statement read_statement(const xml::Node& n, const std::string& home, bool is_step) {
  auto kind = statement_kind(n.name);
  if (!kind || (is_step && *kind == StatementKind::NotationDecl)) {
    fail(n, ParseErrorCode::UnknownElement,
         "unexpected element <" + n.name + ">" + (is_step ? " in <proof>" : " in <theory>"));
  }
  Statement s;
  s.kind = *kind;
  s.home_theory = home;

  if (s.kind == StatementKind::NotationDecl) {
    check_attributes(n, {"id", "for", "fixity", "operator", "precedence"});
    const std::string& target = required(n, "for");
    auto ref = parse_symbol_node(target);
    if (!ref) fail(n, ParseErrorCode::BadRef, "notation 'for' must be theory#name: '" + target + "'");
    const std::string& fixity_text = required(n, "fixity");
    auto fixity = parse_fixity(fixity_text);
    if (!fixity) fail(n, ParseErrorCode::Malformed, "unknown fixity '" + fixity_text + "'");
    const std::string& op = required(n, "operator");
    const std::string& prec_text = required(n, "precedence");
    std::int64_t prec = 0;
    auto [end, ec] = std::from_chars(prec_text.data(), prec_text.data() + prec_text.size(), prec);
    if (ec != std::errc() || end != prec_text.data() + prec_text.size()) {
      fail(n, ParseErrorCode::BadInteger, "precedence must be an integer: '" + prec_text + "'");
    }
    s.id = n.attribute("id") ? identifier_attr(n, "id") : default_notation_id(*ref);
    s.for_target = *ref;
    s.notation = NotationDefinition{*ref, *fixity, op, prec};
    for (const auto& c : n.children) {
      structural_text(c);
      if (c.is_element()) {
        fail(c, ParseErrorCode::UnknownElement, "<notation> takes no children");
      }
    }
  } else {
    const bool takes_for = s.kind == StatementKind::Proof ||
                           s.kind == StatementKind::Definition ||
                           s.kind == StatementKind::Example;
    if (takes_for) {
      check_attributes(n, {"id", "for"});
    } else {
      check_attributes(n, {"id"});
    }
    s.id = identifier_attr(n, "id");
    if (takes_for) {
      const std::string* target = n.attribute("for");
      if (!target && s.kind != StatementKind::Example) required(n, "for");
      if (target) {
        if (!is_page_name(*target)) {
          fail(n, ParseErrorCode::BadRef, "'for' is not a page name: '" + *target + "'");
        }
        s.for_target = *target;
      }
    }

    int phase = 0;  // 0: CMP, 1: FMP seen, 2: steps
    for (const auto& c : n.children) {
      structural_text(c);
      if (!c.is_element()) continue;
      if (c.name == "CMP") {
        if (phase > 0) fail(c, ParseErrorCode::Malformed, "<CMP> must precede <FMP> and steps");
        read_cmp(c, s.informal);
      } else if (c.name == "FMP") {
        if (s.kind == StatementKind::SymbolDecl) {
          fail(c, ParseErrorCode::UnknownElement, "<symbol> takes no <FMP>");
        }
        if (phase > 0) fail(c, ParseErrorCode::Malformed, "at most one <FMP>, before any steps");
        check_attributes(c, {});
        std::optional<FormulaNode> f;
        for (const auto& fc : c.children) {
          structural_text(fc);
          if (!fc.is_element()) continue;
          if (f) fail(fc, ParseErrorCode::Malformed, "<FMP> holds exactly one formula");
          f = read_formula(fc);
        }
        if (!f) fail(c, ParseErrorCode::Malformed, "<FMP> holds exactly one formula");
        s.formal = std::move(f);
        phase = 1;
      } else if (s.kind == StatementKind::Proof) {
        s.steps.push_back(read_statement(c, home, true));
        phase = 2;
      } else {
        fail(c, ParseErrorCode::UnknownElement,
             "unexpected element <" + c.name + "> in <" + n.name + ">");
      }
    }
  }

  if (!is_step) {
    auto violations = validate_statement(s);
    if (!violations.empty()) {
      fail(n, code_for(violations.front().code), violations.front().message);
    }
  }
  return s;
}

Theory read_theory(const xml::Node& n) {
  check_attributes(n, {"xml:id"});
  Theory t;
  t.id = identifier_attr(n, "xml:id");
  int phase = 0;  // 0: metadata allowed, 1: imports allowed, 2: statements
  for (const auto& c : n.children) {
    structural_text(c);
    if (!c.is_element()) continue;
    if (c.name == "metadata") {
      if (phase > 0) fail(c, ParseErrorCode::Malformed, "<metadata> must come first");
      t.metadata = read_metadata(c);
      phase = 1;
    } else if (c.name == "imports") {
      if (phase > 1) fail(c, ParseErrorCode::Malformed, "<imports> must precede statements");
      check_attributes(c, {"from"});
      std::string from = identifier_attr(c, "from");
      if (from == t.id) fail(c, ParseErrorCode::BadRef, "theory '" + t.id + "' imports itself");
      if (std::find(t.imports.begin(), t.imports.end(), from) != t.imports.end()) {
        fail(c, ParseErrorCode::BadRef, "duplicate import of '" + from + "'");
      }
      for (const auto& ic : c.children) {
        structural_text(ic);
        if (ic.is_element()) fail(ic, ParseErrorCode::UnknownElement, "<imports> takes no children");
      }
      t.imports.push_back(std::move(from));
      phase = 1;
    } else {
      t.statements.push_back(read_statement(c, t.id, false));
      phase = 2;
    }
  }
  return t;
}

Document read_document(const xml::Node& root) {
  if (root.name != "omdoc") {
    fail(root, ParseErrorCode::UnknownElement, "root element must be <omdoc>, found <" + root.name + ">");
  }
  check_attributes(root, {"xmlns"});
  if (const auto* ns = root.attribute("xmlns"); ns && *ns != kNamespace) {
    fail(root, ParseErrorCode::Malformed, "unsupported namespace '" + *ns + "'");
  }
  Document d;
  for (const auto& c : root.children) {
    structural_text(c);
    if (!c.is_element()) continue;
    if (c.name != "theory") {
      fail(c, ParseErrorCode::UnknownElement, "unexpected element <" + c.name + "> in <omdoc>");
    }
    d.theories.push_back(read_theory(c));
  }
  return d;
}

void write_cmp(xml::Writer& w, const std::vector<TextBlock>& blocks) {
  if (blocks.empty()) return;
  std::string raw;
  for (const auto& b : blocks) {
    if (const auto* t = std::get_if<Text>(&b)) {
      raw += xml::escape_text(t->text);
    } else {
      const auto& link = std::get<PageLink>(b);
      raw += "<link to=\"" + xml::escape_attribute(link.target) + "\">" +
             xml::escape_text(link.label) + "</link>";
    }
  }
  w.open("CMP").inline_raw(raw).close();
}

void write_statement(xml::Writer& w, const Statement& s) {
  if (s.kind == StatementKind::NotationDecl && s.notation) {
    const auto& n = *s.notation;
    std::vector<std::pair<std::string, std::string>> attrs;
    if (s.id != default_notation_id(n.for_symbol)) attrs.emplace_back("id", s.id);
    attrs.emplace_back("for", n.for_symbol.node_id());
    attrs.emplace_back("fixity", std::string(fixity_name(n.fixity)));
    attrs.emplace_back("operator", n.op);
    attrs.emplace_back("precedence", std::to_string(n.precedence));
    w.empty("notation", attrs);
    return;
  }
  std::vector<std::pair<std::string, std::string>> attrs{{"id", s.id}};
  if (const auto* page = s.target_page()) attrs.emplace_back("for", *page);
  w.open(element_name(s.kind), attrs);
  write_cmp(w, s.informal);
  if (s.formal) {
    w.open("FMP");
    write_formula_xml(w, *s.formal);
    w.close();
  }
  for (const auto& step : s.steps) write_statement(w, step);
  w.close();
}

// ASCII notation --------------------------------------------------------

enum class Tok { Ident, Int, Hash, Dollar, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class AsciiParser {
 public:
  explicit AsciiParser(std::string_view src) : src_(src) {}

  FormulaNode run() {
    advance();
    FormulaNode f = formula(0);
    if (cur_.kind != Tok::End) error("unexpected '" + cur_.text + "' after formula");
    return f;
  }

 private:
  static constexpr int kMaxDepth = 256;

  [[noreturn]] void error(std::string msg, ParseErrorCode code = ParseErrorCode::Malformed) {
    throw Failure{ParseError{cur_.line, cur_.column, code, std::move(msg)}};
  }

  void advance() {
    while (i_ < src_.size() && (src_[i_] == ' ' || src_[i_] == '\t' ||
                                src_[i_] == '\n' || src_[i_] == '\r')) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
    cur_ = Token{Tok::End, "end of input", line_, col_};
    if (i_ >= src_.size()) return;
    const std::size_t start = i_;
    char c = src_[i_];
    auto take = [&](Tok k) {
      ++i_;
      cur_.kind = k;
      cur_.text = std::string(1, c);
    };
    switch (c) {
      case '#': take(Tok::Hash); break;
      case '$': take(Tok::Dollar); break;
      case '(': take(Tok::LParen); break;
      case ')': take(Tok::RParen); break;
      case ',': take(Tok::Comma); break;
      default:
        if (c == '-' || (c >= '0' && c <= '9')) {
          ++i_;
          while (i_ < src_.size() && src_[i_] >= '0' && src_[i_] <= '9') ++i_;
          cur_.kind = Tok::Int;
          cur_.text = std::string(src_.substr(start, i_ - start));
          if (cur_.text == "-") error("expected digits after '-'", ParseErrorCode::BadInteger);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          ++i_;
          while (i_ < src_.size() &&
                 (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                  src_[i_] == '_' || src_[i_] == '-')) {
            ++i_;
          }
          cur_.kind = Tok::Ident;
          cur_.text = std::string(src_.substr(start, i_ - start));
        } else {
          cur_.text = std::string(1, c);
          error("unexpected character '" + cur_.text + "'");
        }
    }
    col_ += static_cast<int>(i_ - start);
  }

  std::string expect_ident(const char* what) {
    if (cur_.kind != Tok::Ident) error(std::string("expected ") + what);
    std::string s = cur_.text;
    advance();
    return s;
  }

  FormulaNode atom() {
    switch (cur_.kind) {
      case Tok::Ident: {
        std::string theory = cur_.text;
        advance();
        if (cur_.kind != Tok::Hash) error("expected '#' in symbol reference");
        advance();
        std::string name = expect_ident("symbol name after '#'");
        return formula::sym(std::move(theory), std::move(name));
      }
      case Tok::Dollar: {
        advance();
        return formula::var(expect_ident("variable name after '$'"));
      }
      case Tok::Int: {
        auto v = BigInt::parse(cur_.text);
        if (!v) error("bad integer", ParseErrorCode::BadInteger);
        advance();
        return formula::integer(std::move(*v));
      }
      default:
        error("expected a formula, found '" + cur_.text + "'");
    }
  }

  FormulaNode formula(int depth) {
    if (depth > kMaxDepth) error("formula nested too deeply");
    FormulaNode f = atom();
    while (cur_.kind == Tok::LParen) {
      advance();
      std::vector<FormulaNode> args;
      args.push_back(formula(depth + 1));
      while (cur_.kind == Tok::Comma) {
        advance();
        args.push_back(formula(depth + 1));
      }
      if (cur_.kind != Tok::RParen) error("expected ',' or ')'");
      advance();
      f = formula::apply(std::move(f), std::move(args));
    }
    return f;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_{Tok::End, "", 1, 1};
};

void print_ascii(const FormulaNode& f, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Sym>) {
          out += n.ref.theory + "#" + n.ref.name;
        } else if constexpr (std::is_same_v<T, Var>) {
          out += "$" + n.name;
        } else if constexpr (std::is_same_v<T, Int>) {
          out += n.value.str();
        } else {
          print_ascii(*n.head, out);
          out += '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            print_ascii(n.args[i], out);
          }
          out += ')';
        }
      },
      f.node);
}

}  // namespace

std::string_view parse_error_code_name(ParseErrorCode c) {
  switch (c) {
    case ParseErrorCode::Malformed: return "Malformed";
    case ParseErrorCode::UnknownElement: return "UnknownElement";
    case ParseErrorCode::MissingAttr: return "MissingAttr";
    case ParseErrorCode::BadRef: return "BadRef";
    case ParseErrorCode::BadInteger: return "BadInteger";
  }
  return "Malformed";
}

std::string ParseError::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " +
         std::string(parse_error_code_name(code)) + ": " + message;
}

std::string default_notation_id(const SymbolRef& r) {
  return "notation-" + r.theory + "-" + r.name;
}

Result<Document, ParseError> parse_document(std::string_view text) {
  auto root = xml::parse(text);
  if (!root) {
    const auto& e = root.error();
    return ParseError{e.pos.line, e.pos.column, ParseErrorCode::Malformed, e.message};
  }
  try {
    return read_document(*root);
  } catch (const Failure& f) {
    return f.error;
  }
}

std::string serialize_document(const Document& d) {
  xml::Writer w;
  w.open("omdoc");
  for (const auto& t : d.theories) {
    w.open("theory", {{"xml:id", t.id}});
    if (!t.metadata.empty()) {
      w.open("metadata");
      if (t.metadata.title) w.leaf("dc-title", *t.metadata.title);
      if (t.metadata.creator) w.leaf("dc-creator", *t.metadata.creator);
      if (t.metadata.description) w.leaf("dc-description", *t.metadata.description);
      if (t.metadata.date) w.leaf("dc-date", *t.metadata.date);
      w.close();
    }
    for (const auto& imp : t.imports) w.empty("imports", {{"from", imp}});
    for (const auto& s : t.statements) write_statement(w, s);
    w.close();
  }
  w.close();
  return w.str() + "\n";
}

Result<FormulaNode, ParseError> formula_from_xml(const xml::Node& node) {
  try {
    return read_formula(node);
  } catch (const Failure& f) {
    return f.error;
  }
}

void write_formula_xml(xml::Writer& w, const FormulaNode& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Sym>) {
          w.empty("OMS", {{"cd", n.ref.theory}, {"name", n.ref.name}});
        } else if constexpr (std::is_same_v<T, Var>) {
          w.empty("OMV", {{"name", n.name}});
        } else if constexpr (std::is_same_v<T, Int>) {
          w.leaf("OMI", n.value.str());
        } else {
          w.open("OMA");
          write_formula_xml(w, *n.head);
          for (const auto& a : n.args) write_formula_xml(w, a);
          w.close();
        }
      },
      f.node);
}

Result<FormulaNode, ParseError> parse_formula_ascii(std::string_view src) {
  try {
    return AsciiParser(src).run();
  } catch (const Failure& f) {
    return f.error;
  }
}

std::string print_formula_ascii(const FormulaNode& f) {
  std::string out;
  print_ascii(f, out);
  return out;
}

}  // namespace mathwiki
