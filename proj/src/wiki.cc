#include "mathwiki/wiki.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mathwiki/ontology.h"

namespace mathwiki {

namespace fs = std::filesystem;

namespace {

constexpr const char* kMathNs = "http://www.w3.org/1998/Math/MathML";

WikiError error(WikiErrorCode code, std::string message) {
  WikiError e;
  e.code = code;
  e.message = std::move(message);
  return e;
}

WikiError unknown_page(const std::string& name) {
  WikiError e = error(WikiErrorCode::UnknownPage, "no page named '" + name + "'");
  e.page = name;
  return e;
}

WikiError from_parse_error(const ParseError& pe) {
  WikiError e = error(WikiErrorCode::ParseError, pe.to_string());
  e.parse_error = pe;
  return e;
}

std::string encode_dir_name(const std::string& page) {
  std::string out;
  for (char c : page) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      out += c;
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", static_cast<unsigned char>(c));
      out += buf;
    }
  }
  return out;
}

std::optional<std::string> decode_dir_name(const std::string& dir) {
  std::string out;
  for (std::size_t i = 0; i < dir.size(); ++i) {
    if (dir[i] != '%') {
      out += dir[i];
      continue;
    }
    if (i + 2 >= dir.size()) return std::nullopt;
    int v = 0;
    for (int k = 1; k <= 2; ++k) {
      char c = dir[i + k];
      v *= 16;
      if (c >= '0' && c <= '9') v += c - '0';
      else if (c >= 'A' && c <= 'F') v += c - 'A' + 10;
      else return std::nullopt;
    }
    out += static_cast<char>(v);
    i += 2;
  }
  return out;
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
  return static_cast<bool>(out);
}

std::optional<NotationDefinition> notation_of(const std::optional<PageContent>& content) {
  if (!content) return std::nullopt;
  const auto* s = std::get_if<Statement>(&*content);
  if (!s || s->kind != StatementKind::NotationDecl) return std::nullopt;
  return s->notation;
}

void collect_targets(const Statement& s, std::vector<std::string>& out) {
  if (const auto* t = s.target_page()) out.push_back(*t);
  for (const auto& step : s.steps) collect_targets(step, out);
}

void write_informal(xml::Writer& w, const std::vector<TextBlock>& blocks) {
  if (blocks.empty()) return;
  std::string raw;
  for (const auto& b : blocks) {
    if (const auto* t = std::get_if<Text>(&b)) {
      raw += xml::escape_text(t->text);
    } else {
      const auto& l = std::get<PageLink>(b);
      raw += "<link to=\"" + xml::escape_attribute(l.target) + "\">" +
             xml::escape_text(l.label) + "</link>";
    }
  }
  w.open("text").inline_raw(raw).close();
}

struct PageRenderer {
  const NotationTable& table;
  const std::set<SymbolRef>& declared;
  xml::Writer& w;
  std::vector<std::string> lines;
  std::set<Warning> warnings;

  void statement(const Statement& s, const std::string& page, const std::string& node,
                 std::size_t& counter, bool show_notation) {
    std::vector<std::pair<std::string, std::string>> attrs{
        {"id", node}, {"kind", std::string(element_name(s.kind))}};
    if (const auto* t = s.target_page()) attrs.emplace_back("for", *t);
    if (show_notation && s.notation) {
      attrs.emplace_back("symbol", s.notation->for_symbol.node_id());
      attrs.emplace_back("fixity", std::string(fixity_name(s.notation->fixity)));
      attrs.emplace_back("operator", s.notation->op);
      attrs.emplace_back("precedence", std::to_string(s.notation->precedence));
    }
    w.open("statement", attrs);
    write_informal(w, s.informal);
    if (s.formal) {
      RenderResult r = render(*s.formal, table, declared);
      w.open("formula", {{"id", formula_node_id(page, ++counter)}})
          .inline_raw(serialize_layout(r.tree))
          .close();
      lines.push_back(render_plain(r.tree));
      warnings.insert(r.warnings.begin(), r.warnings.end());
    }
    for (const auto& step : s.steps) {
      statement(step, page, step_node_id(page, step.id), counter, false);
    }
    w.close();
  }
};

}  // namespace

std::string_view page_kind_name(PageKind k) {
  return k == PageKind::TheoryPage ? "theory" : "statement";
}

std::string_view wiki_error_name(WikiErrorCode c) {
  switch (c) {
    case WikiErrorCode::Conflict: return "Conflict";
    case WikiErrorCode::ParseError: return "ParseError";
    case WikiErrorCode::InvalidPage: return "InvalidPage";
    case WikiErrorCode::CyclicImport: return "CyclicImport";
    case WikiErrorCode::NameCollision: return "NameCollision";
    case WikiErrorCode::UnknownPage: return "UnknownPage";
    case WikiErrorCode::UnsafeNegation: return "UnsafeNegation";
    case WikiErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string page_source(const PageContent& content) {
  Document d;
  if (const auto* t = std::get_if<Theory>(&content)) {
    d.theories.push_back(*t);
  } else {
    const auto& s = std::get<Statement>(content);
    d.theories.push_back(Theory{s.home_theory, {}, {}, {s}});
  }
  return serialize_document(d);
}

Result<ParsedPage, WikiError> parse_page(const std::string& name, std::string_view source) {
  if (!is_page_name(name)) {
    return error(WikiErrorCode::InvalidPage, "'" + name + "' is not a valid page name");
  }
  auto doc = parse_document(source);
  if (!doc) return from_parse_error(doc.error());
  if (doc->theories.size() != 1) {
    return error(WikiErrorCode::InvalidPage, "a page source holds exactly one <theory>");
  }
  Theory& t = doc->theories.front();
  if (t.id == name) {
    if (!t.statements.empty()) {
      return error(WikiErrorCode::InvalidPage,
                   "theory page '" + name + "' cannot hold statements; each statement is its own page");
    }
    ParsedPage p{PageKind::TheoryPage, PageContent{t}, ""};
    p.canonical_source = page_source(p.content);
    return p;
  }
  if (t.statements.size() != 1 || !t.imports.empty() || !t.metadata.empty()) {
    return error(WikiErrorCode::InvalidPage,
                 "statement page '" + name + "' must wrap exactly one statement in its home theory");
  }
  Statement& s = t.statements.front();
  auto slash = name.find('/');
  std::string local = slash == std::string::npos ? name : name.substr(slash + 1);
  if (local != s.id) {
    return error(WikiErrorCode::InvalidPage,
                 "page '" + name + "' must be named after its statement '" + s.id + "'");
  }
  if (slash != std::string::npos && name.substr(0, slash) != t.id) {
    return error(WikiErrorCode::InvalidPage,
                 "page '" + name + "' is not in its home theory '" + t.id + "'");
  }
  ParsedPage p{PageKind::StatementPage, PageContent{s}, ""};
  p.canonical_source = page_source(p.content);
  return p;
}

Wiki::Wiki(Clock clock) : clock_(std::move(clock)) {}

Wiki::Wiki(Clock clock, fs::path dir) : clock_(std::move(clock)), dir_(std::move(dir)) {}

Result<std::unique_ptr<Wiki>, WikiError> Wiki::open(const fs::path& dir, Clock clock) {
  std::error_code ec;
  fs::create_directories(dir / "pages", ec);
  if (ec) return error(WikiErrorCode::Io, "cannot create data directory " + dir.string() + ": " + ec.message());
  std::unique_ptr<Wiki> wiki(new Wiki(std::move(clock), dir));
  auto loaded = wiki->load();
  if (!loaded) return loaded.error();
  return wiki;
}

Result<bool, WikiError> Wiki::load() {
  std::error_code ec;
  fs::directory_iterator it(dir_ / "pages", ec);
  if (ec) return error(WikiErrorCode::Io, "cannot read " + (dir_ / "pages").string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_directory()) continue;
    auto name = decode_dir_name(entry.path().filename().string());
    if (!name) return error(WikiErrorCode::Io, "bad page directory " + entry.path().string());
    PageState state;
    for (RevisionId n = 1;; ++n) {
      fs::path meta_path = entry.path() / ("rev-" + std::to_string(n) + ".json");
      if (!fs::exists(meta_path)) break;
      auto meta_text = read_file(meta_path);
      auto source = read_file(entry.path() / ("rev-" + std::to_string(n) + ".xml"));
      if (!meta_text || !source) return error(WikiErrorCode::Io, "cannot read revision " + meta_path.string());
      Revision rev;
      try {
        auto meta = nlohmann::json::parse(*meta_text);
        rev.id = meta.at("id").get<RevisionId>();
        if (!meta.at("parent").is_null()) rev.parent = meta.at("parent").get<RevisionId>();
        rev.author = meta.at("author").get<std::string>();
        rev.timestamp = meta.at("timestamp").get<std::string>();
        rev.tombstone = meta.at("tombstone").get<bool>();
        rev.sequence = meta.at("sequence").get<std::uint64_t>();
      } catch (const nlohmann::json::exception& e) {
        return error(WikiErrorCode::Io, "bad revision metadata " + meta_path.string() + ": " + e.what());
      }
      if (rev.id != n) return error(WikiErrorCode::Io, "revision numbering broken in " + meta_path.string());
      rev.source = std::move(*source);
      sequence_ = std::max(sequence_, rev.sequence);
      state.revisions.push_back(std::move(rev));
    }
    if (state.revisions.empty()) continue;
    state.created = state.revisions.front().sequence;
    const Revision& head = state.revisions.back();
    if (!head.tombstone) {
      auto parsed = parse_page(*name, head.source);
      if (!parsed) {
        WikiError e = parsed.error();
        e.message = "stored head of '" + *name + "' is invalid: " + e.message;
        return e;
      }
      state.kind = parsed->kind;
      state.content = std::move(parsed->content);
    } else {
      // A tombstone keeps the kind of the last live revision.
      for (auto r = state.revisions.rbegin(); r != state.revisions.rend(); ++r) {
        if (r->tombstone) continue;
        if (auto parsed = parse_page(*name, r->source)) state.kind = parsed->kind;
        break;
      }
    }
    pages_.emplace(*name, std::move(state));
  }
  for (const auto& [name, state] : pages_) reextract(name);
  reentail();
  return true;
}

bool Wiki::live(const std::string& name) const {
  auto it = pages_.find(name);
  return it != pages_.end() && it->second.content.has_value();
}

const Statement* Wiki::statement_of(const std::string& name) const {
  auto it = pages_.find(name);
  if (it == pages_.end() || !it->second.content) return nullptr;
  return std::get_if<Statement>(&*it->second.content);
}

const Theory* Wiki::theory_of(const std::string& name) const {
  auto it = pages_.find(name);
  if (it == pages_.end() || !it->second.content) return nullptr;
  return std::get_if<Theory>(&*it->second.content);
}

void Wiki::reextract(const std::string& name) {
  store_.retract_page(name);
  auto it = pages_.find(name);
  if (it == pages_.end() || !it->second.content) return;
  for (const auto& t : extract(name, *it->second.content)) store_.insert(t);
}

void Wiki::reentail() { store_.replace_inferred(entail(store_.facts(false), builtin_schema())); }

std::set<std::string> Wiki::containers_of(const std::string& node) const {
  std::set<std::string> out;
  for (const auto& t : store_.match(std::nullopt, vocab::kContains, node)) {
    if (live(t.subject)) out.insert(t.subject);
  }
  return out;
}

std::set<SymbolRef> Wiki::declared_symbols() const {
  std::set<SymbolRef> out;
  for (const auto& [name, state] : pages_) {
    if (!state.content) continue;
    const auto* s = std::get_if<Statement>(&*state.content);
    if (s && s->kind == StatementKind::SymbolDecl) out.insert(SymbolRef{s->home_theory, s->id});
  }
  return out;
}

NotationTable Wiki::build_notation_table(std::vector<Warning>* warnings) const {
  std::vector<std::pair<std::uint64_t, const NotationDefinition*>> defs;
  for (const auto& [name, state] : pages_) {
    if (!state.content) continue;
    const auto* s = std::get_if<Statement>(&*state.content);
    if (s && s->kind == StatementKind::NotationDecl && s->notation) {
      defs.emplace_back(state.revisions.back().sequence, &*s->notation);
    }
  }
  std::sort(defs.begin(), defs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  NotationTable table;
  for (const auto& [seq, def] : defs) table.add(*def, warnings);
  return table;
}

std::optional<WikiError> Wiki::check_import_cycles(
    const std::map<std::string, std::vector<std::string>>& overrides) const {
  std::map<std::string, std::vector<std::string>> graph;
  for (const auto& [name, state] : pages_) {
    if (const auto* t = theory_of(name)) graph[name] = t->imports;
  }
  for (const auto& [name, imports] : overrides) graph[name] = imports;

  enum Color { White, Grey, Black };
  std::map<std::string, Color> color;
  std::vector<std::string> path;
  std::optional<std::vector<std::string>> cycle;
  auto visit = [&](auto& self, const std::string& n) -> void {
    if (cycle) return;
    color[n] = Grey;
    path.push_back(n);
    auto it = graph.find(n);
    if (it != graph.end()) {
      for (const auto& m : it->second) {
        Color c = color.count(m) ? color[m] : White;
        if (c == Grey) {
          auto from = std::find(path.begin(), path.end(), m);
          cycle = std::vector<std::string>(from, path.end());
          cycle->push_back(m);
          return;
        }
        if (c == White) self(self, m);
        if (cycle) return;
      }
    }
    path.pop_back();
    color[n] = Black;
  };
  for (const auto& [name, imports] : graph) {
    if (!color.count(name)) visit(visit, name);
    if (cycle) break;
  }
  if (!cycle) return std::nullopt;
  std::string chain;
  for (const auto& n : *cycle) chain += (chain.empty() ? "" : " -> ") + n;
  return error(WikiErrorCode::CyclicImport, "import cycle: " + chain);
}

Revision Wiki::make_revision(const PageState* existing, std::string source, bool tombstone,
                             const std::string& author) {
  Revision rev;
  rev.id = existing ? existing->revisions.back().id + 1 : 1;
  if (existing) rev.parent = existing->revisions.back().id;
  rev.author = author;
  rev.timestamp = clock_();
  rev.source = std::move(source);
  rev.tombstone = tombstone;
  rev.sequence = ++sequence_;
  return rev;
}

std::optional<WikiError> Wiki::persist(const std::string& name, const Revision& rev) const {
  if (dir_.empty()) return std::nullopt;
  fs::path page_dir = dir_ / "pages" / encode_dir_name(name);
  std::error_code ec;
  fs::create_directories(page_dir, ec);
  if (ec) return error(WikiErrorCode::Io, "cannot create " + page_dir.string() + ": " + ec.message());
  nlohmann::json meta{{"id", rev.id},
                      {"parent", rev.parent ? nlohmann::json(*rev.parent) : nlohmann::json(nullptr)},
                      {"author", rev.author},
                      {"timestamp", rev.timestamp},
                      {"tombstone", rev.tombstone},
                      {"sequence", rev.sequence}};
  const std::string stem = "rev-" + std::to_string(rev.id);
  // The metadata file marks the revision as complete, so it is written last.
  if (!write_file(page_dir / (stem + ".xml"), rev.source) ||
      !write_file(page_dir / (stem + ".json"), meta.dump(2) + "\n")) {
    return error(WikiErrorCode::Io, "cannot write revision " + stem + " of '" + name + "'");
  }
  return std::nullopt;
}

Result<SaveReceipt, WikiError> Wiki::save_page(const std::string& name, std::string_view source,
                                               std::optional<RevisionId> base_revision,
                                               const std::string& author) {
  auto parsed = parse_page(name, source);
  if (!parsed) return parsed.error();
  return commit(name, std::move(*parsed), base_revision, author);
}

Result<SaveReceipt, WikiError> Wiki::delete_page(const std::string& name,
                                                 std::optional<RevisionId> base_revision,
                                                 const std::string& author) {
  return commit(name, std::nullopt, base_revision, author);
}

Result<SaveReceipt, WikiError> Wiki::commit(const std::string& name,
                                            std::optional<ParsedPage> parsed,
                                            std::optional<RevisionId> base,
                                            const std::string& author) {
  std::unique_lock lock(mu_);
  auto it = pages_.find(name);
  PageState* existing = it == pages_.end() ? nullptr : &it->second;
  const RevisionId head = existing ? existing->revisions.back().id : 0;

  if (!parsed && (!existing || !existing->content)) return unknown_page(name);
  if (existing ? (!base || *base != head) : (base && *base != 0)) {
    WikiError e = error(WikiErrorCode::Conflict,
                        "page '" + name + "' is at revision " + std::to_string(head) +
                            (base ? ", edit was based on " + std::to_string(*base)
                                  : ", edit named no base revision"));
    e.head_revision = head;
    return e;
  }
  if (parsed) {
    if (const auto* t = std::get_if<Theory>(&parsed->content)) {
      if (auto cyc = check_import_cycles({{name, t->imports}})) return *cyc;
    }
  }

  const auto old_notation = existing ? notation_of(existing->content) : std::nullopt;
  const auto old_declared = declared_symbols();
  std::set<std::string> stale = containers_of(name);

  Revision rev = make_revision(existing, parsed ? parsed->canonical_source : std::string(),
                               !parsed, author);
  if (auto io = persist(name, rev)) {
    --sequence_;
    return *io;
  }

  PageState& state = pages_[name];
  if (!existing) state.created = rev.sequence;
  const RevisionId new_id = rev.id;
  state.revisions.push_back(std::move(rev));
  if (parsed) {
    state.kind = parsed->kind;
    state.content = std::move(parsed->content);
  } else {
    state.content.reset();
  }

  reextract(name);
  reentail();

  SaveReceipt receipt;
  receipt.new_revision = new_id;
  const auto new_notation = notation_of(state.content);
  if (old_notation != new_notation) {
    std::set<SymbolRef> changed;
    if (old_notation) changed.insert(old_notation->for_symbol);
    if (new_notation) changed.insert(new_notation->for_symbol);
    receipt.invalidated = [&] {
      // Inline of invalidation_set() without re-taking the lock.
      std::set<std::string> owners;
      for (const auto& s : changed) {
        for (const auto& t : store_.match(std::nullopt, vocab::kUses, s.node_id())) {
          if (!t.provenance.is_inferred() && live(t.provenance.page())) {
            owners.insert(t.provenance.page());
          }
        }
      }
      std::set<std::string> out = owners;
      for (const auto& d : owners) {
        auto c = containers_of(d);
        out.insert(c.begin(), c.end());
      }
      return out;
    }();
    receipt.invalidated.erase(name);
  }

  if (declared_symbols() != old_declared) {
    clear_cache();
  } else {
    stale.insert(name);
    auto now = containers_of(name);
    stale.insert(now.begin(), now.end());
    stale.insert(receipt.invalidated.begin(), receipt.invalidated.end());
    drop_cache(stale);
  }

  std::vector<Warning> dup_warnings;
  build_notation_table(&dup_warnings);
  std::set<Warning> warnings;
  for (const auto& w : dup_warnings) {
    if (new_notation && w.subject == new_notation->for_symbol.node_id()) warnings.insert(w);
  }
  if (state.content) {
    auto rendered = render_uncached(name);
    warnings.insert(rendered.warnings.begin(), rendered.warnings.end());
  }
  receipt.warnings.assign(warnings.begin(), warnings.end());
  return receipt;
}

Result<std::vector<std::string>, WikiError> Wiki::import_document(std::string_view xml,
                                                                  const std::string& author) {
  auto doc = parse_document(xml);
  if (!doc) return from_parse_error(doc.error());

  std::unique_lock lock(mu_);
  std::vector<std::pair<std::string, ParsedPage>> plan;
  std::set<std::string> names;
  std::map<std::string, std::vector<std::string>> import_graph;
  auto claim = [&](const std::string& name) -> std::optional<WikiError> {
    if (!names.insert(name).second || live(name)) {
      WikiError e = error(WikiErrorCode::NameCollision, "page '" + name + "' already exists");
      e.page = name;
      return e;
    }
    return std::nullopt;
  };
  for (const auto& t : doc->theories) {
    if (auto e = claim(t.id)) return *e;
    Theory page{t.id, t.imports, t.metadata, {}};
    import_graph[t.id] = t.imports;
    plan.emplace_back(t.id, ParsedPage{PageKind::TheoryPage, PageContent{page}, ""});
    for (const auto& s : t.statements) {
      std::string name = t.id + "/" + s.id;
      if (auto e = claim(name)) return *e;
      plan.emplace_back(name, ParsedPage{PageKind::StatementPage, PageContent{s}, ""});
    }
  }
  if (auto cyc = check_import_cycles(import_graph)) return *cyc;

  std::vector<std::string> created;
  for (auto& [name, page] : plan) {
    auto it = pages_.find(name);
    PageState* existing = it == pages_.end() ? nullptr : &it->second;
    Revision rev = make_revision(existing, page_source(page.content), false, author);
    if (auto io = persist(name, rev)) return *io;
    PageState& state = pages_[name];
    if (!existing) state.created = rev.sequence;
    state.revisions.push_back(std::move(rev));
    state.kind = page.kind;
    state.content = std::move(page.content);
    created.push_back(name);
  }
  for (const auto& name : created) reextract(name);
  reentail();
  clear_cache();
  return created;
}

Result<std::string, WikiError> Wiki::export_theory(const std::string& theory, bool closure) const {
  std::shared_lock lock(mu_);
  if (!theory_of(theory)) {
    if (live(theory)) {
      return error(WikiErrorCode::UnknownPage, "'" + theory + "' is not a theory page");
    }
    return unknown_page(theory);
  }
  std::set<std::string> selected{theory};
  if (closure) {
    for (const auto& n : store_.reachable(theory, vocab::kDependsOn)) {
      if (theory_of(n)) selected.insert(n);
    }
  }

  // Imports before importers; ties broken by name.
  std::map<std::string, int> pending;
  std::map<std::string, std::vector<std::string>> importers;
  for (const auto& n : selected) {
    pending[n];
    for (const auto& imp : theory_of(n)->imports) {
      if (selected.count(imp)) {
        ++pending[n];
        importers[imp].push_back(n);
      }
    }
  }
  std::set<std::string> ready;
  for (const auto& [n, k] : pending) {
    if (k == 0) ready.insert(n);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& m : importers[n]) {
      if (--pending[m] == 0) ready.insert(m);
    }
  }

  Document doc;
  for (const auto& n : order) {
    Theory t = *theory_of(n);
    std::vector<std::pair<std::uint64_t, const Statement*>> members;
    for (const auto& tr : store_.match(n, vocab::kHomeTheoryOf, std::nullopt)) {
      if (tr.provenance.is_inferred()) continue;
      if (const auto* s = statement_of(tr.object)) {
        members.emplace_back(pages_.at(tr.object).created, s);
      }
    }
    std::sort(members.begin(), members.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (const auto& [created, s] : members) t.statements.push_back(*s);
    doc.theories.push_back(std::move(t));
  }
  return serialize_document(doc);
}

std::set<std::string> Wiki::invalidation_set(const std::set<SymbolRef>& changed) const {
  std::shared_lock lock(mu_);
  std::set<std::string> owners;
  for (const auto& s : changed) {
    for (const auto& t : store_.match(std::nullopt, vocab::kUses, s.node_id())) {
      if (!t.provenance.is_inferred() && live(t.provenance.page())) owners.insert(t.provenance.page());
    }
  }
  std::set<std::string> out = owners;
  for (const auto& d : owners) {
    auto c = containers_of(d);
    out.insert(c.begin(), c.end());
  }
  return out;
}

Result<Links, WikiError> Wiki::links_for(const std::string& page) const {
  std::shared_lock lock(mu_);
  if (!live(page)) return unknown_page(page);
  const std::string prefix = page + "#";
  auto mine = [&](const std::string& node) {
    return node == page || node.compare(0, prefix.size(), prefix) == 0;
  };
  Links links;
  for (const auto& t : store_.match(std::nullopt, std::nullopt, std::nullopt)) {
    if (!mine(t.subject) && !mine(t.object)) continue;
    (t.provenance.is_inferred() ? links.inferred : links.extracted).push_back(t);
  }
  return links;
}

WorkQueue Wiki::work_queue() const {
  std::shared_lock lock(mu_);
  WorkQueue q;

  QueryPattern unproven;
  unproven.patterns.push_back({Term::variable("t"), vocab::kType, Term::constant(vocab::kAssertion)});
  unproven.negations.push_back({Term::variable("p"), vocab::kProves, Term::variable("t")});
  for (const auto& b : store_.query(unproven).value()) {
    const std::string& t = b.at("t");
    const auto* s = statement_of(t);
    if (s && s->kind == StatementKind::Assertion) q.unproven.push_back(t);
  }

  for (const auto& [name, state] : pages_) {
    const auto* s = statement_of(name);
    if (s && s->kind == StatementKind::SymbolDecl &&
        store_.match(std::nullopt, vocab::kDefines, name).empty()) {
      q.undefined_symbols.push_back(name);
    }
  }

  std::set<SymbolRef> missing;
  for (const auto& t : store_.match(std::nullopt, vocab::kUses, std::nullopt)) {
    if (!store_.match(std::nullopt, vocab::kRenders, t.object).empty()) continue;
    if (auto r = parse_symbol_node(t.object)) missing.insert(*r);
  }
  q.missing_notations.assign(missing.begin(), missing.end());

  std::set<std::pair<std::string, std::string>> dangling;
  for (const auto& [name, state] : pages_) {
    if (!state.content) continue;
    std::vector<std::string> targets;
    if (const auto* t = std::get_if<Theory>(&*state.content)) {
      targets = t->imports;
    } else {
      collect_targets(std::get<Statement>(*state.content), targets);
    }
    for (const auto& target : targets) {
      if (!live(target)) dangling.emplace(name, target);
    }
  }
  q.dangling_refs.assign(dangling.begin(), dangling.end());
  return q;
}

Result<std::vector<Binding>, WikiError> Wiki::query(const QueryPattern& q) const {
  std::shared_lock lock(mu_);
  auto r = store_.query(q);
  if (!r) return error(WikiErrorCode::UnsafeNegation, r.error().message);
  return std::move(r).value();
}

RenderedPage Wiki::render_uncached(const std::string& name) const {
  const PageState& state = pages_.at(name);
  const NotationTable table = build_notation_table(nullptr);
  const std::set<SymbolRef> declared = declared_symbols();
  xml::Writer w;
  PageRenderer pr{table, declared, w, {}, {}};
  w.open("page", {{"xmlns:m", kMathNs},
                  {"name", name},
                  {"kind", std::string(page_kind_name(state.kind))},
                  {"revision", std::to_string(state.revisions.back().id)}});
  if (const auto* t = std::get_if<Theory>(&*state.content)) {
    w.open("theory", {{"id", t->id}});
    if (t->metadata.title) w.leaf("title", *t->metadata.title);
    if (t->metadata.creator) w.leaf("creator", *t->metadata.creator);
    if (t->metadata.description) w.leaf("description", *t->metadata.description);
    if (t->metadata.date) w.leaf("date", *t->metadata.date);
    for (const auto& imp : t->imports) w.empty("imports", {{"from", imp}});
    std::vector<std::pair<std::uint64_t, std::string>> members;
    for (const auto& tr : store_.match(name, vocab::kHomeTheoryOf, std::nullopt)) {
      // Notation declarations are presentation rules, shown on their own pages.
      const Statement* member = tr.provenance.is_inferred() ? nullptr : statement_of(tr.object);
      if (member && member->kind != StatementKind::NotationDecl) {
        members.emplace_back(pages_.at(tr.object).created, tr.object);
      }
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (const auto& [created, member] : members) {
      std::size_t counter = 0;
      pr.statement(*statement_of(member), member, member, counter, false);
    }
    w.close();
  } else {
    std::size_t counter = 0;
    pr.statement(std::get<Statement>(*state.content), name, name, counter, true);
  }
  w.close();

  RenderedPage out;
  out.revision = state.revisions.back().id;
  out.layout = w.str() + "\n";
  for (const auto& line : pr.lines) out.plain += line + "\n";
  out.warnings.assign(pr.warnings.begin(), pr.warnings.end());
  return out;
}

Result<RenderedPage, WikiError> Wiki::render_page(const std::string& page) const {
  std::shared_lock lock(mu_);
  if (!live(page)) return unknown_page(page);
  const RevisionId head = pages_.at(page).revisions.back().id;
  {
    std::lock_guard cache_lock(cache_mu_);
    auto it = cache_.find(page);
    if (it != cache_.end() && it->second.revision == head) return it->second.page;
  }
  RenderedPage rendered = render_uncached(page);
  std::lock_guard cache_lock(cache_mu_);
  cache_[page] = CacheEntry{head, rendered};
  return rendered;
}

bool Wiki::render_cached(const std::string& page) const {
  std::lock_guard cache_lock(cache_mu_);
  return cache_.count(page) > 0;
}

void Wiki::drop_cache(const std::set<std::string>& pages) {
  std::lock_guard cache_lock(cache_mu_);
  for (const auto& p : pages) cache_.erase(p);
}

void Wiki::clear_cache() {
  std::lock_guard cache_lock(cache_mu_);
  cache_.clear();
}

std::vector<PageInfo> Wiki::list_pages() const {
  std::shared_lock lock(mu_);
  std::vector<PageInfo> out;
  for (const auto& [name, state] : pages_) {
    if (state.content) out.push_back(PageInfo{name, state.kind, state.revisions.back().id});
  }
  return out;
}

Result<PageView, WikiError> Wiki::get_page(const std::string& name) const {
  std::shared_lock lock(mu_);
  if (!live(name)) return unknown_page(name);
  const PageState& state = pages_.at(name);
  return PageView{PageInfo{name, state.kind, state.revisions.back().id},
                  state.revisions.back().source};
}

Result<std::vector<Revision>, WikiError> Wiki::history(const std::string& name) const {
  std::shared_lock lock(mu_);
  auto it = pages_.find(name);
  if (it == pages_.end()) return unknown_page(name);
  return it->second.revisions;
}

std::vector<Triple> Wiki::triples() const {
  std::shared_lock lock(mu_);
  return store_.match(std::nullopt, std::nullopt, std::nullopt);
}

NotationTable Wiki::notation_table() const {
  std::shared_lock lock(mu_);
  return build_notation_table(nullptr);
}

std::map<std::string, PageContent> Wiki::page_contents() const {
  std::shared_lock lock(mu_);
  std::map<std::string, PageContent> out;
  for (const auto& [name, state] : pages_) {
    if (state.content) out.emplace(name, *state.content);
  }
  return out;
}

}  // namespace mathwiki
