// Wiki lifecycle: pages, revisions, the save pipeline, import splitting,
// export assembly, link boxes, work queues and render invalidation.
//
// A page holds one theory (without its statements) or one statement. Page
// sources are canonical OMDoc documents with exactly one <theory>; for a
// statement page that theory carries only the statement and names its home
// theory. Imported statements are named "<theory>/<statement-id>".
//
// Writes are serialized under a wiki-wide lock; reads share it.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "mathwiki/extraction.h"
#include "mathwiki/omdoc.h"
#include "mathwiki/renderer.h"
#include "mathwiki/result.h"
#include "mathwiki/triple_store.h"

namespace mathwiki {

using RevisionId = std::int64_t;

enum class PageKind { TheoryPage, StatementPage };
std::string_view page_kind_name(PageKind k);  // "theory" / "statement"

struct Revision {
  RevisionId id = 0;
  std::optional<RevisionId> parent;
  std::string author;
  std::string timestamp;  // UTC, ISO 8601
  std::string source;     // canonical serialization; empty for a tombstone
  bool tombstone = false;
  std::uint64_t sequence = 0;  // wiki-wide save order
};

struct PageInfo {
  std::string name;
  PageKind kind = PageKind::TheoryPage;
  RevisionId head_revision = 0;

  bool operator==(const PageInfo&) const = default;
};

struct PageView {
  PageInfo info;
  std::string source;
};

struct SaveReceipt {
  RevisionId new_revision = 0;
  std::set<std::string> invalidated;
  std::vector<Warning> warnings;
};

enum class WikiErrorCode {
  Conflict,
  ParseError,
  InvalidPage,
  CyclicImport,
  NameCollision,
  UnknownPage,
  UnsafeNegation,
  Io,
};

std::string_view wiki_error_name(WikiErrorCode c);

struct WikiError {
  WikiErrorCode code = WikiErrorCode::InvalidPage;
  std::string message;
  std::optional<RevisionId> head_revision;  // Conflict
  std::optional<ParseError> parse_error;    // ParseError
  std::optional<std::string> page;          // NameCollision, UnknownPage
};

struct Links {
  std::vector<Triple> extracted;
  std::vector<Triple> inferred;
};

struct WorkQueue {
  std::vector<std::string> unproven;
  std::vector<std::string> undefined_symbols;
  std::vector<SymbolRef> missing_notations;
  std::vector<std::pair<std::string, std::string>> dangling_refs;  // (page, target)

  bool empty() const {
    return unproven.empty() && undefined_symbols.empty() && missing_notations.empty() &&
           dangling_refs.empty();
  }
};

struct RenderedPage {
  RevisionId revision = 0;
  std::string layout;  // page XML embedding the layout dialect
  std::string plain;   // one line per formula
  std::vector<Warning> warnings;
};

// Parsed form of a single page source.
struct ParsedPage {
  PageKind kind;
  PageContent content;
  std::string canonical_source;
};

Result<ParsedPage, WikiError> parse_page(const std::string& name, std::string_view source);
std::string page_source(const PageContent& content);

using Clock = std::function<std::string()>;
std::string utc_now();

class Wiki {
 public:
  // In-memory wiki.
  explicit Wiki(Clock clock = utc_now);

  // Persistent wiki rooted at `dir` (created if missing); the triple store
  // is rebuilt from the stored page heads.
  static Result<std::unique_ptr<Wiki>, WikiError> open(const std::filesystem::path& dir,
                                                       Clock clock = utc_now);

  Wiki(const Wiki&) = delete;
  Wiki& operator=(const Wiki&) = delete;

  // New pages take no base revision (or 0); existing pages must name the
  // current head.
  Result<SaveReceipt, WikiError> save_page(const std::string& name, std::string_view source,
                                           std::optional<RevisionId> base_revision,
                                           const std::string& author = "anonymous");
  // Appends a tombstone revision.
  Result<SaveReceipt, WikiError> delete_page(const std::string& name,
                                             std::optional<RevisionId> base_revision,
                                             const std::string& author = "anonymous");

  Result<std::vector<std::string>, WikiError> import_document(
      std::string_view xml, const std::string& author = "anonymous");
  Result<std::string, WikiError> export_theory(const std::string& theory, bool closure) const;

  std::set<std::string> invalidation_set(const std::set<SymbolRef>& changed) const;
  Result<Links, WikiError> links_for(const std::string& page) const;
  WorkQueue work_queue() const;
  Result<std::vector<Binding>, WikiError> query(const QueryPattern& q) const;

  // Served from the render cache when the entry is still valid.
  Result<RenderedPage, WikiError> render_page(const std::string& page) const;
  bool render_cached(const std::string& page) const;

  std::vector<PageInfo> list_pages() const;
  Result<PageView, WikiError> get_page(const std::string& name) const;
  Result<std::vector<Revision>, WikiError> history(const std::string& name) const;

  // Snapshots for diagnostics and tests.
  std::vector<Triple> triples() const;
  NotationTable notation_table() const;
  std::map<std::string, PageContent> page_contents() const;

 private:
  struct PageState {
    PageKind kind = PageKind::TheoryPage;
    std::vector<Revision> revisions;
    std::optional<PageContent> content;  // empty once deleted
    std::uint64_t created = 0;
  };

  struct CacheEntry {
    RevisionId revision;
    RenderedPage page;
  };

  Wiki(Clock clock, std::filesystem::path dir);

  bool live(const std::string& name) const;
  const Statement* statement_of(const std::string& name) const;
  const Theory* theory_of(const std::string& name) const;

  Result<SaveReceipt, WikiError> commit(const std::string& name,
                                        std::optional<ParsedPage> parsed,
                                        std::optional<RevisionId> base,
                                        const std::string& author);
  std::optional<WikiError> check_import_cycles(
      const std::map<std::string, std::vector<std::string>>& overrides) const;
  Revision make_revision(const PageState* existing, std::string source, bool tombstone,
                         const std::string& author);
  std::optional<WikiError> persist(const std::string& name, const Revision& rev) const;
  Result<bool, WikiError> load();

  void reextract(const std::string& name);
  void reentail();
  std::set<std::string> containers_of(const std::string& node) const;
  std::set<SymbolRef> declared_symbols() const;
  NotationTable build_notation_table(std::vector<Warning>* warnings) const;
  RenderedPage render_uncached(const std::string& name) const;
  void drop_cache(const std::set<std::string>& pages);
  void clear_cache();

  Clock clock_;
  std::filesystem::path dir_;  // empty for in-memory wikis

  mutable std::shared_mutex mu_;
  std::map<std::string, PageState> pages_;
  TripleStore store_;
  std::uint64_t sequence_ = 0;

  mutable std::mutex cache_mu_;
  mutable std::map<std::string, CacheEntry> cache_;
};

}  // namespace mathwiki
