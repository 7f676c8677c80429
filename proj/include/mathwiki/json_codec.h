// JSON encodings shared by the HTTP service and the CLI.
//
//   PageInfo     {"name", "kind", "head_revision"}
//   PageView     {"name", "kind", "head_revision", "source"}
//   Revision     {"id", "parent", "author", "timestamp", "tombstone"}
//   SaveReceipt  {"new_revision", "invalidated": [...], "warnings": [Warning]}
//   Warning      {"code", "subject", "message"}
//   Links        {"extracted": [[s,p,o]...], "inferred": [[s,p,o]...]}
//   WorkQueue    {"unproven", "undefined_symbols", "missing_notations": ["th#name"],
//                 "dangling_refs": [[page, target]]}
//   QueryPattern {"patterns": [["?t","type","Assertion"]], "negations": [...]}
//   Binding      {"t": "..."}  (variable names without '?')
//   ApiError     {"status", "code", "message", "detail"?}
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mathwiki/result.h"
#include "mathwiki/wiki.h"

namespace mathwiki {

using Json = nlohmann::ordered_json;

Json to_json(const PageInfo& p);
Json to_json(const PageView& v);
Json to_json(const Revision& r);
Json to_json(const Warning& w);
Json to_json(const SaveReceipt& r);
Json to_json(const Links& l);
Json to_json(const WorkQueue& q);
Json to_json(const ParseError& e);

Json pages_json(const std::vector<PageInfo>& pages);
Json history_json(const std::vector<Revision>& revisions);
Json bindings_json(const std::vector<Binding>& bindings);

struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
  Json detail;  // null when absent

  Json to_json() const;
};

ApiError api_error(const WikiError& e);

// Parses "?t type Assertion": three whitespace-separated tokens, the middle
// one a constant predicate.
Result<TriplePattern, std::string> parse_pattern_text(std::string_view text);
Result<QueryPattern, std::string> query_from_json(const Json& j);

}  // namespace mathwiki
