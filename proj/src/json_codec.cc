#include "mathwiki/json_codec.h"

#include <sstream>

namespace mathwiki {

namespace {

Json fact_array(const Triple& t) { return Json::array({t.subject, t.predicate, t.object}); }

Result<TriplePattern, std::string> pattern_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) return std::string("a pattern is an array of three strings");
  for (const auto& e : j) {
    if (!e.is_string()) return std::string("a pattern is an array of three strings");
  }
  const auto p = j[1].get<std::string>();
  if (p.starts_with("?")) return std::string("predicate variables are not supported: " + p);
  return TriplePattern{Term::parse(j[0].get<std::string>()), p, Term::parse(j[2].get<std::string>())};
}

}  // namespace

Json to_json(const PageInfo& p) {
  return Json{{"name", p.name}, {"kind", page_kind_name(p.kind)}, {"head_revision", p.head_revision}};
}

Json to_json(const PageView& v) {
  Json j = to_json(v.info);
  j["source"] = v.source;
  return j;
}

Json to_json(const Revision& r) {
  return Json{{"id", r.id},
              {"parent", r.parent ? Json(*r.parent) : Json(nullptr)},
              {"author", r.author},
              {"timestamp", r.timestamp},
              {"tombstone", r.tombstone}};
}

Json to_json(const Warning& w) {
  return Json{{"code", warning_name(w.code)}, {"subject", w.subject}, {"message", w.message}};
}

Json to_json(const SaveReceipt& r) {
  Json warnings = Json::array();
  for (const auto& w : r.warnings) warnings.push_back(to_json(w));
  return Json{{"new_revision", r.new_revision},
              {"invalidated", Json(std::vector<std::string>(r.invalidated.begin(), r.invalidated.end()))},
              {"warnings", warnings}};
}

Json to_json(const Links& l) {
  Json extracted = Json::array();
  Json inferred = Json::array();
  for (const auto& t : l.extracted) extracted.push_back(fact_array(t));
  for (const auto& t : l.inferred) inferred.push_back(fact_array(t));
  return Json{{"extracted", extracted}, {"inferred", inferred}};
}

Json to_json(const WorkQueue& q) {
  Json missing = Json::array();
  for (const auto& r : q.missing_notations) missing.push_back(r.node_id());
  Json dangling = Json::array();
  for (const auto& [page, target] : q.dangling_refs) dangling.push_back(Json::array({page, target}));
  return Json{{"unproven", q.unproven},
              {"undefined_symbols", q.undefined_symbols},
              {"missing_notations", missing},
              {"dangling_refs", dangling}};
}

Json to_json(const ParseError& e) {
  return Json{{"line", e.line},
              {"column", e.column},
              {"code", parse_error_code_name(e.code)},
              {"message", e.message}};
}

Json pages_json(const std::vector<PageInfo>& pages) {
  Json j = Json::array();
  for (const auto& p : pages) j.push_back(to_json(p));
  return j;
}

Json history_json(const std::vector<Revision>& revisions) {
  Json j = Json::array();
  for (const auto& r : revisions) j.push_back(to_json(r));
  return j;
}

Json bindings_json(const std::vector<Binding>& bindings) {
  Json j = Json::array();
  for (const auto& b : bindings) {
    Json row = Json::object();
    for (const auto& [k, v] : b) row[k] = v;
    j.push_back(row);
  }
  return j;
}

Json ApiError::to_json() const {
  Json j{{"status", status}, {"code", code}, {"message", message}};
  if (!detail.is_null()) j["detail"] = detail;
  return j;
}

ApiError api_error(const WikiError& e) {
  ApiError a;
  a.code = std::string(wiki_error_name(e.code));
  a.message = e.message;
  switch (e.code) {
    case WikiErrorCode::Conflict:
      a.status = 409;
      if (e.head_revision) a.detail = Json{{"head_revision", *e.head_revision}};
      break;
    case WikiErrorCode::NameCollision:
      a.status = 409;
      if (e.page) a.detail = Json{{"page", *e.page}};
      break;
    case WikiErrorCode::ParseError:
      a.status = 422;
      if (e.parse_error) a.detail = mathwiki::to_json(*e.parse_error);
      break;
    case WikiErrorCode::InvalidPage:
    case WikiErrorCode::CyclicImport:
      a.status = 422;
      break;
    case WikiErrorCode::UnknownPage:
      a.status = 404;
      if (e.page) a.detail = Json{{"page", *e.page}};
      break;
    case WikiErrorCode::UnsafeNegation:
      a.status = 400;
      break;
    case WikiErrorCode::Io:
      a.status = 500;
      break;
  }
  return a;
}

Result<TriplePattern, std::string> parse_pattern_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  if (tokens.size() != 3) {
    return "expected three tokens in pattern '" + std::string(text) + "'";
  }
  return pattern_from_json(Json(tokens));
}

Result<QueryPattern, std::string> query_from_json(const Json& j) {
  if (!j.is_object()) return std::string("query body must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "patterns" && key != "negations") return "unknown query field '" + key + "'";
  }
  QueryPattern q;
  for (const char* key : {"patterns", "negations"}) {
    if (!j.contains(key)) continue;
    const Json& list = j.at(key);
    if (!list.is_array()) return std::string(key) + " must be an array";
    auto& out = std::string_view(key) == "patterns" ? q.patterns : q.negations;
    for (const auto& p : list) {
      auto tp = pattern_from_json(p);
      if (!tp) return tp.error();
      out.push_back(std::move(*tp));
    }
  }
  return q;
}

}  // namespace mathwiki
