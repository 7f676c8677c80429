// mathwiki: batch access to a wiki data directory.
//
// Exit status: 0 success, 1 usage error, 2 data error. Data goes to stdout,
// diagnostics to stderr. With --json, results are printed as JSON on stdout
// and failures as an ApiError object on stderr.
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mathwiki/json_codec.h"
#include "mathwiki/omdoc.h"
#include "mathwiki/service.h"
#include "mathwiki/wiki.h"

using namespace mathwiki;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;

struct Options {
  std::string data_dir;
  bool json = false;
  std::string file;
  std::string page;
  bool closure = false;
  bool plain = false;
  std::vector<std::string> patterns;
  std::vector<std::string> negations;
  int port = 8080;
  std::string host = "127.0.0.1";
};

int fail(const Options& o, const ApiError& e) {
  if (o.json) {
    std::cerr << e.to_json().dump() << "\n";
  } else {
    std::cerr << "mathwiki: " << e.code << ": " << e.message << "\n";
  }
  return kData;
}

int fail(const Options& o, const WikiError& e) { return fail(o, api_error(e)); }

int usage(const std::string& message) {
  std::cerr << "mathwiki: " << message << "\n";
  return kUsage;
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<Wiki> open_wiki(const Options& o, int& status) {
  if (o.data_dir.empty()) {
    status = usage("--data-dir (or WIKI_DATA) is required");
    return nullptr;
  }
  auto w = Wiki::open(o.data_dir);
  if (!w) {
    status = fail(o, w.error());
    return nullptr;
  }
  return std::move(w).value();
}

int cmd_import(const Options& o) {
  auto xml = slurp(o.file);
  if (!xml) return fail(o, ApiError{500, "Io", "cannot read " + o.file, nullptr});
  int status = 0;
  auto wiki = open_wiki(o, status);
  if (!wiki) return status;
  auto pages = wiki->import_document(*xml);
  if (!pages) {
    WikiError e = pages.error();
    if (e.parse_error) e.message = o.file + ":" + e.parse_error->to_string();
    return fail(o, e);
  }
  if (o.json) {
    std::cout << Json{{"pages", *pages}}.dump() << "\n";
  } else {
    for (const auto& p : *pages) std::cout << p << "\n";
  }
  return 0;
}

int cmd_export(const Options& o) {
  int status = 0;
  auto wiki = open_wiki(o, status);
  if (!wiki) return status;
  auto doc = wiki->export_theory(o.page, o.closure);
  if (!doc) return fail(o, doc.error());
  if (o.json) {
    std::cout << Json{{"document", *doc}}.dump() << "\n";
  } else {
    std::cout << *doc;
  }
  return 0;
}

int cmd_render(const Options& o) {
  int status = 0;
  auto wiki = open_wiki(o, status);
  if (!wiki) return status;
  auto r = wiki->render_page(o.page);
  if (!r) return fail(o, r.error());
  for (const auto& w : r->warnings) {
    if (!o.json) std::cerr << "warning: " << warning_name(w.code) << ": " << w.message << "\n";
  }
  if (o.json) {
    Json warnings = Json::array();
    for (const auto& w : r->warnings) warnings.push_back(to_json(w));
    std::cout << Json{{"revision", r->revision},
                      {"layout", r->layout},
                      {"plain", r->plain},
                      {"warnings", warnings}}
                     .dump()
              << "\n";
  } else {
    std::cout << (o.plain ? r->plain : r->layout);
  }
  return 0;
}

int cmd_validate(const Options& o) {
  auto xml = slurp(o.file);
  if (!xml) return fail(o, ApiError{500, "Io", "cannot read " + o.file, nullptr});
  auto doc = parse_document(*xml);
  if (!doc) {
    const ParseError& e = doc.error();
    if (o.json) {
      std::cout << Json{{"valid", false}, {"errors", Json::array({to_json(e)})}}.dump() << "\n";
    } else {
      std::cerr << o.file << ":" << e.to_string() << "\n";
    }
    return kData;
  }
  std::size_t statements = 0;
  for (const auto& t : doc->theories) statements += t.statements.size();
  if (o.json) {
    std::cout << Json{{"valid", true},
                      {"theories", doc->theories.size()},
                      {"statements", statements}}
                     .dump()
              << "\n";
  } else {
    std::cout << o.file << ": ok (" << doc->theories.size() << " theories, " << statements
              << " statements)\n";
  }
  return 0;
}

int cmd_tasks(const Options& o) {
  int status = 0;
  auto wiki = open_wiki(o, status);
  if (!wiki) return status;
  WorkQueue q = wiki->work_queue();
  if (o.json) {
    std::cout << to_json(q).dump() << "\n";
    return 0;
  }
  auto section = [](const char* title, const std::vector<std::string>& rows) {
    std::cout << title << " (" << rows.size() << ")\n";
    for (const auto& r : rows) std::cout << "  " << r << "\n";
  };
  section("unproven", q.unproven);
  section("undefined symbols", q.undefined_symbols);
  std::vector<std::string> missing;
  for (const auto& r : q.missing_notations) missing.push_back(r.node_id());
  section("missing notations", missing);
  std::vector<std::string> dangling;
  for (const auto& [page, target] : q.dangling_refs) dangling.push_back(page + " -> " + target);
  section("dangling references", dangling);
  return 0;
}

int cmd_query(const Options& o) {
  QueryPattern q;
  for (const auto& text : o.patterns) {
    auto p = parse_pattern_text(text);
    if (!p) return usage(p.error());
    q.patterns.push_back(std::move(*p));
  }
  for (const auto& text : o.negations) {
    auto p = parse_pattern_text(text);
    if (!p) return usage(p.error());
    q.negations.push_back(std::move(*p));
  }
  int status = 0;
  auto wiki = open_wiki(o, status);
  if (!wiki) return status;
  auto r = wiki->query(q);
  if (!r) return fail(o, r.error());
  if (o.json) {
    std::cout << bindings_json(*r).dump() << "\n";
    return 0;
  }
  for (const auto& b : *r) {
    std::string line;
    for (const auto& [k, v] : b) line += (line.empty() ? "" : "\t") + ("?" + k) + "=" + v;
    std::cout << line << "\n";
  }
  return 0;
}

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int cmd_serve(const Options& o) {
  int status = 0;
  auto wiki = open_wiki(o, status);
  if (!wiki) return status;
  Service service(*wiki);
  int port = service.bind(o.host, o.port);
  if (port < 0) {
    return fail(o, ApiError{500, "Io", "cannot bind " + o.host + ":" + std::to_string(o.port), nullptr});
  }
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "mathwiki: serving " << o.data_dir << " on http://" << o.host << ":" << port << "\n";
  bool ok = service.run();
  g_service = nullptr;
  return ok ? 0 : kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic math wiki: import, export, render and query OMDoc pages"};
  app.require_subcommand(1);
  Options o;

  auto data_dir = [&](CLI::App* sub) {
    sub->add_option("--data-dir", o.data_dir, "wiki data directory")->envname("WIKI_DATA");
  };
  auto json = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "machine-readable output"); };

  auto* import = app.add_subcommand("import", "split a document into pages");
  import->add_option("file", o.file, "OMDoc XML file")->required();
  data_dir(import);
  json(import);

  auto* exp = app.add_subcommand("export", "assemble a theory into one document");
  exp->add_option("theory", o.page, "theory page")->required();
  exp->add_flag("--closure", o.closure, "include every theory it depends on");
  data_dir(exp);
  json(exp);

  auto* render = app.add_subcommand("render", "render a page");
  render->add_option("page", o.page, "page name")->required();
  render->add_flag("--plain", o.plain, "plain-text linearization instead of layout XML");
  data_dir(render);
  json(render);

  auto* validate = app.add_subcommand("validate", "check a document without importing it");
  validate->add_option("file", o.file, "OMDoc XML file")->required();
  json(validate);

  auto* tasks = app.add_subcommand("tasks", "list where work needs to be done");
  data_dir(tasks);
  json(tasks);

  auto* query = app.add_subcommand("query", "run a graph pattern query");
  query->add_option("--pattern", o.patterns, "positive pattern, e.g. \"?t type Assertion\"")
      ->required();
  query->add_option("--not", o.negations, "negated pattern, e.g. \"?p proves ?t\"");
  data_dir(query);
  json(query);

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--port", o.port, "listen port (0 picks one)")->envname("WIKI_PORT");
  serve->add_option("--host", o.host, "listen address");
  data_dir(serve);
  json(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (import->parsed()) return cmd_import(o);
  if (exp->parsed()) return cmd_export(o);
  if (render->parsed()) return cmd_render(o);
  if (validate->parsed()) return cmd_validate(o);
  if (tasks->parsed()) return cmd_tasks(o);
  if (query->parsed()) return cmd_query(o);
  if (serve->parsed()) return cmd_serve(o);
  return kUsage;
}
