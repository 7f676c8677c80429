#include "mathwiki/service.h"

#include <charconv>

#include "httplib.h"
#include "mathwiki/json_codec.h"

namespace mathwiki {

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

void send_error(httplib::Response& res, const ApiError& e) { send_json(res, e.status, e.to_json()); }

void send_error(httplib::Response& res, const WikiError& e) { send_error(res, api_error(e)); }

void bad_request(httplib::Response& res, std::string message) {
  send_error(res, ApiError{400, "BadRequest", std::move(message), nullptr});
}

void not_found(httplib::Response& res, std::string message) {
  send_error(res, ApiError{404, "NotFound", std::move(message), nullptr});
}

std::string author_of(const httplib::Request& req) {
  auto a = req.get_header_value("X-Author");
  return a.empty() ? "anonymous" : a;
}

std::optional<RevisionId> parse_revision(std::string_view s) {
  RevisionId v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

std::string path_of(const httplib::Request& req) {
  const std::string& target = req.target.empty() ? req.path : req.target;
  return target.substr(0, target.find('?'));
}

std::vector<std::string> segments(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= path.size()) {
    auto j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    if (j > i) out.push_back(httplib::detail::decode_url(path.substr(i, j - i), false));
    i = j + 1;
  }
  return out;
}

struct PageTarget {
  std::string name;
  std::string sub;  // "", "rendered", "links" or "history"
};

// Segments after "/pages".
std::optional<PageTarget> page_target(const httplib::Request& req) {
  auto segs = segments(path_of(req));
  if (segs.size() < 2 || segs.front() != "pages") return std::nullopt;
  segs.erase(segs.begin());
  PageTarget t;
  const std::string& last = segs.back();
  if (segs.size() >= 2 && (last == "rendered" || last == "links" || last == "history")) {
    t.sub = last;
    segs.pop_back();
  }
  for (std::size_t i = 0; i < segs.size(); ++i) t.name += (i ? "/" : "") + segs[i];
  return t;
}

}  // namespace

struct Service::Impl {
  explicit Impl(Wiki& w) : wiki(w) { routes(); }

  Wiki& wiki;
  httplib::Server server;

  void routes() {
    server.Get("/pages", [this](const auto&, auto& res) {
      send_json(res, 200, pages_json(wiki.list_pages()));
    });
    server.Get("/pages/.+", [this](const auto& req, auto& res) { get_page(req, res); });
    server.Put("/pages/.+", [this](const auto& req, auto& res) { put_page(req, res); });
    server.Delete("/pages/.+", [this](const auto& req, auto& res) { delete_page(req, res); });
    server.Post("/query", [this](const auto& req, auto& res) { query(req, res); });
    server.Get("/tasks", [this](const auto&, auto& res) {
      send_json(res, 200, to_json(wiki.work_queue()));
    });
    server.Post("/import", [this](const auto& req, auto& res) {
      auto r = wiki.import_document(req.body, author_of(req));
      if (!r) return send_error(res, r.error());
      send_json(res, 200, Json{{"pages", *r}});
    });
    server.Get("/export/.+", [this](const auto& req, auto& res) { export_theory(req, res); });
    server.set_exception_handler([](const auto&, auto& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      send_error(res, ApiError{500, "Internal", what, nullptr});
    });
  }

  void get_page(const httplib::Request& req, httplib::Response& res) {
    auto t = page_target(req);
    if (!t) return not_found(res, "no such resource");
    if (t->sub.empty()) {
      auto v = wiki.get_page(t->name);
      if (!v) return send_error(res, v.error());
      return send_json(res, 200, to_json(*v));
    }
    if (t->sub == "links") {
      auto l = wiki.links_for(t->name);
      if (!l) return send_error(res, l.error());
      return send_json(res, 200, to_json(*l));
    }
    if (t->sub == "history") {
      auto h = wiki.history(t->name);
      if (!h) return send_error(res, h.error());
      return send_json(res, 200, history_json(*h));
    }
    auto r = wiki.render_page(t->name);
    if (!r) return send_error(res, r.error());
    res.set_header("X-Revision", std::to_string(r->revision));
    const auto accept = req.get_header_value("Accept");
    if (accept.find("text/plain") != std::string::npos &&
        accept.find("text/xml") == std::string::npos) {
      res.set_content(r->plain, "text/plain; charset=utf-8");
    } else {
      res.set_content(r->layout, "text/xml; charset=utf-8");
    }
  }

  void put_page(const httplib::Request& req, httplib::Response& res) {
    auto t = page_target(req);
    if (!t || !t->sub.empty()) return bad_request(res, "cannot PUT to a page sub-resource");
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const Json::parse_error& e) {
      return bad_request(res, std::string("body is not JSON: ") + e.what());
    }
    if (!body.is_object() || !body.contains("source") || !body["source"].is_string()) {
      return bad_request(res, "body must be an object with a string \"source\"");
    }
    std::optional<RevisionId> base;
    if (body.contains("base_revision") && !body["base_revision"].is_null()) {
      if (!body["base_revision"].is_number_integer()) {
        return bad_request(res, "base_revision must be an integer");
      }
      base = body["base_revision"].get<RevisionId>();
    }
    auto r = wiki.save_page(t->name, body["source"].get<std::string>(), base, author_of(req));
    if (!r) return send_error(res, r.error());
    send_json(res, 200, to_json(*r));
  }

  void delete_page(const httplib::Request& req, httplib::Response& res) {
    auto t = page_target(req);
    if (!t || !t->sub.empty()) return bad_request(res, "cannot DELETE a page sub-resource");
    std::optional<RevisionId> base;
    if (req.has_param("base_revision")) {
      base = parse_revision(req.get_param_value("base_revision"));
      if (!base) return bad_request(res, "base_revision must be a non-negative integer");
    }
    auto r = wiki.delete_page(t->name, base, author_of(req));
    if (!r) return send_error(res, r.error());
    send_json(res, 200, to_json(*r));
  }

  void query(const httplib::Request& req, httplib::Response& res) {
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const Json::parse_error& e) {
      return bad_request(res, std::string("body is not JSON: ") + e.what());
    }
    auto q = query_from_json(body);
    if (!q) return bad_request(res, q.error());
    auto r = wiki.query(*q);
    if (!r) return send_error(res, r.error());
    send_json(res, 200, bindings_json(*r));
  }

  void export_theory(const httplib::Request& req, httplib::Response& res) {
    auto segs = segments(path_of(req));
    if (segs.size() != 2) return not_found(res, "no such resource");
    bool closure = false;
    if (req.has_param("closure")) {
      const auto v = req.get_param_value("closure");
      if (v == "true" || v == "1") closure = true;
      else if (v != "false" && v != "0") return bad_request(res, "closure must be true or false");
    }
    auto r = wiki.export_theory(segs[1], closure);
    if (!r) return send_error(res, r.error());
    res.set_content(*r, "application/xml");
  }
};

Service::Service(Wiki& wiki) : impl_(std::make_unique<Impl>(wiki)) {}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace mathwiki
