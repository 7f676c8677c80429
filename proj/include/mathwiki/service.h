// HTTP facade over a Wiki.
//
//   GET    /pages                      page list
//   GET    /pages/{name}               source and head revision
//   PUT    /pages/{name}               {"source", "base_revision"?} -> SaveReceipt
//   DELETE /pages/{name}?base_revision=n
//   GET    /pages/{name}/rendered      layout XML, or plain text for Accept: text/plain
//   GET    /pages/{name}/links
//   GET    /pages/{name}/history
//   POST   /query                      QueryPattern -> bindings
//   GET    /tasks
//   POST   /import                     OMDoc XML -> {"pages": [...]}
//   GET    /export/{theory}?closure=bool
//
// Statement page names contain a '/'. They may be sent raw or with the slash
// encoded as %2F; a raw trailing "/rendered", "/links" or "/history" always
// selects the sub-resource.
#pragma once

#include <memory>
#include <string>

#include "mathwiki/wiki.h"

namespace mathwiki {

class Service {
 public:
  explicit Service(Wiki& wiki);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Serves until stop(); returns false if the listener failed.
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mathwiki
