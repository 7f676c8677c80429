#pragma once

#include <compare>
#include <string>
#include <tuple>

namespace mathwiki {

// Where a triple came from: extracted from a page's markup, or inferred.
class Provenance {
 public:
  static Provenance extracted(std::string page) { return Provenance(std::move(page)); }
  static Provenance inferred() { return Provenance(""); }

  bool is_inferred() const { return page_.empty(); }
  // Source page of an extracted triple; empty when inferred.
  const std::string& page() const { return page_; }

  std::string to_string() const {
    return is_inferred() ? std::string("inferred") : "extracted:" + page_;
  }

  friend auto operator<=>(const Provenance&, const Provenance&) = default;

 private:
  explicit Provenance(std::string page) : page_(std::move(page)) {}
  std::string page_;
};

// A bare (subject, predicate, object) statement without provenance.
struct Fact {
  std::string subject;
  std::string predicate;
  std::string object;

  friend auto operator<=>(const Fact&, const Fact&) = default;
};

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;
  Provenance provenance = Provenance::inferred();

  Fact fact() const { return Fact{subject, predicate, object}; }

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

}  // namespace mathwiki
