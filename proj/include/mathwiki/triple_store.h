// Indexed in-memory triple store.
//
// Strings are interned; every triple is kept in three permutation indexes
// (SPO, POS, OSP) so each wildcard shape is a prefix scan on one index.
// Provenance is part of the key: the same fact extracted by two pages is
// stored twice, and retracting one page leaves the other's copy.
//
// Not internally synchronized: many concurrent readers or one writer.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mathwiki/result.h"
#include "mathwiki/triple.h"

namespace mathwiki {

struct Term {
  bool is_variable = false;
  std::string value;  // variable name without '?', or a constant

  static Term variable(std::string name) { return Term{true, std::move(name)}; }
  static Term constant(std::string v) { return Term{false, std::move(v)}; }
  // "?x" is a variable, anything else a constant.
  static Term parse(std::string_view token);

  std::string to_string() const { return is_variable ? "?" + value : value; }
  friend bool operator==(const Term&, const Term&) = default;
};

struct TriplePattern {
  Term subject;
  std::string predicate;
  Term object;
};

// Every negated pattern must share a variable with the positive patterns;
// its remaining variables are existentially quantified.
struct QueryPattern {
  std::vector<TriplePattern> patterns;
  std::vector<TriplePattern> negations;
};

using Binding = std::map<std::string, std::string>;

struct QueryError {
  enum class Code { UnsafeNegation };
  Code code = Code::UnsafeNegation;
  std::string message;
};

class TripleStore {
 public:
  // Idempotent.
  void insert(const Triple& t);
  // Removes every triple extracted from `page`; returns how many.
  std::size_t retract_page(std::string_view page);
  // Drops all inferred triples and inserts `inferred` in their place.
  void replace_inferred(const std::set<Triple>& inferred);

  // Absent arguments are wildcards. Sorted by (s, p, o, provenance).
  std::vector<Triple> match(std::optional<std::string_view> s,
                            std::optional<std::string_view> p,
                            std::optional<std::string_view> o) const;

  Result<std::vector<Binding>, QueryError> query(const QueryPattern& q) const;

  // Nodes reachable from `start` by one or more `p` edges.
  std::set<std::string> reachable(std::string_view start, std::string_view p) const;

  std::size_t size() const { return spo_.size(); }
  // Distinct (s, p, o) facts regardless of provenance.
  std::set<Fact> facts(bool include_inferred) const;

  // One triple per line: "<s> <p> <o> <provenance>".
  std::string dump() const;

 private:
  using Id = std::uint32_t;
  using Key = std::array<Id, 4>;  // three permuted components plus provenance
  static constexpr Id kInferred = 0;

  Id intern(std::string_view s);
  std::optional<Id> lookup(std::string_view s) const;
  Triple decode_spo(const Key& k) const;
  void erase_spo(const Key& spo);

  std::vector<std::string> strings_{""};
  std::unordered_map<std::string, Id> ids_{{"", kInferred}};
  std::set<Key> spo_;
  std::set<Key> pos_;
  std::set<Key> osp_;
  std::map<Id, std::set<Key>> by_source_;  // provenance -> SPO keys
};

std::string dump_line(const Triple& t);
std::optional<Triple> parse_dump_line(std::string_view line);

}  // namespace mathwiki
