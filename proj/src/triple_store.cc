#include "mathwiki/triple_store.h"

#include <algorithm>
#include <deque>
#include <sstream>

namespace mathwiki {

namespace {

template <typename Index, typename F>
void scan_prefix(const Index& index, const std::array<std::uint32_t, 4>& lo, int len, F&& f) {
  for (auto it = index.lower_bound(lo); it != index.end(); ++it) {
    for (int i = 0; i < len; ++i) {
      if ((*it)[i] != lo[i]) return;
    }
    f(*it);
  }
}

bool pattern_var_bound(const Term& t, const Binding& b) {
  return !t.is_variable || b.count(t.value);
}

std::optional<std::string> resolve(const Term& t, const Binding& b) {
  if (!t.is_variable) return t.value;
  auto it = b.find(t.value);
  if (it == b.end()) return std::nullopt;
  return it->second;
}

}  // namespace

Term Term::parse(std::string_view token) {
  if (token.size() > 1 && token[0] == '?') return variable(std::string(token.substr(1)));
  return constant(std::string(token));
}

TripleStore::Id TripleStore::intern(std::string_view s) {
  auto it = ids_.find(std::string(s));
  if (it != ids_.end()) return it->second;
  Id id = static_cast<Id>(strings_.size());
  strings_.emplace_back(s);
  ids_.emplace(strings_.back(), id);
  return id;
}

std::optional<TripleStore::Id> TripleStore::lookup(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Triple TripleStore::decode_spo(const Key& k) const {
  return Triple{strings_[k[0]], strings_[k[1]], strings_[k[2]],
                k[3] == kInferred ? Provenance::inferred()
                                  : Provenance::extracted(strings_[k[3]])};
}

void TripleStore::insert(const Triple& t) {
  Id s = intern(t.subject), p = intern(t.predicate), o = intern(t.object);
  Id src = t.provenance.is_inferred() ? kInferred : intern(t.provenance.page());
  Key spo{s, p, o, src};
  if (!spo_.insert(spo).second) return;
  pos_.insert(Key{p, o, s, src});
  osp_.insert(Key{o, s, p, src});
  by_source_[src].insert(spo);
}

void TripleStore::erase_spo(const Key& k) {
  spo_.erase(k);
  pos_.erase(Key{k[1], k[2], k[0], k[3]});
  osp_.erase(Key{k[2], k[0], k[1], k[3]});
}

std::size_t TripleStore::retract_page(std::string_view page) {
  if (page.empty()) return 0;
  auto id = lookup(page);
  if (!id) return 0;
  auto it = by_source_.find(*id);
  if (it == by_source_.end()) return 0;
  std::size_t n = it->second.size();
  for (const auto& k : it->second) erase_spo(k);
  by_source_.erase(it);
  return n;
}

void TripleStore::replace_inferred(const std::set<Triple>& inferred) {
  if (auto it = by_source_.find(kInferred); it != by_source_.end()) {
    for (const auto& k : it->second) erase_spo(k);
    by_source_.erase(it);
  }
  for (const auto& t : inferred) {
    Triple copy = t;
    copy.provenance = Provenance::inferred();
    insert(copy);
  }
}

std::vector<Triple> TripleStore::match(std::optional<std::string_view> s,
                                       std::optional<std::string_view> p,
                                       std::optional<std::string_view> o) const {
  std::vector<Triple> out;
  Id sid = 0, pid = 0, oid = 0;
  if (s) {
    auto id = lookup(*s);
    if (!id) return out;
    sid = *id;
  }
  if (p) {
    auto id = lookup(*p);
    if (!id) return out;
    pid = *id;
  }
  if (o) {
    auto id = lookup(*o);
    if (!id) return out;
    oid = *id;
  }

  auto from_spo = [&](const Key& k) { out.push_back(decode_spo(k)); };
  auto from_pos = [&](const Key& k) { out.push_back(decode_spo(Key{k[2], k[0], k[1], k[3]})); };
  auto from_osp = [&](const Key& k) { out.push_back(decode_spo(Key{k[1], k[2], k[0], k[3]})); };

  if (s && p && o) scan_prefix(spo_, {sid, pid, oid, 0}, 3, from_spo);
  else if (s && p) scan_prefix(spo_, {sid, pid, 0, 0}, 2, from_spo);
  else if (s && o) scan_prefix(osp_, {oid, sid, 0, 0}, 2, from_osp);
  else if (s) scan_prefix(spo_, {sid, 0, 0, 0}, 1, from_spo);
  else if (p && o) scan_prefix(pos_, {pid, oid, 0, 0}, 2, from_pos);
  else if (p) scan_prefix(pos_, {pid, 0, 0, 0}, 1, from_pos);
  else if (o) scan_prefix(osp_, {oid, 0, 0, 0}, 1, from_osp);
  else scan_prefix(spo_, {0, 0, 0, 0}, 0, from_spo);

  std::sort(out.begin(), out.end());
  return out;
}

Result<std::vector<Binding>, QueryError> TripleStore::query(const QueryPattern& q) const {
  std::set<std::string> positive_vars;
  for (const auto& pat : q.patterns) {
    if (pat.subject.is_variable) positive_vars.insert(pat.subject.value);
    if (pat.object.is_variable) positive_vars.insert(pat.object.value);
  }
  // Variables that occur only in a negation are existential: the negation
  // fails if any value for them completes a stored triple.
  for (const auto& neg : q.negations) {
    const bool anchored = (neg.subject.is_variable && positive_vars.count(neg.subject.value)) ||
                          (neg.object.is_variable && positive_vars.count(neg.object.value));
    if (!anchored) {
      return QueryError{QueryError::Code::UnsafeNegation,
                        "negated pattern (" + neg.subject.to_string() + " " + neg.predicate + " " +
                            neg.object.to_string() + ") shares no variable with the positive patterns"};
    }
  }

  std::set<Binding> results;
  std::vector<bool> used(q.patterns.size(), false);
  Binding binding;

  auto negations_hold = [&](const Binding& b) {
    for (const auto& neg : q.negations) {
      auto s = resolve(neg.subject, b);
      auto o = resolve(neg.object, b);
      std::optional<std::string_view> sv, ov;
      if (s) sv = *s;
      if (o) ov = *o;
      const bool same_free = !s && !o && neg.subject.value == neg.object.value;
      for (const auto& t : match(sv, neg.predicate, ov)) {
        if (!same_free || t.subject == t.object) return false;
      }
    }
    return true;
  };

  // Depth-first join, always expanding the pattern with the most bound terms.
  auto solve = [&](auto& self, std::size_t remaining) -> void {
    if (remaining == 0) {
      if (negations_hold(binding)) results.insert(binding);
      return;
    }
    std::size_t best = q.patterns.size();
    int best_score = -1;
    for (std::size_t i = 0; i < q.patterns.size(); ++i) {
      if (used[i]) continue;
      int score = pattern_var_bound(q.patterns[i].subject, binding) +
                  pattern_var_bound(q.patterns[i].object, binding);
      if (score > best_score) {
        best = i;
        best_score = score;
      }
    }
    const TriplePattern& pat = q.patterns[best];
    used[best] = true;
    auto s = resolve(pat.subject, binding);
    auto o = resolve(pat.object, binding);
    std::optional<std::string_view> sv, ov;
    if (s) sv = *s;
    if (o) ov = *o;
    for (const auto& t : match(sv, pat.predicate, ov)) {
      std::vector<std::string> added;
      bool ok = true;
      auto bind = [&](const Term& term, const std::string& value) {
        if (!term.is_variable) return;
        auto it = binding.find(term.value);
        if (it == binding.end()) {
          binding.emplace(term.value, value);
          added.push_back(term.value);
        } else if (it->second != value) {
          ok = false;
        }
      };
      bind(pat.subject, t.subject);
      if (ok) bind(pat.object, t.object);
      if (ok) self(self, remaining - 1);
      for (const auto& v : added) binding.erase(v);
    }
    used[best] = false;
  };
  solve(solve, q.patterns.size());

  return std::vector<Binding>(results.begin(), results.end());
}

std::set<std::string> TripleStore::reachable(std::string_view start, std::string_view p) const {
  std::set<std::string> out;
  auto sid = lookup(start);
  auto pid = lookup(p);
  if (!sid || !pid) return out;
  std::set<Id> seen;
  std::deque<Id> work{*sid};
  while (!work.empty()) {
    Id cur = work.front();
    work.pop_front();
    scan_prefix(spo_, {cur, *pid, 0, 0}, 2, [&](const Key& k) {
      if (seen.insert(k[2]).second) work.push_back(k[2]);
    });
  }
  for (Id id : seen) out.insert(strings_[id]);
  return out;
}

std::set<Fact> TripleStore::facts(bool include_inferred) const {
  std::set<Fact> out;
  for (const auto& k : spo_) {
    if (!include_inferred && k[3] == kInferred) continue;
    out.insert(Fact{strings_[k[0]], strings_[k[1]], strings_[k[2]]});
  }
  return out;
}

std::string TripleStore::dump() const {
  std::string out;
  for (const auto& t : match(std::nullopt, std::nullopt, std::nullopt)) {
    out += dump_line(t);
    out += '\n';
  }
  return out;
}

std::string dump_line(const Triple& t) {
  return t.subject + " " + t.predicate + " " + t.object + " " + t.provenance.to_string();
}

std::optional<Triple> parse_dump_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string s, p, o, prov, extra;
  if (!(in >> s >> p >> o >> prov) || (in >> extra)) return std::nullopt;
  if (prov == "inferred") return Triple{s, p, o, Provenance::inferred()};
  constexpr std::string_view kPrefix = "extracted:";
  if (prov.rfind(kPrefix, 0) == 0 && prov.size() > kPrefix.size()) {
    return Triple{s, p, o, Provenance::extracted(prov.substr(kPrefix.size()))};
  }
  return std::nullopt;
}

}  // namespace mathwiki
