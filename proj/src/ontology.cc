#include "mathwiki/ontology.h"

#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace mathwiki {

namespace {

using Edge = std::pair<std::string, std::string>;

std::set<std::string> upward_closure(
    const std::string& start, const std::set<std::pair<std::string, std::string>>& rel) {
  std::set<std::string> seen{start};
  std::deque<std::string> work{start};
  while (!work.empty()) {
    std::string cur = std::move(work.front());
    work.pop_front();
    for (auto it = rel.lower_bound({cur, ""}); it != rel.end() && it->first == cur; ++it) {
      if (seen.insert(it->second).second) work.push_back(it->second);
    }
  }
  return seen;
}

bool has_cycle(const std::set<std::pair<std::string, std::string>>& rel) {
  for (const auto& [a, b] : rel) {
    if (a == b) return true;
    if (upward_closure(b, rel).count(a)) return true;
  }
  return false;
}

// Properties ordered so that every subproperty precedes its superproperties.
std::vector<std::string> sub_to_super_order(const OntologySchema& schema,
                                            const std::set<std::string>& used) {
  std::set<std::string> all = schema.properties;
  all.insert(used.begin(), used.end());
  std::map<std::string, int> pending;  // unprocessed direct subproperties
  for (const auto& p : all) pending[p];
  for (const auto& [sub, super] : schema.subproperty_of) ++pending[super];
  std::vector<std::string> order;
  std::deque<std::string> ready;
  for (const auto& [p, n] : pending) {
    if (n == 0) ready.push_back(p);
  }
  while (!ready.empty()) {
    std::string p = std::move(ready.front());
    ready.pop_front();
    order.push_back(p);
    for (auto it = schema.subproperty_of.lower_bound({p, ""});
         it != schema.subproperty_of.end() && it->first == p; ++it) {
      if (--pending[it->second] == 0) ready.push_back(it->second);
    }
  }
  return order;
}

void close_transitively(std::set<Edge>& edges) {
  std::unordered_map<std::string, std::vector<std::string>> succ;
  for (const auto& [s, o] : edges) succ[s].push_back(o);
  std::set<Edge> closed;
  for (const auto& [start, direct] : succ) {
    std::unordered_set<std::string> seen;
    std::deque<const std::string*> work;
    for (const auto& n : direct) {
      if (seen.insert(n).second) work.push_back(&n);
    }
    while (!work.empty()) {
      const std::string* cur = work.front();
      work.pop_front();
      auto it = succ.find(*cur);
      if (it == succ.end()) continue;
      for (const auto& n : it->second) {
        if (seen.insert(n).second) work.push_back(&n);
      }
    }
    for (const auto& n : seen) closed.emplace(start, n);
  }
  edges = std::move(closed);
}

}  // namespace

std::set<std::string> OntologySchema::superclasses(const std::string& c) const {
  return upward_closure(c, subclass_of);
}

std::set<std::string> OntologySchema::superproperties(const std::string& p) const {
  return upward_closure(p, subproperty_of);
}

const OntologySchema& builtin_schema() {
  static const OntologySchema schema = [] {
    using namespace vocab;
    OntologySchema s;
    s.classes = {kTheory,  kStatement, kSymbol,  kDefinition,         kAxiom,
                 kAssertion, kProof,   kExample, kNotationDefinition, kFormula};
    for (const char* c : {kSymbol, kDefinition, kAxiom, kAssertion, kProof, kExample,
                          kNotationDefinition}) {
      s.subclass_of.emplace(c, kStatement);
    }
    s.properties = {kProves,  kDefines,      kExemplifies, kRenders,  kUses,
                    kImports, kHomeTheoryOf, kContains,    kDependsOn};
    s.subproperty_of = {{kImports, kDependsOn}, {kHomeTheoryOf, kContains}};
    s.transitive = {kDependsOn, kContains};
    s.domain[kProves] = {kProof};
    s.range[kProves] = {kAssertion};
    s.domain[kRenders] = {kNotationDefinition};
    s.range[kRenders] = {kSymbol};
    s.domain[kUses] = {kFormula};
    s.range[kUses] = {kSymbol};
    s.domain[kImports] = {kTheory};
    s.range[kImports] = {kTheory};
    s.domain[kContains] = {kStatement, kTheory};
    return s;
  }();
  return schema;
}

std::vector<std::string> check_schema(const OntologySchema& schema) {
  std::vector<std::string> problems;
  if (has_cycle(schema.subclass_of)) problems.push_back("subclass hierarchy has a cycle");
  if (has_cycle(schema.subproperty_of)) problems.push_back("subproperty hierarchy has a cycle");
  for (const auto& p : schema.transitive) {
    if (!schema.properties.count(p)) problems.push_back("transitive '" + p + "' is not a property");
  }
  for (const auto* m : {&schema.domain, &schema.range}) {
    for (const auto& [p, classes] : *m) {
      if (!schema.properties.count(p)) {
        problems.push_back("domain/range key '" + p + "' is not a property");
      }
      for (const auto& c : classes) {
        if (!schema.classes.count(c)) problems.push_back("unknown class '" + c + "'");
      }
    }
  }
  return problems;
}

std::vector<Fact> schema_facts(const OntologySchema& schema) {
  std::vector<Fact> out;
  for (const auto& [a, b] : schema.subclass_of) out.push_back({a, "subClassOf", b});
  for (const auto& [a, b] : schema.subproperty_of) out.push_back({a, "subPropertyOf", b});
  for (const auto& p : schema.transitive) out.push_back({p, "transitive", "true"});
  for (const auto& [p, cs] : schema.domain) {
    for (const auto& c : cs) out.push_back({p, "domain", c});
  }
  for (const auto& [p, cs] : schema.range) {
    for (const auto& c : cs) out.push_back({p, "range", c});
  }
  return out;
}

std::set<Triple> entail(const std::set<Fact>& extracted, const OntologySchema& schema) {
  const std::string type = vocab::kType;

  std::map<std::string, std::set<Edge>> edges;
  std::set<Edge> types;  // (node, class)
  std::set<std::string> used;
  for (const auto& f : extracted) {
    if (f.predicate == type) {
      types.emplace(f.subject, f.object);
    } else {
      edges[f.predicate].emplace(f.subject, f.object);
      used.insert(f.predicate);
    }
  }

  // Subproperty propagation and transitivity. Processing in sub-to-super
  // order means each property's edge set is complete before it is closed.
  for (const auto& p : sub_to_super_order(schema, used)) {
    auto it = edges.find(p);
    if (it == edges.end()) continue;
    if (schema.transitive.count(p)) close_transitively(it->second);
    for (auto sup = schema.subproperty_of.lower_bound({p, ""});
         sup != schema.subproperty_of.end() && sup->first == p; ++sup) {
      auto& target = edges[sup->second];
      target.insert(it->second.begin(), it->second.end());
    }
  }

  // Domain and range typing.
  for (const auto& [p, es] : edges) {
    auto d = schema.domain.find(p);
    auto r = schema.range.find(p);
    const std::string* dom = d != schema.domain.end() && d->second.size() == 1 ? &d->second[0] : nullptr;
    const std::string* ran = r != schema.range.end() && r->second.size() == 1 ? &r->second[0] : nullptr;
    if (!dom && !ran) continue;
    for (const auto& [s, o] : es) {
      if (dom) types.emplace(s, *dom);
      if (ran) types.emplace(o, *ran);
    }
  }

  // Subclass propagation.
  std::map<std::string, std::set<std::string>> super_cache;
  std::set<Edge> all_types;
  for (const auto& [node, cls] : types) {
    auto it = super_cache.find(cls);
    if (it == super_cache.end()) it = super_cache.emplace(cls, schema.superclasses(cls)).first;
    for (const auto& c : it->second) all_types.emplace(node, c);
  }

  std::set<Triple> inferred;
  auto emit = [&](const std::string& s, const std::string& p, const std::string& o) {
    Fact f{s, p, o};
    if (!extracted.count(f)) inferred.insert(Triple{s, p, o, Provenance::inferred()});
  };
  for (const auto& [p, es] : edges) {
    for (const auto& [s, o] : es) emit(s, p, o);
  }
  for (const auto& [node, cls] : all_types) emit(node, type, cls);
  return inferred;
}

}  // namespace mathwiki
