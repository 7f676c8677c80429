// Document ontology: class and property hierarchy of the knowledge model
// plus RDFS-level forward chaining.
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mathwiki/triple.h"

namespace mathwiki {

namespace vocab {
inline constexpr const char* kType = "type";

inline constexpr const char* kTheory = "Theory";
inline constexpr const char* kStatement = "Statement";
inline constexpr const char* kSymbol = "Symbol";
inline constexpr const char* kDefinition = "Definition";
inline constexpr const char* kAxiom = "Axiom";
inline constexpr const char* kAssertion = "Assertion";
inline constexpr const char* kProof = "Proof";
inline constexpr const char* kExample = "Example";
inline constexpr const char* kNotationDefinition = "NotationDefinition";
inline constexpr const char* kFormula = "Formula";

inline constexpr const char* kProves = "proves";
inline constexpr const char* kDefines = "defines";
inline constexpr const char* kExemplifies = "exemplifies";
inline constexpr const char* kRenders = "renders";
inline constexpr const char* kUses = "uses";
inline constexpr const char* kImports = "imports";
inline constexpr const char* kHomeTheoryOf = "homeTheoryOf";
inline constexpr const char* kContains = "contains";
inline constexpr const char* kDependsOn = "dependsOn";
}  // namespace vocab

struct OntologySchema {
  std::set<std::string> classes;
  std::set<std::pair<std::string, std::string>> subclass_of;     // (sub, super)
  std::set<std::string> properties;
  std::set<std::pair<std::string, std::string>> subproperty_of;  // (sub, super)
  std::set<std::string> transitive;
  // A domain or range listing several classes denotes their union. Only
  // single-class entries produce typing inferences.
  std::map<std::string, std::vector<std::string>> domain;
  std::map<std::string, std::vector<std::string>> range;

  // Reflexive-transitive closures.
  std::set<std::string> superclasses(const std::string& c) const;
  std::set<std::string> superproperties(const std::string& p) const;
};

const OntologySchema& builtin_schema();

// Problems with the schema's own invariants (cycles, dangling keys).
std::vector<std::string> check_schema(const OntologySchema& schema);

// Read-only dump using predicates subClassOf, subPropertyOf, transitive,
// domain and range.
std::vector<Fact> schema_facts(const OntologySchema& schema);

// Forward-chains subclass, subproperty, transitivity and domain/range typing
// to fixpoint. Returns only the newly inferred triples, each with inferred
// provenance.
std::set<Triple> entail(const std::set<Fact>& extracted, const OntologySchema& schema);

}  // namespace mathwiki
