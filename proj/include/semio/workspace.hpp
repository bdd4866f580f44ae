#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "semio/inference.hpp"
#include "semio/semiotic.hpp"

namespace semio {

struct SourceSpan {
  std::string file;
  int line = 0;
  int col = 0;      // 1-based
  int end_col = 0;  // one past the last column
  std::string str() const;
};

struct Diagnostic {
  ErrorKind kind = ErrorKind::parse;
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;  // syntax errors only
  std::string str() const;
};

// all diagnostics of a failed parse; kind() is the kind of the first one
class SpecError : public Error {
 public:
  explicit SpecError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

struct AlgebraDef {
  std::string name;
  std::string kind;
  std::vector<std::string> args;
  // table algebras only
  std::vector<double> values;
  std::vector<int> tensor, residuum;
  AlgebraPtr alg;
};

struct ConceptDef {
  std::string name;
  MultiMorphism map;
  std::string from;  // diagram it was read off, empty for tables
};

struct PoolDef {
  std::string name;
  std::vector<std::string> diagrams, concepts, domains;
};

struct Workspace {
  std::string file;
  double eps = kDefaultEpsilon;
  std::vector<AlgebraDef> algebras;
  std::string active;
  Semiotic sem;  // model extended through the rules
  Model atomic;

  // declaration order, kept for printing
  std::vector<std::string> sign_order;
  std::vector<std::string> oset_order;
  std::set<std::string> derived_osets;  // Omega sets with the default similarity
  std::vector<std::string> comp_order;  // tables and logic components
  std::set<std::string> derived_comps;  // composite labels read off their rules
  std::vector<std::string> diagram_order;
  std::vector<ConceptDef> concepts;
  std::vector<PoolDef> pools;

  std::map<std::string, SourceSpan> spans;  // "diagram:NAME" and similar
  std::vector<Diagnostic> warnings;

  const AlgebraPtr& alg() const { return sem.model.alg; }
  const ConceptDef& concept_def(const std::string& name) const;
  const PoolDef& pool_def(const std::string& name) const;
  // evaluates the pool's diagrams and domains through relation_map
  Pool build_pool(const std::string& name, std::uint64_t cap = kDefaultCap) const;
  // a concept name, or a relation diagram read through relation_map
  MultiMorphism concept_or_diagram(const std::string& name, std::uint64_t cap = kDefaultCap) const;
};

// wraps a semiotic that did not come from a file (integration, datasets)
Workspace workspace_of(const Semiotic& s, const std::vector<AlgebraDef>& factors = {});

}  // namespace semio
