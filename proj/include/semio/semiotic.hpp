#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semio/diagram.hpp"
#include "semio/grammar.hpp"

namespace semio {

inline const std::string kOmega = "Omega";

struct Model {
  AlgebraPtr alg;
  std::map<std::string, OmegaSetPtr> sign_map;
  std::map<std::string, OmegaSetPtr> osets;  // named sets vertices may bind
  std::map<std::string, MultiMorphism> comp_map;

  // sign_map entry; Omega falls back to the carrier of a finite algebra
  OmegaSetPtr sign_set(const std::string& sign) const;
  const MultiMorphism& comp(const std::string& label) const;
};

// name of a diagram bound to a component label
struct Binding {
  std::string label;
  std::string diagram;
};

struct LogicDef {
  std::string kind;
  std::vector<std::string> args;
};

struct SignSystem {
  Library lib;
  Semantics sem;
  std::map<std::string, Configuration> diagrams;
  std::vector<std::string> totals;  // E
  std::vector<Binding> limits;      // U
  std::vector<Binding> colimits;    // coU
  std::map<std::string, LogicDef> logic;

  const Configuration& diagram(const std::string& name) const;
};

struct Semiotic {
  std::string name;
  SignSystem sys;
  Model model;
};

// Omega-set over truth values named by their printed form, [x=y] = x<=>y
OmegaSetPtr omega_set(AlgebraPtr alg, const std::vector<std::string>& support, const std::string& name = kOmega);

MultiDiagram interpret(const Configuration& c, const Model& m, const Library& lib);

// boundary of a configuration as vertex ids
std::vector<std::string> input_vertices(const Configuration& c);   // no incoming arrow
std::vector<std::string> output_vertices(const Configuration& c);  // no outgoing arrow

// Relations: inputs are the declared sources (or the non-Omega inputs) and
// every other output vertex carries Omega.
bool is_relation(const Configuration& c);
std::vector<std::string> relation_inputs(const Configuration& c);
std::vector<std::string> relation_outputs(const Configuration& c);
// x -> sup over the other vertices of Lim (x, ..., v) (x) v, an Omega-map
MultiMorphism relation_map(const Configuration& c, const Semiotic& s, std::uint64_t cap = kDefaultCap);

// composite components
struct WordMorphism {
  Word w;
  MultiMorphism m;
};
WordMorphism glue_compose(const WordMorphism& f, const WordMorphism& g, const Ontology& ont);
Model extend_model(const Model& atomic, const SignSystem& sys);

struct Check {
  Check() = default;
  Check(std::string k, std::string s) : kind(std::move(k)), subject(std::move(s)) {}

  std::string kind;
  std::string subject;
  bool ok = true;
  bool informational = false;
  std::string message;
  std::optional<Truth> degree;
  std::vector<std::string> witness;
};

struct ModelReport {
  std::vector<Check> checks;
  bool ok() const;
  std::vector<const Check*> failures() const;
};

ModelReport validate_model(const SignSystem& sys, const Model& m, std::uint64_t cap = kDefaultCap);

// kinds: diagonal N SIGN | codiagonal N SIGN | similarity SIGN.. | rename S U |
// top | tensor | implies | meet | join | const SIGN VALUE | graph LABEL
std::pair<Word, MultiMorphism> logic_component(const Model& m, const std::string& kind,
                                               const std::vector<std::string>& args);
// registers the component unless the label already exists with the same definition
void add_logic(Semiotic& s, const std::string& label, const std::string& kind, const std::vector<std::string>& args);

Configuration diagram_connective(Op op, const Configuration& d0, const Configuration& d1, Semiotic& s);
bool is_true_relation(const Configuration& d, Semiotic& s, std::uint64_t cap = kDefaultCap);

// rows are element names in sign order; rows are joined by disjunction
Configuration encode_dataset(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& signs,
                             Semiotic& s);

struct NaturalityReport {
  bool holds = false;
  TableDiff diff;
};
// f: M1(i(D)) -> M2(i(D)), g: M1(o(D)) -> M2(o(D)); throws precondition when
// either is not epi
NaturalityReport check_natural_transformation(const Semiotic& s1, const Semiotic& s2, const MultiMorphism& f,
                                              const MultiMorphism& g, const std::string& diagram,
                                              std::uint64_t cap = kDefaultCap);

Semiotic integrate(const std::vector<Semiotic>& parts);

struct SchemaVertex {
  std::string name;
  MultiMorphism lim;  // Omega-map
};
struct SchemaArrow {
  std::string from, to;
  MultiMorphism m;  // sources match from's ports, targets to's ports
};
// tensor of the vertex limits times the join of all arrow values; an empty
// arrow family contributes top
MultiMorphism integration_schema_colimit(const std::vector<SchemaVertex>& vertices,
                                         const std::vector<SchemaArrow>& arrows, std::uint64_t cap = kDefaultCap);

}  // namespace semio
