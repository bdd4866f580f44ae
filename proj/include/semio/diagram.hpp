#pragma once

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semio/relation.hpp"

namespace semio {

struct Vertex {
  std::string id;
  OmegaSetPtr set;
};

// An arrow's morphism ports (sources, then targets) are bound in order to
// the listed vertices. Vertex elements are looked up in the port domains by
// name, so a vertex may carry a particularization of the port's sign.
struct Arrow {
  std::string id;
  MultiMorphism m;
  std::vector<std::string> src, tgt;
};

struct MultiDiagram {
  AlgebraPtr alg;
  std::vector<Vertex> vertices;
  std::vector<Arrow> arrows;
  std::vector<std::string> sources;
  // allowed (vertex sign, port sign) pairs besides equality
  std::set<std::pair<std::string, std::string>> generalizations;

  int vertex_index(const std::string& id) const;  // -1 when absent
  const Vertex& vertex(const std::string& id) const;
  void validate() const;
  std::uint64_t tuple_count() const;
};

MultiDiagram discrete_diagram(AlgebraPtr alg, std::vector<Vertex> vertices);

// Full tables over every vertex; s(D) become source ports.
MultiMorphism limit(const MultiDiagram& d, std::uint64_t cap = kDefaultCap);
MultiMorphism colimit(const MultiDiagram& d, std::uint64_t cap = kDefaultCap);
// sup over every vertex not kept; evaluated by variable elimination and the
// cap bounds the largest intermediate table
MultiMorphism limit_projected(const MultiDiagram& d, const std::vector<std::string>& keep,
                              std::uint64_t cap = kDefaultCap);
MultiMorphism colimit_projected(const MultiDiagram& d, const std::vector<std::string>& keep,
                                std::uint64_t cap = kDefaultCap);

enum class KanKind { equalizer, pullback, coequalizer, pushout };
KanKind parse_kan(const std::string& s);
// equalizer/coequalizer over ports (x,y); pullback/pushout over (x,u,y)
MultiMorphism kan_construct(KanKind kind, const MultiMorphism& r, const MultiMorphism& s);

struct CommutativityReport {
  Truth degree;
  bool commutative = false;
  Truth lambda;                      // largest lambda for which D is lambda-commutative
  std::vector<std::string> witness;  // source tuple attaining the degree
  std::size_t tuples = 0;            // source tuples inspected
};
using TupleFilter = std::function<bool(const std::vector<std::string>&)>;
CommutativityReport commutativity_degree(const MultiDiagram& d, const std::vector<std::string>& sources,
                                         const TupleFilter& filter = {}, std::uint64_t cap = kDefaultCap);

// [a2..an] => tensor of arrow values, as a map over D(v1)
MultiMorphism classifier_from_diagram(const MultiDiagram& d, const std::string& v1,
                                      const std::vector<std::pair<std::string, std::string>>& observations);
// tensor of per-arrow Bayes conditionals; agrees with the above when v1
// heads no arrow and the logic is multiplicative
MultiMorphism classifier_simplified(const MultiDiagram& d, const std::string& v1,
                                    const std::vector<std::pair<std::string, std::string>>& observations);

// single-arrow diagram whose limit is g
MultiDiagram concept_to_diagram(const MultiMorphism& g);

// [x] for every tuple of g's port domains
MultiMorphism extent_map(const MultiMorphism& g);

}  // namespace semio
