#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semio/relation.hpp"

namespace semio {

// A concept is an Omega-map (every port a source).
struct Named {
  std::string name;
  MultiMorphism map;
};

// m over the ports of shape: ports of m matched to ports of shape (name, then
// sign) are read off, unmatched ports of m are joined away and unmatched
// ports of shape are free.
MultiMorphism lift(const MultiMorphism& m, const MultiMorphism& shape);

struct GammaResult {
  MultiMorphism pointwise;
  Truth quality;
};
// pointwise d0 <=> d1 over the smaller support; the larger side is projected
GammaResult gamma(const MultiMorphism& d0, const MultiMorphism& d1);

enum class Mode { forall, exists, forall_on };

struct Consistency {
  bool holds = false;
  std::vector<std::vector<std::string>> fiber;  // tuples with Gamma >= lambda
  std::size_t total = 0;
};
Consistency consistency_check(const MultiMorphism& d, const MultiMorphism& md, const Truth& lambda, Mode mode,
                              const MultiMorphism* domain = nullptr);

// Finite stand-in for "every diagram" and "every concept". Diagrams and
// domains are stored through their interpretations; concepts share one support.
struct Pool {
  std::vector<Named> diagrams;
  std::vector<Named> concepts;
  std::vector<Named> domains;

  AlgebraPtr alg() const;
  const MultiMorphism& shape() const;  // support of the concepts
  int diagram_index(const std::string& name) const;
  void validate() const;
};

struct Answer {
  int index = 0;  // into pool.concepts
  int domain = -1;  // -1: whole support
};

std::vector<Answer> answer_pairs(const MultiMorphism& md, const Truth& lambda, const Pool& pool);
std::vector<int> answers(const MultiMorphism& md, const Truth& lambda, const Pool& pool);

// f <=_D g: f <= g wherever M(D) is top; no domain means everywhere
bool leq_on(const MultiMorphism& f, const MultiMorphism& g, const MultiMorphism* domain);

std::vector<int> box(const MultiMorphism& g, const Truth& lambda, const Pool& pool);
std::vector<int> diamond(const MultiMorphism& g, const Truth& lambda, const Pool& pool);

// join of the answers of U restricted to their domains
MultiMorphism ans_set(const std::vector<int>& u, const Truth& lambda, const Pool& pool);
// meet of the answers of U, top outside their domains
MultiMorphism mod_set(const std::vector<int>& u, const Truth& lambda, const Pool& pool);

MultiMorphism interior(const MultiMorphism& g, const Truth& lambda, const Pool& pool);
MultiMorphism closure(const MultiMorphism& g, const Truth& lambda, const Pool& pool);

std::vector<int> consequences(const std::vector<int>& u, const Truth& lambda, const Pool& pool);  // A(U)
bool entails(const std::vector<int>& u, int d, const Truth& lambda, const Pool& pool);

struct RLFormula {
  enum class Kind { atom, interior, closure, tensor, implies, meet, join };
  Kind kind = Kind::atom;
  std::string atom;
  std::vector<std::shared_ptr<const RLFormula>> sub;
  // component thresholds for a binary node, when supplied by the caller
  std::optional<std::pair<Truth, Truth>> thresholds;
};
using RLPtr = std::shared_ptr<const RLFormula>;

// atoms are pool diagram names; [I] [C] prefixes; * -> & | with the usual
// precedence (prefix, *, &, |, ->) and parentheses
RLPtr parse_rl(const std::string& text);
std::string to_string(const RLFormula& f);

// degree of g against the formula; the truth relation at lambda is degree >= lambda
Truth rl_degree(const RLFormula& f, const MultiMorphism& g, const Truth& lambda, const Pool& pool);
bool eval_rl(const RLFormula& f, const MultiMorphism& g, const Truth& lambda, const Pool& pool);

}  // namespace semio
