#pragma once
// hand-rolled generators for the property suites; fixed seeds

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "semio/algebra.hpp"
#include "semio/diagram.hpp"
#include "semio/grammar.hpp"
#include "semio/relation.hpp"

namespace gen {

using semio::AlgebraPtr;
using semio::MultiMorphism;
using semio::OmegaSetPtr;
using semio::Truth;

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng); }
  bool coin(double p = 0.5) { return real() < p; }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[std::size_t(uniform(0, int(xs.size()) - 1))];
  }
};

// values of a (grid points on [0,1] half of the time so that ties show up)
inline Truth value(Rng& r, const semio::Algebra& a) {
  if (a.finite() || a.kind() == semio::AlgebraKind::product_of || r.coin()) return r.pick(a.sample());
  return Truth(r.real());
}

inline bool throws_kind(semio::ErrorKind k, const std::function<void()>& f) {
  try {
    f();
  } catch (const semio::Error& e) {
    return e.kind() == k;
  }
  return false;
}

inline std::vector<AlgebraPtr> builtins() {
  using semio::Algebra;
  return {Algebra::boolean(),     Algebra::godel(),    Algebra::lukasiewicz(),
          Algebra::product(),     Algebra::chain(4),   Algebra::chain(5, Algebra::Base::lukasiewicz),
          Algebra::product_of({Algebra::godel(), Algebra::product()})};
}

inline std::vector<AlgebraPtr> divisible_builtins() {
  using semio::Algebra;
  return {Algebra::boolean(), Algebra::godel(), Algebra::lukasiewicz(), Algebra::product(), Algebra::chain(4)};
}

inline std::vector<std::string> names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// extents drawn at random, elements grouped in blocks; inside a block
// [a=b] = [a] meet [b], across blocks bottom. Symmetric and tensor-transitive.
inline OmegaSetPtr oset(Rng& r, const AlgebraPtr& a, const std::string& sign, int n, bool crisp = false) {
  auto support = names(sign, n);
  if (crisp) return semio::crisp_omega_set(a, sign, sign, support);
  std::vector<Truth> ext;
  std::vector<int> block;
  for (int i = 0; i < n; ++i) {
    ext.push_back(r.coin(0.4) ? a->top() : value(r, *a));
    block.push_back(r.uniform(0, 1));
  }
  std::vector<semio::SimEntry> es;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (i == j || block[std::size_t(i)] == block[std::size_t(j)])
        es.push_back({support[std::size_t(i)], support[std::size_t(j)], a->meet(ext[std::size_t(i)], ext[std::size_t(j)])});
  return semio::make_omega_set(a, sign, sign, support, es, true);
}

inline semio::Port port(const std::string& name, const OmegaSetPtr& s, semio::Role role) {
  return semio::Port{name, s->sign, role, s};
}

// uniform random table
inline MultiMorphism table(Rng& r, const AlgebraPtr& a, std::vector<semio::Port> ports, double density = 0.7) {
  MultiMorphism m(a, std::move(ports));
  for (std::size_t i = 0; i < m.size(); ++i)
    if (r.coin(density)) m.set(i, value(r, *a));
  return m;
}

// f : A -> B with [a] = join_b f(a,b) for every a (total in A)
inline MultiMorphism total_table(Rng& r, const AlgebraPtr& a, const OmegaSetPtr& A, const OmegaSetPtr& B) {
  MultiMorphism m(a, {port(A->sign, A, semio::Role::source), port(B->sign, B, semio::Role::target)});
  for (std::size_t i = 0; i < A->size(); ++i) {
    const Truth ext = A->extent(i);
    const int hit = r.uniform(0, int(B->size()) - 1);
    for (std::size_t j = 0; j < B->size(); ++j) {
      Truth v = int(j) == hit ? ext : a->meet(ext, value(r, *a));
      m.set({int(i), int(j)}, v);
    }
  }
  return m;
}

// polarized ontology over n signs with a random partial order (edges only upward in index)
inline semio::Ontology ontology(Rng& r, int n, double p_order = 0.3) {
  semio::Ontology o;
  for (int i = 0; i < n; ++i) o.add_sign("s" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (r.coin(p_order)) o.add_order("s" + std::to_string(i), "s" + std::to_string(j));
  return o;
}

inline semio::Word word(Rng& r, const semio::Ontology& o, int max_len) {
  std::vector<std::string> signs(o.signs().begin(), o.signs().end());
  semio::Word w;
  const int len = r.uniform(0, max_len);
  for (int i = 0; i < len; ++i) w.push_back({r.pick(signs), r.coin()});
  return w;
}

// up to max_v vertices with supports up to max_n, up to max_a arrows; each
// arrow binds one or two source vertices and one target vertex
inline semio::MultiDiagram diagram(Rng& r, const AlgebraPtr& a, int max_v, int max_n, int max_a, bool crisp = false) {
  semio::MultiDiagram d;
  d.alg = a;
  const int nv = r.uniform(1, max_v);
  for (int i = 0; i < nv; ++i) {
    const std::string id = "v" + std::to_string(i);
    d.vertices.push_back({id, oset(r, a, id, r.uniform(1, max_n), crisp || r.coin())});
  }
  const int na = r.uniform(0, max_a);
  for (int k = 0; k < na; ++k) {
    semio::Arrow ar;
    ar.id = "f" + std::to_string(k);
    const int ns = r.uniform(1, std::min(2, nv));
    std::vector<semio::Port> ports;
    for (int j = 0; j < ns + 1; ++j) {
      const auto& v = d.vertices[std::size_t(r.uniform(0, nv - 1))];
      (j < ns ? ar.src : ar.tgt).push_back(v.id);
      ports.push_back(port("p" + std::to_string(j), v.set, j < ns ? semio::Role::source : semio::Role::target));
    }
    ar.m = table(r, a, ports, 0.6);
    d.arrows.push_back(std::move(ar));
  }
  for (const auto& v : d.vertices)
    if (r.coin()) d.sources.push_back(v.id);
  return d;
}

// classical limit of a boolean diagram: tuples of global elements whose
// restriction lies in every arrow relation, by plain enumeration
inline std::set<std::vector<std::string>> classical_limit(const semio::MultiDiagram& d) {
  std::set<std::vector<std::string>> out;
  const std::size_t nv = d.vertices.size();
  std::vector<std::vector<std::string>> globals;
  for (const auto& v : d.vertices) globals.push_back(v.set->globals());
  std::vector<std::size_t> idx(nv, 0);
  for (const auto& g : globals)
    if (g.empty()) return out;
  while (true) {
    std::map<std::string, std::string> at;
    std::vector<std::string> t;
    for (std::size_t i = 0; i < nv; ++i) {
      at[d.vertices[i].id] = globals[i][idx[i]];
      t.push_back(globals[i][idx[i]]);
    }
    bool in = true;
    for (const auto& ar : d.arrows) {
      std::vector<std::string> row;
      for (const auto& s : ar.src) row.push_back(at[s]);
      for (const auto& s : ar.tgt) row.push_back(at[s]);
      if (ar.m.at_names(row).scalar() != 1.0) in = false;
    }
    if (in) out.insert(t);
    std::size_t k = nv;
    while (k > 0) {
      --k;
      if (++idx[k] < globals[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (nv == 0) return out;
  }
}

}  // namespace gen
