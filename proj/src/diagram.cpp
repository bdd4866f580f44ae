#include "semio/diagram.hpp"

#include <algorithm>
#include <map>

namespace semio {

int MultiDiagram::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return int(i);
  return -1;
}

const Vertex& MultiDiagram::vertex(const std::string& id) const {
  int i = vertex_index(id);
  if (i < 0) fail(ErrorKind::reference, "unknown vertex '" + id + "'");
  return vertices[i];
}

std::uint64_t MultiDiagram::tuple_count() const {
  std::uint64_t n = 1;
  for (const auto& v : vertices) {
    n *= v.set->size();
    if (n > (std::uint64_t(1) << 62)) break;
  }
  return n;
}

void MultiDiagram::validate() const {
  if (!alg) fail(ErrorKind::precondition, "diagram has no algebra");
  std::set<std::string> ids;
  for (const auto& v : vertices) {
    if (!v.set) fail(ErrorKind::validation, "vertex '" + v.id + "' has no Omega-set");
    if (!ids.insert(v.id).second) fail(ErrorKind::validation, "duplicate vertex id '" + v.id + "'");
  }
  std::set<std::string> aids;
  for (const auto& a : arrows) {
    if (!aids.insert(a.id).second) fail(ErrorKind::validation, "duplicate arrow id '" + a.id + "'");
    const auto ms = a.m.sources(), mt = a.m.targets();
    if (ms.size() != a.src.size() || mt.size() != a.tgt.size())
      fail(ErrorKind::validation, "arrow '" + a.id + "' binds " + std::to_string(a.src.size()) + "->" +
                                      std::to_string(a.tgt.size()) + " vertices but its component has " +
                                      std::to_string(ms.size()) + "->" + std::to_string(mt.size()) + " ports");
    std::vector<std::string> bound = a.src;
    bound.insert(bound.end(), a.tgt.begin(), a.tgt.end());
    for (std::size_t k = 0; k < bound.size(); ++k) {
      const Vertex& v = vertex(bound[k]);
      const Port& p = a.m.ports()[k];
      if (v.set->sign != p.sign && !generalizations.count({v.set->sign, p.sign}))
        fail(ErrorKind::validation, "arrow '" + a.id + "' expects sign " + p.sign + " at position " +
                                        std::to_string(k + 1) + " but vertex '" + v.id + "' has sign " +
                                        v.set->sign);
      for (const auto& e : v.set->support)
        if (p.dom->find(e) < 0)
          fail(ErrorKind::validation, "arrow '" + a.id + "': element '" + e + "' of vertex '" + v.id +
                                          "' is not in the domain of port " + p.name);
    }
  }
  for (const auto& s : sources) vertex(s);
}

MultiDiagram discrete_diagram(AlgebraPtr alg, std::vector<Vertex> vertices) {
  MultiDiagram d;
  d.alg = std::move(alg);
  d.vertices = std::move(vertices);
  return d;
}

namespace {

struct Factor {
  std::vector<int> vars;  // ascending vertex indices
  std::vector<Truth> t;
};

struct Engine {
  const MultiDiagram& d;
  const Algebra& a;
  std::uint64_t cap;
  std::vector<std::size_t> sizes;

  Engine(const MultiDiagram& dd, std::uint64_t c) : d(dd), a(*dd.alg), cap(c) {
    d.validate();
    for (const auto& v : d.vertices) sizes.push_back(v.set->size());
  }

  std::uint64_t span(const std::vector<int>& vars) const {
    std::uint64_t n = 1;
    for (int v : vars) {
      n *= sizes[v];
      if (n > cap) return n;
    }
    return n;
  }

  Factor extent_factor(int v) const {
    Factor f{{v}, {}};
    for (std::size_t e = 0; e < sizes[v]; ++e) f.t.push_back(d.vertices[v].set->extent(e));
    return f;
  }

  Factor arrow_factor(const Arrow& ar) const {
    std::vector<std::string> bound = ar.src;
    bound.insert(bound.end(), ar.tgt.begin(), ar.tgt.end());
    std::vector<int> slot_vertex;
    std::vector<std::vector<int>> elem_map;  // per port: vertex element -> port element
    for (std::size_t k = 0; k < bound.size(); ++k) {
      const int v = d.vertex_index(bound[k]);
      slot_vertex.push_back(v);
      std::vector<int> m;
      for (const auto& e : d.vertices[v].set->support) m.push_back(ar.m.ports()[k].dom->find(e));
      elem_map.push_back(std::move(m));
    }
    Factor f;
    f.vars = slot_vertex;
    std::sort(f.vars.begin(), f.vars.end());
    f.vars.erase(std::unique(f.vars.begin(), f.vars.end()), f.vars.end());
    const std::uint64_t n = span(f.vars);
    if (n > cap) throw CapExceeded(n, cap);
    f.t.resize(std::size_t(n));
    std::vector<int> assign(f.vars.size(), 0), port(bound.size());
    for (std::size_t flat = 0; flat < f.t.size(); ++flat) {
      for (std::size_t k = 0; k < bound.size(); ++k) {
        const auto pos = std::lower_bound(f.vars.begin(), f.vars.end(), slot_vertex[k]) - f.vars.begin();
        port[k] = elem_map[k][assign[pos]];
      }
      f.t[flat] = ar.m.at(port);
      for (std::size_t q = f.vars.size(); q-- > 0;) {
        if (++assign[q] < int(sizes[f.vars[q]])) break;
        assign[q] = 0;
      }
    }
    return f;
  }

  // tensor of fs over out_vars, joined over elim when elim >= 0
  Factor combine(const std::vector<const Factor*>& fs, std::vector<int> out_vars, int elim) const {
    std::vector<int> all = out_vars;
    if (elim >= 0) all.push_back(elim);
    std::sort(all.begin(), all.end());
    const std::uint64_t n = span(all);
    if (n > cap) throw CapExceeded(n, cap);
    Factor out{out_vars, {}};
    out.t.assign(std::size_t(span(out_vars)), a.bot());
    // stride of every factor variable within the factor's table
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> strides(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::size_t s = 1;
      for (std::size_t q = fs[i]->vars.size(); q-- > 0;) {
        const auto pos = std::size_t(std::find(all.begin(), all.end(), fs[i]->vars[q]) - all.begin());
        strides[i].push_back({pos, s});
        s *= sizes[fs[i]->vars[q]];
      }
    }
    std::vector<std::size_t> out_pos;
    for (int v : out_vars) out_pos.push_back(std::size_t(std::find(all.begin(), all.end(), v) - all.begin()));
    std::vector<int> assign(all.size(), 0);
    for (std::uint64_t flat = 0; flat < n; ++flat) {
      Truth v = a.top();
      bool first = true;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        std::size_t off = 0;
        for (auto [pos, s] : strides[i]) off += std::size_t(assign[pos]) * s;
        v = first ? fs[i]->t[off] : a.tensor(v, fs[i]->t[off]);
        first = false;
      }
      std::size_t o = 0;
      for (std::size_t q = 0; q < out_vars.size(); ++q) o = o * sizes[out_vars[q]] + assign[out_pos[q]];
      out.t[o] = elim >= 0 ? a.join(out.t[o], v) : v;
      for (std::size_t q = all.size(); q-- > 0;) {
        if (++assign[q] < int(sizes[all[q]])) break;
        assign[q] = 0;
      }
    }
    return out;
  }

  // sup over vertices outside keep of the tensor of factors
  Factor eliminate(std::vector<Factor> factors, const std::vector<int>& keep) const {
    std::vector<int> todo;
    for (std::size_t v = 0; v < sizes.size(); ++v)
      if (std::find(keep.begin(), keep.end(), int(v)) == keep.end()) todo.push_back(int(v));
    while (!todo.empty()) {
      // greedy: the variable whose elimination table is smallest
      std::size_t best = 0;
      std::uint64_t best_cost = ~std::uint64_t(0);
      for (std::size_t i = 0; i < todo.size(); ++i) {
        std::vector<int> vars{todo[i]};
        for (const auto& f : factors)
          if (std::count(f.vars.begin(), f.vars.end(), todo[i]))
            vars.insert(vars.end(), f.vars.begin(), f.vars.end());
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        const std::uint64_t c = span(vars);
        if (c < best_cost) {
          best_cost = c;
          best = i;
        }
      }
      const int v = todo[best];
      todo.erase(todo.begin() + std::ptrdiff_t(best));
      std::vector<Factor> rest;
      std::vector<const Factor*> touching;
      std::vector<int> vars;
      for (const auto& f : factors)
        if (std::count(f.vars.begin(), f.vars.end(), v)) {
          touching.push_back(&f);
          for (int u : f.vars)
            if (u != v) vars.push_back(u);
        }
      std::sort(vars.begin(), vars.end());
      vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
      Factor merged = touching.empty() ? Factor{{}, {a.bot()}} : combine(touching, vars, v);
      for (auto& f : factors)
        if (!std::count(f.vars.begin(), f.vars.end(), v)) rest.push_back(std::move(f));
      rest.push_back(std::move(merged));
      factors = std::move(rest);
    }
    std::vector<const Factor*> ptrs;
    for (const auto& f : factors) ptrs.push_back(&f);
    if (ptrs.empty()) {
      Factor one{{}, {a.top()}};
      return combine({&one}, keep, -1);
    }
    return combine(ptrs, keep, -1);
  }

  std::vector<Factor> base_factors() const {
    std::vector<Factor> fs;
    for (std::size_t v = 0; v < sizes.size(); ++v) fs.push_back(extent_factor(int(v)));
    return fs;
  }

  MultiMorphism to_morphism(const Factor& f) const {
    std::vector<Port> ports;
    for (int v : f.vars) {
      const auto& vx = d.vertices[v];
      const bool src = std::count(d.sources.begin(), d.sources.end(), vx.id) > 0;
      ports.push_back({vx.id, vx.set->sign, src ? Role::source : Role::target, vx.set});
    }
    MultiMorphism m(d.alg, ports, std::max<std::uint64_t>(cap, 1));
    // the constructor moves sources first; copy through names
    std::vector<int> pos(m.arity());
    for (std::size_t k = 0; k < m.arity(); ++k)
      for (std::size_t q = 0; q < f.vars.size(); ++q)
        if (d.vertices[f.vars[q]].id == m.ports()[k].name) pos[k] = int(q);
    std::vector<int> fi(f.vars.size());
    m.for_each([&](const std::vector<int>& idx, const Truth&) {
      std::size_t o = 0;
      for (std::size_t k = 0; k < idx.size(); ++k) fi[pos[k]] = idx[k];
      for (std::size_t q = 0; q < fi.size(); ++q) o = o * sizes[f.vars[q]] + fi[q];
      m.set(idx, f.t[o]);
    });
    return m;
  }

  std::vector<int> resolve(const std::vector<std::string>& keep) const {
    std::vector<int> out;
    for (const auto& id : keep) {
      const int v = d.vertex_index(id);
      if (v < 0) fail(ErrorKind::reference, "unknown vertex '" + id + "'");
      if (std::count(out.begin(), out.end(), v)) fail(ErrorKind::validation, "vertex '" + id + "' listed twice");
      out.push_back(v);
    }
    return out;
  }

  MultiMorphism limit(const std::vector<int>& keep) const {
    auto fs = base_factors();
    for (const auto& ar : d.arrows) fs.push_back(arrow_factor(ar));
    return to_morphism(eliminate(std::move(fs), keep));
  }

  MultiMorphism colimit(const std::vector<int>& keep) const {
    if (d.arrows.empty()) return limit(keep);
    Factor acc;
    bool first = true;
    for (const auto& ar : d.arrows) {
      auto fs = base_factors();
      fs.push_back(arrow_factor(ar));
      Factor part = eliminate(std::move(fs), keep);
      if (first) acc = std::move(part);
      else
        for (std::size_t i = 0; i < acc.t.size(); ++i) acc.t[i] = a.join(acc.t[i], part.t[i]);
      first = false;
    }
    return to_morphism(acc);
  }
};

std::vector<std::string> all_ids(const MultiDiagram& d) {
  std::vector<std::string> ids;
  for (const auto& v : d.vertices) ids.push_back(v.id);
  return ids;
}

}  // namespace

MultiMorphism limit(const MultiDiagram& d, std::uint64_t cap) { return limit_projected(d, all_ids(d), cap); }
MultiMorphism colimit(const MultiDiagram& d, std::uint64_t cap) { return colimit_projected(d, all_ids(d), cap); }

MultiMorphism limit_projected(const MultiDiagram& d, const std::vector<std::string>& keep, std::uint64_t cap) {
  Engine e(d, cap);
  return e.limit(e.resolve(keep));
}

MultiMorphism colimit_projected(const MultiDiagram& d, const std::vector<std::string>& keep, std::uint64_t cap) {
  Engine e(d, cap);
  return e.colimit(e.resolve(keep));
}

// ---- parallel pairs and spans ---------------------------------------------

KanKind parse_kan(const std::string& s) {
  if (s == "equalizer") return KanKind::equalizer;
  if (s == "pullback") return KanKind::pullback;
  if (s == "coequalizer") return KanKind::coequalizer;
  if (s == "pushout") return KanKind::pushout;
  fail(ErrorKind::validation, "unknown construction '" + s + "'");
}

MultiMorphism extent_map(const MultiMorphism& g) {
  MultiMorphism out(g.alg(), g.ports());
  const auto& a = *g.alg();
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    Truth v = a.top();
    for (std::size_t k = 0; k < idx.size(); ++k) v = a.tensor(v, out.ports()[k].dom->extent(idx[k]));
    out.set(idx, v);
  });
  return out;
}

MultiMorphism kan_construct(KanKind kind, const MultiMorphism& r, const MultiMorphism& s) {
  const auto& a = *r.alg();
  if (kind == KanKind::equalizer || kind == KanKind::coequalizer) {
    MultiMorphism s2 = [&] {
      try {
        return align_to(s, r);
      } catch (const Error& e) {
        fail(ErrorKind::validation, std::string("signature mismatch: ") + e.what());
      }
    }();
    MultiMorphism out = extent_map(r);
    for (std::size_t t = 0; t < out.size(); ++t) {
      const Truth rs = kind == KanKind::equalizer ? a.tensor(r.at(t), s2.at(t)) : a.join(r.at(t), s2.at(t));
      out.set(t, a.tensor(out.at(t), rs));
    }
    return out;
  }
  const auto rs = r.sources(), rt = r.targets(), ss = s.sources(), st = s.targets();
  if (rt.size() != st.size() || rt.empty())
    fail(ErrorKind::validation, "signature mismatch: the two morphisms need a common codomain");
  for (std::size_t k = 0; k < rt.size(); ++k) {
    const auto& p = r.ports()[rt[k]];
    const auto& q = s.ports()[st[k]];
    if (p.sign != q.sign || p.dom->support != q.dom->support)
      fail(ErrorKind::validation, "signature mismatch: codomain sign " + p.sign + " vs " + q.sign);
  }
  std::vector<Port> ports;
  std::set<std::string> names;
  auto add = [&](Port p) {
    p.role = Role::source;
    while (!names.insert(p.name).second) p.name += "'";
    ports.push_back(p);
  };
  for (std::size_t k : rs) add(r.ports()[k]);
  for (std::size_t k : rt) add(r.ports()[k]);
  for (std::size_t k : ss) add(s.ports()[k]);
  MultiMorphism out(r.alg(), ports);
  const std::size_t nx = rs.size(), nu = rt.size();
  std::vector<int> ri(r.arity()), si(s.arity());
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    for (std::size_t k = 0; k < nx + nu; ++k) ri[k] = idx[k];
    for (std::size_t k = 0; k < ss.size(); ++k) si[k] = idx[nx + nu + k];
    for (std::size_t k = 0; k < nu; ++k) si[ss.size() + k] = idx[nx + k];
    Truth ext = a.top();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const bool is_u = k >= nx && k < nx + nu;
      if (kind == KanKind::pushout && is_u) continue;
      ext = a.tensor(ext, out.ports()[k].dom->extent(idx[k]));
    }
    const Truth body = kind == KanKind::pullback ? a.tensor(r.at(ri), s.at(si)) : a.join(r.at(ri), s.at(si));
    out.set(idx, a.tensor(ext, body));
  });
  return out;
}

// ---- commutativity --------------------------------------------------------

CommutativityReport commutativity_degree(const MultiDiagram& d, const std::vector<std::string>& sources,
                                         const TupleFilter& filter, std::uint64_t cap) {
  const auto& a = *d.alg;
  MultiDiagram dd = d;
  dd.sources = sources;
  const MultiMorphism lhs = limit_projected(dd, sources, cap);
  // sup of the product extent over the non-source vertices
  Truth rest = a.top();
  for (const auto& v : d.vertices) {
    if (std::count(sources.begin(), sources.end(), v.id)) continue;
    Truth s = a.bot();
    for (std::size_t e = 0; e < v.set->size(); ++e) s = a.join(s, v.set->extent(e));
    rest = a.tensor(rest, s);
  }
  CommutativityReport rep;
  rep.degree = a.top();
  std::vector<std::string> names(lhs.arity());
  // lhs ports follow the order of `sources`
  std::vector<std::size_t> order(lhs.arity());
  for (std::size_t k = 0; k < lhs.arity(); ++k)
    for (std::size_t q = 0; q < sources.size(); ++q)
      if (lhs.ports()[k].name == sources[q]) order[q] = k;
  lhs.for_each([&](const std::vector<int>& idx, const Truth& v) {
    for (std::size_t q = 0; q < sources.size(); ++q) names[q] = lhs.ports()[order[q]].dom->support[idx[order[q]]];
    if (filter && !filter(names)) return;
    ++rep.tuples;
    Truth ext = a.top();
    for (std::size_t k = 0; k < idx.size(); ++k) ext = a.tensor(ext, lhs.ports()[k].dom->extent(idx[k]));
    const Truth b = a.biimp(v, a.tensor(ext, rest));
    const Truth nd = a.meet(rep.degree, b);
    if (rep.witness.empty() || !a.eq(nd, rep.degree)) rep.witness = names;
    rep.degree = nd;
  });
  rep.lambda = rep.degree;
  rep.commutative = a.is_top(rep.degree);
  return rep;
}

// ---- classifiers ----------------------------------------------------------

namespace {

struct Observed {
  std::map<std::string, int> elem;  // vertex id -> element index in the vertex set
};

Observed observe(const MultiDiagram& d, const std::string& v1,
                 const std::vector<std::pair<std::string, std::string>>& obs) {
  d.validate();
  d.vertex(v1);
  if (!is_divisible(*d.alg)) fail(ErrorKind::precondition, "classifiers need a divisible algebra");
  Observed o;
  for (const auto& [id, e] : obs) {
    const Vertex& v = d.vertex(id);
    if (id == v1) fail(ErrorKind::validation, "the classified vertex '" + id + "' cannot be observed");
    if (o.elem.count(id)) fail(ErrorKind::validation, "vertex '" + id + "' observed twice");
    o.elem[id] = v.set->index(e);
  }
  for (const auto& v : d.vertices)
    if (v.id != v1 && !o.elem.count(v.id))
      fail(ErrorKind::validation, "vertex '" + v.id + "' has no observation");
  for (const auto& ar : d.arrows) {
    if (!is_total(ar.m, *source_set(ar.m)) || !is_faithful(ar.m, *target_set(ar.m)))
      fail(ErrorKind::precondition, "arrow '" + ar.id + "' is not total and faithful");
  }
  return o;
}

std::vector<int> port_tuple(const MultiDiagram& d, const Arrow& ar, const std::map<std::string, int>& elem) {
  std::vector<std::string> bound = ar.src;
  bound.insert(bound.end(), ar.tgt.begin(), ar.tgt.end());
  std::vector<int> idx;
  for (std::size_t k = 0; k < bound.size(); ++k) {
    const auto& name = d.vertex(bound[k]).set->support[elem.at(bound[k])];
    idx.push_back(ar.m.ports()[k].dom->find(name));
  }
  return idx;
}

MultiMorphism over_vertex(const MultiDiagram& d, const std::string& v1) {
  const Vertex& v = d.vertex(v1);
  return MultiMorphism(d.alg, {{v.id, v.set->sign, Role::source, v.set}});
}

}  // namespace

MultiMorphism classifier_from_diagram(const MultiDiagram& d, const std::string& v1,
                                      const std::vector<std::pair<std::string, std::string>>& observations) {
  const auto& a = *d.alg;
  Observed o = observe(d, v1, observations);
  Truth ext = a.top();
  for (const auto& v : d.vertices)
    if (v.id != v1) ext = a.tensor(ext, v.set->extent(o.elem[v.id]));
  MultiMorphism out = over_vertex(d, v1);
  for (std::size_t e = 0; e < out.size(); ++e) {
    o.elem[v1] = int(e);
    Truth body = a.top();
    for (const auto& ar : d.arrows) body = a.tensor(body, ar.m.at(port_tuple(d, ar, o.elem)));
    out.set(e, a.residuum(ext, body));
  }
  return out;
}

MultiMorphism classifier_simplified(const MultiDiagram& d, const std::string& v1,
                                    const std::vector<std::pair<std::string, std::string>>& observations) {
  const auto& a = *d.alg;
  Observed o = observe(d, v1, observations);
  MultiMorphism out = over_vertex(d, v1);
  for (std::size_t e = 0; e < out.size(); ++e) {
    o.elem[v1] = int(e);
    Truth body = a.top();
    for (const auto& ar : d.arrows) {
      const auto idx = port_tuple(d, ar, o.elem);
      Truth src_ext = a.top();
      for (std::size_t k : ar.m.sources()) src_ext = a.tensor(src_ext, ar.m.ports()[k].dom->extent(idx[k]));
      body = a.tensor(body, a.residuum(src_ext, ar.m.at(idx)));
    }
    out.set(e, body);
  }
  return out;
}

MultiDiagram concept_to_diagram(const MultiMorphism& g) {
  const auto& a = *g.alg();
  if (g.arity() == 0) fail(ErrorKind::validation, "concept has no ports");
  if (!is_divisible(a)) fail(ErrorKind::precondition, "concept_to_diagram needs a divisible algebra");
  const MultiMorphism ext = extent_map(g);
  for (std::size_t t = 0; t < g.size(); ++t)
    if (!a.leq(g.at(t), ext.at(t))) {
      auto idx = g.unflatten(t);
      std::vector<std::string> w;
      for (std::size_t k = 0; k < idx.size(); ++k) w.push_back(g.ports()[k].dom->support[idx[k]]);
      fail(ErrorKind::validation, "concept exceeds the extent at (" + tuple_name(w) + "): " +
                                      a.format(g.at(t), 9) + " > " + a.format(ext.at(t), 9));
    }
  MultiDiagram d;
  d.alg = g.alg();
  std::vector<Port> ports = g.ports();
  for (std::size_t k = 0; k < ports.size(); ++k) {
    d.vertices.push_back({ports[k].name, ports[k].dom});
    ports[k].role = k == 0 ? Role::source : Role::target;
  }
  Arrow ar{"f", MultiMorphism(g.alg(), ports), {ports[0].name}, {}};
  for (std::size_t k = 1; k < ports.size(); ++k) ar.tgt.push_back(ports[k].name);
  for (std::size_t t = 0; t < g.size(); ++t) ar.m.set(t, a.residuum(ext.at(t), g.at(t)));
  d.arrows.push_back(std::move(ar));
  for (std::size_t k : g.sources()) d.sources.push_back(g.ports()[k].name);
  return d;
}

}  // namespace semio
