#include "semio/semiotic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace semio {

OmegaSetPtr Model::sign_set(const std::string& sign) const {
  auto it = sign_map.find(sign);
  if (it != sign_map.end()) return it->second;
  if (sign == kOmega && alg && alg->finite()) return omega_carrier(alg, kOmega);
  fail(ErrorKind::reference, "sign '" + sign + "' has no interpretation in the model");
}

const MultiMorphism& Model::comp(const std::string& label) const {
  auto it = comp_map.find(label);
  if (it == comp_map.end()) fail(ErrorKind::reference, "component '" + label + "' has no interpretation");
  return it->second;
}

const Configuration& SignSystem::diagram(const std::string& name) const {
  auto it = diagrams.find(name);
  if (it == diagrams.end()) fail(ErrorKind::reference, "unknown diagram '" + name + "'");
  return it->second;
}

OmegaSetPtr omega_set(AlgebraPtr alg, const std::vector<std::string>& support, const std::string& name) {
  std::vector<Truth> vals;
  for (const auto& e : support) vals.push_back(alg->parse(e));
  std::vector<SimEntry> entries;
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = i + 1; j < support.size(); ++j)
      entries.push_back({support[i], support[j], alg->biimp(vals[i], vals[j])});
  return make_omega_set(alg, name, kOmega, support, entries);
}

// ---- interpretation -------------------------------------------------------

MultiDiagram interpret(const Configuration& c, const Model& m, const Library& lib) {
  require_valid(c, lib);
  MultiDiagram d;
  d.alg = m.alg;
  for (const auto& v : c.vertices) {
    OmegaSetPtr s;
    if (!v.oset.empty()) {
      auto it = m.osets.find(v.oset);
      if (it == m.osets.end()) fail(ErrorKind::reference, "vertex '" + v.id + "' binds unknown oset '" + v.oset + "'");
      s = it->second;
    } else {
      s = m.sign_set(v.sign);
    }
    d.vertices.push_back({v.id, s});
  }
  for (const auto& a : c.arrows) d.arrows.push_back({a.id, m.comp(a.label), a.src, a.tgt});
  d.sources = c.sources;
  d.generalizations = lib.ont.closure();
  d.validate();
  return d;
}

std::vector<std::string> input_vertices(const Configuration& c) {
  std::set<std::string> has_in;
  for (const auto& a : c.arrows) has_in.insert(a.tgt.begin(), a.tgt.end());
  std::vector<std::string> r;
  for (const auto& v : c.vertices)
    if (!has_in.count(v.id)) r.push_back(v.id);
  return r;
}

std::vector<std::string> output_vertices(const Configuration& c) {
  std::set<std::string> has_out;
  for (const auto& a : c.arrows) has_out.insert(a.src.begin(), a.src.end());
  std::vector<std::string> r;
  for (const auto& v : c.vertices)
    if (!has_out.count(v.id)) r.push_back(v.id);
  return r;
}

std::vector<std::string> relation_inputs(const Configuration& c) {
  if (!c.sources.empty()) return c.sources;
  std::vector<std::string> r;
  for (const auto& id : input_vertices(c))
    if (c.vertex(id).sign != kOmega) r.push_back(id);
  return r;
}

std::vector<std::string> relation_outputs(const Configuration& c) {
  const auto in = relation_inputs(c);
  std::vector<std::string> r;
  for (const auto& id : output_vertices(c))
    if (!std::count(in.begin(), in.end(), id)) r.push_back(id);
  return r;
}

bool is_relation(const Configuration& c) {
  const auto out = relation_outputs(c);
  if (out.empty()) return false;
  return std::all_of(out.begin(), out.end(), [&](const std::string& id) { return c.vertex(id).sign == kOmega; });
}

static void require_relation(const Configuration& c, const char* what) {
  if (!is_relation(c))
    fail(ErrorKind::precondition, std::string(what) + " is not a relation: its outputs must all carry " + kOmega);
}

MultiMorphism relation_map(const Configuration& c, const Semiotic& s, std::uint64_t cap) {
  require_relation(c, "diagram");
  MultiDiagram d = interpret(c, s.model, s.sys.lib);
  const auto in = relation_inputs(c), out = relation_outputs(c);
  d.sources = in;
  std::vector<std::string> keep = in;
  keep.insert(keep.end(), out.begin(), out.end());
  const MultiMorphism lim = limit_projected(d, keep, cap);
  const auto& a = *d.alg;

  std::vector<Port> ports;
  for (const auto& id : in) ports.push_back({id, d.vertex(id).set->sign, Role::source, d.vertex(id).set});
  MultiMorphism r(d.alg, ports, cap);
  std::fill(r.table().begin(), r.table().end(), a.bot());
  // lim port k -> slot in keep
  std::vector<std::size_t> slot(lim.arity());
  std::vector<std::vector<Truth>> weight(lim.arity());
  for (std::size_t k = 0; k < lim.arity(); ++k) {
    slot[k] = std::size_t(std::find(keep.begin(), keep.end(), lim.ports()[k].name) - keep.begin());
    if (slot[k] >= in.size())
      for (const auto& e : lim.ports()[k].dom->support) weight[k].push_back(a.parse(e));
  }
  std::vector<int> ri(in.size());
  lim.for_each([&](const std::vector<int>& idx, const Truth& v) {
    Truth w = v;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (slot[k] < in.size()) ri[slot[k]] = idx[k];
      else w = a.tensor(w, weight[k][idx[k]]);
    }
    const std::size_t flat = r.flatten(ri);
    r.set(flat, a.join(r.at(flat), w));
  });
  return r;
}

// ---- composite components -------------------------------------------------

namespace {

// port index behind every letter of w
std::vector<std::size_t> word_ports(const MultiMorphism& m, const Word& w) {
  const auto s = m.sources(), t = m.targets();
  std::vector<std::size_t> r(w.size());
  std::size_t i = 0, o = 0;
  for (std::size_t p = 0; p < w.size(); ++p) {
    if (w[p].out) {
      if (o >= t.size()) fail(ErrorKind::validation, "component has fewer outputs than '" + to_string(w) + "'");
      r[p] = t[o++];
    } else {
      if (i >= s.size()) fail(ErrorKind::validation, "component has fewer inputs than '" + to_string(w) + "'");
      r[p] = s[i++];
    }
  }
  if (i != s.size() || o != t.size())
    fail(ErrorKind::validation, "component has more ports than '" + to_string(w) + "'");
  return r;
}

// sup-tensor contraction of f and g over (f port, g port) pairs; surviving
// ports keep their order (f first) and roles. Elements match by name.
MultiMorphism contract(const MultiMorphism& f, const MultiMorphism& g,
                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs, std::uint64_t cap) {
  const auto& a = *f.alg();
  std::vector<char> fu(f.arity(), 0), gu(g.arity(), 0);
  for (auto [i, j] : pairs) fu[i] = gu[j] = 1;
  std::vector<Port> ports;
  std::vector<std::pair<int, std::size_t>> origin;
  std::set<std::string> names;
  auto add = [&](int who, std::size_t k) {
    Port p = (who == 0 ? f : g).ports()[k];
    while (!names.insert(p.name).second) p.name += "'";
    ports.push_back(p);
    origin.push_back({who, k});
  };
  for (std::size_t k = 0; k < f.arity(); ++k)
    if (!fu[k]) add(0, k);
  for (std::size_t k = 0; k < g.arity(); ++k)
    if (!gu[k]) add(1, k);
  MultiMorphism out(f.alg(), ports, cap);
  std::vector<std::pair<int, std::size_t>> from(out.arity());
  for (std::size_t k = 0; k < out.arity(); ++k)
    for (std::size_t q = 0; q < ports.size(); ++q)
      if (ports[q].name == out.ports()[k].name) from[k] = origin[q];

  std::uint64_t csize = 1;
  std::vector<std::vector<int>> gmap;  // f element -> g element per pair
  for (auto [i, j] : pairs) {
    csize *= f.ports()[i].dom->size();
    std::vector<int> m;
    for (const auto& e : f.ports()[i].dom->support) m.push_back(g.ports()[j].dom->find(e));
    gmap.push_back(std::move(m));
  }
  if (std::uint64_t(out.size()) * csize > cap) throw CapExceeded(std::uint64_t(out.size()) * csize, cap);

  std::vector<int> fi(f.arity()), gi(g.arity()), ci(pairs.size());
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    for (std::size_t k = 0; k < idx.size(); ++k) (from[k].first == 0 ? fi : gi)[from[k].second] = idx[k];
    Truth best = a.bot();
    std::fill(ci.begin(), ci.end(), 0);
    for (std::uint64_t c = 0; c < csize; ++c) {
      bool ok = true;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        fi[pairs[k].first] = ci[k];
        gi[pairs[k].second] = gmap[k][ci[k]];
        if (gmap[k][ci[k]] < 0) ok = false;
      }
      if (ok) best = a.join(best, a.tensor(f.at(fi), g.at(gi)));
      for (std::size_t k = pairs.size(); k-- > 0;) {
        if (++ci[k] < int(f.ports()[pairs[k].first].dom->size())) break;
        ci[k] = 0;
      }
    }
    out.set(idx, best);
  });
  return out;
}

// f's targets against g's sources in order
MultiMorphism compose_positional(const MultiMorphism& f, const MultiMorphism& g, std::uint64_t cap) {
  const auto t = f.targets(), s = g.sources();
  if (t.size() != s.size())
    fail(ErrorKind::validation, "cannot compose: " + std::to_string(t.size()) + " outputs against " +
                                    std::to_string(s.size()) + " inputs");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (f.ports()[t[k]].dom->support != g.ports()[s[k]].dom->support)
      fail(ErrorKind::validation, "cannot compose: port " + f.ports()[t[k]].name + " and port " +
                                      g.ports()[s[k]].name + " have different supports");
    pairs.push_back({t[k], s[k]});
  }
  return contract(f, g, pairs, cap);
}

// same shape position by position, then entrywise
TableDiff compare_positional(const MultiMorphism& f, const MultiMorphism& g) {
  TableDiff d;
  if (f.arity() != g.arity()) {
    d.equal = false;
    d.witness = {"arity " + std::to_string(f.arity()) + " vs " + std::to_string(g.arity())};
    return d;
  }
  for (std::size_t k = 0; k < f.arity(); ++k)
    if (f.ports()[k].role != g.ports()[k].role || f.ports()[k].dom->support != g.ports()[k].dom->support) {
      d.equal = false;
      d.witness = {"port " + std::to_string(k + 1) + " (" + f.ports()[k].name + " vs " + g.ports()[k].name + ")"};
      return d;
    }
  const auto& a = *f.alg();
  for (std::size_t t = 0; t < f.size(); ++t)
    if (!a.eq(f.at(t), g.at(t))) {
      d.equal = false;
      const auto idx = f.unflatten(t);
      for (std::size_t k = 0; k < idx.size(); ++k) d.witness.push_back(f.ports()[k].dom->support[idx[k]]);
      d.lhs = f.at(t);
      d.rhs = g.at(t);
      break;
    }
  return d;
}

Truth tuple_extent(const MultiMorphism& m, const std::vector<int>& idx) {
  const auto& a = *m.alg();
  Truth e = a.top();
  for (std::size_t k = 0; k < idx.size(); ++k) e = a.tensor(e, m.ports()[k].dom->extent(std::size_t(idx[k])));
  return e;
}

std::vector<std::string> names_of(const MultiMorphism& m, const std::vector<int>& idx) {
  std::vector<std::string> r;
  for (std::size_t k = 0; k < idx.size(); ++k) r.push_back(m.ports()[k].dom->support[idx[k]]);
  return r;
}

WordMorphism fold(const std::vector<std::string>& labels, const Library& lib, const Model& m) {
  WordMorphism acc{lib.req(labels[0]), m.comp(labels[0])};
  for (std::size_t k = 1; k < labels.size(); ++k) acc = glue_compose(acc, {lib.req(labels[k]), m.comp(labels[k])}, lib.ont);
  return acc;
}

}  // namespace

WordMorphism glue_compose(const WordMorphism& f, const WordMorphism& g, const Ontology& ont) {
  const auto pf = word_ports(f.m, f.w), pg = word_ports(g.m, g.w);
  GlueTrace tr;
  WordMorphism r;
  r.w = glue_words(f.w, g.w, ont, GlueOrder::nearest, &tr);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (auto [p, q] : tr.matched) pairs.push_back({pf[p], pg[q]});
  r.m = contract(f.m, g.m, pairs, kDefaultCap);
  return r;
}

Model extend_model(const Model& atomic, const SignSystem& sys) {
  sys.sem.check(sys.lib);
  Model m = atomic;
  for (const auto& c : sys.lib.comps) {
    if (sys.sem.atomic(c.label)) continue;
    const auto nf = normal_form(c.label, sys.sem);
    for (const auto& l : nf)
      if (!atomic.comp_map.count(l))
        fail(ErrorKind::reference, "cannot extend to '" + c.label + "': atomic label '" + l + "' is not interpreted");
    WordMorphism acc = fold(nf, sys.lib, atomic);
    if (!sys.sem.words_equivalent(acc.w, c.req))
      fail(ErrorKind::validation, "normal form of '" + c.label + "' glues to '" + to_string(acc.w) + "', expected '" +
                                      to_string(c.req) + "'");
    m.comp_map[c.label] = std::move(acc.m);
  }
  return m;
}

// ---- validation -----------------------------------------------------------

bool ModelReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok || c.informational; });
}

std::vector<const Check*> ModelReport::failures() const {
  std::vector<const Check*> r;
  for (const auto& c : checks)
    if (!c.ok && !c.informational) r.push_back(&c);
  return r;
}

static std::string port_mismatch(const MultiMorphism& f, const Word& req, const Model& m) {
  const auto [in, out] = word_io(req);
  const auto s = f.sources(), t = f.targets();
  if (s.size() != in.size() || t.size() != out.size())
    return "ports " + std::to_string(s.size()) + "->" + std::to_string(t.size()) + ", requirement '" + to_string(req) +
           "' needs " + std::to_string(in.size()) + "->" + std::to_string(out.size());
  auto side = [&](const std::vector<std::size_t>& ps, const Word& w) -> std::string {
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const Port& p = f.ports()[ps[k]];
      if (p.sign != w[k].sign) return "port " + p.name + " has sign " + p.sign + ", expected " + w[k].sign;
      if (m.sign_map.count(p.sign) && m.sign_map.at(p.sign)->support != p.dom->support)
        return "port " + p.name + " ranges over a support different from M(" + p.sign + ")";
    }
    return "";
  };
  auto r = side(s, in);
  return r.empty() ? side(t, out) : r;
}

ModelReport validate_model(const SignSystem& sys, const Model& m, std::uint64_t cap) {
  ModelReport rep;
  const auto& a = *m.alg;
  auto add = [&](Check c) { rep.checks.push_back(std::move(c)); };

  for (const auto& c : sys.lib.comps) {
    Check ck{"requirement", c.label};
    auto it = m.comp_map.find(c.label);
    if (it == m.comp_map.end()) {
      ck.ok = false;
      ck.message = "no interpretation";
    } else {
      ck.message = port_mismatch(it->second, c.req, m);
      ck.ok = ck.message.empty();
    }
    add(ck);
  }

  for (const auto& [lo, up] : sys.lib.ont.closure()) {
    if (!m.sign_map.count(lo) || !m.sign_map.count(up)) continue;
    Check ck{"ontology", lo + " <= " + up};
    const auto& x = *m.sign_map.at(lo);
    const auto& y = *m.sign_map.at(up);
    for (std::size_t i = 0; i < x.size() && ck.ok; ++i) {
      const int yi = y.find(x.support[i]);
      if (yi < 0) {
        ck.ok = false;
        ck.message = "element '" + x.support[i] + "' of " + lo + " is missing from " + up;
        ck.witness = {x.support[i]};
        break;
      }
      for (std::size_t j = 0; j < x.size(); ++j) {
        const int yj = y.find(x.support[j]);
        if (yj >= 0 && !a.leq(x.at(i, j), y.at(yi, yj))) {
          ck.ok = false;
          ck.message = "similarity of " + lo + " exceeds " + up;
          ck.witness = {x.support[i], x.support[j]};
          break;
        }
      }
    }
    add(ck);
  }

  for (const auto& [w1, w2] : sys.sem.word_eq) {
    Check ck{"word-equivalence", to_string(w1) + " = " + to_string(w2)};
    auto sets = [&](const Word& w) {
      std::vector<std::vector<std::string>> r;
      for (const auto& s : w) r.push_back(m.sign_set(s.sign)->support);
      return r;
    };
    if (sets(w1) != sets(w2)) {
      ck.ok = false;
      ck.message = "the words are interpreted by different Omega-sets";
    }
    add(ck);
  }

  {
    Check ck{"rules", "semantics"};
    try {
      sys.sem.check(sys.lib);
    } catch (const Error& e) {
      ck.ok = false;
      ck.message = e.what();
    }
    add(ck);
    if (ck.ok)
      for (const auto& r : sys.sem.rules) {
        if (!m.comp_map.count(r.lhs)) continue;
        const auto nf = normal_form(r.lhs, sys.sem);
        if (!std::all_of(nf.begin(), nf.end(), [&](const std::string& l) { return m.comp_map.count(l) > 0; })) continue;
        Check rc{"coherence", r.lhs};
        const auto d = compare_positional(m.comp(r.lhs), fold(nf, sys.lib, m).m);
        if (!d.equal) {
          rc.ok = false;
          rc.message = "M(" + r.lhs + ") differs from its normal form";
          rc.witness = d.witness;
        }
        add(rc);
      }
  }

  for (const auto& name : sys.totals) {
    Check ck{"total", name};
    const Configuration& c = sys.diagram(name);
    MultiDiagram d = interpret(c, m, sys.lib);
    const auto srcs = c.sources.empty() ? input_vertices(c) : c.sources;
    d.sources = srcs;
    const MultiMorphism p = limit_projected(d, srcs, cap);
    Truth deg = a.top();
    bool first = true;
    p.for_each([&](const std::vector<int>& idx, const Truth& v) {
      const Truth t = a.residuum(tuple_extent(p, idx), v);
      if (first || !a.leq(deg, t)) {
        deg = first ? t : a.meet(deg, t);
        ck.witness = names_of(p, idx);
        first = false;
      }
    });
    ck.degree = deg;
    ck.ok = a.is_top(deg);
    ck.message = ck.ok ? "limit is total" : "limit is total only to degree " + a.format(deg, 9);
    if (ck.ok) ck.witness.clear();
    add(ck);
  }

  auto bound = [&](const std::vector<Binding>& bs, bool co) {
    for (const auto& b : bs) {
      Check ck{co ? "colimit" : "limit", b.label + " <- " + b.diagram};
      const Configuration& c = sys.diagram(b.diagram);
      MultiDiagram d = interpret(c, m, sys.lib);
      auto in = input_vertices(c);
      std::vector<std::string> keep = in;
      for (const auto& o : output_vertices(c))
        if (!std::count(in.begin(), in.end(), o)) keep.push_back(o);
      d.sources = in;
      const MultiMorphism l = co ? colimit_projected(d, keep, cap) : limit_projected(d, keep, cap);
      auto it = m.comp_map.find(b.label);
      if (it == m.comp_map.end()) {
        ck.ok = false;
        ck.message = "component '" + b.label + "' has no interpretation";
      } else {
        const auto diff = compare_positional(it->second, l);
        ck.ok = diff.equal;
        ck.witness = diff.witness;
        if (!ck.ok)
          ck.message = diff.lhs.n && diff.witness.size() == it->second.arity()
                           ? "M(" + b.label + ") = " + a.format(diff.lhs, 9) + " but the " +
                                 (co ? "colimit" : "limit") + " is " + a.format(diff.rhs, 9)
                           : "shape differs: " + (diff.witness.empty() ? std::string() : diff.witness[0]);
      }
      add(ck);
    }
  };
  bound(sys.limits, false);
  bound(sys.colimits, true);

  for (const auto& [label, f] : m.comp_map) {
    if (f.size() > 4096) continue;
    Check ck{"epi", label};
    ck.informational = true;
    ck.ok = classify(f).epi;
    if (!ck.ok) ck.message = "not epi over its port domains";
    add(ck);
  }
  return rep;
}

// ---- logic components -----------------------------------------------------

namespace {

int parse_count(const std::string& s) {
  int n = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), n);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || n < 1)
    fail(ErrorKind::parse, "expected a positive count, got '" + s + "'");
  return n;
}

void need_args(const std::string& kind, const std::vector<std::string>& args, std::size_t n) {
  if (args.size() != n)
    fail(ErrorKind::parse, "logic component '" + kind + "' takes " + std::to_string(n) + " argument(s), got " +
                               std::to_string(args.size()));
}

Word word_of(const std::vector<std::string>& ins, const std::vector<std::string>& outs) {
  Word w;
  for (const auto& s : ins) w.push_back({s, false});
  for (const auto& s : outs) w.push_back({s, true});
  return w;
}

}  // namespace

std::pair<Word, MultiMorphism> logic_component(const Model& m, const std::string& kind,
                                               const std::vector<std::string>& args) {
  const auto& a = *m.alg;
  if (kind == "diagonal" || kind == "codiagonal") {
    need_args(kind, args, 2);
    const int n = parse_count(args[0]);
    const auto s = m.sign_set(args[1]);
    const bool co = kind == "codiagonal";
    std::vector<Port> ports;
    ports.push_back({"a", args[1], co ? Role::target : Role::source, s});
    for (int i = 1; i <= n; ++i) ports.push_back({"a" + std::to_string(i), args[1], co ? Role::source : Role::target, s});
    MultiMorphism f(m.alg, ports);
    const int ai = f.port_index("a");
    f.for_each([&](const std::vector<int>& idx, const Truth&) {
      Truth v = a.top();
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (int(k) != ai) v = a.tensor(v, s->at(std::size_t(idx[ai]), std::size_t(idx[k])));
      f.set(idx, v);
    });
    std::vector<std::string> many(std::size_t(n), args[1]);
    return {co ? word_of(many, {args[1]}) : word_of({args[1]}, many), f};
  }
  if (kind == "similarity") {
    if (args.empty()) fail(ErrorKind::parse, "similarity needs at least one sign");
    std::vector<Port> ports;
    for (std::size_t i = 0; i < args.size(); ++i)
      ports.push_back({"x" + std::to_string(i + 1), args[i], Role::source, m.sign_set(args[i])});
    for (std::size_t i = 0; i < args.size(); ++i)
      ports.push_back({"y" + std::to_string(i + 1), args[i], Role::target, m.sign_set(args[i])});
    MultiMorphism f(m.alg, ports);
    const std::size_t n = args.size();
    f.for_each([&](const std::vector<int>& idx, const Truth&) {
      Truth v = a.top();
      for (std::size_t i = 0; i < n; ++i) v = a.tensor(v, ports[i].dom->at(std::size_t(idx[i]), std::size_t(idx[n + i])));
      f.set(idx, v);
    });
    return {word_of(args, args), f};
  }
  if (kind == "rename") {
    need_args(kind, args, 2);
    const auto s = m.sign_set(args[0]), u = m.sign_set(args[1]);
    MultiMorphism f(m.alg, {{args[0], args[0], Role::source, s}, {args[1] == args[0] ? args[1] + "'" : args[1], args[1],
                                                                  Role::target, u}});
    f.for_each([&](const std::vector<int>& idx, const Truth&) {
      f.set(idx, s->support[idx[0]] == u->support[idx[1]] ? a.top() : a.bot());
    });
    return {word_of({args[0]}, {args[1]}), f};
  }
  if (kind == "top") {
    need_args(kind, args, 0);
    const auto om = m.sign_set(kOmega);
    MultiMorphism f(m.alg, {{"v", kOmega, Role::target, om}});
    for (std::size_t e = 0; e < om->size(); ++e) f.set(e, a.parse(om->support[e]));
    return {word_of({}, {kOmega}), f};
  }
  if (kind == "tensor" || kind == "implies" || kind == "meet" || kind == "join") {
    need_args(kind, args, 0);
    const Op op = kind == "tensor" ? Op::tensor : kind == "implies" ? Op::residuum : kind == "meet" ? Op::meet : Op::join;
    const auto om = m.sign_set(kOmega);
    std::vector<Truth> vals;
    for (const auto& e : om->support) vals.push_back(a.parse(e));
    MultiMorphism f(m.alg, {{"p", kOmega, Role::source, om}, {"q", kOmega, Role::source, om}, {"r", kOmega, Role::target, om}});
    f.for_each([&](const std::vector<int>& idx, const Truth&) {
      f.set(idx, a.biimp(vals[idx[2]], a.eval(op, vals[idx[0]], vals[idx[1]])));
    });
    return {word_of({kOmega, kOmega}, {kOmega}), f};
  }
  if (kind == "const") {
    need_args(kind, args, 2);
    const auto s = m.sign_set(args[0]);
    const int c = s->find(args[1]);
    if (c < 0) fail(ErrorKind::validation, "value '" + args[1] + "' is not in the support of sign " + args[0]);
    MultiMorphism f(m.alg, {{"x", args[0], Role::target, s}});
    for (std::size_t e = 0; e < s->size(); ++e) f.set(e, s->at(e, std::size_t(c)));
    return {word_of({}, {args[0]}), f};
  }
  if (kind == "graph") {
    need_args(kind, args, 1);
    const MultiMorphism& r = m.comp(args[0]);
    const auto om = m.sign_set(kOmega);
    std::vector<Port> ports;
    std::vector<std::string> ins;
    std::set<std::string> names;
    for (auto p : r.ports()) {
      p.role = Role::source;
      ins.push_back(p.sign);
      names.insert(p.name);
      ports.push_back(p);
    }
    std::string v = "v";
    while (names.count(v)) v += "'";
    ports.push_back({v, kOmega, Role::target, om});
    std::vector<Truth> vals;
    for (const auto& e : om->support) vals.push_back(a.parse(e));
    MultiMorphism f(m.alg, ports);
    std::vector<int> ri(r.arity());
    f.for_each([&](const std::vector<int>& idx, const Truth&) {
      std::copy(idx.begin(), idx.end() - 1, ri.begin());
      f.set(idx, a.biimp(vals[idx.back()], r.at(ri)));
    });
    return {word_of(ins, {kOmega}), f};
  }
  fail(ErrorKind::parse, "unknown logic component kind '" + kind + "'");
}

void add_logic(Semiotic& s, const std::string& label, const std::string& kind, const std::vector<std::string>& args) {
  auto it = s.sys.logic.find(label);
  if (it != s.sys.logic.end()) {
    if (it->second.kind == kind && it->second.args == args) return;
    fail(ErrorKind::validation, "logic label '" + label + "' is already defined differently");
  }
  if (s.sys.lib.has(label)) fail(ErrorKind::validation, "label '" + label + "' already names a component");
  auto [w, f] = logic_component(s.model, kind, args);
  if (!s.sys.lib.ont.contains(kOmega)) s.sys.lib.ont.add_sign(kOmega);
  s.sys.lib.add(label, w);
  s.model.comp_map[label] = std::move(f);
  s.sys.logic[label] = {kind, args};
}

// ---- connectives ----------------------------------------------------------

namespace {

std::string op_kind(Op op) {
  switch (op) {
    case Op::tensor: return "tensor";
    case Op::residuum: return "implies";
    case Op::meet: return "meet";
    case Op::join: return "join";
    default: fail(ErrorKind::precondition, "diagram connectives are tensor, implies, meet and join");
  }
}

void copy_into(Configuration& r, const Configuration& d, const std::string& prefix) {
  for (auto v : d.vertices) {
    v.id = prefix + v.id;
    r.vertices.push_back(v);
  }
  for (auto a : d.arrows) {
    a.id = prefix + a.id;
    for (auto& x : a.src) x = prefix + x;
    for (auto& x : a.tgt) x = prefix + x;
    r.arrows.push_back(a);
  }
}

std::string fresh(const Configuration& c, std::string id) {
  while (c.vertex_index(id) >= 0) id += "'";
  return id;
}

}  // namespace

Configuration diagram_connective(Op op, const Configuration& d0, const Configuration& d1, Semiotic& s) {
  const std::string kind = op_kind(op);
  require_relation(d0, "left operand");
  require_relation(d1, "right operand");
  const auto o0 = relation_outputs(d0), o1 = relation_outputs(d1);
  if (o0.size() != 1 || o1.size() != 1)
    fail(ErrorKind::precondition, "connective operands must have a single Omega output");
  const auto in0 = relation_inputs(d0), in1 = relation_inputs(d1);

  Configuration r;
  copy_into(r, d0, "l.");
  copy_into(r, d1, "r.");
  std::vector<char> used(in1.size(), 0);
  std::vector<std::string> sources;
  for (const auto& u : in0) {
    const CVertex& vu = d0.vertex(u);
    std::size_t j = 0;
    while (j < in1.size() && (used[j] || d1.vertex(in1[j]).sign != vu.sign)) ++j;
    if (j == in1.size()) {
      sources.push_back("l." + u);
      continue;
    }
    used[j] = 1;
    const std::string label = "diag2_" + vu.sign;
    add_logic(s, label, "diagonal", {"2", vu.sign});
    const std::string x = fresh(r, u);
    r.vertices.push_back({x, vu.sign, vu.oset});
    r.arrows.push_back({"link." + x, label, {x}, {"l." + u, "r." + in1[j]}});
    sources.push_back(x);
  }
  for (std::size_t j = 0; j < in1.size(); ++j)
    if (!used[j]) sources.push_back("r." + in1[j]);
  const std::string label = "op_" + kind;
  add_logic(s, label, kind, {});
  const std::string out = fresh(r, "out");
  r.vertices.push_back({out, kOmega, ""});
  r.arrows.push_back({"op", label, {"l." + o0[0], "r." + o1[0]}, {out}});
  r.sources = sources;
  require_valid(r, s.sys.lib);
  return r;
}

bool is_true_relation(const Configuration& d, Semiotic& s, std::uint64_t cap) {
  require_relation(d, "diagram");
  const auto out = relation_outputs(d);
  if (out.size() != 1) fail(ErrorKind::precondition, "a true relation needs a single Omega output");
  add_logic(s, "top", "top", {});
  add_logic(s, "codiag2_" + kOmega, "codiagonal", {"2", kOmega});
  Configuration e = d;
  e.sources = relation_inputs(d);
  const std::string t = fresh(e, "true.t");
  e.vertices.push_back({t, kOmega, ""});
  const std::string r = fresh(e, "true.r");
  e.vertices.push_back({r, kOmega, ""});
  e.arrows.push_back({"true.top", "top", {}, {t}});
  e.arrows.push_back({"true.codiag", "codiag2_" + kOmega, {out[0], t}, {r}});
  MultiDiagram md = interpret(e, s.model, s.sys.lib);
  const MultiMorphism p = limit_projected(md, e.sources, cap);
  const auto& a = *s.model.alg;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!a.leq(tuple_extent(p, p.unflatten(i)), p.at(i))) return false;
  return true;
}

Configuration encode_dataset(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& signs,
                             Semiotic& s) {
  if (signs.empty()) fail(ErrorKind::validation, "a dataset needs at least one column");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != signs.size())
      fail(ErrorKind::validation, "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                                      " values for " + std::to_string(signs.size()) + " columns");
    for (std::size_t j = 0; j < signs.size(); ++j)
      if (s.model.sign_set(signs[j])->find(rows[r][j]) < 0)
        fail(ErrorKind::validation, "row " + std::to_string(r + 1) + ": value '" + rows[r][j] +
                                        "' is not in the support of sign " + signs[j]);
  }
  Configuration c;
  std::vector<std::string> xs;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    std::string id = signs[j];
    if (c.vertex_index(id) >= 0) id += "#" + std::to_string(j);
    c.vertices.push_back({id, signs[j], ""});
    xs.push_back(id);
  }
  c.sources = xs;
  const auto& a = *s.model.alg;
  if (rows.empty()) {
    const std::string bot = a.format(a.bot());
    const std::string label = "const_" + kOmega + "_" + bot;
    add_logic(s, label, "const", {kOmega, bot});
    c.vertices.push_back({"out", kOmega, ""});
    c.arrows.push_back({"empty", label, {}, {"out"}});
    return c;
  }
  const std::size_t n = rows.size();
  // copies of each column, one per row
  std::vector<std::vector<std::string>> copy(signs.size());
  for (std::size_t j = 0; j < signs.size(); ++j) {
    if (n == 1) {
      copy[j] = {xs[j]};
      continue;
    }
    const std::string label = "diag" + std::to_string(n) + "_" + signs[j];
    add_logic(s, label, "diagonal", {std::to_string(n), signs[j]});
    CArrow d{"d." + xs[j], label, {xs[j]}, {}};
    for (std::size_t r = 0; r < n; ++r) {
      const std::string id = xs[j] + "." + std::to_string(r);
      c.vertices.push_back({id, signs[j], ""});
      d.tgt.push_back(id);
      copy[j].push_back(id);
    }
    c.arrows.push_back(d);
  }
  auto chain = [&](const std::vector<std::string>& ws, const std::string& kind, const std::string& stem) {
    add_logic(s, "op_" + kind, kind, {});
    std::string acc = ws[0];
    for (std::size_t k = 1; k < ws.size(); ++k) {
      const std::string id = stem + "." + std::to_string(k);
      c.vertices.push_back({id, kOmega, ""});
      c.arrows.push_back({id, "op_" + kind, {acc, ws[k]}, {id}});
      acc = id;
    }
    return acc;
  };
  std::vector<std::string> row_out;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::string> ws;
    for (std::size_t j = 0; j < signs.size(); ++j) {
      const std::string rs = std::to_string(r) + "." + std::to_string(j);
      const std::string cl = "const_" + signs[j] + "_" + rows[r][j];
      add_logic(s, cl, "const", {signs[j], rows[r][j]});
      add_logic(s, "sim_" + signs[j], "similarity", {signs[j]});
      add_logic(s, "eq_" + signs[j], "graph", {"sim_" + signs[j]});
      c.vertices.push_back({"c." + rs, signs[j], ""});
      c.arrows.push_back({"c." + rs, cl, {}, {"c." + rs}});
      c.vertices.push_back({"w." + rs, kOmega, ""});
      c.arrows.push_back({"e." + rs, "eq_" + signs[j], {copy[j][r], "c." + rs}, {"w." + rs}});
      ws.push_back("w." + rs);
    }
    row_out.push_back(chain(ws, "tensor", "t." + std::to_string(r)));
  }
  chain(row_out, "join", "u");
  require_valid(c, s.sys.lib);
  return c;
}

// ---- natural transformations ----------------------------------------------

NaturalityReport check_natural_transformation(const Semiotic& s1, const Semiotic& s2, const MultiMorphism& f,
                                              const MultiMorphism& g, const std::string& diagram, std::uint64_t cap) {
  const Configuration& c = s1.sys.diagram(diagram);
  auto interp = [&](const Semiotic& s) {
    MultiDiagram d = interpret(c, s.model, s1.sys.lib);
    const auto in = input_vertices(c);
    std::vector<std::string> keep = in;
    for (const auto& o : output_vertices(c))
      if (!std::count(in.begin(), in.end(), o)) keep.push_back(o);
    d.sources = in;
    return limit_projected(d, keep, cap);
  };
  const MultiMorphism m1 = interp(s1), m2 = interp(s2);
  const auto cf = classify(f), cg = classify(g);
  if (!cf.epi) fail(ErrorKind::precondition, "f is not epi");
  if (!cg.epi) fail(ErrorKind::precondition, "g is not epi");
  NaturalityReport rep;
  rep.diff = compare_positional(compose_positional(f, m2, cap), compose_positional(m1, g, cap));
  rep.holds = rep.diff.equal;
  return rep;
}

// ---- integration ----------------------------------------------------------

namespace {

bool same_config(const Configuration& x, const Configuration& y) {
  if (x.vertices.size() != y.vertices.size() || x.arrows.size() != y.arrows.size() || x.sources != y.sources)
    return false;
  for (std::size_t i = 0; i < x.vertices.size(); ++i)
    if (x.vertices[i].id != y.vertices[i].id || x.vertices[i].sign != y.vertices[i].sign ||
        x.vertices[i].oset != y.vertices[i].oset)
      return false;
  for (std::size_t i = 0; i < x.arrows.size(); ++i)
    if (x.arrows[i].id != y.arrows[i].id || x.arrows[i].label != y.arrows[i].label || x.arrows[i].src != y.arrows[i].src ||
        x.arrows[i].tgt != y.arrows[i].tgt)
      return false;
  return true;
}

bool raw_eq(const Truth& x, const Truth& y, double eps) {
  if (x.n != y.n) return false;
  for (int i = 0; i < x.n; ++i)
    if (std::abs(x.c[i] - y.c[i]) > eps) return false;
  return true;
}

struct Integrator {
  const std::vector<Semiotic>& parts;
  AlgebraPtr alg;
  double eps;
  OmegaSetPtr omega;
  // per part: original Omega element -> integrated element
  std::vector<std::map<std::string, std::string>> omega_up;
  std::vector<std::map<std::string, std::string>> omega_down;
  std::map<std::string, OmegaSetPtr> signs, osets;

  Truth embed(const std::vector<std::size_t>& owners, const Truth& v) const {
    std::vector<Truth> ps;
    for (std::size_t i = 0; i < parts.size(); ++i)
      ps.push_back(std::count(owners.begin(), owners.end(), i) ? v : alg->factors()[i]->top());
    return alg->pack(ps);
  }

  OmegaSetPtr embed_set(const OmegaSet& s, const std::vector<std::size_t>& owners) const {
    auto r = std::make_shared<OmegaSet>();
    r->name = s.name;
    r->sign = s.sign;
    r->alg = alg;
    r->support = s.support;
    for (const auto& v : s.sim) r->sim.push_back(embed(owners, v));
    return r;
  }

  [[noreturn]] void clash(const std::string& what, std::size_t i, std::size_t j, const std::string& detail) const {
    fail(ErrorKind::validation, what + " is interpreted differently in " + parts[i].name + " and " + parts[j].name +
                                    ": " + detail);
  }

  void check_sets(const std::string& what, const OmegaSet& x, std::size_t i, const OmegaSet& y, std::size_t j) const {
    if (x.support != y.support) clash(what, i, j, "supports differ");
    for (std::size_t p = 0; p < x.size(); ++p)
      for (std::size_t q = 0; q < x.size(); ++q)
        if (!raw_eq(x.at(p, q), y.at(p, q), eps))
          clash(what, i, j,
                "[" + x.support[p] + "=" + x.support[q] + "] is " + parts[i].model.alg->format(x.at(p, q), 9) + " vs " +
                    parts[j].model.alg->format(y.at(p, q), 9));
  }

  // integrated version of a port domain
  OmegaSetPtr port_dom(const OmegaSetPtr& d, std::size_t owner) const {
    if (d->sign == kOmega) return omega;
    auto it = signs.find(d->sign);
    if (it != signs.end() && it->second->support == d->support) return it->second;
    auto jt = osets.find(d->name);
    if (jt != osets.end() && jt->second->support == d->support) return jt->second;
    return embed_set(*d, {owner});
  }

  bool has_omega_port(const MultiMorphism& f) const {
    return std::any_of(f.ports().begin(), f.ports().end(), [](const Port& p) { return p.sign == kOmega; });
  }

  MultiMorphism component(const std::string& label, const std::vector<std::size_t>& owners) const {
    const MultiMorphism& f0 = parts[owners[0]].model.comp(label);
    std::vector<Port> ports = f0.ports();
    for (auto& p : ports) p.dom = port_dom(p.dom, owners[0]);
    MultiMorphism out(alg, ports);
    if (!has_omega_port(f0)) {
      for (std::size_t k = 1; k < owners.size(); ++k) {
        const MultiMorphism& fk = parts[owners[k]].model.comp(label);
        bool same = f0.arity() == fk.arity() && f0.size() == fk.size();
        for (std::size_t q = 0; same && q < f0.arity(); ++q)
          same = f0.ports()[q].dom->support == fk.ports()[q].dom->support;
        for (std::size_t t = 0; same && t < f0.size(); ++t) same = raw_eq(f0.at(t), fk.at(t), eps);
        if (!same) clash("component '" + label + "'", owners[0], owners[k], "tables differ");
      }
      for (std::size_t t = 0; t < f0.size(); ++t) out.set(t, embed(owners, f0.at(t)));
      return out;
    }
    // relation: decode the Omega coordinates per owner
    out.for_each([&](const std::vector<int>& idx, const Truth&) {
      Truth v = alg->top();
      bool any = false;
      for (std::size_t i : owners) {
        const MultiMorphism& fi = parts[i].model.comp(label);
        std::vector<int> oi(idx.size());
        bool ok = true;
        for (std::size_t k = 0; k < idx.size() && ok; ++k) {
          const Port& p = out.ports()[k];
          const int pk = fi.port_index(p.name);
          if (pk < 0) {
            ok = false;
            break;
          }
          const OmegaSetPtr& dom = fi.ports()[std::size_t(pk)].dom;
          std::string e = p.dom->support[idx[k]];
          if (p.sign == kOmega) {
            auto it = omega_down[i].find(e);
            if (it == omega_down[i].end()) {
              ok = false;
              break;
            }
            e = it->second;
          }
          oi[std::size_t(pk)] = dom->find(e);
          ok = oi[std::size_t(pk)] >= 0;
        }
        if (!ok) continue;
        v = alg->meet(v, embed({i}, fi.at(oi)));
        any = true;
      }
      out.set(idx, any ? v : alg->bot());
    });
    return out;
  }
};

}  // namespace

Semiotic integrate(const std::vector<Semiotic>& parts) {
  if (parts.empty()) fail(ErrorKind::precondition, "nothing to integrate");
  if (parts.size() == 1) return parts[0];
  std::vector<AlgebraPtr> algs;
  for (const auto& p : parts) algs.push_back(p.model.alg);
  Integrator in{parts, Algebra::product_of(algs), 0.0, nullptr, {}, {}, {}, {}};
  in.eps = in.alg->eps();

  Semiotic out;
  for (std::size_t i = 0; i < parts.size(); ++i) out.name += (i ? "+" : "") + parts[i].name;
  out.model.alg = in.alg;

  // library, semantics and sketch data
  std::map<std::string, std::size_t> comp_owner;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& sys = parts[i].sys;
    for (const auto& s : sys.lib.ont.signs()) out.sys.lib.ont.add_sign(s);
    for (const auto& [lo, up] : sys.lib.ont.order()) out.sys.lib.ont.add_order(lo, up);
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& sys = parts[i].sys;
    for (const auto& c : sys.lib.comps) {
      if (out.sys.lib.has(c.label)) {
        if (!(out.sys.lib.req(c.label) == c.req))
          fail(ErrorKind::validation, "component '" + c.label + "' requires '" + to_string(out.sys.lib.req(c.label)) +
                                          "' in " + parts[comp_owner[c.label]].name + " but '" + to_string(c.req) +
                                          "' in " + parts[i].name);
        continue;
      }
      out.sys.lib.add(c.label, c.req);
      comp_owner[c.label] = i;
    }
    for (const auto& r : sys.sem.rules) {
      const Rule* have = out.sys.sem.rule_for(r.lhs);
      if (have && have->rhs != r.rhs)
        fail(ErrorKind::validation, "rule for '" + r.lhs + "' differs between semiotics (" + parts[i].name + ")");
      if (!have) out.sys.sem.rules.push_back(r);
    }
    for (const auto& [l, n] : sys.sem.sizes) out.sys.sem.sizes[l] = n;
    for (const auto& we : sys.sem.word_eq) out.sys.sem.word_eq.push_back(we);
    for (const auto& [name, c] : sys.diagrams) {
      auto it = out.sys.diagrams.find(name);
      if (it != out.sys.diagrams.end() && !same_config(it->second, c))
        fail(ErrorKind::validation, "diagram '" + name + "' is defined differently in " + parts[i].name);
      out.sys.diagrams[name] = c;
    }
    for (const auto& t : sys.totals)
      if (!std::count(out.sys.totals.begin(), out.sys.totals.end(), t)) out.sys.totals.push_back(t);
    auto merge = [](std::vector<Binding>& dst, const std::vector<Binding>& src) {
      for (const auto& b : src)
        if (std::none_of(dst.begin(), dst.end(),
                         [&](const Binding& x) { return x.label == b.label && x.diagram == b.diagram; }))
          dst.push_back(b);
    };
    merge(out.sys.limits, sys.limits);
    merge(out.sys.colimits, sys.colimits);
  }

  // Omega: union of the upper embeddings
  std::vector<std::string> osupport;
  in.omega_up.resize(parts.size());
  in.omega_down.resize(parts.size());
  bool any_omega = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    OmegaSetPtr om;
    try {
      om = parts[i].model.sign_set(kOmega);
    } catch (const Error&) {
      continue;
    }
    any_omega = true;
    for (const auto& e : om->support) {
      const std::string up = in.alg->format(in.alg->upper(int(i), parts[i].model.alg->parse(e)));
      in.omega_up[i][e] = up;
      in.omega_down[i][up] = e;
      if (!std::count(osupport.begin(), osupport.end(), up)) osupport.push_back(up);
    }
  }
  if (any_omega) {
    in.omega = omega_set(in.alg, osupport);
    out.model.sign_map[kOmega] = in.omega;
  }

  // signs and named sets
  auto merge_sets = [&](auto get, std::map<std::string, OmegaSetPtr>& dst, const char* what) {
    std::map<std::string, std::vector<std::size_t>> owners;
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (const auto& [k, s] : get(parts[i].model))
        if (s->sign != kOmega) owners[k].push_back(i);
    for (const auto& [k, os] : owners) {
      const OmegaSet& first = *get(parts[os[0]].model).at(k);
      for (std::size_t q = 1; q < os.size(); ++q)
        in.check_sets(std::string(what) + " '" + k + "'", first, os[0], *get(parts[os[q]].model).at(k), os[q]);
      dst[k] = in.embed_set(first, os);
    }
  };
  merge_sets([](const Model& m) -> const std::map<std::string, OmegaSetPtr>& { return m.sign_map; }, in.signs, "sign");
  merge_sets([](const Model& m) -> const std::map<std::string, OmegaSetPtr>& { return m.osets; }, in.osets, "oset");
  for (const auto& [k, s] : in.signs) out.model.sign_map[k] = s;
  out.model.osets = in.osets;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (const auto& [k, s] : parts[i].model.osets)
      if (s->sign == kOmega && in.omega) out.model.osets[k] = in.omega;

  // components
  std::map<std::string, std::vector<std::size_t>> owners;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (const auto& [label, f] : parts[i].model.comp_map) owners[label].push_back(i);
  for (const auto& [label, os] : owners) out.model.comp_map[label] = in.component(label, os);
  return out;
}

MultiMorphism integration_schema_colimit(const std::vector<SchemaVertex>& vertices,
                                         const std::vector<SchemaArrow>& arrows, std::uint64_t cap) {
  if (vertices.empty()) fail(ErrorKind::precondition, "integration schema has no vertices");
  const AlgebraPtr alg = vertices[0].lim.alg();
  const auto& a = *alg;
  std::vector<Port> ports;
  std::vector<std::size_t> offset;
  std::uint64_t n = 1;
  for (const auto& v : vertices) {
    offset.push_back(ports.size());
    for (const auto& p : v.lim.ports()) {
      ports.push_back({v.name + "." + p.name, p.sign, Role::source, p.dom});
      n *= p.dom->size();
      if (n > cap) throw CapExceeded(n, cap);
    }
  }
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].name == name) return i;
    fail(ErrorKind::reference, "schema arrow names unknown vertex '" + name + "'");
  };
  struct Bound {
    const MultiMorphism* m;
    std::vector<std::size_t> slots;  // port -> position in the result
  };
  std::vector<Bound> bound;
  for (const auto& ar : arrows) {
    const std::size_t i = index_of(ar.from), j = index_of(ar.to);
    const auto s = ar.m.sources(), t = ar.m.targets();
    if (s.size() != vertices[i].lim.arity() || t.size() != vertices[j].lim.arity())
      fail(ErrorKind::validation, "schema arrow " + ar.from + " -> " + ar.to + " does not match the vertex ports");
    Bound b{&ar.m, std::vector<std::size_t>(ar.m.arity())};
    for (std::size_t k = 0; k < s.size(); ++k) b.slots[s[k]] = offset[i] + k;
    for (std::size_t k = 0; k < t.size(); ++k) b.slots[t[k]] = offset[j] + k;
    for (std::size_t k = 0; k < ar.m.arity(); ++k)
      if (ar.m.ports()[k].dom->support != ports[b.slots[k]].dom->support)
        fail(ErrorKind::validation, "schema arrow " + ar.from + " -> " + ar.to + ": port " + ar.m.ports()[k].name +
                                        " ranges over a different support");
    bound.push_back(std::move(b));
  }
  MultiMorphism out(alg, ports, cap);
  std::vector<int> vi, ai;
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    Truth v = a.top();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      vi.assign(idx.begin() + std::ptrdiff_t(offset[i]),
                idx.begin() + std::ptrdiff_t(offset[i] + vertices[i].lim.arity()));
      v = a.tensor(v, vertices[i].lim.at(vi));
    }
    if (!bound.empty()) {
      Truth j = a.bot();
      for (const auto& b : bound) {
        ai.resize(b.slots.size());
        for (std::size_t k = 0; k < b.slots.size(); ++k) ai[k] = idx[b.slots[k]];
        j = a.join(j, b.m->at(ai));
      }
      v = a.tensor(v, j);
    }
    out.set(idx, v);
  });
  return out;
}

}  // namespace semio
