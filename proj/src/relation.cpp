#include "semio/relation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace semio {

std::string tuple_name(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

// ---- Omega-sets -----------------------------------------------------------

int OmegaSet::find(const std::string& element) const {
  auto it = std::find(support.begin(), support.end(), element);
  return it == support.end() ? -1 : int(it - support.begin());
}

int OmegaSet::index(const std::string& element) const {
  int i = find(element);
  if (i < 0) fail(ErrorKind::reference, "element '" + element + "' is not in the support of " + name);
  return i;
}

std::vector<std::string> OmegaSet::globals() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (alg->is_top(extent(i))) out.push_back(support[i]);
  return out;
}

bool OmegaSet::crisp() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (!alg->eq(at(i, j), i == j ? alg->top() : alg->bot())) return false;
  return true;
}

std::vector<Triple> transitivity_violations(const OmegaSet& s) {
  std::vector<Triple> out;
  const auto& a = *s.alg;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      for (std::size_t k = 0; k < s.size(); ++k)
        if (!a.leq(a.tensor(s.at(i, j), s.at(j, k)), s.at(i, k)))
          out.push_back({s.support[i], s.support[j], s.support[k]});
  return out;
}

OmegaSetPtr make_omega_set(AlgebraPtr alg, const std::string& name, const std::string& sign,
                           std::vector<std::string> support, const std::vector<SimEntry>& entries,
                           bool strict, std::vector<std::string>* warnings) {
  auto s = std::make_shared<OmegaSet>();
  s->name = name;
  s->sign = sign;
  s->alg = alg;
  {
    std::set<std::string> seen;
    for (const auto& e : support)
      if (!seen.insert(e).second)
        fail(ErrorKind::validation, "duplicate element '" + e + "' in support of " + name);
  }
  s->support = std::move(support);
  const std::size_t n = s->size();
  s->sim.assign(n * n, alg->bot());
  for (std::size_t i = 0; i < n; ++i) s->sim[i * n + i] = alg->top();
  std::vector<char> given(n * n, 0);
  for (const auto& e : entries) {
    const int i = s->index(e.a), j = s->index(e.b);
    alg->check(e.v);
    for (auto [p, q] : {std::pair{i, j}, std::pair{j, i}}) {
      const std::size_t at = std::size_t(p) * n + q;
      if (given[at] && !alg->eq(s->sim[at], e.v))
        fail(ErrorKind::validation, "asymmetric similarity in " + name + ": [" + e.a + "=" + e.b +
                                        "] given two different values");
      s->sim[at] = e.v;
      given[at] = 1;
    }
  }
  auto bad = transitivity_violations(*s);
  if (!bad.empty()) {
    const auto& t = bad.front();
    std::string msg = name + ": similarity is not tensor-transitive at (" + t.a + "," + t.b + "," +
                      t.c + "), " + std::to_string(bad.size()) + " violating triple(s)";
    if (strict) fail(ErrorKind::validation, msg);
    if (warnings) warnings->push_back(msg);
  }
  return s;
}

OmegaSetPtr crisp_omega_set(AlgebraPtr alg, const std::string& name, const std::string& sign,
                            std::vector<std::string> support) {
  return make_omega_set(std::move(alg), name, sign, std::move(support), {}, true);
}

OmegaSetPtr omega_carrier(AlgebraPtr alg, const std::string& sign) {
  if (!alg->finite()) fail(ErrorKind::precondition, "the Omega sign needs a finite algebra");
  auto s = std::make_shared<OmegaSet>();
  s->name = sign;
  s->sign = sign;
  s->alg = alg;
  const auto vals = alg->sample();
  for (const auto& v : vals) s->support.push_back(alg->format(v));
  const std::size_t n = vals.size();
  s->sim.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s->sim[i * n + j] = alg->biimp(vals[i], vals[j]);
  return s;
}

OmegaSetPtr product_omega_sets(const std::vector<OmegaSetPtr>& parts) {
  if (parts.empty()) fail(ErrorKind::precondition, "product of no Omega-sets");
  if (parts.size() == 1) return parts[0];
  auto s = std::make_shared<OmegaSet>();
  s->alg = parts[0]->alg;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    s->name += (k ? "*" : "") + parts[k]->name;
    s->sign += (k ? "*" : "") + parts[k]->sign;
  }
  s->factors = parts;
  std::size_t n = 1;
  for (const auto& p : parts) n *= p->size();
  std::vector<std::vector<int>> idx(n, std::vector<int>(parts.size()));
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t r = t;
    for (std::size_t k = parts.size(); k-- > 0;) {
      idx[t][k] = int(r % parts[k]->size());
      r /= parts[k]->size();
    }
    std::vector<std::string> names;
    for (std::size_t k = 0; k < parts.size(); ++k) names.push_back(parts[k]->support[idx[t][k]]);
    s->support.push_back(tuple_name(names));
  }
  const auto& a = *s->alg;
  s->sim.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Truth v = a.top();
      for (std::size_t k = 0; k < parts.size(); ++k) v = a.tensor(v, parts[k]->at(idx[i][k], idx[j][k]));
      s->sim[i * n + j] = v;
    }
  return s;
}

OmegaSetPtr observable_projection(const OmegaSet& s, const std::vector<std::string>& keep_signs) {
  if (s.factors.empty()) fail(ErrorKind::precondition, s.name + " is not a product of attributes");
  if (keep_signs.empty()) fail(ErrorKind::precondition, "observable projection keeps no attribute");
  std::vector<int> keep;
  for (const auto& k : keep_signs) {
    int hit = -1;
    for (std::size_t f = 0; f < s.factors.size(); ++f)
      if (s.factors[f]->sign == k && std::find(keep.begin(), keep.end(), int(f)) == keep.end()) {
        hit = int(f);
        break;
      }
    if (hit < 0) fail(ErrorKind::reference, "unknown attribute '" + k + "' in " + s.name);
    keep.push_back(hit);
  }
  std::vector<OmegaSetPtr> kept;
  for (int k : keep) kept.push_back(s.factors[k]);
  auto base = product_omega_sets(kept);
  auto out = std::make_shared<OmegaSet>(*base);
  if (kept.size() == 1) out->factors.clear();
  const auto& a = *s.alg;
  const std::size_t m = out->size();
  std::fill(out->sim.begin(), out->sim.end(), a.bot());
  // map each full tuple to its kept-attribute tuple
  const std::size_t nf = s.factors.size();
  std::vector<std::size_t> to_kept(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    std::vector<int> digits(nf);
    std::size_t r = t;
    for (std::size_t k = nf; k-- > 0;) {
      digits[k] = int(r % s.factors[k]->size());
      r /= s.factors[k]->size();
    }
    std::size_t flat = 0;
    for (int k : keep) flat = flat * s.factors[k]->size() + digits[k];
    to_kept[t] = flat;
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      auto& cell = out->sim[to_kept[i] * m + to_kept[j]];
      cell = a.join(cell, s.at(i, j));
    }
  return out;
}

// ---- multi-morphisms ------------------------------------------------------

MultiMorphism::MultiMorphism(AlgebraPtr alg, std::vector<Port> ports, std::uint64_t cap)
    : alg_(std::move(alg)) {
  std::stable_partition(ports.begin(), ports.end(), [](const Port& p) { return p.role == Role::source; });
  std::set<std::string> names;
  for (const auto& p : ports) {
    if (!p.dom) fail(ErrorKind::precondition, "port '" + p.name + "' has no domain");
    if (!names.insert(p.name).second) fail(ErrorKind::validation, "duplicate port name '" + p.name + "'");
  }
  ports_ = std::move(ports);
  strides_.assign(ports_.size(), 1);
  std::uint64_t n = 1;
  for (std::size_t k = ports_.size(); k-- > 0;) {
    strides_[k] = std::size_t(n);
    n *= ports_[k].dom->size();
    if (n > cap) throw CapExceeded(n, cap);
  }
  if (ports_.empty()) n = 1;
  table_.assign(std::size_t(n), alg_->bot());
}

std::vector<std::size_t> MultiMorphism::sources() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < ports_.size(); ++k)
    if (ports_[k].role == Role::source) out.push_back(k);
  return out;
}

std::vector<std::size_t> MultiMorphism::targets() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < ports_.size(); ++k)
    if (ports_[k].role == Role::target) out.push_back(k);
  return out;
}

int MultiMorphism::port_index(const std::string& name) const {
  for (std::size_t k = 0; k < ports_.size(); ++k)
    if (ports_[k].name == name) return int(k);
  return -1;
}

std::vector<int> MultiMorphism::unflatten(std::size_t flat) const {
  std::vector<int> idx(ports_.size());
  for (std::size_t k = 0; k < ports_.size(); ++k) {
    idx[k] = int(flat / strides_[k]);
    flat %= strides_[k];
  }
  return idx;
}

std::size_t MultiMorphism::flatten(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < ports_.size(); ++k) flat += std::size_t(idx[k]) * strides_[k];
  return flat;
}

static std::vector<int> indices_of(const MultiMorphism& m, const std::vector<std::string>& elements) {
  if (elements.size() != m.arity())
    fail(ErrorKind::validation, "tuple has " + std::to_string(elements.size()) + " values, expected " +
                                    std::to_string(m.arity()));
  std::vector<int> idx(m.arity());
  for (std::size_t k = 0; k < m.arity(); ++k) idx[k] = m.ports()[k].dom->index(elements[k]);
  return idx;
}

Truth MultiMorphism::at_names(const std::vector<std::string>& elements) const {
  return at(indices_of(*this, elements));
}

void MultiMorphism::set_names(const std::vector<std::string>& elements, const Truth& v) {
  alg_->check(v);
  set(indices_of(*this, elements), v);
}

void MultiMorphism::for_each(const std::function<void(const std::vector<int>&, const Truth&)>& fn) const {
  std::vector<int> idx(ports_.size(), 0);
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    fn(idx, table_[flat]);
    for (std::size_t k = ports_.size(); k-- > 0;) {
      if (++idx[k] < int(ports_[k].dom->size())) break;
      idx[k] = 0;
    }
  }
}

MultiMorphism identity(const OmegaSetPtr& s) {
  MultiMorphism m(s->alg, {{s->sign, s->sign, Role::source, s}, {s->sign + "'", s->sign, Role::target, s}});
  m.table() = s->sim;
  return m;
}

MultiMorphism crisp_identity(const OmegaSetPtr& s) {
  MultiMorphism m(s->alg, {{s->sign, s->sign, Role::source, s}, {s->sign + "'", s->sign, Role::target, s}});
  for (std::size_t i = 0; i < s->size(); ++i) m.set({int(i), int(i)}, s->alg->top());
  return m;
}

MultiMorphism chi(AlgebraPtr alg, const OmegaSetPtr& dom, const OmegaSetPtr& cod,
                  const std::map<std::string, std::string>& map) {
  std::string tname = cod->sign == dom->sign ? cod->sign + "'" : cod->sign;
  MultiMorphism m(alg, {{dom->sign, dom->sign, Role::source, dom}, {tname, cod->sign, Role::target, cod}});
  for (const auto& [a, b] : map) m.set({dom->index(a), cod->index(b)}, alg->top());
  return m;
}

static bool same_support(const OmegaSetPtr& a, const OmegaSetPtr& b) {
  return a == b || a->support == b->support;
}

MultiMorphism compose(const MultiMorphism& f, const MultiMorphism& g, std::uint64_t cap) {
  const auto& a = *f.alg();
  const auto fs = f.sources(), ft = f.targets(), gs = g.sources(), gt = g.targets();
  // contraction pairs (f target, g source) matched by sign
  std::vector<std::pair<std::size_t, std::size_t>> contr;
  std::vector<char> f_used(f.arity(), 0), g_used(g.arity(), 0);
  for (std::size_t i : ft) {
    std::vector<std::size_t> hits;
    for (std::size_t j : gs)
      if (g.ports()[j].sign == f.ports()[i].sign) hits.push_back(j);
    if (hits.empty()) continue;
    std::size_t twins = 0;
    for (std::size_t k : ft) twins += f.ports()[k].sign == f.ports()[i].sign;
    if (hits.size() > 1 || twins > 1)
      fail(ErrorKind::validation, "ambiguous port matching on sign '" + f.ports()[i].sign +
                                      "': rename ports before composing");
    if (!same_support(f.ports()[i].dom, g.ports()[hits[0]].dom))
      fail(ErrorKind::validation, "ports on sign '" + f.ports()[i].sign + "' have different supports");
    contr.push_back({i, hits[0]});
    f_used[i] = g_used[hits[0]] = 1;
  }
  std::vector<Port> ports;
  std::vector<std::pair<int, std::size_t>> origin;  // (0 = f, 1 = g), port index
  std::set<std::string> names;
  auto add = [&](int who, std::size_t k, Role role) {
    Port p = (who == 0 ? f : g).ports()[k];
    p.role = role;
    while (!names.insert(p.name).second) p.name += "'";
    ports.push_back(p);
    origin.push_back({who, k});
  };
  for (std::size_t k : fs) add(0, k, Role::source);
  for (std::size_t k : gs)
    if (!g_used[k]) add(1, k, Role::source);
  for (std::size_t k : ft)
    if (!f_used[k]) add(0, k, Role::target);
  for (std::size_t k : gt) add(1, k, Role::target);

  MultiMorphism out(f.alg(), ports, cap);
  std::size_t csize = 1;
  for (auto [i, j] : contr) csize *= f.ports()[i].dom->size();
  if (std::uint64_t(out.size()) * csize > cap) throw CapExceeded(std::uint64_t(out.size()) * csize, cap);

  std::vector<int> fi(f.arity()), gi(g.arity()), ci(contr.size());
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    for (std::size_t k = 0; k < idx.size(); ++k) (origin[k].first == 0 ? fi : gi)[origin[k].second] = idx[k];
    Truth best = a.bot();
    std::fill(ci.begin(), ci.end(), 0);
    for (std::size_t c = 0; c < csize; ++c) {
      for (std::size_t k = 0; k < contr.size(); ++k) fi[contr[k].first] = gi[contr[k].second] = ci[k];
      best = a.join(best, a.tensor(f.at(fi), g.at(gi)));
      for (std::size_t k = contr.size(); k-- > 0;) {
        if (++ci[k] < int(f.ports()[contr[k].first].dom->size())) break;
        ci[k] = 0;
      }
    }
    out.set(idx, best);
  });
  return out;
}

static MultiMorphism permuted(const MultiMorphism& f, std::vector<Port> ports, const std::vector<std::size_t>& from) {
  // from[k] = index in f of new port k (after the constructor's source-first ordering)
  MultiMorphism out(f.alg(), ports);
  std::vector<std::size_t> map(out.arity());
  for (std::size_t k = 0; k < out.arity(); ++k) {
    const auto& name = out.ports()[k].name;
    for (std::size_t q = 0; q < ports.size(); ++q)
      if (ports[q].name == name) map[k] = from[q];
  }
  std::vector<int> src(f.arity());
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    for (std::size_t k = 0; k < idx.size(); ++k) src[map[k]] = idx[k];
    out.set(idx, f.at(src));
  });
  return out;
}

MultiMorphism transpose(const MultiMorphism& f) {
  std::vector<Port> ports;
  std::vector<std::size_t> from;
  for (std::size_t k : f.targets()) {
    ports.push_back(f.ports()[k]);
    ports.back().role = Role::source;
    from.push_back(k);
  }
  for (std::size_t k : f.sources()) {
    ports.push_back(f.ports()[k]);
    ports.back().role = Role::target;
    from.push_back(k);
  }
  return permuted(f, ports, from);
}

MultiMorphism as_omega_map(const MultiMorphism& f) {
  auto ports = f.ports();
  for (auto& p : ports) p.role = Role::source;
  MultiMorphism out(f.alg(), ports);
  out.table() = f.table();
  return out;
}

MultiMorphism project_sup(const MultiMorphism& f, const std::vector<std::string>& keep) {
  std::vector<Port> ports;
  std::vector<std::size_t> from;
  for (const auto& name : keep) {
    int k = f.port_index(name);
    if (k < 0) fail(ErrorKind::reference, "no port named '" + name + "'");
    ports.push_back(f.ports()[k]);
    from.push_back(std::size_t(k));
  }
  MultiMorphism out(f.alg(), ports);
  std::vector<std::size_t> map(out.arity());
  for (std::size_t k = 0; k < out.arity(); ++k)
    map[k] = std::size_t(f.port_index(out.ports()[k].name));
  const auto& a = *f.alg();
  std::vector<int> idx(out.arity());
  f.for_each([&](const std::vector<int>& fi, const Truth& v) {
    for (std::size_t k = 0; k < map.size(); ++k) idx[k] = fi[map[k]];
    const std::size_t flat = out.flatten(idx);
    out.set(flat, a.join(out.at(flat), v));
  });
  return out;
}

MultiMorphism align_to(const MultiMorphism& g, const MultiMorphism& f) {
  if (g.arity() != f.arity()) fail(ErrorKind::validation, "port counts differ");
  std::vector<std::size_t> from(f.arity());
  std::vector<char> used(g.arity(), 0);
  std::vector<char> done(f.arity(), 0);
  for (std::size_t k = 0; k < f.arity(); ++k) {
    int j = g.port_index(f.ports()[k].name);
    if (j >= 0 && !used[j] && g.ports()[j].sign == f.ports()[k].sign) {
      from[k] = std::size_t(j);
      used[j] = done[k] = 1;
    }
  }
  for (std::size_t k = 0; k < f.arity(); ++k) {
    if (done[k]) continue;
    bool hit = false;
    for (int pass = 0; pass < 2 && !hit; ++pass)
      for (std::size_t j = 0; j < g.arity(); ++j)
        if (!used[j] && g.ports()[j].sign == f.ports()[k].sign &&
            (pass == 1 || g.ports()[j].role == f.ports()[k].role)) {
          from[k] = j;
          used[j] = 1;
          hit = true;
          break;
        }
    if (!hit) fail(ErrorKind::validation, "no port of sign '" + f.ports()[k].sign + "' to align");
  }
  for (std::size_t k = 0; k < f.arity(); ++k)
    if (!same_support(f.ports()[k].dom, g.ports()[from[k]].dom))
      fail(ErrorKind::validation, "aligned ports on sign '" + f.ports()[k].sign + "' have different supports");
  auto ports = f.ports();
  return permuted(g, ports, from);
}

TableDiff compare(const MultiMorphism& f, const MultiMorphism& g) {
  TableDiff d;
  const MultiMorphism h = align_to(g, f);
  const auto& a = *f.alg();
  for (std::size_t t = 0; t < f.size(); ++t)
    if (!a.eq(f.at(t), h.at(t))) {
      d.equal = false;
      auto idx = f.unflatten(t);
      for (std::size_t k = 0; k < idx.size(); ++k) d.witness.push_back(f.ports()[k].dom->support[idx[k]]);
      d.lhs = f.at(t);
      d.rhs = h.at(t);
      break;
    }
  return d;
}

bool equal(const MultiMorphism& f, const MultiMorphism& g) { return compare(f, g).equal; }

bool leq(const MultiMorphism& f, const MultiMorphism& g) {
  const MultiMorphism h = align_to(g, f);
  for (std::size_t t = 0; t < f.size(); ++t)
    if (!f.alg()->leq(f.at(t), h.at(t))) return false;
  return true;
}

// ---- classification -------------------------------------------------------

static OmegaSetPtr side_set(const MultiMorphism& f, const std::vector<std::size_t>& side) {
  std::vector<OmegaSetPtr> parts;
  for (std::size_t k : side) parts.push_back(f.ports()[k].dom);
  if (parts.empty()) return crisp_omega_set(f.alg(), "1", "1", {"*"});
  return product_omega_sets(parts);
}

OmegaSetPtr source_set(const MultiMorphism& f) { return side_set(f, f.sources()); }
OmegaSetPtr target_set(const MultiMorphism& f) { return side_set(f, f.targets()); }

namespace {

// f viewed as a matrix (source tuple, target tuple)
struct Matrix {
  std::size_t rows = 1, cols = 1;
  std::vector<Truth> v;
  const Truth& operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

Matrix as_matrix(const MultiMorphism& f) {
  Matrix m;
  for (std::size_t k : f.sources()) m.rows *= f.ports()[k].dom->size();
  for (std::size_t k : f.targets()) m.cols *= f.ports()[k].dom->size();
  m.v = f.table();  // sources first, so row-major already
  return m;
}

std::string side_sign(const MultiMorphism& f, const std::vector<std::size_t>& side) {
  std::string s;
  for (std::size_t i = 0; i < side.size(); ++i) s += (i ? "*" : "") + f.ports()[side[i]].sign;
  return s;
}

void check_side(const MultiMorphism& f, const std::vector<std::size_t>& side, const OmegaSet& s,
                std::size_t n, const char* what) {
  if (s.size() != n)
    fail(ErrorKind::validation, std::string(what) + " Omega-set " + s.name + " has " +
                                    std::to_string(s.size()) + " elements, expected " + std::to_string(n));
  const std::string want = side_sign(f, side);
  if (!side.empty() && s.sign != want)
    fail(ErrorKind::validation, std::string(what) + " sign mismatch: " + s.sign + " vs " + want);
}

}  // namespace

bool is_total(const MultiMorphism& f, const OmegaSet& alpha) {
  const auto& a = *f.alg();
  Matrix m = as_matrix(f);
  check_side(f, f.sources(), alpha, m.rows, "source");
  for (std::size_t i = 0; i < m.rows; ++i) {
    Truth s = a.bot();
    for (std::size_t j = 0; j < m.cols; ++j) s = a.join(s, m(i, j));
    if (!a.eq(s, alpha.extent(i))) return false;
  }
  return true;
}

bool is_faithful(const MultiMorphism& f, const OmegaSet& beta) {
  const auto& a = *f.alg();
  Matrix m = as_matrix(f);
  check_side(f, f.targets(), beta, m.cols, "target");
  for (std::size_t j = 0; j < m.cols; ++j) {
    Truth s = a.bot();
    for (std::size_t i = 0; i < m.rows; ++i) s = a.join(s, m(i, j));
    if (!a.eq(s, beta.extent(j))) return false;
  }
  return true;
}

Classification classify(const MultiMorphism& f, const OmegaSet& alpha, const OmegaSet& beta) {
  const auto& a = *f.alg();
  Matrix m = as_matrix(f);
  check_side(f, f.sources(), alpha, m.rows, "source");
  check_side(f, f.targets(), beta, m.cols, "target");
  const std::size_t R = m.rows, C = m.cols;
  Classification c;
  c.total = is_total(f, alpha);
  c.faithful = is_faithful(f, beta);

  // f° alpha f on target pairs, f beta f° on source pairs
  bool epi = true, mono = true, orth = true, adj = true;
  for (std::size_t b = 0; b < C && epi; ++b)
    for (std::size_t b2 = 0; b2 < C && epi; ++b2) {
      Truth s = a.bot();
      for (std::size_t i = 0; i < R; ++i)
        for (std::size_t i2 = 0; i2 < R; ++i2) s = a.join(s, a.tensor(a.tensor(m(i, b), alpha.at(i, i2)), m(i2, b2)));
      epi = a.eq(s, beta.at(b, b2));
    }
  for (std::size_t i = 0; i < R && mono; ++i)
    for (std::size_t i2 = 0; i2 < R && mono; ++i2) {
      Truth s = a.bot();
      for (std::size_t b = 0; b < C; ++b)
        for (std::size_t b2 = 0; b2 < C; ++b2) s = a.join(s, a.tensor(a.tensor(m(i, b), beta.at(b, b2)), m(i2, b2)));
      mono = a.eq(s, alpha.at(i, i2));
    }
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t i2 = 0; i2 < R; ++i2) {
      Truth s = a.bot();
      for (std::size_t b = 0; b < C; ++b) s = a.join(s, a.tensor(m(i, b), m(i2, b)));
      if (!a.eq(s, i == i2 ? a.top() : a.bot())) orth = false;
      if (!a.leq(alpha.at(i, i2), s)) adj = false;
    }
  for (std::size_t b = 0; b < C; ++b)
    for (std::size_t b2 = 0; b2 < C; ++b2) {
      Truth s = a.bot();
      for (std::size_t i = 0; i < R; ++i) s = a.join(s, a.tensor(m(i, b), m(i, b2)));
      if (!a.eq(s, b == b2 ? a.top() : a.bot())) orth = false;
      if (!a.leq(s, beta.at(b, b2))) adj = false;
    }
  c.epi = epi;
  c.mono = mono;
  c.iso = epi && mono;
  c.orthogonal = orth;
  c.left_adjoint_of_transpose = adj;
  return c;
}

Classification classify(const MultiMorphism& f) { return classify(f, *source_set(f), *target_set(f)); }

bool is_independent(const MultiMorphism& f, const MultiMorphism& g) {
  return equal(compose(f, g), compose(g, f));
}

// ---- Bayes ----------------------------------------------------------------

MultiMorphism bayes_conditional(const MultiMorphism& f, const OmegaSet& alpha,
                                const std::vector<std::string>& a_desc, BayesDirection dir) {
  const auto& a = *f.alg();
  if (!is_divisible(a)) fail(ErrorKind::precondition, "Bayes conditionals need a divisible algebra");
  const bool fwd = dir == BayesDirection::target_given_source;
  const auto given = fwd ? f.sources() : f.targets();
  const auto other = fwd ? f.targets() : f.sources();
  if (fwd ? !is_total(f, alpha) : !is_faithful(f, alpha))
    fail(ErrorKind::precondition, fwd ? "multi-morphism is not total in the source Omega-set"
                                      : "multi-morphism is not faithful in the target Omega-set");
  if (a_desc.size() != given.size())
    fail(ErrorKind::validation, "observable description has " + std::to_string(a_desc.size()) +
                                    " values, expected " + std::to_string(given.size()));
  std::vector<int> gi(given.size());
  std::vector<std::string> names;
  for (std::size_t k = 0; k < given.size(); ++k) {
    gi[k] = f.ports()[given[k]].dom->index(a_desc[k]);
    names.push_back(a_desc[k]);
  }
  const Truth ext = alpha.extent(std::size_t(alpha.index(tuple_name(names))));
  std::vector<Port> ports;
  for (std::size_t k : other) {
    ports.push_back(f.ports()[k]);
    ports.back().role = Role::source;
  }
  MultiMorphism out(f.alg(), ports);
  std::vector<int> fi(f.arity());
  for (std::size_t k = 0; k < given.size(); ++k) fi[given[k]] = gi[k];
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    for (std::size_t k = 0; k < other.size(); ++k) fi[other[k]] = idx[k];
    out.set(idx, a.residuum(ext, f.at(fi)));
  });
  return out;
}

// ---- keys -----------------------------------------------------------------

MultiMorphism keyed_join(const MultiMorphism& d0, const MultiMorphism& d1, const std::string& key) {
  auto find_key = [&](const MultiMorphism& d, const char* which) {
    int hit = -1;
    for (std::size_t k = 0; k < d.arity(); ++k)
      if (d.ports()[k].sign == key) {
        if (hit >= 0) fail(ErrorKind::validation, std::string("key sign '") + key + "' occurs twice in " + which);
        hit = int(k);
      }
    if (hit < 0) fail(ErrorKind::validation, "key sign '" + key + "' is absent from " + which);
    return std::size_t(hit);
  };
  const std::size_t k0 = find_key(d0, "the left operand"), k1 = find_key(d1, "the right operand");
  if (!same_support(d0.ports()[k0].dom, d1.ports()[k1].dom))
    fail(ErrorKind::validation, "key ports have different supports");
  std::vector<Port> ports{d0.ports()[k0]};
  ports[0].role = Role::source;
  std::vector<std::pair<int, std::size_t>> origin{{2, 0}};
  std::set<std::string> names{ports[0].name};
  for (int who = 0; who < 2; ++who) {
    const auto& d = who == 0 ? d0 : d1;
    for (std::size_t k = 0; k < d.arity(); ++k) {
      if (k == (who == 0 ? k0 : k1)) continue;
      Port p = d.ports()[k];
      while (!names.insert(p.name).second) p.name += "'";
      ports.push_back(p);
      origin.push_back({who, k});
    }
  }
  // the constructor puts sources first; recover the origin of each slot by name
  MultiMorphism out(d0.alg(), ports);
  std::vector<std::pair<int, std::size_t>> slot(out.arity());
  for (std::size_t k = 0; k < out.arity(); ++k)
    for (std::size_t q = 0; q < ports.size(); ++q)
      if (ports[q].name == out.ports()[k].name) slot[k] = origin[q];
  const auto& a = *d0.alg();
  std::vector<int> i0(d0.arity()), i1(d1.arity());
  out.for_each([&](const std::vector<int>& idx, const Truth&) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      auto [who, q] = slot[k];
      if (who == 2) i0[k0] = i1[k1] = idx[k];
      else (who == 0 ? i0 : i1)[q] = idx[k];
    }
    out.set(idx, a.tensor(d0.at(i0), d1.at(i1)));
  });
  return out;
}

MultiMorphism indexed_product(const std::vector<MultiMorphism>& parts, const std::string& key) {
  if (parts.empty()) fail(ErrorKind::precondition, "indexed product of no tables");
  MultiMorphism acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = keyed_join(acc, parts[i], key);
  return acc;
}

}  // namespace semio
