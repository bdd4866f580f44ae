#include "semio/inference.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace semio {

namespace {

bool same_support(const OmegaSet& a, const OmegaSet& b) { return a.support == b.support; }

// shape position of every port of m, -1 when unmatched
std::vector<int> match_ports(const MultiMorphism& m, const MultiMorphism& shape) {
  const auto& mp = m.ports();
  const auto& sp = shape.ports();
  std::vector<int> out(mp.size(), -1);
  std::vector<char> used(sp.size(), 0);
  for (std::size_t k = 0; k < mp.size(); ++k) {
    for (std::size_t j = 0; j < sp.size(); ++j)
      if (!used[j] && sp[j].name == mp[k].name && sp[j].sign == mp[k].sign) {
        out[k] = int(j);
        used[j] = 1;
        break;
      }
  }
  for (std::size_t k = 0; k < mp.size(); ++k) {
    if (out[k] >= 0) continue;
    for (std::size_t j = 0; j < sp.size(); ++j)
      if (!used[j] && sp[j].sign == mp[k].sign) {
        out[k] = int(j);
        used[j] = 1;
        break;
      }
  }
  for (std::size_t k = 0; k < mp.size(); ++k)
    if (out[k] >= 0 && !same_support(*mp[k].dom, *sp[std::size_t(out[k])].dom))
      fail(ErrorKind::validation, "port '" + mp[k].name + "' and '" + sp[std::size_t(out[k])].name +
                                      "' carry the sign " + mp[k].sign + " over different supports");
  return out;
}

bool all_matched(const std::vector<int>& m) {
  return std::all_of(m.begin(), m.end(), [](int k) { return k >= 0; });
}

MultiMorphism blank(const MultiMorphism& shape, const Truth& v) {
  MultiMorphism out = as_omega_map(shape);
  std::fill(out.table().begin(), out.table().end(), v);
  return out;
}

Truth meet_all(const MultiMorphism& m) {
  const auto& a = *m.alg();
  Truth q = a.top();
  for (const auto& v : m.table()) q = a.meet(q, v);
  return q;
}

std::vector<std::string> names_at(const MultiMorphism& m, const std::vector<int>& idx) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < idx.size(); ++k) out.push_back(m.ports()[k].dom->support[std::size_t(idx[k])]);
  return out;
}

// flat indices of shape where the domain is top
std::vector<char> top_fiber(const MultiMorphism* domain, const MultiMorphism& shape) {
  std::vector<char> out(shape.size(), 1);
  if (!domain) return out;
  if (domain->alg() != shape.alg() && domain->alg()->width() != shape.alg()->width())
    fail(ErrorKind::validation, "domain and concept use different algebras");
  const MultiMorphism d = lift(*domain, shape);
  const auto& a = *shape.alg();
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = a.is_top(d.at(i)) ? 1 : 0;
  return out;
}

MultiMorphism restrict_to(const MultiMorphism& f, const MultiMorphism* domain, const Truth& outside) {
  MultiMorphism out = as_omega_map(f);
  const auto fib = top_fiber(domain, f);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!fib[i]) out.set(i, outside);
  return out;
}

const MultiMorphism* domain_of(const Pool& pool, int j) {
  return j < 0 ? nullptr : &pool.domains[std::size_t(j)].map;
}

void check_indices(const std::vector<int>& u, const Pool& pool) {
  for (int d : u)
    if (d < 0 || std::size_t(d) >= pool.diagrams.size())
      fail(ErrorKind::reference, "diagram index " + std::to_string(d) + " is not in the pool");
}

}  // namespace

MultiMorphism lift(const MultiMorphism& m, const MultiMorphism& shape) {
  const auto pos = match_ports(m, shape);
  std::vector<std::string> keep;
  std::vector<int> at;
  for (std::size_t k = 0; k < pos.size(); ++k)
    if (pos[k] >= 0) {
      keep.push_back(m.ports()[k].name);
      at.push_back(pos[k]);
    }
  const MultiMorphism p = project_sup(m, keep);
  MultiMorphism out = as_omega_map(shape);
  std::vector<int> pi(keep.size());
  shape.for_each([&](const std::vector<int>& idx, const Truth&) {
    for (std::size_t k = 0; k < at.size(); ++k) pi[k] = idx[std::size_t(at[k])];
    out.set(out.flatten(idx), p.at(pi));
  });
  return out;
}

GammaResult gamma(const MultiMorphism& d0, const MultiMorphism& d1) {
  if (d0.alg()->width() != d1.alg()->width() || d0.alg()->kind() != d1.alg()->kind())
    fail(ErrorKind::validation, "gamma: concepts use different algebras");
  const auto& a = *d0.alg();
  const bool small1 = d1.arity() <= d0.arity() && all_matched(match_ports(d1, d0));
  const bool small0 = d0.arity() <= d1.arity() && all_matched(match_ports(d0, d1));
  if (!small0 && !small1) fail(ErrorKind::validation, "gamma: incomparable supports (neither projects onto the other)");
  MultiMorphism x, y;
  if (small0) {
    x = as_omega_map(d0);
    y = lift(d1, d0);
  } else {
    x = lift(d0, d1);
    y = as_omega_map(d1);
  }
  GammaResult r{x, a.top()};
  for (std::size_t i = 0; i < x.size(); ++i) r.pointwise.set(i, a.biimp(x.at(i), y.at(i)));
  r.quality = meet_all(r.pointwise);
  return r;
}

Consistency consistency_check(const MultiMorphism& d, const MultiMorphism& md, const Truth& lambda, Mode mode,
                              const MultiMorphism* domain) {
  if (mode == Mode::forall_on && !domain) fail(ErrorKind::precondition, "forall_on needs a domain diagram");
  const auto g = gamma(d, md);
  const auto& a = *d.alg();
  a.check(lambda);
  Consistency c;
  c.total = g.pointwise.size();
  std::vector<char> in(g.pointwise.size(), 0);
  g.pointwise.for_each([&](const std::vector<int>& idx, const Truth& v) {
    if (!a.leq(lambda, v)) return;
    in[g.pointwise.flatten(idx)] = 1;
    c.fiber.push_back(names_at(g.pointwise, idx));
  });
  switch (mode) {
    case Mode::forall:
      c.holds = c.fiber.size() == c.total;
      break;
    case Mode::exists:
      c.holds = !c.fiber.empty();
      break;
    case Mode::forall_on: {
      const auto fib = top_fiber(domain, g.pointwise);
      c.holds = true;
      for (std::size_t i = 0; i < fib.size(); ++i)
        if (fib[i] && !in[i]) c.holds = false;
      break;
    }
  }
  return c;
}

// ---- pools ----------------------------------------------------------------

AlgebraPtr Pool::alg() const { return shape().alg(); }

const MultiMorphism& Pool::shape() const {
  if (!concepts.empty()) return concepts.front().map;
  if (!diagrams.empty()) return diagrams.front().map;
  fail(ErrorKind::precondition, "pool has neither concepts nor diagrams");
}

int Pool::diagram_index(const std::string& name) const {
  for (std::size_t i = 0; i < diagrams.size(); ++i)
    if (diagrams[i].name == name) return int(i);
  return -1;
}

void Pool::validate() const {
  std::set<std::string> seen;
  for (const auto* list : {&diagrams, &concepts, &domains}) {
    seen.clear();
    for (const auto& n : *list)
      if (!seen.insert(n.name).second) fail(ErrorKind::validation, "pool lists '" + n.name + "' twice");
  }
  if (concepts.empty()) return;
  const auto& s = shape();
  for (const auto& c : concepts) {
    if (c.map.alg()->width() != s.alg()->width())
      fail(ErrorKind::validation, "concept '" + c.name + "' uses a different algebra");
    if (c.map.arity() != s.arity() || !all_matched(match_ports(c.map, s)))
      fail(ErrorKind::validation, "concept '" + c.name + "' does not share the pool support");
  }
}

std::vector<Answer> answer_pairs(const MultiMorphism& md, const Truth& lambda, const Pool& pool) {
  std::vector<Answer> out;
  for (std::size_t c = 0; c < pool.concepts.size(); ++c) {
    const auto& f = pool.concepts[c].map;
    if (pool.domains.empty()) {
      if (consistency_check(f, md, lambda, Mode::forall).holds) out.push_back({int(c), -1});
      continue;
    }
    for (std::size_t j = 0; j < pool.domains.size(); ++j)
      if (consistency_check(f, md, lambda, Mode::forall_on, &pool.domains[j].map).holds)
        out.push_back({int(c), int(j)});
  }
  return out;
}

std::vector<int> answers(const MultiMorphism& md, const Truth& lambda, const Pool& pool) {
  std::vector<int> out;
  for (const auto& p : answer_pairs(md, lambda, pool))
    if (out.empty() || out.back() != p.index) out.push_back(p.index);
  return out;
}

bool leq_on(const MultiMorphism& f, const MultiMorphism& g, const MultiMorphism* domain) {
  const MultiMorphism gg = lift(g, f);
  const auto fib = top_fiber(domain, f);
  const auto& a = *f.alg();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (fib[i] && !a.leq(f.at(i), gg.at(i))) return false;
  return true;
}

std::vector<int> box(const MultiMorphism& g, const Truth& lambda, const Pool& pool) {
  std::vector<int> out;
  for (std::size_t d = 0; d < pool.diagrams.size(); ++d) {
    bool all = true;
    for (const auto& p : answer_pairs(pool.diagrams[d].map, lambda, pool))
      if (!leq_on(pool.concepts[std::size_t(p.index)].map, g, domain_of(pool, p.domain))) {
        all = false;
        break;
      }
    if (all) out.push_back(int(d));
  }
  return out;
}

std::vector<int> diamond(const MultiMorphism& g, const Truth& lambda, const Pool& pool) {
  std::vector<int> out;
  for (std::size_t d = 0; d < pool.diagrams.size(); ++d)
    for (const auto& p : answer_pairs(pool.diagrams[d].map, lambda, pool)) {
      const auto& f = pool.concepts[std::size_t(p.index)].map;
      if (leq_on(lift(g, f), f, domain_of(pool, p.domain))) {
        out.push_back(int(d));
        break;
      }
    }
  return out;
}

MultiMorphism ans_set(const std::vector<int>& u, const Truth& lambda, const Pool& pool) {
  check_indices(u, pool);
  const auto& a = *pool.alg();
  MultiMorphism acc = blank(pool.shape(), a.bot());
  for (int d : u)
    for (const auto& p : answer_pairs(pool.diagrams[std::size_t(d)].map, lambda, pool)) {
      const auto r = lift(restrict_to(pool.concepts[std::size_t(p.index)].map, domain_of(pool, p.domain), a.bot()),
                          acc);
      for (std::size_t i = 0; i < acc.size(); ++i) acc.set(i, a.join(acc.at(i), r.at(i)));
    }
  return acc;
}

MultiMorphism mod_set(const std::vector<int>& u, const Truth& lambda, const Pool& pool) {
  check_indices(u, pool);
  const auto& a = *pool.alg();
  MultiMorphism acc = blank(pool.shape(), a.top());
  for (int d : u)
    for (const auto& p : answer_pairs(pool.diagrams[std::size_t(d)].map, lambda, pool)) {
      const auto r = lift(restrict_to(pool.concepts[std::size_t(p.index)].map, domain_of(pool, p.domain), a.top()),
                          acc);
      for (std::size_t i = 0; i < acc.size(); ++i) acc.set(i, a.meet(acc.at(i), r.at(i)));
    }
  return acc;
}

MultiMorphism interior(const MultiMorphism& g, const Truth& lambda, const Pool& pool) {
  return ans_set(box(g, lambda, pool), lambda, pool);
}

MultiMorphism closure(const MultiMorphism& g, const Truth& lambda, const Pool& pool) {
  const auto& a = *pool.alg();
  MultiMorphism acc = blank(pool.shape(), a.top());
  for (int d : diamond(g, lambda, pool))
    for (const auto& p : answer_pairs(pool.diagrams[std::size_t(d)].map, lambda, pool)) {
      const auto& f = pool.concepts[std::size_t(p.index)].map;
      const auto* dom = domain_of(pool, p.domain);
      if (!leq_on(lift(g, f), f, dom)) continue;
      const auto r = lift(restrict_to(f, dom, a.top()), acc);
      for (std::size_t i = 0; i < acc.size(); ++i) acc.set(i, a.meet(acc.at(i), r.at(i)));
    }
  return acc;
}

std::vector<int> consequences(const std::vector<int>& u, const Truth& lambda, const Pool& pool) {
  return box(ans_set(u, lambda, pool), lambda, pool);
}

bool entails(const std::vector<int>& u, int d, const Truth& lambda, const Pool& pool) {
  check_indices({d}, pool);
  const auto a = consequences(u, lambda, pool);
  return std::find(a.begin(), a.end(), d) != a.end();
}

// ---- modal formulas -------------------------------------------------------

namespace {

struct RLParser {
  std::string s;
  std::size_t i = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::parse, "formula: " + what + " at offset " + std::to_string(i) + " in '" + s + "'");
  }
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s.compare(i, tok.size(), tok) != 0) return false;
    i += tok.size();
    return true;
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
  }
  static RLPtr node(RLFormula::Kind k, std::vector<RLPtr> sub) {
    auto f = std::make_shared<RLFormula>();
    f->kind = k;
    f->sub = std::move(sub);
    return f;
  }

  RLPtr implication() {
    RLPtr lhs = disjunction();
    if (eat("->")) return node(RLFormula::Kind::implies, {lhs, implication()});
    return lhs;
  }
  RLPtr disjunction() {
    RLPtr lhs = conjunction();
    while (eat("|")) lhs = node(RLFormula::Kind::join, {lhs, conjunction()});
    return lhs;
  }
  RLPtr conjunction() {
    RLPtr lhs = product();
    while (eat("&")) lhs = node(RLFormula::Kind::meet, {lhs, product()});
    return lhs;
  }
  RLPtr product() {
    RLPtr lhs = prefix();
    while (eat("*")) lhs = node(RLFormula::Kind::tensor, {lhs, prefix()});
    return lhs;
  }
  RLPtr prefix() {
    if (eat("[I]")) return node(RLFormula::Kind::interior, {prefix()});
    if (eat("[C]")) return node(RLFormula::Kind::closure, {prefix()});
    if (eat("(")) {
      RLPtr f = implication();
      if (!eat(")")) error("expected ')'");
      return f;
    }
    skip();
    const std::size_t start = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    if (i == start) error(i < s.size() ? std::string("unexpected '") + s[i] + "'" : "unexpected end");
    auto f = std::make_shared<RLFormula>();
    f->atom = s.substr(start, i - start);
    return f;
  }
};

const char* op_symbol(RLFormula::Kind k) {
  switch (k) {
    case RLFormula::Kind::tensor: return " * ";
    case RLFormula::Kind::implies: return " -> ";
    case RLFormula::Kind::meet: return " & ";
    case RLFormula::Kind::join: return " | ";
    default: return "";
  }
}

Op op_of(RLFormula::Kind k) {
  switch (k) {
    case RLFormula::Kind::tensor: return Op::tensor;
    case RLFormula::Kind::implies: return Op::residuum;
    case RLFormula::Kind::meet: return Op::meet;
    default: return Op::join;
  }
}

}  // namespace

RLPtr parse_rl(const std::string& text) {
  RLParser p{text};
  RLPtr f = p.implication();
  p.skip();
  if (p.i != text.size()) p.error("trailing input");
  return f;
}

std::string to_string(const RLFormula& f) {
  switch (f.kind) {
    case RLFormula::Kind::atom: return f.atom;
    case RLFormula::Kind::interior: return "[I]" + to_string(*f.sub[0]);
    case RLFormula::Kind::closure: return "[C]" + to_string(*f.sub[0]);
    default: return "(" + to_string(*f.sub[0]) + op_symbol(f.kind) + to_string(*f.sub[1]) + ")";
  }
}

Truth rl_degree(const RLFormula& f, const MultiMorphism& g, const Truth& lambda, const Pool& pool) {
  switch (f.kind) {
    case RLFormula::Kind::atom: {
      const int d = pool.diagram_index(f.atom);
      if (d < 0) fail(ErrorKind::reference, "formula atom '" + f.atom + "' is not a pool diagram");
      return gamma(g, pool.diagrams[std::size_t(d)].map).quality;
    }
    case RLFormula::Kind::interior: return rl_degree(*f.sub[0], interior(g, lambda, pool), lambda, pool);
    case RLFormula::Kind::closure: return rl_degree(*f.sub[0], closure(g, lambda, pool), lambda, pool);
    default:
      return g.alg()->eval(op_of(f.kind), rl_degree(*f.sub[0], g, lambda, pool), rl_degree(*f.sub[1], g, lambda, pool));
  }
}

bool eval_rl(const RLFormula& f, const MultiMorphism& g, const Truth& lambda, const Pool& pool) {
  const auto& a = *g.alg();
  switch (f.kind) {
    case RLFormula::Kind::interior: return eval_rl(*f.sub[0], interior(g, lambda, pool), lambda, pool);
    case RLFormula::Kind::closure: return eval_rl(*f.sub[0], closure(g, lambda, pool), lambda, pool);
    case RLFormula::Kind::atom: return a.leq(lambda, rl_degree(f, g, lambda, pool));
    default:
      if (!f.thresholds) return a.leq(lambda, rl_degree(f, g, lambda, pool));
      {
        const auto& [l0, l1] = *f.thresholds;
        return a.leq(lambda, a.eval(op_of(f.kind), l0, l1)) && eval_rl(*f.sub[0], g, l0, pool) &&
               eval_rl(*f.sub[1], g, l1, pool);
      }
  }
}

}  // namespace semio
