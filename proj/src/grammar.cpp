#include "semio/grammar.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace semio {

std::string to_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i].sign + (w[i].out ? "+" : "");
  return s;
}

Word parse_word(const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    Sym s;
    if (tok.back() == '+') {
      s.out = true;
      tok.pop_back();
    }
    if (tok.empty()) fail(ErrorKind::parse, "empty sign in word '" + text + "'");
    s.sign = tok;
    w.push_back(s);
  }
  return w;
}

// ---- ontology -------------------------------------------------------------

void Ontology::add_sign(const std::string& name) { signs_.insert(name); }

void Ontology::add_order(const std::string& lower, const std::string& upper) {
  signs_.insert(lower);
  signs_.insert(upper);
  if (lower != upper) {
    if (leq(upper, lower))
      fail(ErrorKind::validation, "ordering " + lower + " <= " + upper + " would create a cycle");
    order_.insert({lower, upper});
  }
}

bool Ontology::leq(const std::string& a, const std::string& b) const {
  if (a == b) return true;
  std::deque<std::string> todo{a};
  std::set<std::string> seen{a};
  while (!todo.empty()) {
    std::string x = todo.front();
    todo.pop_front();
    for (auto it = order_.lower_bound({x, ""}); it != order_.end() && it->first == x; ++it) {
      if (it->second == b) return true;
      if (seen.insert(it->second).second) todo.push_back(it->second);
    }
  }
  return false;
}

std::set<std::pair<std::string, std::string>> Ontology::closure() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& a : signs_)
    for (const auto& b : signs_)
      if (a != b && leq(a, b)) out.insert({a, b});
  return out;
}

// ---- word gluing ----------------------------------------------------------

Word glue_words(const Word& w, const Word& w2, const Ontology& ont, GlueOrder order, GlueTrace* trace) {
  std::vector<char> dead(w.size(), 0), dead2(w2.size(), 0);
  std::vector<std::size_t> outs;
  for (std::size_t p = 0; p < w.size(); ++p)
    if (w[p].out) outs.push_back(p);
  if (order == GlueOrder::nearest) std::reverse(outs.begin(), outs.end());
  for (std::size_t p : outs)
    for (std::size_t q = 0; q < w2.size(); ++q)
      if (!dead2[q] && !w2[q].out && ont.leq(w[p].sign, w2[q].sign)) {
        dead[p] = dead2[q] = 1;
        if (trace) trace->matched.push_back({p, q});
        break;
      }
  Word r;
  for (std::size_t p = 0; p < w.size(); ++p)
    if (!dead[p]) r.push_back(w[p]);
  for (std::size_t q = 0; q < w2.size(); ++q)
    if (!dead2[q]) r.push_back(w2[q]);
  return r;
}

std::pair<Word, Word> word_io(const Word& w) {
  std::pair<Word, Word> r;
  for (const auto& s : w) (s.out ? r.second : r.first).push_back(s);
  return r;
}

// ---- libraries ------------------------------------------------------------

void Library::add(const std::string& label, const Word& req) {
  if (has(label)) fail(ErrorKind::validation, "duplicate component label '" + label + "'");
  for (const auto& s : req)
    if (!ont.contains(s.sign))
      fail(ErrorKind::reference, "component '" + label + "' uses unknown sign '" + s.sign + "'");
  comps.push_back({label, req});
}

bool Library::has(const std::string& label) const {
  return std::any_of(comps.begin(), comps.end(), [&](const Component& c) { return c.label == label; });
}

const Word& Library::req(const std::string& label) const {
  for (const auto& c : comps)
    if (c.label == label) return c.req;
  fail(ErrorKind::reference, "unknown component label '" + label + "'");
}

bool library_leq(const Library& a, const Library& b) {
  for (const auto& c : a.comps)
    if (!b.has(c.label) || !(b.req(c.label) == c.req)) return false;
  for (const auto& s : a.ont.signs())
    if (!b.ont.contains(s)) return false;
  for (const auto& [x, y] : a.ont.order())
    if (!b.ont.leq(x, y)) return false;
  return true;
}

Word closure_requirements(const Library& lib, const std::vector<std::string>& labels, GlueOrder order) {
  Word acc;
  for (const auto& l : labels) acc = glue_words(acc, lib.req(l), lib.ont, order);
  return acc;
}

// ---- configurations -------------------------------------------------------

int Configuration::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return int(i);
  return -1;
}

const CVertex& Configuration::vertex(const std::string& id) const {
  const int i = vertex_index(id);
  if (i < 0) fail(ErrorKind::reference, "unknown vertex '" + id + "'");
  return vertices[i];
}

std::pair<Word, Word> configuration_io(const Configuration& d) {
  std::set<std::string> has_in, has_out;
  for (const auto& a : d.arrows) {
    has_out.insert(a.src.begin(), a.src.end());
    has_in.insert(a.tgt.begin(), a.tgt.end());
  }
  std::pair<Word, Word> r;
  for (const auto& v : d.vertices) {
    if (!has_in.count(v.id)) r.first.push_back({v.sign, false});
    if (!has_out.count(v.id)) r.second.push_back({v.sign, true});
  }
  return r;
}

ConfigReport validate_configuration(const Configuration& d, const Library& lib) {
  ConfigReport rep;
  auto err = [&](const std::string& m) {
    rep.ok = false;
    rep.errors.push_back(m);
  };
  std::set<std::string> ids;
  for (const auto& v : d.vertices) {
    if (!ids.insert(v.id).second) err("duplicate vertex '" + v.id + "'");
    if (!lib.ont.contains(v.sign)) err("vertex '" + v.id + "' has unknown sign '" + v.sign + "'");
  }
  std::set<std::string> aids;
  for (const auto& a : d.arrows) {
    if (!aids.insert(a.id).second) err("duplicate arrow '" + a.id + "'");
    if (!lib.has(a.label)) {
      err("arrow '" + a.id + "': unknown component label '" + a.label + "'");
      continue;
    }
    const auto [in, out] = word_io(lib.req(a.label));
    if (in.size() != a.src.size() || out.size() != a.tgt.size()) {
      err("arrow '" + a.id + "' (" + a.label + "): arity " + std::to_string(a.src.size()) + "->" +
          std::to_string(a.tgt.size()) + ", component requires " + std::to_string(in.size()) + "->" +
          std::to_string(out.size()));
      continue;
    }
    for (std::size_t k = 0; k < in.size(); ++k) {
      const int v = d.vertex_index(a.src[k]);
      if (v < 0) err("arrow '" + a.id + "': unknown vertex '" + a.src[k] + "'");
      else if (!lib.ont.leq(d.vertices[v].sign, in[k].sign))
        err("arrow '" + a.id + "' (" + a.label + "): input " + std::to_string(k + 1) + " expects sign " +
            in[k].sign + ", vertex '" + a.src[k] + "' has sign " + d.vertices[v].sign);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      const int v = d.vertex_index(a.tgt[k]);
      if (v < 0) err("arrow '" + a.id + "': unknown vertex '" + a.tgt[k] + "'");
      else if (!lib.ont.leq(out[k].sign, d.vertices[v].sign))
        err("arrow '" + a.id + "' (" + a.label + "): output " + std::to_string(k + 1) + " produces sign " +
            out[k].sign + ", vertex '" + a.tgt[k] + "' has sign " + d.vertices[v].sign);
    }
  }
  for (const auto& s : d.sources)
    if (d.vertex_index(s) < 0) err("unknown source vertex '" + s + "'");
  if (rep.ok) std::tie(rep.i, rep.o) = configuration_io(d);
  return rep;
}

void require_valid(const Configuration& d, const Library& lib) {
  auto rep = validate_configuration(d, lib);
  if (rep.ok) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : rep.errors) msg += "\n  " + e;
  fail(ErrorKind::validation, msg);
}

Configuration single_arrow(const Library& lib, const std::string& label, const std::string& prefix) {
  const auto [in, out] = word_io(lib.req(label));
  Configuration c;
  CArrow a{prefix + label, label, {}, {}};
  for (std::size_t k = 0; k < in.size(); ++k) {
    c.vertices.push_back({prefix + "i" + std::to_string(k), in[k].sign, ""});
    a.src.push_back(c.vertices.back().id);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    c.vertices.push_back({prefix + "o" + std::to_string(k), out[k].sign, ""});
    a.tgt.push_back(c.vertices.back().id);
  }
  c.arrows.push_back(a);
  return c;
}

Configuration glue_diagrams(const Configuration& d, const Configuration& d2, const Library& lib) {
  require_valid(d, lib);
  require_valid(d2, lib);
  // io words with the vertex behind every letter
  auto io_with_ids = [](const Configuration& c, Word& w, std::vector<std::string>& ids) {
    std::set<std::string> has_in, has_out;
    for (const auto& a : c.arrows) {
      has_out.insert(a.src.begin(), a.src.end());
      has_in.insert(a.tgt.begin(), a.tgt.end());
    }
    for (const auto& v : c.vertices)
      if (!has_in.count(v.id)) {
        w.push_back({v.sign, false});
        ids.push_back(v.id);
      }
    for (const auto& v : c.vertices)
      if (!has_out.count(v.id)) {
        w.push_back({v.sign, true});
        ids.push_back(v.id);
      }
  };
  Word w, w2;
  std::vector<std::string> ids, ids2;
  io_with_ids(d, w, ids);
  io_with_ids(d2, w2, ids2);
  GlueTrace tr;
  glue_words(w, w2, lib.ont, GlueOrder::nearest, &tr);

  Configuration r = d;
  std::set<std::string> vnames, anames;
  for (const auto& v : r.vertices) vnames.insert(v.id);
  for (const auto& a : r.arrows) anames.insert(a.id);
  std::map<std::string, std::string> rename;
  for (auto [p, q] : tr.matched) rename[ids2[q]] = ids[p];
  for (const auto& v : d2.vertices) {
    if (rename.count(v.id)) continue;
    std::string id = v.id;
    while (!vnames.insert(id).second) id += "'";
    rename[v.id] = id;
    r.vertices.push_back({id, v.sign, v.oset});
  }
  for (const auto& a : d2.arrows) {
    CArrow b = a;
    while (!anames.insert(b.id).second) b.id += "'";
    for (auto& s : b.src) s = rename.at(s);
    for (auto& s : b.tgt) s = rename.at(s);
    r.arrows.push_back(b);
  }
  for (const auto& s : d2.sources) {
    const auto& id = rename.at(s);
    if (!std::count(r.sources.begin(), r.sources.end(), id)) r.sources.push_back(id);
  }
  return r;
}

// ---- semantics and refinement ---------------------------------------------

const Rule* Semantics::rule_for(const std::string& label) const {
  for (const auto& r : rules)
    if (r.lhs == label) return &r;
  return nullptr;
}

int Semantics::size_of(const std::string& label) const {
  auto it = sizes.find(label);
  if (it != sizes.end()) return it->second;
  return atomic(label) ? 0 : 1;
}

bool Semantics::words_equivalent(const Word& a, const Word& b) const {
  if (a == b) return true;
  for (const auto& [x, y] : word_eq)
    if ((x == a && y == b) || (x == b && y == a)) return true;
  return false;
}

void Semantics::check(const Library& lib) const {
  std::set<std::string> seen;
  for (const auto& r : rules) {
    if (!seen.insert(r.lhs).second) fail(ErrorKind::validation, "two rules rewrite '" + r.lhs + "'");
    lib.req(r.lhs);
    if (r.rhs.empty()) fail(ErrorKind::validation, "rule for '" + r.lhs + "' has an empty right-hand side");
    int total = 0;
    for (const auto& l : r.rhs) {
      lib.req(l);
      total += size_of(l);
    }
    if (size_of(r.lhs) <= total)
      fail(ErrorKind::validation, "rule " + r.lhs + " -> ... does not decrease size (" +
                                      std::to_string(size_of(r.lhs)) + " <= " + std::to_string(total) + ")");
    const Word glued = closure_requirements(lib, r.rhs);
    if (!words_equivalent(glued, lib.req(r.lhs)))
      fail(ErrorKind::validation, "rule for '" + r.lhs + "' glues to '" + to_string(glued) +
                                      "' but the component requires '" + to_string(lib.req(r.lhs)) + "'");
  }
}

std::vector<std::string> normal_form(const std::string& label, const Semantics& sem) {
  const Rule* r = sem.rule_for(label);
  if (!r) return {label};
  std::vector<std::string> out;
  for (const auto& l : r->rhs) {
    auto sub = normal_form(l, sem);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

Configuration refine(const Configuration& d, const Library& lib, const Semantics& sem) {
  sem.check(lib);
  require_valid(d, lib);
  Configuration cur = d;
  for (;;) {
    auto it = std::find_if(cur.arrows.begin(), cur.arrows.end(),
                           [&](const CArrow& a) { return !sem.atomic(a.label); });
    if (it == cur.arrows.end()) break;
    const CArrow arrow = *it;
    const Rule& rule = *sem.rule_for(arrow.label);
    // glue one fresh single-arrow configuration per right-hand label
    Configuration part;
    for (std::size_t j = 0; j < rule.rhs.size(); ++j) {
      Configuration one = single_arrow(lib, rule.rhs[j], arrow.id + "." + std::to_string(j) + ".");
      part = j == 0 ? one : glue_diagrams(part, one, lib);
    }
    const auto [pin, pout] = configuration_io(part);
    if (pin.size() != arrow.src.size() || pout.size() != arrow.tgt.size())
      fail(ErrorKind::validation, "rule for '" + arrow.label + "' does not preserve the boundary of arrow '" +
                                      arrow.id + "'");
    // boundary vertices of the expansion become the arrow's vertices
    std::set<std::string> has_in, has_out;
    for (const auto& a : part.arrows) {
      has_out.insert(a.src.begin(), a.src.end());
      has_in.insert(a.tgt.begin(), a.tgt.end());
    }
    std::map<std::string, std::string> rename;
    std::size_t ki = 0, ko = 0;
    for (const auto& v : part.vertices) {
      if (!has_in.count(v.id)) rename[v.id] = arrow.src[ki++];
      if (!has_out.count(v.id)) rename[v.id] = arrow.tgt[ko++];
    }
    Configuration next;
    next.vertices = cur.vertices;
    next.sources = cur.sources;
    for (const auto& v : part.vertices)
      if (!rename.count(v.id)) {
        next.vertices.push_back(v);
        rename[v.id] = v.id;
      }
    for (const auto& a : cur.arrows) {
      if (a.id != arrow.id) {
        next.arrows.push_back(a);
        continue;
      }
      for (const auto& pa : part.arrows) {
        CArrow b = pa;
        for (auto& s : b.src) s = rename.at(s);
        for (auto& s : b.tgt) s = rename.at(s);
        next.arrows.push_back(b);
      }
    }
    cur = std::move(next);
  }
  require_valid(cur, lib);
  return cur;
}

}  // namespace semio
