#include "semio/workspace.hpp"

#include <algorithm>
#include <sstream>

namespace semio {

std::string SourceSpan::str() const {
  std::string s = file.empty() ? "<input>" : file;
  if (line > 0) s += ":" + std::to_string(line) + ":" + std::to_string(col);
  return s;
}

std::string Diagnostic::str() const {
  std::string s = span.str() + ": " + message;
  if (!expected.empty()) {
    s += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) s += (i ? " or " : "") + expected[i];
    s += ")";
  }
  return s;
}

static std::string join_diags(const std::vector<Diagnostic>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "\n" : "") + d[i].str();
  return s;
}

SpecError::SpecError(std::vector<Diagnostic> diags)
    : Error(diags.empty() ? ErrorKind::parse : diags.front().kind, join_diags(diags)), diags_(std::move(diags)) {}

const ConceptDef& Workspace::concept_def(const std::string& name) const {
  for (const auto& c : concepts)
    if (c.name == name) return c;
  fail(ErrorKind::reference, "unknown concept '" + name + "'");
}

const PoolDef& Workspace::pool_def(const std::string& name) const {
  for (const auto& p : pools)
    if (p.name == name) return p;
  fail(ErrorKind::reference, "unknown pool '" + name + "'");
}

Pool Workspace::build_pool(const std::string& name, std::uint64_t cap) const {
  const PoolDef& def = pool_def(name);
  Pool p;
  for (const auto& d : def.diagrams) p.diagrams.push_back({d, relation_map(sem.sys.diagram(d), sem, cap)});
  for (const auto& c : def.concepts) p.concepts.push_back({c, concept_def(c).map});
  for (const auto& d : def.domains) p.domains.push_back({d, relation_map(sem.sys.diagram(d), sem, cap)});
  p.validate();
  return p;
}

MultiMorphism Workspace::concept_or_diagram(const std::string& name, std::uint64_t cap) const {
  for (const auto& c : concepts)
    if (c.name == name) return c.map;
  if (sem.sys.diagrams.count(name)) return relation_map(sem.sys.diagram(name), sem, cap);
  fail(ErrorKind::reference, "'" + name + "' is neither a concept nor a diagram");
}

// ---- wrapping -------------------------------------------------------------

namespace {

void define(const AlgebraPtr& a, const std::string& name, std::vector<AlgebraDef>& out) {
  AlgebraDef d;
  d.name = name;
  d.alg = a;
  d.kind = to_string(a->kind());
  switch (a->kind()) {
    case AlgebraKind::chain: {
      std::istringstream in(a->describe());
      std::string word;
      in >> word;
      while (in >> word) d.args.push_back(word);
      break;
    }
    case AlgebraKind::table: {
      d.values = a->values();
      for (double x : d.values)
        for (double y : d.values) {
          const double t = a->tensor(x, y).scalar();
          const auto it = std::min_element(d.values.begin(), d.values.end(),
                                           [&](double p, double q) { return std::abs(p - t) < std::abs(q - t); });
          d.tensor.push_back(int(it - d.values.begin()));
        }
      break;
    }
    case AlgebraKind::product_of:
      for (std::size_t i = 0; i < a->factors().size(); ++i) {
        const std::string sub = name + "_" + std::to_string(i + 1);
        define(a->factors()[i], sub, out);
        d.args.push_back(sub);
      }
      break;
    default: break;
  }
  out.push_back(std::move(d));
}

}  // namespace

Workspace workspace_of(const Semiotic& s, const std::vector<AlgebraDef>& factors) {
  Workspace ws;
  ws.sem = s;
  ws.atomic = s.model;
  ws.eps = s.model.alg ? s.model.alg->eps() : kDefaultEpsilon;
  if (!factors.empty() && s.model.alg->kind() == AlgebraKind::product_of &&
      factors.size() == s.model.alg->factors().size()) {
    ws.algebras = factors;
    AlgebraDef top;
    top.name = "integrated";
    top.kind = "product_of";
    top.alg = s.model.alg;
    for (const auto& f : factors) top.args.push_back(f.name);
    ws.algebras.push_back(top);
  } else {
    define(s.model.alg, "omega", ws.algebras);
  }
  ws.active = ws.algebras.back().name;

  for (const auto& sign : s.sys.lib.ont.signs()) ws.sign_order.push_back(sign);
  // every sign interpretation must be a named set printed before any other set of that sign
  for (const auto& [sign, set] : s.model.sign_map) {
    std::string name;
    for (const auto& [k, o] : s.model.osets)
      if (o == set) name = k;
    if (name.empty()) {
      name = sign;
      while (ws.sem.model.osets.count(name)) name += "_";
      ws.sem.model.osets[name] = set;
      ws.atomic.osets[name] = set;
    }
    ws.oset_order.push_back(name);
  }
  for (const auto& [k, o] : ws.sem.model.osets)
    if (!std::count(ws.oset_order.begin(), ws.oset_order.end(), k)) ws.oset_order.push_back(k);
  for (const auto& c : s.sys.lib.comps) ws.comp_order.push_back(c.label);
  for (const auto& [k, d] : s.sys.diagrams) ws.diagram_order.push_back(k);
  return ws;
}

}  // namespace semio
