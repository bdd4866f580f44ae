#include "semio/spec_printer.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace semio {

namespace {

std::string joined(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
  return s;
}

std::string fmt(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void entries(std::ostream& o, const MultiMorphism& m) {
  const auto& a = *m.alg();
  m.for_each([&](const std::vector<int>& idx, const Truth& v) {
    if (a.is_bot(v) && v == a.bot()) return;
    o << "  entry";
    for (std::size_t k = 0; k < idx.size(); ++k) o << ' ' << m.ports()[k].dom->support[std::size_t(idx[k])];
    o << " = " << a.format(v) << '\n';
  });
}

std::vector<std::string> port_signs(const MultiMorphism& m, Role r) {
  std::vector<std::string> out;
  for (const auto& p : m.ports())
    if (p.role == r) out.push_back(p.sign);
  return out;
}

}  // namespace

std::string print_spec(const Workspace& ws) {
  std::ostringstream o;
  const auto& sys = ws.sem.sys;
  const auto& model = ws.sem.model;
  const auto& a = *model.alg;
  o << "semiotic " << ws.sem.name << "\n\n";
  for (const auto& d : ws.algebras) {
    o << "algebra " << d.name << ' ' << d.kind;
    for (const auto& x : d.args) o << ' ' << x;
    if (d.kind == "table") {
      o << " {\n  values";
      for (double v : d.values) o << ' ' << fmt(v);
      o << "\n  tensor";
      for (int t : d.tensor) o << ' ' << t;
      o << '\n';
      if (!d.residuum.empty()) {
        o << "  residuum";
        for (int t : d.residuum) o << ' ' << t;
        o << '\n';
      }
      o << '}';
    }
    o << '\n';
  }
  o << "active " << ws.active << "\n\n";

  // signs in an order where parents come first
  std::vector<std::string> done;
  auto parents_of = [&](const std::string& s) {
    std::vector<std::string> ps;
    for (const auto& [lo, up] : sys.lib.ont.order())
      if (lo == s) ps.push_back(up);
    return ps;
  };
  std::vector<std::string> signs = ws.sign_order;
  for (const auto& s : sys.lib.ont.signs())
    if (!std::count(signs.begin(), signs.end(), s)) signs.push_back(s);
  while (done.size() < signs.size()) {
    bool progress = false;
    for (const auto& s : signs) {
      if (std::count(done.begin(), done.end(), s)) continue;
      const auto ps = parents_of(s);
      if (!std::all_of(ps.begin(), ps.end(), [&](const std::string& p) { return std::count(done.begin(), done.end(), p) > 0; }))
        continue;
      o << "sign " << s;
      if (!ps.empty()) o << " <= " << joined(ps);
      o << '\n';
      done.push_back(s);
      progress = true;
    }
    if (!progress) break;  // a cyclic order cannot come from the parser
  }
  o << '\n';

  for (const auto& name : ws.oset_order) {
    const auto& s = *model.osets.at(name);
    o << "oset " << name << " : " << s.sign << " {\n  support " << joined(s.support) << '\n';
    if (!ws.derived_osets.count(name))
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i; j < s.size(); ++j) {
          const Truth& v = s.at(i, j);
          if (i == j ? v == a.top() : v == a.bot()) continue;
          o << "  sim " << s.support[i] << ' ' << s.support[j] << ' ' << a.format(v) << '\n';
        }
    o << "}\n";
  }
  if (!ws.oset_order.empty()) o << '\n';

  for (const auto& label : ws.comp_order) {
    auto lg = sys.logic.find(label);
    if (lg != sys.logic.end()) {
      o << "logic " << label << " = " << lg->second.kind;
      for (const auto& x : lg->second.args) o << ' ' << x;
      o << '\n';
      continue;
    }
    const auto [in, out] = word_io(sys.lib.req(label));
    std::vector<std::string> is, os;
    for (const auto& s : in) is.push_back(s.sign);
    for (const auto& s : out) os.push_back(s.sign);
    o << "comp " << label << " : " << joined(is) << (is.empty() ? "" : " ") << "-> " << joined(os);
    if (ws.derived_comps.count(label)) {
      o << '\n';
      continue;
    }
    o << " {\n";
    entries(o, model.comp(label));
    o << "}\n";
  }
  if (!ws.comp_order.empty()) o << '\n';

  for (const auto& name : ws.diagram_order) {
    const auto& d = sys.diagram(name);
    o << "diagram " << name << " {\n";
    for (const auto& v : d.vertices) o << "  node " << v.id << " : " << (v.oset.empty() ? v.sign : v.oset) << '\n';
    for (const auto& e : d.arrows) {
      o << "  edge " << e.id << " : " << e.label << " (" << joined(e.src) << (e.src.empty() ? "" : " ") << "->"
        << (e.tgt.empty() ? "" : " ") << joined(e.tgt) << ")\n";
    }
    if (!d.sources.empty()) o << "  sources " << joined(d.sources) << '\n';
    o << "}\n";
  }
  for (const auto& t : sys.totals) o << "total " << t << '\n';
  for (const auto& b : sys.limits) o << "limitdef " << b.label << " <- " << b.diagram << '\n';
  for (const auto& b : sys.colimits) o << "colimitdef " << b.label << " <- " << b.diagram << '\n';
  for (const auto& r : sys.sem.rules) o << "rule " << r.lhs << " -> " << joined(r.rhs) << '\n';
  for (const auto& [l, n] : sys.sem.sizes) o << "size " << l << ' ' << n << '\n';
  for (const auto& [w1, w2] : sys.sem.word_eq) o << "wordeq " << to_string(w1) << " = " << to_string(w2) << '\n';

  for (const auto& c : ws.concepts) {
    if (!c.from.empty()) {
      o << "concept " << c.name << " <- " << c.from << '\n';
      continue;
    }
    o << "concept " << c.name << " : " << joined(port_signs(c.map, Role::source)) << " {\n";
    entries(o, c.map);
    o << "}\n";
  }
  for (const auto& p : ws.pools) {
    o << "pool " << p.name << " {\n";
    if (!p.diagrams.empty()) o << "  diagrams " << joined(p.diagrams) << '\n';
    if (!p.concepts.empty()) o << "  concepts " << joined(p.concepts) << '\n';
    if (!p.domains.empty()) o << "  domains " << joined(p.domains) << '\n';
    o << "}\n";
  }
  return o.str();
}

// ---- csv ------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + "\"";
}

}  // namespace

void emit_csv(const MultiMorphism& m, std::ostream& out) {
  for (const auto& p : m.ports()) out << csv_field(p.name) << ',';
  out << "value\n";
  if (m.arity() > 0)
    for (const auto& p : m.ports())
      if (p.dom->size() == 0) return;
  const auto& a = *m.alg();
  m.for_each([&](const std::vector<int>& idx, const Truth& v) {
    for (std::size_t k = 0; k < idx.size(); ++k) out << csv_field(m.ports()[k].dom->support[std::size_t(idx[k])]) << ',';
    out << csv_field(a.format(v, 9)) << '\n';
  });
}

std::string emit_csv(const MultiMorphism& m) {
  std::ostringstream o;
  emit_csv(m, o);
  return o.str();
}

CsvTable read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  auto end_row = [&]() {
    if (any || !field.empty() || !row.empty()) {
      row.push_back(field);
      lines.push_back(row);
    }
    row.clear();
    field.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) fail(ErrorKind::parse, "csv: unterminated quoted field");
  end_row();
  CsvTable t;
  if (lines.empty()) return t;
  t.header = lines[0];
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.header.size())
      fail(ErrorKind::parse, "csv: row " + std::to_string(i + 1) + " has " + std::to_string(lines[i].size()) +
                                 " fields, the header has " + std::to_string(t.header.size()));
    t.rows.push_back(lines[i]);
  }
  return t;
}

}  // namespace semio
