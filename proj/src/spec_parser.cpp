#include "semio/spec_parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace semio {

namespace {

// ---- lexing ---------------------------------------------------------------

enum class TK { word, sym, eol, end };

struct Tok {
  TK kind = TK::end;
  std::string text;
  int line = 0, col = 0;
};

bool breaks_word(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (std::isspace(static_cast<unsigned char>(c)) || std::string_view("{}():;=#").find(c) != std::string_view::npos)
    return true;
  if (i + 1 < s.size()) {
    const std::string_view two = s.substr(i, 2);
    if (two == "->" || two == "<-" || two == "<=") return true;
  }
  return false;
}

std::vector<Tok> lex(std::string_view s) {
  std::vector<Tok> out;
  int line = 1;
  std::size_t bol = 0;
  std::size_t i = 0;
  auto col = [&](std::size_t at) { return int(at - bol) + 1; };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      out.push_back({TK::eol, "\n", line, col(i)});
      ++line;
      bol = ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (c == ';') {
      out.push_back({TK::eol, ";", line, col(i)});
      ++i;
      continue;
    }
    if (i + 1 < s.size()) {
      const std::string two(s.substr(i, 2));
      if (two == "->" || two == "<-" || two == "<=") {
        out.push_back({TK::sym, two, line, col(i)});
        i += 2;
        continue;
      }
    }
    if (std::string_view("{}():=").find(c) != std::string_view::npos) {
      out.push_back({TK::sym, std::string(1, c), line, col(i)});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < s.size() && !breaks_word(s, i)) ++i;
    out.push_back({TK::word, std::string(s.substr(start, i - start)), line, col(start)});
  }
  out.push_back({TK::end, "", line, col(i)});
  return out;
}

// ---- statement layout -----------------------------------------------------

struct Line {
  std::vector<Tok> toks;
  SourceSpan span;
};

struct Stmt {
  Line head;
  bool has_body = false;
  std::vector<Line> body;
};

SourceSpan span_of(const std::string& file, const std::vector<Tok>& t) {
  SourceSpan s{file, 0, 0, 0};
  if (t.empty()) return s;
  s.line = t.front().line;
  s.col = t.front().col;
  s.end_col = t.back().line == s.line ? t.back().col + int(t.back().text.size()) : s.col + 1;
  return s;
}

struct Syntax {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;
};

// splits the token stream into statements; syntax problems become diagnostics
std::vector<Stmt> layout(const std::vector<Tok>& toks, const std::string& file, std::vector<Diagnostic>& diags) {
  std::vector<Stmt> out;
  std::size_t i = 0;
  auto at_span = [&](const Tok& t) { return SourceSpan{file, t.line, t.col, t.col + std::max(1, int(t.text.size()))}; };
  auto skip_line = [&]() {
    while (toks[i].kind != TK::eol && toks[i].kind != TK::end) ++i;
  };
  while (toks[i].kind != TK::end) {
    if (toks[i].kind == TK::eol) {
      ++i;
      continue;
    }
    Stmt st;
    while (toks[i].kind != TK::eol && toks[i].kind != TK::end && toks[i].text != "{" && toks[i].text != "}")
      st.head.toks.push_back(toks[i++]);
    st.head.span = span_of(file, st.head.toks);
    if (toks[i].text == "}" && toks[i].kind == TK::sym) {
      diags.push_back({ErrorKind::parse, at_span(toks[i]), "unexpected '}'", {}});
      ++i;
      skip_line();
      continue;
    }
    if (toks[i].text == "{" && toks[i].kind == TK::sym) {
      st.has_body = true;
      const Tok open = toks[i++];
      if (st.head.toks.empty()) st.head.span = at_span(open);
      bool closed = false;
      bool broken = false;
      Line cur;
      auto flush = [&]() {
        if (!cur.toks.empty()) {
          cur.span = span_of(file, cur.toks);
          st.body.push_back(std::move(cur));
        }
        cur = Line{};
      };
      while (toks[i].kind != TK::end) {
        const Tok& t = toks[i];
        if (t.kind == TK::sym && t.text == "}") {
          ++i;
          closed = true;
          break;
        }
        if (t.kind == TK::sym && t.text == "{") {
          diags.push_back({ErrorKind::parse, at_span(t), "blocks do not nest", {"'}'"}});
          broken = true;
          ++i;
          continue;
        }
        if (t.kind == TK::eol) flush();
        else cur.toks.push_back(t);
        ++i;
      }
      flush();
      if (!closed) {
        diags.push_back({ErrorKind::parse, at_span(open), "block opened here is never closed", {"'}'"}});
        broken = true;
      }
      if (toks[i].kind != TK::eol && toks[i].kind != TK::end) {
        diags.push_back({ErrorKind::parse, at_span(toks[i]), "unexpected '" + toks[i].text + "' after block",
                         {"end of line"}});
        skip_line();
      }
      if (broken) continue;
    }
    if (st.head.toks.empty()) {
      diags.push_back({ErrorKind::parse, st.head.span, "block without a statement", {"keyword"}});
      continue;
    }
    out.push_back(std::move(st));
  }
  return out;
}

// ---- token cursor ---------------------------------------------------------

struct SyntaxError {
  Syntax s;
};

class Cursor {
 public:
  Cursor(const Line& l, const std::string& file) : l_(l), file_(file) {}

  bool done() const { return i_ >= l_.toks.size(); }
  const Tok* peek() const { return done() ? nullptr : &l_.toks[i_]; }
  bool at_sym(const char* s) const { return !done() && l_.toks[i_].kind == TK::sym && l_.toks[i_].text == s; }

  std::string word(const std::string& what) {
    if (done() || l_.toks[i_].kind != TK::word) error("expected " + what, {what});
    return l_.toks[i_++].text;
  }
  void sym(const char* s) {
    if (!at_sym(s)) error(std::string("expected '") + s + "'", {std::string("'") + s + "'"});
    ++i_;
  }
  bool accept(const char* s) {
    if (!at_sym(s)) return false;
    ++i_;
    return true;
  }
  std::vector<std::string> words() {
    std::vector<std::string> r;
    while (!done() && l_.toks[i_].kind == TK::word) r.push_back(l_.toks[i_++].text);
    return r;
  }
  void end() {
    if (!done()) error("unexpected '" + l_.toks[i_].text + "'", {"end of line"});
  }
  [[noreturn]] void error(const std::string& msg, std::vector<std::string> expected) const {
    SourceSpan sp = l_.span;
    if (!done()) {
      sp.col = l_.toks[i_].col;
      sp.end_col = sp.col + std::max(1, int(l_.toks[i_].text.size()));
    } else {
      sp.col = sp.end_col;
    }
    throw SyntaxError{{sp, msg, std::move(expected)}};
  }

 private:
  const Line& l_;
  const std::string& file_;
  std::size_t i_ = 0;
};

// ---- semantic assembly ----------------------------------------------------

struct Located {
  std::string a, b;
  SourceSpan span;
};

struct PendingConcept {
  std::size_t index;
  std::string diagram;
  SourceSpan span;
};

class Builder {
 public:
  Builder(const ParseOptions& o) : opt_(o) { ws_.file = o.file; ws_.eps = o.eps; }

  ParseResult run(std::string_view text);

 private:
  void algebra(const Stmt& st);
  void active(const Stmt& st);
  void statement(const Stmt& st);
  void sign(Cursor& c);
  void oset(Cursor& c, const Stmt& st);
  void comp(Cursor& c, const Stmt& st);
  void logic(Cursor& c);
  void diagram(Cursor& c, const Stmt& st);
  void concept_stmt(Cursor& c, const Stmt& st);
  void pool(Cursor& c, const Stmt& st);
  void finish();

  void need_sign(const std::string& s) {
    if (s == kOmega) {
      if (!ws_.sem.sys.lib.ont.contains(kOmega)) ws_.sem.sys.lib.ont.add_sign(kOmega);
      return;
    }
    if (!ws_.sem.sys.lib.ont.contains(s)) fail(ErrorKind::reference, "unknown sign '" + s + "'");
  }
  std::vector<Port> ports_for(const std::vector<std::string>& ins, const std::vector<std::string>& outs);
  void fill_entries(MultiMorphism& m, const Stmt& st, const std::string& what);
  void report(ErrorKind k, const SourceSpan& sp, const std::string& msg) {
    diags_.push_back({k, sp.line > 0 ? sp : file_start(), msg, {}});
  }
  SourceSpan file_start() const { return SourceSpan{opt_.file, 1, 1, 2}; }
  SourceSpan span_of_key(const std::string& k) const {
    auto it = ws_.spans.find(k);
    return it == ws_.spans.end() ? file_start() : it->second;
  }
  void require_no_body(const Stmt& st) {
    if (st.has_body) fail(ErrorKind::parse, "'" + st.head.toks[0].text + "' takes no block");
  }

  ParseOptions opt_;
  Workspace ws_;
  std::vector<Diagnostic> diags_;
  std::vector<Located> totals_, limitdefs_, colimitdefs_;
  std::vector<PendingConcept> pending_;
  std::map<std::string, SourceSpan> rule_spans_;
  bool named_ = false;
};

AlgebraKind kind_of(const std::string& s) {
  static const std::map<std::string, AlgebraKind> kinds = {
      {"boolean", AlgebraKind::boolean}, {"chain", AlgebraKind::chain},
      {"godel", AlgebraKind::godel},     {"lukasiewicz", AlgebraKind::lukasiewicz},
      {"product", AlgebraKind::product}, {"table", AlgebraKind::table},
      {"product_of", AlgebraKind::product_of}};
  auto it = kinds.find(s);
  if (it == kinds.end())
    fail(ErrorKind::parse, "unknown algebra kind '" + s + "' (boolean, chain, godel, lukasiewicz, product, table, product_of)");
  return it->second;
}

double number(const std::string& s) {
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(ErrorKind::parse, "expected a number, got '" + s + "'");
  return v;
}

int integer(const std::string& s) {
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(ErrorKind::parse, "expected an integer, got '" + s + "'");
  return v;
}

void Builder::algebra(const Stmt& st) {
  Cursor c(st.head, opt_.file);
  c.word("keyword");
  AlgebraDef d;
  d.name = c.word("algebra name");
  d.kind = c.word("algebra kind");
  d.args = c.words();
  c.end();
  for (const auto& a : ws_.algebras)
    if (a.name == d.name) fail(ErrorKind::validation, "algebra '" + d.name + "' is declared twice");
  const AlgebraKind k = kind_of(d.kind);
  if (k != AlgebraKind::table && st.has_body) fail(ErrorKind::parse, "only table algebras take a block");
  if (k == AlgebraKind::table) {
    for (const auto& l : st.body) {
      Cursor b(l, opt_.file);
      const std::string key = b.word("values, tensor or residuum");
      const auto xs = b.words();
      b.end();
      if (key == "values") {
        for (const auto& x : xs) d.values.push_back(number(x));
      } else if (key == "tensor" || key == "residuum") {
        for (const auto& x : xs) (key == "tensor" ? d.tensor : d.residuum).push_back(integer(x));
      } else {
        fail(ErrorKind::parse, "unknown table field '" + key + "'");
      }
    }
    d.alg = Algebra::table(d.values, d.tensor, d.residuum, opt_.eps);
  } else if (k == AlgebraKind::product_of) {
    if (d.args.empty()) fail(ErrorKind::validation, "product_of needs at least one factor");
    std::vector<AlgebraPtr> fs;
    for (const auto& n : d.args) {
      auto it = std::find_if(ws_.algebras.begin(), ws_.algebras.end(), [&](const AlgebraDef& x) { return x.name == n; });
      if (it == ws_.algebras.end()) fail(ErrorKind::reference, "unknown algebra '" + n + "'");
      fs.push_back(it->alg);
    }
    d.alg = Algebra::product_of(fs);
  } else {
    d.alg = Algebra::make(k, d.args, opt_.eps);
  }
  ws_.algebras.push_back(std::move(d));
}

void Builder::active(const Stmt& st) {
  Cursor c(st.head, opt_.file);
  c.word("keyword");
  const std::string n = c.word("algebra name");
  c.end();
  require_no_body(st);
  if (!ws_.active.empty()) fail(ErrorKind::validation, "a second 'active' statement");
  if (std::none_of(ws_.algebras.begin(), ws_.algebras.end(), [&](const AlgebraDef& a) { return a.name == n; }))
    fail(ErrorKind::reference, "unknown algebra '" + n + "'");
  ws_.active = n;
}

std::vector<Port> Builder::ports_for(const std::vector<std::string>& ins, const std::vector<std::string>& outs) {
  std::vector<Port> ports;
  std::set<std::string> used;
  auto add = [&](const std::string& s, Role r) {
    need_sign(s);
    std::string name = s;
    while (used.count(name)) name += "'";
    used.insert(name);
    ports.push_back({name, s, r, ws_.sem.model.sign_set(s)});
  };
  for (const auto& s : ins) add(s, Role::source);
  for (const auto& s : outs) add(s, Role::target);
  return ports;
}

void Builder::fill_entries(MultiMorphism& m, const Stmt& st, const std::string& what) {
  const auto& a = *ws_.sem.model.alg;
  std::set<std::size_t> seen;
  for (const auto& l : st.body) {
    try {
      Cursor b(l, opt_.file);
      const std::string key = b.word("'entry'");
      if (key != "entry") b.error("unknown field '" + key + "'", {"'entry'"});
      const auto xs = b.words();
      b.sym("=");
      const std::string val = b.word("truth value");
      b.end();
      if (xs.size() != m.arity())
        fail(ErrorKind::validation, what + " has " + std::to_string(m.arity()) + " ports but the entry lists " +
                                        std::to_string(xs.size()) + " element(s)");
      std::vector<int> idx;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const int e = m.ports()[k].dom->find(xs[k]);
        if (e < 0)
          fail(ErrorKind::reference, "element '" + xs[k] + "' is not in the support of sign " + m.ports()[k].sign);
        idx.push_back(e);
      }
      const Truth v = a.snap(a.parse(val));
      a.check(v);
      if (!seen.insert(m.flatten(idx)).second) fail(ErrorKind::validation, "duplicate entry");
      m.set(idx, v);
    } catch (const SyntaxError& e) {
      diags_.push_back({ErrorKind::parse, e.s.span, e.s.message, e.s.expected});
    } catch (const Error& e) {
      report(e.kind(), l.span, e.what());
    }
  }
}

void Builder::sign(Cursor& c) {
  const std::string n = c.word("sign name");
  std::vector<std::string> parents;
  if (c.accept("<=")) {
    parents = c.words();
    if (parents.empty()) c.word("parent sign");
  }
  c.end();
  auto& ont = ws_.sem.sys.lib.ont;
  if (ont.contains(n) && n != kOmega) fail(ErrorKind::validation, "sign '" + n + "' is declared twice");
  for (const auto& p : parents)
    if (!ont.contains(p)) fail(ErrorKind::reference, "unknown sign '" + p + "'");
  ont.add_sign(n);
  if (!std::count(ws_.sign_order.begin(), ws_.sign_order.end(), n)) ws_.sign_order.push_back(n);
  for (const auto& p : parents) ont.add_order(n, p);
}

void Builder::oset(Cursor& c, const Stmt& st) {
  const std::string n = c.word("oset name");
  c.sym(":");
  const std::string s = c.word("sign");
  c.end();
  need_sign(s);
  if (ws_.sem.model.osets.count(n)) fail(ErrorKind::validation, "oset '" + n + "' is declared twice");
  const auto& alg = ws_.sem.model.alg;
  std::vector<std::string> support;
  std::vector<SimEntry> sims;
  bool any_sim = false;
  for (const auto& l : st.body) {
    Cursor b(l, opt_.file);
    const std::string key = b.word("'support' or 'sim'");
    if (key == "support") {
      const auto xs = b.words();
      b.end();
      support.insert(support.end(), xs.begin(), xs.end());
    } else if (key == "sim") {
      const std::string x = b.word("element"), y = b.word("element"), v = b.word("truth value");
      b.end();
      const Truth t = alg->snap(alg->parse(v));
      alg->check(t);
      sims.push_back({x, y, t});
      any_sim = true;
    } else {
      b.error("unknown field '" + key + "'", {"'support'", "'sim'"});
    }
  }
  std::set<std::string> uniq(support.begin(), support.end());
  if (uniq.size() != support.size()) fail(ErrorKind::validation, "oset '" + n + "' lists an element twice");
  for (const auto& e : sims)
    for (const auto* x : {&e.a, &e.b})
      if (!uniq.count(*x)) fail(ErrorKind::reference, "sim names '" + *x + "', which is not in the support of " + n);
  OmegaSetPtr set;
  if (s == kOmega) {
    for (const auto& e : support) alg->check(alg->parse(e));
  }
  if (s == kOmega && !any_sim) {
    set = omega_set(alg, support, n);
    ws_.derived_osets.insert(n);
  } else {
    std::vector<std::string> warns;
    set = make_omega_set(alg, n, s, support, sims, false, &warns);
    for (const auto& w : warns) ws_.warnings.push_back({ErrorKind::validation, st.head.span, "oset " + n + ": " + w, {}});
  }
  ws_.sem.model.osets[n] = set;
  ws_.oset_order.push_back(n);
  if (!ws_.sem.model.sign_map.count(s)) ws_.sem.model.sign_map[s] = set;
}

void Builder::comp(Cursor& c, const Stmt& st) {
  const std::string n = c.word("component label");
  c.sym(":");
  const auto ins = c.words();
  c.sym("->");
  const auto outs = c.words();
  if (outs.empty()) c.word("output sign");
  c.end();
  auto& lib = ws_.sem.sys.lib;
  if (lib.has(n)) fail(ErrorKind::validation, "component '" + n + "' is declared twice");
  MultiMorphism m(ws_.sem.model.alg, ports_for(ins, outs), opt_.cap);
  fill_entries(m, st, "component " + n);
  Word w;
  for (const auto& s : ins) w.push_back({s, false});
  for (const auto& s : outs) w.push_back({s, true});
  lib.add(n, w);
  ws_.comp_order.push_back(n);
  ws_.spans["comp:" + n] = st.head.span;
  if (st.has_body) ws_.sem.model.comp_map[n] = std::move(m);
  else ws_.derived_comps.insert(n);
}

void Builder::logic(Cursor& c) {
  const std::string n = c.word("component label");
  c.sym("=");
  const std::string kind = c.word("logic kind");
  const auto args = c.words();
  c.end();
  if (ws_.sem.sys.lib.has(n)) fail(ErrorKind::validation, "component '" + n + "' is declared twice");
  add_logic(ws_.sem, n, kind, args);
  ws_.comp_order.push_back(n);
}

void Builder::diagram(Cursor& c, const Stmt& st) {
  const std::string n = c.word("diagram name");
  c.end();
  if (ws_.sem.sys.diagrams.count(n)) fail(ErrorKind::validation, "diagram '" + n + "' is declared twice");
  Configuration d;
  std::set<std::string> arrow_ids;
  bool sources = false;
  for (const auto& l : st.body) try {
    Cursor b(l, opt_.file);
    const std::string key = b.word("'node', 'edge' or 'sources'");
    if (key == "node") {
      const std::string id = b.word("vertex id");
      b.sym(":");
      const std::string what = b.word("oset or sign");
      b.end();
      if (d.vertex_index(id) >= 0) fail(ErrorKind::validation, "vertex '" + id + "' is declared twice");
      auto it = ws_.sem.model.osets.find(what);
      if (it != ws_.sem.model.osets.end()) {
        d.vertices.push_back({id, it->second->sign, what});
      } else {
        if (what != kOmega && !ws_.sem.sys.lib.ont.contains(what))
          fail(ErrorKind::reference, "unknown oset or sign '" + what + "'");
        need_sign(what);
        d.vertices.push_back({id, what, ""});
      }
    } else if (key == "edge") {
      CArrow a;
      a.id = b.word("arrow id");
      b.sym(":");
      a.label = b.word("component label");
      b.sym("(");
      a.src = b.words();
      b.sym("->");
      a.tgt = b.words();
      b.sym(")");
      b.end();
      if (!arrow_ids.insert(a.id).second) fail(ErrorKind::validation, "arrow '" + a.id + "' is declared twice");
      d.arrows.push_back(std::move(a));
    } else if (key == "sources") {
      if (sources) fail(ErrorKind::validation, "a second 'sources' line");
      sources = true;
      d.sources = b.words();
      b.end();
    } else {
      b.error("unknown field '" + key + "'", {"'node'", "'edge'", "'sources'"});
    }
  } catch (const SyntaxError& e) {
    diags_.push_back({ErrorKind::parse, e.s.span, e.s.message, e.s.expected});
  } catch (const Error& e) {
    report(e.kind(), l.span, e.what());
  }
  for (const auto& s : d.sources)
    if (d.vertex_index(s) < 0) fail(ErrorKind::reference, "source '" + s + "' is not a vertex of " + n);
  ws_.sem.sys.diagrams[n] = std::move(d);
  ws_.diagram_order.push_back(n);
  ws_.spans["diagram:" + n] = st.head.span;
}

void Builder::concept_stmt(Cursor& c, const Stmt& st) {
  const std::string n = c.word("concept name");
  for (const auto& x : ws_.concepts)
    if (x.name == n) fail(ErrorKind::validation, "concept '" + n + "' is declared twice");
  if (c.accept("<-")) {
    const std::string d = c.word("diagram name");
    c.end();
    require_no_body(st);
    pending_.push_back({ws_.concepts.size(), d, st.head.span});
    ws_.concepts.push_back({n, MultiMorphism(), d});
    return;
  }
  c.sym(":");
  const auto signs = c.words();
  if (signs.empty()) c.word("sign");
  c.end();
  MultiMorphism m(ws_.sem.model.alg, ports_for(signs, {}), opt_.cap);
  fill_entries(m, st, "concept " + n);
  ws_.concepts.push_back({n, std::move(m), ""});
}

void Builder::pool(Cursor& c, const Stmt& st) {
  PoolDef p;
  p.name = c.word("pool name");
  c.end();
  for (const auto& x : ws_.pools)
    if (x.name == p.name) fail(ErrorKind::validation, "pool '" + p.name + "' is declared twice");
  for (const auto& l : st.body) {
    Cursor b(l, opt_.file);
    const std::string key = b.word("'diagrams', 'concepts' or 'domains'");
    const auto xs = b.words();
    b.end();
    if (key == "diagrams") p.diagrams.insert(p.diagrams.end(), xs.begin(), xs.end());
    else if (key == "concepts") p.concepts.insert(p.concepts.end(), xs.begin(), xs.end());
    else if (key == "domains") p.domains.insert(p.domains.end(), xs.begin(), xs.end());
    else b.error("unknown field '" + key + "'", {"'diagrams'", "'concepts'", "'domains'"});
  }
  ws_.pools.push_back(std::move(p));
  ws_.spans["pool:" + ws_.pools.back().name] = st.head.span;
}

void Builder::statement(const Stmt& st) {
  Cursor c(st.head, opt_.file);
  const std::string kw = c.word("keyword");
  auto headline = [&]() { require_no_body(st); };
  if (kw == "semiotic") {
    ws_.sem.name = c.word("name");
    c.end();
    headline();
    if (named_) fail(ErrorKind::validation, "a second 'semiotic' statement");
    named_ = true;
  } else if (kw == "sign") {
    headline();
    sign(c);
  } else if (kw == "oset") {
    oset(c, st);
  } else if (kw == "comp") {
    comp(c, st);
  } else if (kw == "logic") {
    headline();
    logic(c);
  } else if (kw == "diagram") {
    diagram(c, st);
  } else if (kw == "total") {
    headline();
    totals_.push_back({c.word("diagram name"), "", st.head.span});
    c.end();
  } else if (kw == "limitdef" || kw == "colimitdef") {
    headline();
    Located l;
    l.a = c.word("component label");
    c.sym("<-");
    l.b = c.word("diagram name");
    c.end();
    l.span = st.head.span;
    (kw == "limitdef" ? limitdefs_ : colimitdefs_).push_back(l);
  } else if (kw == "rule") {
    headline();
    Rule r;
    r.lhs = c.word("component label");
    c.sym("->");
    r.rhs = c.words();
    if (r.rhs.empty()) c.word("component label");
    c.end();
    if (ws_.sem.sys.sem.rule_for(r.lhs)) fail(ErrorKind::validation, "a second rule for '" + r.lhs + "'");
    rule_spans_[r.lhs] = st.head.span;
    ws_.sem.sys.sem.rules.push_back(std::move(r));
  } else if (kw == "size") {
    headline();
    const std::string l = c.word("component label");
    const int n = integer(c.word("size"));
    c.end();
    ws_.sem.sys.sem.sizes[l] = n;
  } else if (kw == "wordeq") {
    headline();
    auto lhs = c.words();
    c.sym("=");
    auto rhs = c.words();
    c.end();
    auto word = [](const std::vector<std::string>& xs) {
      std::string s;
      for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
      return parse_word(s);
    };
    ws_.sem.sys.sem.word_eq.push_back({word(lhs), word(rhs)});
  } else if (kw == "concept") {
    concept_stmt(c, st);
  } else if (kw == "pool") {
    pool(c, st);
  } else if (kw == "algebra" || kw == "active") {
    // handled up front
  } else {
    c.error("unknown keyword '" + kw + "'",
            {"algebra", "active", "semiotic", "sign", "oset", "comp", "logic", "diagram", "total", "limitdef",
             "colimitdef", "rule", "size", "wordeq", "concept", "pool"});
  }
}

void Builder::finish() {
  auto& sys = ws_.sem.sys;
  for (const auto& name : ws_.diagram_order) {
    const auto rep = validate_configuration(sys.diagrams.at(name), sys.lib);
    for (const auto& e : rep.errors) report(ErrorKind::validation, ws_.spans["diagram:" + name], "diagram " + name + ": " + e);
  }
  for (const auto& t : totals_) {
    if (!sys.diagrams.count(t.a)) report(ErrorKind::reference, t.span, "unknown diagram '" + t.a + "'");
    else if (!std::count(sys.totals.begin(), sys.totals.end(), t.a)) sys.totals.push_back(t.a);
  }
  auto bind = [&](const std::vector<Located>& ls, std::vector<Binding>& dst) {
    for (const auto& l : ls) {
      if (!sys.lib.has(l.a)) report(ErrorKind::reference, l.span, "unknown component '" + l.a + "'");
      else if (!sys.diagrams.count(l.b)) report(ErrorKind::reference, l.span, "unknown diagram '" + l.b + "'");
      else dst.push_back({l.a, l.b});
    }
  };
  bind(limitdefs_, sys.limits);
  bind(colimitdefs_, sys.colimits);
  for (const auto& r : sys.sem.rules)
    for (const auto& l : r.rhs)
      if (!sys.lib.has(l)) report(ErrorKind::reference, rule_spans_[r.lhs], "unknown component '" + l + "'");
  for (const auto& l : ws_.derived_comps)
    if (!sys.sem.rule_for(l)) report(ErrorKind::validation, span_of_key("comp:" + l), "component '" + l + "' has no table and no rule");
  if (!diags_.empty()) return;

  ws_.atomic = ws_.sem.model;
  try {
    Model m = extend_model(ws_.atomic, sys);
    // explicit tables of composite labels stay, so that coherence is checked against them
    for (const auto& [label, f] : ws_.atomic.comp_map) m.comp_map[label] = f;
    ws_.sem.model = std::move(m);
  } catch (const Error& e) {
    SourceSpan sp = file_start();
    if (!sys.sem.rules.empty()) sp = rule_spans_[sys.sem.rules.front().lhs];
    report(e.kind() == ErrorKind::cap ? ErrorKind::cap : e.kind(), sp, e.what());
    return;
  }
  for (const auto& p : pending_) {
    try {
      ws_.concepts[p.index].map = relation_map(sys.diagram(p.diagram), ws_.sem, opt_.cap);
    } catch (const Error& e) {
      report(e.kind(), p.span, e.what());
    }
  }
  for (const auto& p : ws_.pools) {
    const SourceSpan sp = ws_.spans["pool:" + p.name];
    for (const auto* list : {&p.diagrams, &p.domains})
      for (const auto& d : *list) {
        if (!sys.diagrams.count(d)) report(ErrorKind::reference, sp, "unknown diagram '" + d + "'");
        else if (!is_relation(sys.diagrams.at(d)))
          report(ErrorKind::validation, sp, "pool diagram '" + d + "' is not a relation");
      }
    for (const auto& c : p.concepts)
      if (std::none_of(ws_.concepts.begin(), ws_.concepts.end(), [&](const ConceptDef& x) { return x.name == c; }))
        report(ErrorKind::reference, sp, "unknown concept '" + c + "'");
  }
}

ParseResult Builder::run(std::string_view text) {
  const auto toks = lex(text);
  const auto stmts = layout(toks, opt_.file, diags_);
  auto guarded = [&](const Stmt& st, auto&& fn) {
    try {
      fn();
    } catch (const SyntaxError& e) {
      diags_.push_back({ErrorKind::parse, e.s.span, e.s.message, e.s.expected});
    } catch (const Error& e) {
      report(e.kind(), st.head.span, e.what());
    }
  };
  for (const auto& st : stmts)
    if (st.head.toks[0].text == "algebra") guarded(st, [&] { algebra(st); });
  for (const auto& st : stmts)
    if (st.head.toks[0].text == "active") guarded(st, [&] { active(st); });
  if (ws_.active.empty()) {
    if (ws_.algebras.size() == 1) ws_.active = ws_.algebras[0].name;
    else if (ws_.algebras.empty() && diags_.empty())
      report(ErrorKind::validation, file_start(), "no algebra is declared");
    else if (diags_.empty())
      report(ErrorKind::validation, file_start(), "several algebras are declared; mark one 'active'");
  }
  if (!diags_.empty()) return {std::nullopt, diags_};
  for (const auto& a : ws_.algebras)
    if (a.name == ws_.active) ws_.sem.model.alg = a.alg;
  if (ws_.sem.name.empty()) {
    std::string stem = opt_.file;
    if (auto k = stem.find_last_of('/'); k != std::string::npos) stem = stem.substr(k + 1);
    if (auto k = stem.rfind('.'); k != std::string::npos && k > 0) stem = stem.substr(0, k);
    ws_.sem.name = stem.empty() || stem[0] == '<' ? "semiotic" : stem;
  }
  for (const auto& st : stmts) guarded(st, [&] { statement(st); });
  if (diags_.empty()) {
    try {
      finish();
    } catch (const Error& e) {
      report(e.kind(), file_start(), e.what());
    }
  }
  if (!diags_.empty()) return {std::nullopt, diags_};
  return {std::move(ws_), {}};
}

}  // namespace

ParseResult parse_spec(std::string_view text, const ParseOptions& opts) {
  Builder b(opts);
  try {
    return b.run(text);
  } catch (const std::exception& e) {
    // anything that escapes the per-statement guards
    return {std::nullopt, {{ErrorKind::validation, SourceSpan{opts.file}, e.what(), {}}}};
  }
}

Workspace load_spec(std::string_view text, const ParseOptions& opts) {
  auto r = parse_spec(text, opts);
  if (!r.ws) throw SpecError(std::move(r.diagnostics));
  return std::move(*r.ws);
}

Workspace load_spec_file(const std::string& path, ParseOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::reference, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  opts.file = path;
  return load_spec(buf.str(), opts);
}

}  // namespace semio
