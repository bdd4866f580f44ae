#include "semio/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "semio/spec_parser.hpp"
#include "semio/spec_printer.hpp"

namespace semio::cli {

namespace {

struct Common {
  double eps = kDefaultEpsilon;
  std::uint64_t cap = kDefaultCap;
  std::string out_path;
  std::string file;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> r;
  if (s.empty()) return r;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      r.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  r.push_back(cur);
  return r;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

std::string names(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ",") + x;
  return s;
}

class Session {
 public:
  Session(const Common& c, std::ostream& out, std::ostream& err) : c_(c), out_(out), err_(err) {}

  Workspace load(const std::string& path) const {
    ParseOptions o;
    o.eps = c_.eps;
    o.cap = c_.cap;
    Workspace ws = load_spec_file(path, o);
    for (const auto& w : ws.warnings) err_ << "warning: " << w.str() << '\n';
    return ws;
  }
  // data sink: --out or stdout
  void emit(const std::string& data) const {
    if (c_.out_path.empty()) {
      out_ << data;
      return;
    }
    std::ofstream f(c_.out_path, std::ios::binary);
    if (!f) fail(ErrorKind::reference, "cannot write '" + c_.out_path + "'");
    f << data;
  }
  Truth value(const Workspace& ws, const std::string& s) const {
    const auto& a = *ws.alg();
    const Truth v = a.snap(a.parse(s));
    a.check(v);
    return v;
  }
  std::ostream& err() const { return err_; }

  const Common& c_;
  std::ostream& out_;
  std::ostream& err_;
};

MultiDiagram interpreted(const Workspace& ws, const std::string& name) {
  return interpret(ws.sem.sys.diagram(name), ws.sem.model, ws.sem.sys.lib);
}

std::vector<int> pool_indices(const Pool& p, const std::vector<std::string>& xs) {
  std::vector<int> r;
  for (const auto& x : xs) {
    const int i = p.diagram_index(x);
    if (i < 0) fail(ErrorKind::reference, "diagram '" + x + "' is not in the pool");
    r.push_back(i);
  }
  return r;
}

std::string pool_names(const Pool& p, const std::vector<int>& xs) {
  std::vector<std::string> r;
  for (int i : xs) r.push_back(p.diagrams[std::size_t(i)].name);
  return names(r);
}

void check_algebra(const AlgebraPtr& a, std::ostringstream& o, bool& ok) {
  if (a->kind() == AlgebraKind::product_of) {
    for (const auto& f : a->factors()) check_algebra(f, o, ok);
    return;
  }
  const auto rep = validate_algebra(*a);
  for (const auto& l : rep.laws) {
    o << (l.ok ? "ok   " : "FAIL ") << " algebra " << a->describe() << ' ' << l.law;
    if (!l.ok) {
      o << ": witness";
      for (const auto& w : l.witness) o << ' ' << a->format(w, 9);
      ok = false;
    }
    o << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"semio: finite models of multi-diagram specifications", "semio"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--epsilon", c.eps, "comparison tolerance")->envname("SEMIO_EPSILON")->check(CLI::PositiveNumber);
  app.add_option("--cap", c.cap, "largest table the engine may enumerate")->envname("SEMIO_CAP");
  app.add_option("--out", c.out_path, "write data here instead of standard output");
  Session s(c, out, err);
  std::function<int()> action;

  auto file_cmd = [&](const char* name, const char* help) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("file", c.file, ".sem specification")->required();
    return sc;
  };

  // check
  file_cmd("check", "validate algebra, model and sketch")->callback([&] {
    action = [&] {
      const Workspace ws = s.load(c.file);
      std::ostringstream o;
      bool ok = true;
      check_algebra(ws.alg(), o, ok);
      const auto rep = validate_model(ws.sem.sys, ws.sem.model, c.cap);
      for (const auto& ck : rep.checks) {
        o << (ck.ok ? "ok   " : ck.informational ? "info " : "FAIL ") << ' ' << ck.kind << ' ' << ck.subject;
        if (!ck.message.empty() && !ck.ok) o << ": " << ck.message;
        if (!ck.witness.empty()) o << " [" << names(ck.witness) << "]";
        o << '\n';
      }
      ok = ok && rep.ok();
      for (const auto& p : ws.pools) {
        ws.build_pool(p.name, c.cap);
        o << "ok    pool " << p.name << '\n';
      }
      s.emit(o.str());
      return ok ? kOk : kFails;
    };
  });

  // limit / colimit
  std::string diagram, keep;
  bool full = false;
  for (const char* name : {"limit", "colimit"}) {
    auto* sc = file_cmd(name, name == std::string("limit") ? "limit of a diagram as CSV" : "colimit of a diagram as CSV");
    sc->add_option("--diagram,-d", diagram, "diagram name")->required();
    sc->add_option("--keep", keep, "comma separated vertices to keep (sup over the rest)");
    sc->add_flag("--full", full, "every vertex, ignoring declared sources");
    const bool co = name == std::string("colimit");
    sc->callback([&, co] {
      action = [&, co] {
        const Workspace ws = s.load(c.file);
        MultiDiagram d = interpreted(ws, diagram);
        std::vector<std::string> kept = split(keep);
        if (kept.empty() && !full) kept = d.sources;
        MultiMorphism m;
        if (kept.empty()) m = co ? colimit(d, c.cap) : limit(d, c.cap);
        else m = co ? colimit_projected(d, kept, c.cap) : limit_projected(d, kept, c.cap);
        s.emit(emit_csv(m));
        return kOk;
      };
    });
  }

  // commutes
  std::string sources;
  {
    auto* sc = file_cmd("commutes", "commutativity degree of a diagram");
    sc->add_option("--diagram,-d", diagram, "diagram name")->required();
    sc->add_option("--sources", sources, "comma separated source vertices (default: declared sources)");
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const MultiDiagram d = interpreted(ws, diagram);
        auto src = split(sources);
        if (src.empty()) src = d.sources;
        if (src.empty()) fail(ErrorKind::validation, "diagram '" + diagram + "' declares no sources; pass --sources");
        const auto rep = commutativity_degree(d, src, {}, c.cap);
        const auto& a = *ws.alg();
        std::ostringstream o;
        o << "degree " << a.format(rep.degree, 9) << "\nlambda " << a.format(rep.lambda, 9) << "\ncommutative "
          << yes(rep.commutative) << "\nwitness " << names(rep.witness) << "\ntuples " << rep.tuples << '\n';
        s.emit(o.str());
        return rep.commutative ? kOk : kFails;
      };
    });
  }

  // classify
  std::string comp;
  {
    auto* sc = file_cmd("classify", "classify a component");
    sc->add_option("--comp,-c", comp, "component label")->required();
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const auto k = classify(ws.sem.model.comp(comp));
        std::ostringstream o;
        o << "total " << yes(k.total) << "\nfaithful " << yes(k.faithful) << "\nepi " << yes(k.epi) << "\nmono "
          << yes(k.mono) << "\niso " << yes(k.iso) << "\northogonal " << yes(k.orthogonal)
          << "\nleft_adjoint_of_transpose " << yes(k.left_adjoint_of_transpose) << '\n';
        s.emit(o.str());
        return kOk;
      };
    });
  }

  // bayes
  std::string given, direction = "target";
  {
    auto* sc = file_cmd("bayes", "Bayes conditional of a component as CSV");
    sc->add_option("--comp,-c", comp, "component label")->required();
    sc->add_option("--given", given, "comma separated elements of the conditioning side")->required();
    sc->add_option("--direction", direction, "target (target given source) or source")
        ->check(CLI::IsMember({"target", "source"}));
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const MultiMorphism& f = ws.sem.model.comp(comp);
        const bool fwd = direction == "target";
        const auto alpha = fwd ? source_set(f) : target_set(f);
        s.emit(emit_csv(bayes_conditional(f, *alpha, split(given),
                                          fwd ? BayesDirection::target_given_source : BayesDirection::source_given_target)));
        return kOk;
      };
    });
  }

  // gamma
  std::string left, right;
  bool csv = false;
  {
    auto* sc = file_cmd("gamma", "biimplication similarity of two concepts or relations");
    sc->add_option("left", left, "concept or relation diagram")->required();
    sc->add_option("right", right, "concept or relation diagram")->required();
    sc->add_flag("--csv", csv, "emit the pointwise map instead of the quality");
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const auto g = gamma(ws.concept_or_diagram(left, c.cap), ws.concept_or_diagram(right, c.cap));
        if (csv) s.emit(emit_csv(g.pointwise));
        else s.emit("quality " + ws.alg()->format(g.quality, 9) + "\n");
        return kOk;
      };
    });
  }

  // consistent
  std::string concept_name, lambda, mode = "forall", domain;
  {
    auto* sc = file_cmd("consistent", "is a concept a lambda-model of a diagram");
    sc->add_option("--concept", concept_name, "concept (or relation diagram)")->required();
    sc->add_option("--diagram,-d", diagram, "relation diagram")->required();
    sc->add_option("--lambda,-l", lambda, "threshold")->required();
    sc->add_option("--mode", mode, "forall, exists or forall_on")->check(CLI::IsMember({"forall", "exists", "forall_on"}));
    sc->add_option("--domain", domain, "domain diagram for forall_on");
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const Mode m = mode == "forall" ? Mode::forall : mode == "exists" ? Mode::exists : Mode::forall_on;
        MultiMorphism dom;
        if (m == Mode::forall_on) {
          if (domain.empty()) fail(ErrorKind::validation, "forall_on needs --domain");
          dom = relation_map(ws.sem.sys.diagram(domain), ws.sem, c.cap);
        }
        const auto r = consistency_check(ws.concept_or_diagram(concept_name, c.cap),
                                         relation_map(ws.sem.sys.diagram(diagram), ws.sem, c.cap),
                                         s.value(ws, lambda), m, m == Mode::forall_on ? &dom : nullptr);
        std::ostringstream o;
        o << "holds " << yes(r.holds) << "\nfiber " << r.fiber.size() << '/' << r.total << '\n';
        s.emit(o.str());
        return r.holds ? kOk : kFails;
      };
    });
  }

  // answers
  std::string pool;
  {
    auto* sc = file_cmd("answers", "lambda-answers of a diagram among the pool concepts");
    sc->add_option("--pool,-p", pool, "pool name")->required();
    sc->add_option("--diagram,-d", diagram, "relation diagram")->required();
    sc->add_option("--lambda,-l", lambda, "threshold")->required();
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const Pool p = ws.build_pool(pool, c.cap);
        const auto md = relation_map(ws.sem.sys.diagram(diagram), ws.sem, c.cap);
        std::ostringstream o;
        for (const auto& a : answer_pairs(md, s.value(ws, lambda), p)) {
          o << p.concepts[std::size_t(a.index)].name;
          if (a.domain >= 0) o << " on " << p.domains[std::size_t(a.domain)].name;
          o << '\n';
        }
        s.emit(o.str());
        return kOk;
      };
    });
  }

  // infer
  std::string from, goal;
  {
    auto* sc = file_cmd("infer", "does U entail D at lambda over a pool");
    sc->add_option("--pool,-p", pool, "pool name")->required();
    sc->add_option("--from", from, "comma separated hypotheses U (pool diagrams)");
    sc->add_option("--goal", goal, "pool diagram D")->required();
    sc->add_option("--lambda,-l", lambda, "threshold")->required();
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const Pool p = ws.build_pool(pool, c.cap);
        const auto u = pool_indices(p, split(from));
        const int d = pool_indices(p, {goal})[0];
        const Truth l = s.value(ws, lambda);
        const auto cons = consequences(u, l, p);
        const bool holds = std::count(cons.begin(), cons.end(), d) > 0;
        std::ostringstream o;
        o << "entails " << yes(holds) << "\nconsequences " << pool_names(p, cons) << '\n';
        s.emit(o.str());
        return holds ? kOk : kFails;
      };
    });
  }

  // rl
  std::string formula, split_at;
  {
    auto* sc = file_cmd("rl", "evaluate a modal formula on a concept");
    sc->add_option("--pool,-p", pool, "pool name")->required();
    sc->add_option("--concept", concept_name, "concept (or relation diagram)")->required();
    sc->add_option("--formula,-f", formula, "formula over pool diagram names")->required();
    sc->add_option("--lambda,-l", lambda, "threshold")->required();
    sc->add_option("--split", split_at, "l0,l1 thresholds for the top connective");
    sc->callback([&] {
      action = [&] {
        const Workspace ws = s.load(c.file);
        const Pool p = ws.build_pool(pool, c.cap);
        RLPtr f = parse_rl(formula);
        if (!split_at.empty()) {
          const auto parts = split(split_at);
          if (parts.size() != 2) fail(ErrorKind::validation, "--split takes two thresholds");
          if (f->sub.size() != 2) fail(ErrorKind::validation, "--split needs a binary connective at the top");
          auto g = std::make_shared<RLFormula>(*f);
          g->thresholds = std::make_pair(s.value(ws, parts[0]), s.value(ws, parts[1]));
          f = g;
        }
        const MultiMorphism g = ws.concept_or_diagram(concept_name, c.cap);
        const Truth l = s.value(ws, lambda);
        const bool holds = eval_rl(*f, g, l, p);
        std::ostringstream o;
        o << "formula " << to_string(*f) << "\ndegree " << ws.alg()->format(rl_degree(*f, g, l, p), 9) << "\nholds "
          << yes(holds) << '\n';
        s.emit(o.str());
        return holds ? kOk : kFails;
      };
    });
  }

  // integrate
  std::vector<std::string> files;
  {
    auto* sc = app.add_subcommand("integrate", "integrate semiotics into one over the product algebra");
    sc->add_option("files", files, ".sem specifications")->required()->expected(2, -1);
    sc->callback([&] {
      action = [&] {
        std::vector<Semiotic> parts;
        for (const auto& f : files) parts.push_back(s.load(f).sem);
        s.emit(print_spec(workspace_of(integrate(parts))));
        return kOk;
      };
    });
  }

  // encode-dataset
  std::string csv_path, signs, name = "dataset";
  {
    auto* sc = file_cmd("encode-dataset", "encode a CSV table as a relation diagram");
    sc->add_option("csv", csv_path, "CSV with one column per sign")->required();
    sc->add_option("--signs", signs, "comma separated column signs (default: the header)");
    sc->add_option("--name", name, "diagram name");
    sc->callback([&] {
      action = [&] {
        Workspace ws = s.load(c.file);
        std::ifstream in(csv_path, std::ios::binary);
        if (!in) fail(ErrorKind::reference, "cannot open '" + csv_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        CsvTable t = read_csv(buf.str());
        // an emitted map: keep its top fiber
        if (!t.header.empty() && t.header.back() == "value") {
          const auto& a = *ws.alg();
          std::vector<std::vector<std::string>> rows;
          for (auto& r : t.rows)
            if (a.is_top(a.parse(r.back()))) {
              r.pop_back();
              rows.push_back(r);
            }
          t.rows = rows;
          t.header.pop_back();
        }
        auto sg = split(signs);
        if (sg.empty()) sg = t.header;
        if (sg.size() != t.header.size())
          fail(ErrorKind::validation, "--signs lists " + std::to_string(sg.size()) + " signs for " +
                                          std::to_string(t.header.size()) + " columns");
        if (ws.sem.sys.diagrams.count(name)) fail(ErrorKind::validation, "diagram '" + name + "' already exists");
        Configuration d = encode_dataset(t.rows, sg, ws.sem);
        ws.sem.sys.diagrams[name] = d;
        ws.diagram_order.push_back(name);
        for (const auto& comp_def : ws.sem.sys.lib.comps)
          if (!std::count(ws.comp_order.begin(), ws.comp_order.end(), comp_def.label))
            ws.comp_order.push_back(comp_def.label);
        s.emit(print_spec(ws));
        return kOk;
      };
    });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  try {
    return action ? action() : kInvalid;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::cap ? kCap : kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

}  // namespace semio::cli
