#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>

#include "semio/cli.hpp"
#include "semio/inference.hpp"
#include "semio/spec_parser.hpp"
#include "semio/spec_printer.hpp"

namespace py = pybind11;
using namespace semio;

namespace {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::reference: return "reference";
    case ErrorKind::validation: return "validation";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::cap: return "cap";
  }
  return "?";
}

// scalars come back as floats, product algebras as tuples
py::object to_py(const Truth& t) {
  if (t.n == 1) return py::float_(t.c[0]);
  py::tuple out(std::size_t(t.n));
  for (int i = 0; i < t.n; ++i) out[std::size_t(i)] = t.c[std::size_t(i)];
  return out;
}

Truth from_py(const Algebra& a, const py::handle& h) {
  Truth t;
  if (py::isinstance<py::str>(h)) return a.parse(h.cast<std::string>());
  if (py::isinstance<py::sequence>(h)) {
    auto v = h.cast<std::vector<double>>();
    if (int(v.size()) != a.width() || v.size() > std::size_t(kMaxWidth))
      fail(ErrorKind::validation, "expected " + std::to_string(a.width()) + " components");
    t.n = int(v.size());
    std::copy(v.begin(), v.end(), t.c.begin());
  } else {
    t = Truth(h.cast<double>());
  }
  a.check(t);
  return t;
}

// pybind11 holders cannot be pointers to const
using AlgHolder = std::shared_ptr<Algebra>;
AlgHolder hold(const AlgebraPtr& a) { return std::const_pointer_cast<Algebra>(a); }

py::list rows(const MultiMorphism& m) {
  py::list out;
  m.for_each([&](const std::vector<int>& idx, const Truth& v) {
    py::tuple key(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) key[i] = m.ports()[i].dom->support[std::size_t(idx[i])];
    out.append(py::make_tuple(key, to_py(v)));
  });
  return out;
}

py::dict diag_dict(const Diagnostic& d) {
  py::dict o;
  o["kind"] = kind_name(d.kind);
  o["file"] = d.span.file;
  o["line"] = d.span.line;
  o["col"] = d.span.col;
  o["message"] = d.message;
  o["expected"] = d.expected;
  o["text"] = d.str();
  return o;
}

py::list check_list(const ModelReport& r) {
  py::list out;
  for (const auto& c : r.checks) {
    py::dict o;
    o["kind"] = c.kind;
    o["subject"] = c.subject;
    o["ok"] = c.ok;
    o["informational"] = c.informational;
    o["message"] = c.message;
    o["degree"] = c.degree ? to_py(*c.degree) : py::none();
    o["witness"] = c.witness;
    out.append(o);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_semio, mod) {
  mod.doc() = "Omega-valued relations, sign systems and inference";

  static py::exception<Error> exc(mod, "SemioError");
  static py::handle exc_type = exc;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = exc_type(e.what());
      inst.attr("kind") = kind_name(e.kind());
      if (auto* se = dynamic_cast<const SpecError*>(&e)) {
        py::list ds;
        for (const auto& d : se->diagnostics()) ds.append(diag_dict(d));
        inst.attr("diagnostics") = ds;
      }
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  py::class_<Algebra, AlgHolder>(mod, "Algebra")
      .def_static("boolean", [](double eps) { return hold(Algebra::boolean(eps)); }, py::arg("eps") = kDefaultEpsilon)
      .def_static("godel", [](double eps) { return hold(Algebra::godel(eps)); }, py::arg("eps") = kDefaultEpsilon)
      .def_static("lukasiewicz", [](double eps) { return hold(Algebra::lukasiewicz(eps)); }, py::arg("eps") = kDefaultEpsilon)
      .def_static("product", [](double eps) { return hold(Algebra::product(eps)); }, py::arg("eps") = kDefaultEpsilon)
      .def_static(
          "chain",
          [](int n, const std::string& base, double eps) {
            Algebra::Base b = Algebra::Base::godel;
            if (base == "lukasiewicz") b = Algebra::Base::lukasiewicz;
            else if (base != "godel") fail(ErrorKind::validation, "chain base must be godel or lukasiewicz");
            return hold(Algebra::chain(n, b, eps));
          },
          py::arg("n"), py::arg("base") = "godel", py::arg("eps") = kDefaultEpsilon)
      .def_static("product_of",
                  [](const std::vector<AlgHolder>& fs) {
                    return hold(Algebra::product_of(std::vector<AlgebraPtr>(fs.begin(), fs.end())));
                  })
      .def("__repr__", [](const Algebra& a) { return "<Algebra " + a.describe() + ">"; })
      .def_property_readonly("width", &Algebra::width)
      .def_property_readonly("finite", &Algebra::finite)
      .def("top", [](const Algebra& a) { return to_py(a.top()); })
      .def("bot", [](const Algebra& a) { return to_py(a.bot()); })
      .def("tensor", [](const Algebra& a, py::object x, py::object y) { return to_py(a.tensor(from_py(a, x), from_py(a, y))); })
      .def("residuum", [](const Algebra& a, py::object x, py::object y) { return to_py(a.residuum(from_py(a, x), from_py(a, y))); })
      .def("join", [](const Algebra& a, py::object x, py::object y) { return to_py(a.join(from_py(a, x), from_py(a, y))); })
      .def("meet", [](const Algebra& a, py::object x, py::object y) { return to_py(a.meet(from_py(a, x), from_py(a, y))); })
      .def("biimp", [](const Algebra& a, py::object x, py::object y) { return to_py(a.biimp(from_py(a, x), from_py(a, y))); })
      .def("neg", [](const Algebra& a, py::object x) { return to_py(a.neg(from_py(a, x))); })
      .def("leq", [](const Algebra& a, py::object x, py::object y) { return a.leq(from_py(a, x), from_py(a, y)); })
      .def("validate",
           [](const Algebra& a) {
             std::map<std::string, bool> out;
             for (const auto& l : validate_algebra(a).laws) out[l.law] = l.ok;
             return out;
           })
      .def("divisible", [](const Algebra& a) { return is_divisible(a); });

  py::class_<MultiMorphism>(mod, "Table")
      .def_property_readonly("ports",
                             [](const MultiMorphism& m) {
                               py::list out;
                               for (const auto& p : m.ports())
                                 out.append(py::make_tuple(p.name, p.sign, p.role == Role::source ? "source" : "target"));
                               return out;
                             })
      .def("__len__", &MultiMorphism::size)
      .def("rows", &rows)
      .def("at", [](const MultiMorphism& m, const std::vector<std::string>& e) { return to_py(m.at_names(e)); })
      .def("csv", [](const MultiMorphism& m) { return emit_csv(m); })
      .def("classify",
           [](const MultiMorphism& m) {
             auto c = classify(m);
             return py::dict(py::arg("total") = c.total, py::arg("faithful") = c.faithful, py::arg("epi") = c.epi,
                             py::arg("mono") = c.mono, py::arg("iso") = c.iso);
           })
      .def("__eq__", [](const MultiMorphism& a, const MultiMorphism& b) { return equal(a, b); });

  py::class_<Workspace>(mod, "Workspace")
      .def_static(
          "load", [](const std::string& text, const std::string& file) { return load_spec(text, {file}); },
          py::arg("text"), py::arg("file") = "<input>")
      .def_static("load_file", [](const std::string& path) { return load_spec_file(path); })
      .def_readonly("file", &Workspace::file)
      .def_property_readonly("algebra", [](const Workspace& ws) { return hold(ws.alg()); })
      .def_readonly("diagrams", &Workspace::diagram_order)
      .def_readonly("components", &Workspace::comp_order)
      .def_property_readonly("warnings",
                             [](const Workspace& ws) {
                               py::list out;
                               for (const auto& d : ws.warnings) out.append(diag_dict(d));
                               return out;
                             })
      .def("relation", &Workspace::concept_or_diagram, py::arg("name"), py::arg("cap") = kDefaultCap)
      .def("component", [](const Workspace& ws, const std::string& l) { return ws.sem.model.comp(l); })
      .def("check", [](const Workspace& ws, std::uint64_t cap) { return check_list(validate_model(ws.sem.sys, ws.sem.model, cap)); },
           py::arg("cap") = kDefaultCap)
      .def("print", &print_spec);

  mod.def(
      "parse",
      [](const std::string& text, const std::string& file) {
        auto r = parse_spec(text, {file});
        py::list ds;
        for (const auto& d : r.diagnostics) ds.append(diag_dict(d));
        return py::make_tuple(r.ws ? py::cast(*r.ws) : py::none(), ds);
      },
      py::arg("text"), py::arg("file") = "<input>");

  mod.def("gamma", [](const MultiMorphism& a, const MultiMorphism& b) {
    auto g = gamma(a, b);
    return py::make_tuple(g.pointwise, to_py(g.quality));
  });

  mod.def("integrate", [](const std::vector<Workspace>& parts) {
    std::vector<Semiotic> s;
    for (const auto& w : parts) s.push_back(w.sem);
    return workspace_of(integrate(s));
  });

  mod.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
