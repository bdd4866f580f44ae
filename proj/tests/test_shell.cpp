#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gen.hpp"
#include "semio/spec_parser.hpp"
#include "semio/spec_printer.hpp"

using namespace semio;
using gen::port;
using gen::throws_kind;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SEMIO_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = "algebra W boolean\nsign a\noset A : a { support x y }\n";

Diagnostic only(const std::string& text) {
  auto r = parse_spec(text);
  REQUIRE_FALSE(r.ws);
  REQUIRE(r.diagnostics.size() >= 1);
  return r.diagnostics.front();
}

const std::vector<std::string> kFiles{"additive.sem", "linear.sem",    "gaussian.sem", "pool.sem",
                                      "dataset.sem",  "int_godel.sem", "int_product.sem"};

}  // namespace

TEST_SUITE("shell") {

TEST_CASE("minimal workspace") {
  auto r = parse_spec(kMinimal);
  REQUIRE(r.ws);
  CHECK(r.diagnostics.empty());
  CHECK(r.ws->alg()->kind() == AlgebraKind::boolean);
  CHECK(r.ws->sem.model.osets.at("A")->size() == 2);
  CHECK(r.ws->sem.model.osets.at("A")->sign == "a");
}

TEST_CASE("fixtures load and validate") {
  for (const auto& f : kFiles) {
    CAPTURE(f);
    auto r = parse_spec(slurp(f), {f});
    CHECK(r.ws);
    for (const auto& d : r.diagnostics) MESSAGE(d.str());
  }
  auto ws = load_spec_file(std::string(SEMIO_DATA) + "/additive.sem");
  CHECK(validate_model(ws.sem.sys, ws.sem.model).ok());
  CHECK(throws_kind(ErrorKind::reference, [] { load_spec_file("/nonexistent/x.sem"); }));
}

TEST_CASE("diagnostics carry spans") {
  {
    auto d = only(std::string(kMinimal) + "comp f : a -> a {\n  entry x z = 1\n}\n");
    CHECK(d.kind == ErrorKind::reference);
    CHECK(d.span.line == 5);
    CHECK(d.span.col == 3);
    CHECK(d.message.find("'z'") != std::string::npos);
  }
  {
    auto d = only(std::string(kMinimal) + "oset A : a { support x }\n");
    CHECK(d.kind == ErrorKind::validation);
    CHECK(d.span.line == 4);
    CHECK(d.message.find("declared twice") != std::string::npos);
  }
  {
    auto d = only(std::string(kMinimal) + "comp f : a -> a {\n  entry x = 1\n}\n");
    CHECK(d.kind == ErrorKind::validation);
    CHECK(d.span.line == 5);
  }
  {
    auto d = only(std::string(kMinimal) + "diagram D {\n node n : B\n}\n");
    CHECK(d.kind == ErrorKind::reference);
    CHECK(d.span.line == 5);
  }
  {
    auto d = only("algebra W boolean\nsign a\noset A : a { support x y\n");
    CHECK(d.kind == ErrorKind::parse);
    CHECK(d.span.line == 3);
    CHECK_FALSE(d.expected.empty());
  }
  {
    auto d = only("algebra W frobnicate\n");
    CHECK(d.kind == ErrorKind::parse);
    CHECK(d.span.line == 1);
  }
  CHECK(only("").kind == ErrorKind::validation);
  CHECK(only("algebra W boolean\nalgebra V godel\n").message.find("active") != std::string::npos);
  CHECK(parse_spec("algebra W boolean\nalgebra V godel\nactive V\n").ws->alg()->kind() == AlgebraKind::godel);

  // every problem is reported, not just the first
  auto r = parse_spec(std::string(kMinimal) + "oset B : q { support x }\ncomp f : a -> a {\n  entry x z = 1\n  entry w x = 1\n}\n");
  CHECK(r.diagnostics.size() == 3);
  for (const auto& d : r.diagnostics) {
    CHECK(d.span.line > 0);
    CHECK(d.str().rfind("<input>:", 0) == 0);
  }
  try {
    load_spec("algebra W boolean\nsign a\nsign a\n", {"f.sem"});
    FAIL("no throw");
  } catch (const SpecError& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(e.diagnostics().front().span.file == "f.sem");
  }
}

TEST_CASE("property: parsing is total") {
  gen::Rng r(97);
  const std::string alphabet = "{}()-><=:#\n \t.,abcxyz01+_\"\xff";
  std::vector<std::string> seeds;
  for (const auto& f : kFiles) seeds.push_back(slurp(f));
  for (int k = 0; k < 1500; ++k) {
    std::string t = r.pick(seeds);
    const int edits = r.uniform(1, 8);
    for (int e = 0; e < edits && !t.empty(); ++e) {
      const std::size_t at = std::size_t(r.uniform(0, int(t.size()) - 1));
      switch (r.uniform(0, 2)) {
        case 0: t.erase(at, std::size_t(r.uniform(1, 20))); break;
        case 1: t.insert(at, 1, alphabet[std::size_t(r.uniform(0, int(alphabet.size()) - 1))]); break;
        default: t[at] = alphabet[std::size_t(r.uniform(0, int(alphabet.size()) - 1))];
      }
    }
    ParseResult res;
    CHECK_NOTHROW(res = parse_spec(t));
    CHECK(res.ws.has_value() == res.diagnostics.empty());
    for (const auto& d : res.diagnostics) CHECK(d.span.line >= 1);
  }
}

TEST_CASE("print and parse round trip") {
  for (const auto& f : kFiles) {
    CAPTURE(f);
    auto ws = load_spec(slurp(f));
    const std::string p = print_spec(ws);
    auto ws2 = load_spec(p);
    CHECK(print_spec(ws2) == p);
    CHECK(ws2.diagram_order == ws.diagram_order);
    CHECK(ws2.comp_order == ws.comp_order);
    for (const auto& [name, m] : ws.sem.model.comp_map) CHECK(equal(m, ws2.sem.model.comp_map.at(name)));
    CHECK(print_spec(load_spec(slurp(f))) == p);  // deterministic
  }
}

TEST_CASE("csv emitter") {
  auto ws = load_spec(slurp("additive.sem"));
  auto m = relation_map(ws.sem.sys.diagram("identity"), ws.sem);
  const std::string csv = emit_csv(m);
  auto t = read_csv(csv);
  REQUIRE(t.header.size() == 2);
  CHECK(t.header.back() == "value");
  REQUIRE(t.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t.rows[i][0] == std::to_string(i));
    CHECK(std::stod(t.rows[i][1]) == 1.0);
  }
  CHECK(emit_csv(m) == csv);

  auto p = Algebra::product();
  auto S = crisp_omega_set(p, "s", "s", {"b", "a"});
  MultiMorphism f(p, {port("x", S, Role::source), port("y", S, Role::target)});
  f.set_names({"a", "b"}, 1.0 / 3.0);
  CHECK(emit_csv(f) == "x,y,value\nb,b,0\nb,a,0\na,b,0.333333333\na,a,0\n");

  auto E = crisp_omega_set(p, "e", "e", {});
  MultiMorphism empty(p, {port("q", E, Role::source)});
  CHECK(emit_csv(empty) == "q,value\n");

  auto q = read_csv("a,\"b,c\"\n\n\"x\"\"y\",2\n");
  CHECK(q.header == std::vector<std::string>{"a", "b,c"});
  REQUIRE(q.rows.size() == 1);
  CHECK(q.rows[0] == std::vector<std::string>{"x\"y", "2"});
  CHECK(throws_kind(ErrorKind::parse, [] { read_csv("a,b\n1\n"); }));
  CHECK(throws_kind(ErrorKind::parse, [] { read_csv("a,\"b\n"); }));
}

TEST_CASE("emitted csv re-ingested as a dataset") {
  auto ws = load_spec(slurp("dataset.sem"));
  const std::vector<std::string> signs{"A", "B", "C", "D"};
  Semiotic s = ws.sem;
  auto m = relation_map(encode_dataset(read_csv(slurp("dataset.csv")).rows, signs, s), s);
  auto t = read_csv(emit_csv(m));
  std::vector<std::vector<std::string>> fiber;
  for (auto row : t.rows)
    if (std::stod(row.back()) == 1.0) {
      row.pop_back();
      fiber.push_back(row);
    }
  CHECK(fiber.size() == read_csv(slurp("dataset.csv")).rows.size());
  Semiotic s2 = ws.sem;
  auto m2 = relation_map(encode_dataset(fiber, signs, s2), s2);
  CHECK(equal(m, m2));
}

}  // TEST_SUITE
