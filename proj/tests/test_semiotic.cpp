#include <string>

#include "doctest.h"
#include "gen.hpp"
#include "semio/spec_parser.hpp"

using namespace semio;
using gen::port;
using gen::throws_kind;

namespace {

Workspace load(const std::string& name) { return load_spec_file(std::string(SEMIO_DATA) + "/" + name); }

const Check* find_check(const ModelReport& r, const std::string& kind, const std::string& subject) {
  for (const auto& c : r.checks)
    if (c.kind == kind && c.subject == subject) return &c;
  return nullptr;
}

// one unary predicate and its graph into Omega
const char* kRel = R"(
semiotic rel
algebra P product
sign s
oset S : s {
  support a b
}
oset Omega : Omega {
  support 0 0.25 0.5 1
}
comp pr : s -> Omega {
  entry a 1 = 1
  entry b 0.5 = 1
}
comp bot_row : s -> Omega {
  entry a 1 = 1
  entry b 0 = 1
}
comp all : s -> Omega {
  entry a 1 = 1
  entry b 1 = 1
}
diagram D {
  node x : S
  node w : Omega
  edge e : pr (x -> w)
  sources x
}
diagram Z {
  node x : S
  node w : Omega
  edge e : bot_row (x -> w)
  sources x
}
diagram T {
  node x : S
  node w : Omega
  edge e : all (x -> w)
  sources x
}
comp ext : s -> Omega {
  entry a 1 = 1
  entry a 0.5 = 0.5
  entry a 0.25 = 0.25
  entry b 1 = 0.5
  entry b 0.5 = 1
  entry b 0.25 = 0.5
}
diagram E {
  node x : S
  node w : Omega
  edge e : ext (x -> w)
  sources x
}
diagram N {
  node x : S
  node y : S
}
)";

const char* kChain = R"(
semiotic chain
algebra P product
sign a
sign b
sign c
sign d
oset A : a {
  support a0 a1
  sim a0 a0 0.5
}
oset B : b {
  support b0 b1 b2
}
oset C : c {
  support c0 c1
}
oset D : d {
  support d0 d1
}
comp r1 : a -> b {
  entry a0 b0 = 0.5
  entry a0 b1 = 0.25
  entry a1 b2 = 1
  entry a1 b0 = 0.5
}
comp r2 : b -> c {
  entry b0 c0 = 0.8
  entry b1 c1 = 1
  entry b2 c1 = 0.6
}
comp t : c -> d {
  entry c0 d1 = 1
  entry c1 d0 = 0.5
  entry c1 d1 = 0.9
}
comp s : a -> c
comp u : a -> d
rule s -> r1 r2
rule u -> r1 r2 t
size u 5
size s 2
)";

}  // namespace

TEST_SUITE("semiotic") {

TEST_CASE("additive model validates; identity relation is 1 everywhere") {
  auto ws = load("additive.sem");
  auto rep = validate_model(ws.sem.sys, ws.sem.model);
  CHECK(rep.ok());
  auto* t = find_check(rep, "total", "identity");
  REQUIRE(t);
  CHECK(t->ok);
  auto r = relation_map(ws.sem.sys.diagram("identity"), ws.sem);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.at(i).scalar() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(is_true_relation(ws.sem.sys.diagram("identity"), ws.sem));
}

TEST_CASE("linear model: order diagrams") {
  auto ws = load("linear.sem");
  CHECK(ws.warnings.size() == 1);
  auto rep = validate_model(ws.sem.sys, ws.sem.model);
  CHECK(find_check(rep, "total", "reflexive")->ok);
  CHECK(find_check(rep, "total", "antisymmetric")->ok);
  auto* tr = find_check(rep, "total", "transitive");
  REQUIRE(tr);
  // the transcribed similarity is not tensor-transitive; transitivity holds to 0.5 only
  CHECK_FALSE(tr->ok);
  REQUIRE(tr->degree);
  CHECK(tr->degree->scalar() == doctest::Approx(0.5));
  CHECK(tr->witness == std::vector<std::string>{"0", "1", "2"});
  CHECK(is_true_relation(ws.sem.sys.diagram("reflexive"), ws.sem));

  // a corrupted >= entry breaks reflexivity
  auto bad = ws;
  bad.sem.model.comp_map.at("geq").set_names({"2", "2"}, 0.0);
  bad.sem.model.comp_map.erase("ge");
  bad.sem.sys.logic.erase("ge");
  bad.sem.sys.lib.comps.erase(std::remove_if(bad.sem.sys.lib.comps.begin(), bad.sem.sys.lib.comps.end(),
                                             [](const Component& c) { return c.label == "ge"; }),
                              bad.sem.sys.lib.comps.end());
  add_logic(bad.sem, "ge", "graph", {"geq"});
  auto rb = validate_model(bad.sem.sys, bad.sem.model);
  auto* rf = find_check(rb, "total", "reflexive");
  REQUIRE(rf);
  CHECK_FALSE(rf->ok);
  CHECK(rf->witness == std::vector<std::string>{"2"});
}

TEST_CASE("logic components") {
  auto ws = load("additive.sem");
  const Model& m = ws.sem.model;
  auto [w, d2] = logic_component(m, "diagonal", {"2", "s"});
  CHECK(to_string(w) == "s s+ s+");
  CHECK(d2.at_names({"0", "0", "1"}).scalar() == doctest::Approx(0.5));
  CHECK(d2.at_names({"0", "0", "0"}).scalar() == 1.0);
  CHECK(d2.at_names({"0", "2", "1"}).scalar() == 0.0);
  auto [cw, cd] = logic_component(m, "codiagonal", {"2", "s"});
  CHECK(to_string(cw) == "s s s+");
  CHECK(cd.ports().back().role == Role::target);

  auto p = Algebra::product();
  auto A = crisp_omega_set(p, "A", "a", {"x", "y"});
  Model cm;
  cm.alg = p;
  cm.sign_map = {{"a", A}, {"u", crisp_omega_set(p, "U", "u", {"x", "y"})}};
  auto [_, ind] = logic_component(cm, "diagonal", {"2", "a"});
  ind.for_each([&](const std::vector<int>& idx, const Truth& v) {
    CHECK(v.scalar() == ((idx[0] == idx[1] && idx[1] == idx[2]) ? 1.0 : 0.0));
  });
  auto [rw, su] = logic_component(cm, "rename", {"a", "u"});
  auto [rw2, us] = logic_component(cm, "rename", {"u", "a"});
  CHECK(to_string(rw) == "a u+");
  CHECK(equal(compose(su, us), crisp_identity(A)));
  auto [sw, sim] = logic_component(m, "similarity", {"s", "s"});
  CHECK(to_string(sw) == "s s s+ s+");
  CHECK(sim.at_names({"0", "1", "1", "2"}).scalar() == doctest::Approx(0.25));
  auto [tw, top] = logic_component(m, "top", {});
  CHECK(to_string(tw) == "Omega+");
  CHECK(top.at_names({"0.5"}).scalar() == 0.5);
  auto [kw, k] = logic_component(m, "const", {"s", "1"});
  CHECK(k.at_names({"0"}).scalar() == 0.5);
  CHECK(k.at_names({"1"}).scalar() == 1.0);
  auto [ow, op] = logic_component(m, "tensor", {});
  CHECK(op.at_names({"0.5", "1", "0.5"}).scalar() == 1.0);
  CHECK(op.at_names({"0.5", "0.5", "0.5"}).scalar() == doctest::Approx(0.5));
  auto [gw, g] = logic_component(m, "graph", {"zero"});
  CHECK(to_string(gw) == "s Omega+");
  CHECK(g.at_names({"0", "1"}).scalar() == 1.0);
  CHECK(g.at_names({"1", "1"}).scalar() == 0.0);

  // the Omega sign falls back to the carrier of a finite algebra
  Model fm;
  fm.alg = Algebra::chain(3);
  auto om = fm.sign_set(kOmega);
  CHECK(om->size() == 3);
  CHECK(om->at(1, 2).scalar() == doctest::Approx(0.5));
  CHECK(om->at(0, 1).scalar() == 0.0);

  CHECK(throws_kind(ErrorKind::reference, [&] { logic_component(m, "diagonal", {"2", "zz"}); }));
  CHECK(throws_kind(ErrorKind::parse, [&] { logic_component(m, "diagonal", {"x", "s"}); }));
  CHECK(throws_kind(ErrorKind::parse, [&] { logic_component(m, "diagonal", {"2"}); }));
  CHECK(throws_kind(ErrorKind::parse, [&] { logic_component(m, "similarity", {}); }));
  CHECK(throws_kind(ErrorKind::parse, [&] { logic_component(m, "warp", {}); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { logic_component(m, "const", {"s", "9"}); }));
  CHECK(throws_kind(ErrorKind::reference, [&] { logic_component(cm, "top", {}); }));

  Semiotic s = ws.sem;
  CHECK_NOTHROW(add_logic(s, "diag2", "diagonal", {"2", "s"}));
  CHECK(throws_kind(ErrorKind::validation, [&] { add_logic(s, "diag2", "diagonal", {"3", "s"}); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { add_logic(s, "plus", "top", {}); }));
}

TEST_CASE("extend_model") {
  auto ws = load_spec(kChain);
  const auto& m = ws.sem.model;
  const auto& r1 = m.comp("r1");
  const auto& r2 = m.comp("r2");
  const auto& t = m.comp("t");
  CHECK(equal(m.comp("s"), compose(r1, r2)));
  const auto left = compose(compose(r1, r2), t), right = compose(r1, compose(r2, t));
  CHECK(equal(left, right));
  CHECK(equal(m.comp("u"), left));
  CHECK(ws.derived_comps.count("s") == 1);
  CHECK(validate_model(ws.sem.sys, m).ok());
  // extension on atomics only is the identity
  Model at = ws.atomic;
  SignSystem only = ws.sem.sys;
  only.sem = Semantics{};
  auto same = extend_model(at, only);
  CHECK(same.comp_map.size() == at.comp_map.size());
  // missing atomic interpretation
  Model miss = ws.atomic;
  miss.comp_map.erase("r2");
  CHECK(throws_kind(ErrorKind::reference, [&] { extend_model(miss, ws.sem.sys); }));
  // an overridden composite is caught by the coherence check
  Model wrong = m;
  wrong.comp_map.at("s").set(0, 0.125);
  auto rep = validate_model(ws.sem.sys, wrong);
  auto* c = find_check(rep, "coherence", "s");
  REQUIRE(c);
  CHECK_FALSE(c->ok);

  // glue_compose keeps residual letters
  WordMorphism f{ws.sem.sys.lib.req("r1"), r1}, g{ws.sem.sys.lib.req("r2"), r2};
  auto fg = glue_compose(f, g, ws.sem.sys.lib.ont);
  CHECK(to_string(fg.w) == "a c+");
  CHECK(equal(fg.m, compose(r1, r2)));
}

TEST_CASE("validate_model: requirement and ontology conditions") {
  auto ws = load_spec(kChain);
  Model m = ws.sem.model;
  m.comp_map.erase("t");
  auto rep = validate_model(ws.sem.sys, m);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(find_check(rep, "requirement", "t")->ok);
  CHECK_FALSE(rep.failures().empty());

  auto sub = load_spec(R"(
semiotic sub
algebra P product
sign big
sign small <= big
oset Big : big {
  support x y
  sim x x 0.5
}
oset Small : small {
  support x
}
)");
  auto rs = validate_model(sub.sem.sys, sub.sem.model);
  auto* o = find_check(rs, "ontology", "small <= big");
  REQUIRE(o);
  CHECK_FALSE(o->ok);
  CHECK(o->message.find("exceeds") != std::string::npos);
}

TEST_CASE("sketches over boolean crisp data") {
  const std::string base = R"(
semiotic crisp
algebra B boolean
sign a
sign b
oset A : a {
  support 1 2 3
}
oset Bs : b {
  support p q
}
diagram d {
  node x : A
  node y : Bs
  edge e : f (x -> y)
  sources x
}
total d
limitdef g <- d
)";
  auto with = [&](const std::string& f, const std::string& g) {
    return load_spec(base + "comp f : a -> b {\n" + f + "}\ncomp g : a -> b {\n" + g + "}\n");
  };
  const std::string fun = "  entry 1 p = 1\n  entry 2 q = 1\n  entry 3 p = 1\n";
  auto ok = with(fun, fun);
  CHECK(validate_model(ok.sem.sys, ok.sem.model).ok());
  auto partial = with("  entry 1 p = 1\n  entry 2 q = 1\n", "  entry 1 p = 1\n  entry 2 q = 1\n");
  auto rp = validate_model(partial.sem.sys, partial.sem.model);
  CHECK_FALSE(find_check(rp, "total", "d")->ok);
  CHECK(find_check(rp, "total", "d")->witness == std::vector<std::string>{"3"});
  CHECK(find_check(rp, "limit", "g <- d")->ok);
  auto other = with(fun, "  entry 1 q = 1\n  entry 2 q = 1\n  entry 3 p = 1\n");
  auto ro = validate_model(other.sem.sys, other.sem.model);
  CHECK(find_check(ro, "total", "d")->ok);
  CHECK_FALSE(find_check(ro, "limit", "g <- d")->ok);
}

TEST_CASE("diagram connectives and true relations") {
  auto ws = load_spec(kRel);
  Semiotic s = ws.sem;
  const auto& D = s.sys.diagram("D");
  auto base = relation_map(D, s);
  CHECK(base.at_names({"a"}).scalar() == 1.0);
  CHECK(base.at_names({"b"}).scalar() == 0.5);
  auto dd = diagram_connective(Op::tensor, D, D, s);
  CHECK(is_relation(dd));
  CHECK(relation_inputs(dd).size() == 1);
  auto rdd = relation_map(dd, s);
  for (const char* x : {"a", "b"}) CHECK(rdd.at_names({x}).scalar() == doctest::Approx(base.at_names({x}).scalar() * base.at_names({x}).scalar()));
  auto imp = relation_map(diagram_connective(Op::residuum, D, D, s), s);
  for (const char* x : {"a", "b"}) CHECK(imp.at_names({x}).scalar() == doctest::Approx(1.0));
  auto T = s.sys.diagram("T");
  auto meet = relation_map(diagram_connective(Op::meet, D, s.sys.diagram("Z"), s), s);
  auto join = relation_map(diagram_connective(Op::join, D, s.sys.diagram("Z"), s), s);
  for (const char* x : {"a", "b"}) CHECK(meet.at_names({x}).scalar() <= join.at_names({x}).scalar() + 1e-12);
  CHECK(join.at_names({"b"}).scalar() == doctest::Approx(0.5));
  CHECK(meet.at_names({"b"}).scalar() == doctest::Approx(0.0));

  CHECK(is_true_relation(T, s));
  CHECK(is_true_relation(D, s) == false);
  CHECK_FALSE(is_true_relation(s.sys.diagram("Z"), s));
  CHECK_FALSE(is_relation(s.sys.diagram("N")));
  CHECK(throws_kind(ErrorKind::precondition, [&] { diagram_connective(Op::tensor, s.sys.diagram("N"), D, s); }));
  CHECK(throws_kind(ErrorKind::precondition, [&] { is_true_relation(s.sys.diagram("N"), s); }));
  CHECK(throws_kind(ErrorKind::precondition, [&] { diagram_connective(Op::neg, D, D, s); }));
  CHECK(throws_kind(ErrorKind::precondition, [&] { relation_map(s.sys.diagram("N"), s); }));
}

TEST_CASE("encode_dataset") {
  auto ws = load("dataset.sem");
  Semiotic s = ws.sem;
  const std::vector<std::string> signs{"A", "B", "C", "D"};
  const std::vector<std::vector<std::string>> rows{
      {"1.0", "0.5", "0.2", "0.2"}, {"1.0", "1.0", "0.2", "0.2"}, {"1.0", "1.0", "0.0", "0.2"}};
  auto c = encode_dataset(rows, signs, s);
  auto r = relation_map(c, s);
  std::set<std::vector<std::string>> fiber;
  r.for_each([&](const std::vector<int>& idx, const Truth& v) {
    CHECK((v.scalar() == 0.0 || v.scalar() == 1.0));
    if (v.scalar() == 1.0) {
      std::vector<std::string> row;
      for (std::size_t k = 0; k < idx.size(); ++k) row.push_back(r.ports()[k].dom->support[std::size_t(idx[k])]);
      fiber.insert(row);
    }
  });
  CHECK(fiber == std::set<std::vector<std::string>>(rows.begin(), rows.end()));

  Semiotic s1 = ws.sem;
  auto one = relation_map(encode_dataset({rows[0]}, signs, s1), s1);
  one.for_each([&](const std::vector<int>& idx, const Truth& v) {
    std::vector<std::string> row;
    for (std::size_t k = 0; k < idx.size(); ++k) row.push_back(one.ports()[k].dom->support[std::size_t(idx[k])]);
    CHECK(v.scalar() == (row == rows[0] ? 1.0 : 0.0));
  });
  Semiotic s0 = ws.sem;
  auto none = relation_map(encode_dataset({}, signs, s0), s0);
  for (const auto& v : none.table()) CHECK(v.scalar() == 0.0);

  Semiotic se = ws.sem;
  CHECK(throws_kind(ErrorKind::validation, [&] { encode_dataset({{"1.0", "0.5", "0.2", "0.7"}}, signs, se); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { encode_dataset({{"1.0"}}, signs, se); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { encode_dataset({}, {}, se); }));
  CHECK(throws_kind(ErrorKind::reference, [&] { encode_dataset({{"1"}}, {"Q"}, se); }));
}

TEST_CASE("natural transformations") {
  auto ws = load_spec(kRel);
  const Semiotic& s = ws.sem;
  const auto S = s.model.osets.at("S");
  const auto Om = s.model.osets.at("Omega");
  auto rep = check_natural_transformation(s, s, crisp_identity(S), identity(Om), "E");
  CHECK(rep.holds);
  // the identity on Omega is its similarity; a non-extensional table is not fixed by it
  auto rd = check_natural_transformation(s, s, crisp_identity(S), identity(Om), "D");
  CHECK_FALSE(rd.holds);

  // the same model over a relabelled support
  std::string text = kRel;
  auto relabel = [&](const std::string& from, const std::string& to) {
    for (std::size_t p = 0; (p = text.find(from, p)) != std::string::npos; p += to.size()) text.replace(p, from.size(), to);
  };
  relabel("support a b", "support c d");
  relabel("entry a ", "entry c ");
  relabel("entry b ", "entry d ");
  auto ws2 = load_spec(text);
  const auto S2 = ws2.sem.model.osets.at("S");
  auto f = chi(s.model.alg, S, S2, {{"a", "c"}, {"b", "d"}});
  auto rep2 = check_natural_transformation(s, ws2.sem, f, identity(Om), "E");
  CHECK(rep2.holds);
  // a relabelling that does not match the tables
  auto swap = chi(s.model.alg, S, S2, {{"a", "d"}, {"b", "c"}});
  auto rep3 = check_natural_transformation(s, ws2.sem, swap, identity(Om), "E");
  CHECK_FALSE(rep3.holds);
  CHECK_FALSE(rep3.diff.witness.empty());
  // non-epi f
  MultiMorphism half(s.model.alg, {port("s", S, Role::source), port("s'", S, Role::target)});
  half.set_names({"a", "a"}, 1.0);
  CHECK(throws_kind(ErrorKind::precondition, [&] { check_natural_transformation(s, s, half, identity(Om), "D"); }));
  CHECK(throws_kind(ErrorKind::reference, [&] { check_natural_transformation(s, s, f, f, "nope"); }));
}

TEST_CASE("integration") {
  auto g = load("int_godel.sem");
  auto p = load("int_product.sem");
  auto both = integrate({g.sem, p.sem});
  REQUIRE(both.model.alg->kind() == AlgebraKind::product_of);
  CHECK(both.model.alg->factors().size() == 2);
  const auto& a = *both.model.alg;
  auto proj = [&](const MultiMorphism& m, int j, const MultiMorphism& orig) {
    REQUIRE(m.size() == orig.size());
    for (std::size_t t = 0; t < m.size(); ++t) {
      CHECK(orig.alg()->eq(a.project(j, m.at(t)), orig.at(t)));
      CHECK(a.project(1 - j, m.at(t)).scalar() == 1.0);
    }
  };
  proj(both.model.comp("f"), 0, g.sem.model.comp("f"));
  proj(both.model.comp("g"), 1, p.sem.model.comp("g"));
  CHECK(both.sys.lib.has("f"));
  CHECK(both.sys.lib.has("g"));
  CHECK(both.model.sign_set("a")->extent(std::size_t(0)) == a.pack({1.0, 1.0}));
  CHECK(a.project(0, both.model.sign_set("a")->at(0, 1)).scalar() == 0.5);

  // with itself: both factors carry the table
  auto self = integrate({g.sem, g.sem});
  for (int j = 0; j < 2; ++j)
    for (std::size_t t = 0; t < self.model.comp("f").size(); ++t)
      CHECK(self.model.alg->project(j, self.model.comp("f").at(t)).scalar() == g.sem.model.comp("f").at(t).scalar());

  // a single operand is returned as is
  CHECK(integrate({g.sem}).model.alg->kind() == AlgebraKind::godel);
  CHECK(throws_kind(ErrorKind::precondition, [] { integrate({}); }));

  auto clash = load("int_clash.sem");
  try {
    integrate({g.sem, clash.sem});
    FAIL("expected a clash");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("sign 'a'") != std::string::npos);
    CHECK(std::string(e.what()).find("left and clash") != std::string::npos);
  }
  auto plus2 = load_spec("semiotic two\nalgebra P product\nsign s\noset S : s {\n  support 0\n}\ncomp plus : s s -> s {\n  entry 0 0 0 = 1\n}\n");
  auto plus1 = load_spec("semiotic one\nalgebra P product\nsign s\noset S : s {\n  support 0\n}\ncomp plus : s -> s {\n  entry 0 0 = 1\n}\n");
  CHECK(throws_kind(ErrorKind::validation, [&] { integrate({plus2.sem, plus1.sem}); }));

  // associativity up to factor order, on disjoint operands
  auto q = load_spec("semiotic third\nalgebra L lukasiewicz\nsign c\noset C : c {\n  support m n\n}\ncomp h : c -> c {\n  entry m n = 0.3\n}\n");
  auto l3 = integrate({integrate({g.sem, p.sem}), q.sem});
  auto r3 = integrate({g.sem, integrate({p.sem, q.sem})});
  // leaves are laid out flat, so both bracketings agree value by value
  for (const char* label : {"f", "g", "h"}) {
    const auto& x = l3.model.comp(label);
    const auto& y = r3.model.comp(label);
    REQUIRE(x.size() == y.size());
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(x.at(t) == y.at(t));
  }
}

TEST_CASE("integration schema colimit") {
  auto p = Algebra::product();
  gen::Rng r(61);
  auto X = crisp_omega_set(p, "X", "x", {"0", "1"});
  auto Y = crisp_omega_set(p, "Y", "y", {"u", "v"});
  auto l1 = gen::table(r, p, {port("x", X, Role::source)}, 1.0);
  auto l2 = gen::table(r, p, {port("y", Y, Role::source)}, 1.0);
  auto single = integration_schema_colimit({{"d1", l1}}, {});
  for (std::size_t t = 0; t < 2; ++t) CHECK(single.at(t) == l1.at(t));
  CHECK(single.ports()[0].name == "d1.x");

  auto two = integration_schema_colimit({{"d1", l1}, {"d2", l2}}, {});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(p->eq(two.at({i, j}), p->tensor(l1.at(std::size_t(i)), l2.at(std::size_t(j)))));

  auto corr = chi(p, X, Y, {{"0", "u"}, {"1", "v"}});
  auto joined = integration_schema_colimit({{"d1", l1}, {"d2", l2}}, {{"d1", "d2", corr}});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double want = l1.at(std::size_t(i)).scalar() * l2.at(std::size_t(j)).scalar() * (i == j ? 1.0 : 0.0);
      CHECK(joined.at({i, j}).scalar() == doctest::Approx(want));
    }
  CHECK(throws_kind(ErrorKind::precondition, [] { integration_schema_colimit({}, {}); }));
  CHECK(throws_kind(ErrorKind::reference, [&] { integration_schema_colimit({{"d1", l1}}, {{"d1", "zz", corr}}); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { integration_schema_colimit({{"d1", l1}, {"d2", l2}}, {{"d2", "d1", corr}}); }));
  CHECK(throws_kind(ErrorKind::cap, [&] { integration_schema_colimit({{"d1", l1}, {"d2", l2}}, {}, 3); }));
}

}  // TEST_SUITE
