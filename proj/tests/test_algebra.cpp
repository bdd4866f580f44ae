#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "semio/algebra.hpp"

using namespace semio;
using gen::throws_kind;

namespace {

// reference t-norms written out directly
double luk_t(double x, double y) { return std::max(0.0, x + y - 1); }
double luk_r(double x, double y) { return std::min(1.0, 1 - x + y); }
double god_r(double x, double y) { return x <= y ? 1.0 : y; }
double prod_r(double x, double y) { return x <= y ? 1.0 : y / x; }

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("make: boolean is the two element chain") {
  auto a = Algebra::make(AlgebraKind::boolean, {});
  CHECK(a->values() == std::vector<double>{0.0, 1.0});
  CHECK(a->is_top(a->tensor(1.0, 1.0)));
  CHECK(a->is_bot(a->tensor(1.0, 0.0)));
  CHECK(a->is_top(a->residuum(0.0, 0.0)));
  CHECK(a->top().scalar() == 1.0);
  CHECK_FALSE(a->eq(a->top(), a->bot()));
}

TEST_CASE("make: lukasiewicz and product hand values") {
  auto l = Algebra::lukasiewicz();
  CHECK(l->eq(l->tensor(0.7, 0.6), 0.3));
  CHECK(l->eq(l->residuum(0.7, 0.6), 0.9));
  auto p = Algebra::product();
  CHECK(p->eq(p->residuum(0.5, 0.25), 0.5));
  CHECK(p->eq(p->residuum(0.25, 0.5), 1.0));
}

TEST_CASE("make: chain sizes and kinds") {
  CHECK(Algebra::make(AlgebraKind::chain, {"3"})->values().size() == 3);
  CHECK(Algebra::make(AlgebraKind::chain, {"4", "lukasiewicz"})->base() == Algebra::Base::lukasiewicz);
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::chain(1); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::make(AlgebraKind::chain, {}); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::make(AlgebraKind::chain, {"x"}); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::make(AlgebraKind::chain, {"3", "product"}); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::make(AlgebraKind::table, {}); }));
}

TEST_CASE("make: table algebras are validated") {
  // three element Lukasiewicz chain as a table
  auto t = Algebra::table({0, 0.5, 1}, {0, 0, 0, 0, 0, 1, 0, 1, 2});
  CHECK(t->finite());
  CHECK(t->eq(t->residuum(0.5, 0.0), 0.5));
  // not monotone: 0.5 (x) 1 = 0 but 0.5 (x) 0.5 = 0.5
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::table({0, 0.5, 1}, {0, 0, 0, 0, 1, 0, 0, 0, 2}); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::table({0, 1}, {0, 0, 0}); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::table({1, 0}, {0, 0, 0, 1}); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::table({0}, {0}); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::table({0, 1}, {0, 0, 0, 5}); }));
}

TEST_CASE("eval_connective: examples and derived connectives") {
  auto g = Algebra::godel();
  CHECK(g->eq(eval_connective(*g, Op::residuum, 0.8, Truth(0.3)), 0.3));
  auto l = Algebra::lukasiewicz();
  CHECK(l->eq(eval_connective(*l, Op::biimp, 0.7, Truth(0.4)), 0.7));
  for (const auto& a : gen::builtins())
    for (const auto& x : a->sample()) {
      CHECK(a->eq(eval_connective(*a, Op::tensor, x, a->top()), x));
      CHECK(a->eq(a->neg(x), a->residuum(x, a->bot())));
      for (const auto& y : a->sample())
        CHECK(a->eq(a->biimp(x, y), a->tensor(a->residuum(x, y), a->residuum(y, x))));
    }
}

TEST_CASE("eval_connective: carrier and arity errors") {
  auto g = Algebra::godel();
  CHECK(throws_kind(ErrorKind::validation, [&] { eval_connective(*g, Op::tensor, 1.5, Truth(0.2)); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { eval_connective(*g, Op::tensor, 0.5, Truth(-0.1)); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { eval_connective(*g, Op::tensor, 0.5, std::nullopt); }));
  CHECK(throws_kind(ErrorKind::validation, [&] { eval_connective(*g, Op::neg, 0.5, Truth(0.5)); }));
  auto c = Algebra::chain(3);
  CHECK(throws_kind(ErrorKind::validation, [&] { eval_connective(*c, Op::meet, 0.3, Truth(0.5)); }));
  // within eps of the carrier is accepted
  CHECK_NOTHROW(eval_connective(*g, Op::meet, 1.0 + 1e-12, Truth(0.5)));
  CHECK(parse_op("biimp") == Op::biimp);
  CHECK(throws_kind(ErrorKind::validation, [] { parse_op("xor"); }));
}

TEST_CASE("is_divisible") {
  CHECK(is_divisible(*Algebra::boolean()));
  CHECK(is_divisible(*Algebra::product()));
  CHECK(is_divisible(*Algebra::godel()));
  CHECK(is_divisible(*Algebra::lukasiewicz()));
  CHECK(is_divisible(*Algebra::chain(5)));
  // drastic table on three values is the Lukasiewicz chain L3, hence divisible
  auto d3 = Algebra::table({0, 0.5, 1}, {0, 0, 0, 0, 0, 1, 0, 1, 2});
  CHECK(is_divisible(*d3));
  // the same drastic table on four values is not
  std::vector<int> t4(16, 0);
  for (int i = 0; i < 4; ++i) t4[std::size_t(i * 4 + 3)] = t4[std::size_t(3 * 4 + i)] = i;
  auto d4 = Algebra::table({0, 1.0 / 3, 2.0 / 3, 1}, t4);
  CHECK_FALSE(is_divisible(*d4));
  CHECK(d4->eq(d4->tensor(2.0 / 3, d4->residuum(2.0 / 3, 1.0 / 3)), 0.0));
}

TEST_CASE("validate_algebra: built-ins pass, broken tables fail with a witness") {
  for (const auto& a : gen::builtins()) {
    auto r = validate_algebra(*a);
    INFO(a->describe());
    CHECK(r.ok());
    CHECK(r.find("residuation") != nullptr);
    CHECK(r.find("monotonicity") != nullptr);
  }
  CHECK(validate_algebra(*Algebra::chain(5)).ok());
  auto bad = Algebra::table_unchecked({0, 0.5, 1}, {0, 0, 0, 0, 1, 0, 0, 0, 2}, {});
  auto r = validate_algebra(*bad);
  CHECK_FALSE(r.ok());
  const auto* m = r.find("monotonicity");
  REQUIRE(m != nullptr);
  CHECK_FALSE(m->ok);
  CHECK(m->witness.size() >= 3);
}

TEST_CASE("products: projection, upper embeddings, componentwise connectives") {
  auto bb = Algebra::product_of({Algebra::boolean(), Algebra::boolean()});
  const Truth up = product_upper(*bb, 0, 0.0);
  CHECK(product_project(*bb, 0, up).scalar() == 0.0);
  CHECK(product_project(*bb, 1, up).scalar() == 1.0);
  const Truth down = product_upper_bot(*bb, 0, 1.0);
  CHECK(product_project(*bb, 1, down).scalar() == 0.0);
  CHECK(throws_kind(ErrorKind::precondition, [&] { product_project(*bb, 2, up); }));
  CHECK(throws_kind(ErrorKind::precondition, [&] { product_upper(*bb, -1, 0.0); }));

  auto c3 = Algebra::chain(3);
  auto pc = Algebra::product_of({c3, Algebra::godel()});
  for (const auto& x : c3->sample()) CHECK(c3->eq(product_project(*pc, 0, product_upper(*pc, 0, x)), x));

  auto pg = Algebra::product_of({Algebra::product(), Algebra::godel()});
  const Truth v = pg->tensor(pg->pack({0.5, 0.4}), pg->pack({0.5, 1.0}));
  CHECK(pg->eq(v, pg->pack({0.25, 0.4})));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::product_of({Algebra::godel()}); }));
}

TEST_CASE("products: every connective commutes with projections") {
  auto p = Algebra::product_of({Algebra::lukasiewicz(), Algebra::chain(3), Algebra::product()});
  gen::Rng r(11);
  for (int k = 0; k < 300; ++k) {
    const Truth x = gen::value(r, *p), y = gen::value(r, *p);
    for (Op op : {Op::tensor, Op::residuum, Op::join, Op::meet, Op::biimp}) {
      const Truth z = p->eval(op, x, y);
      for (int j = 0; j < 3; ++j) {
        const auto& f = *p->factors()[std::size_t(j)];
        CHECK(f.eq(p->project(j, z), f.eval(op, p->project(j, x), p->project(j, y))));
      }
    }
    for (int j = 0; j < 3; ++j)
      CHECK(p->factors()[std::size_t(j)]->eq(p->project(j, p->neg(x)), p->factors()[std::size_t(j)]->neg(p->project(j, x))));
  }
}

TEST_CASE("property: t-norms agree with the closed forms on random points") {
  gen::Rng r(3);
  auto l = Algebra::lukasiewicz();
  auto g = Algebra::godel();
  auto p = Algebra::product();
  for (int k = 0; k < 2000; ++k) {
    const double x = r.real(), y = r.real();
    CHECK(l->eq(l->tensor(x, y), luk_t(x, y)));
    CHECK(l->eq(l->residuum(x, y), luk_r(x, y)));
    CHECK(g->eq(g->tensor(x, y), std::min(x, y)));
    CHECK(g->eq(g->residuum(x, y), god_r(x, y)));
    CHECK(p->eq(p->tensor(x, y), x * y));
    CHECK(p->eq(p->residuum(x, y), prod_r(x, y)));
    CHECK(p->eq(p->join(x, y), std::max(x, y)));
    CHECK(p->eq(p->meet(x, y), std::min(x, y)));
  }
}

TEST_CASE("property: residuation and implication inequalities on random triples") {
  gen::Rng r(5);
  for (const auto& a : gen::builtins())
    for (int k = 0; k < 400; ++k) {
      const Truth x = gen::value(r, *a), y = gen::value(r, *a), z = gen::value(r, *a);
      CHECK(a->leq(a->tensor(x, y), z) == a->leq(x, a->residuum(y, z)));
      CHECK(a->leq(x, y) == a->is_top(a->residuum(x, y)));
      CHECK(a->leq(a->tensor(x, a->residuum(x, y)), a->meet(x, y)));
      CHECK(a->leq(a->tensor(a->residuum(x, y), a->residuum(y, z)), a->residuum(x, z)));
    }
}

TEST_CASE("text: parse and format round trip") {
  for (const auto& a : gen::builtins())
    for (const auto& x : a->sample()) CHECK(a->eq(a->parse(a->format(x)), x));
  auto pg = Algebra::product_of({Algebra::product(), Algebra::godel()});
  CHECK(pg->format(pg->pack({0.25, 1.0})) == "0.25|1");
  CHECK(throws_kind(ErrorKind::parse, [&] { pg->parse("0.5"); }));
  CHECK(throws_kind(ErrorKind::parse, [] { Algebra::godel()->parse("abc"); }));
  CHECK(throws_kind(ErrorKind::validation, [] { Algebra::godel()->check(Truth(2.0)); }));
  auto c = Algebra::chain(3);
  CHECK(c->snap(Truth(0.5 + 1e-12)).scalar() == 0.5);
  CHECK_FALSE(c->contains(Truth(0.25)));
}

}  // TEST_SUITE
