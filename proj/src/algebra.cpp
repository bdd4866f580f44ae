#include "semio/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdio>

namespace semio {

bool Truth::operator==(const Truth& o) const {
  if (n != o.n) return false;
  for (int i = 0; i < n; ++i)
    if (c[i] != o.c[i]) return false;
  return true;
}

std::string to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::boolean: return "boolean";
    case AlgebraKind::chain: return "chain";
    case AlgebraKind::godel: return "godel";
    case AlgebraKind::lukasiewicz: return "lukasiewicz";
    case AlgebraKind::product: return "product";
    case AlgebraKind::table: return "table";
    case AlgebraKind::product_of: return "product_of";
  }
  return "?";
}

std::string to_string(Op op) {
  switch (op) {
    case Op::tensor: return "tensor";
    case Op::residuum: return "residuum";
    case Op::join: return "join";
    case Op::meet: return "meet";
    case Op::biimp: return "biimp";
    case Op::neg: return "neg";
  }
  return "?";
}

Op parse_op(std::string_view s) {
  if (s == "tensor" || s == "*") return Op::tensor;
  if (s == "residuum" || s == "implies" || s == "->") return Op::residuum;
  if (s == "join" || s == "or") return Op::join;
  if (s == "meet" || s == "and") return Op::meet;
  if (s == "biimp" || s == "iff") return Op::biimp;
  if (s == "neg" || s == "not") return Op::neg;
  fail(ErrorKind::validation, "unknown connective '" + std::string(s) + "'");
}

// ---- construction ---------------------------------------------------------

AlgebraPtr Algebra::boolean(double eps) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::boolean;
  a->base_ = Base::godel;
  a->eps_ = eps;
  a->values_ = {0.0, 1.0};
  a->chain_n_ = 2;
  return a;
}

AlgebraPtr Algebra::godel(double eps) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::godel;
  a->base_ = Base::godel;
  a->eps_ = eps;
  return a;
}

AlgebraPtr Algebra::lukasiewicz(double eps) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::lukasiewicz;
  a->base_ = Base::lukasiewicz;
  a->eps_ = eps;
  return a;
}

AlgebraPtr Algebra::product(double eps) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::product;
  a->base_ = Base::product;
  a->eps_ = eps;
  return a;
}

AlgebraPtr Algebra::chain(int n, Base base, double eps) {
  if (n < 2) fail(ErrorKind::validation, "chain(n) needs n >= 2, got " + std::to_string(n));
  if (base != Base::godel && base != Base::lukasiewicz)
    fail(ErrorKind::validation, "chain(n) supports godel or lukasiewicz connectives only");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::chain;
  a->base_ = base;
  a->eps_ = eps;
  a->chain_n_ = n;
  for (int i = 0; i < n; ++i) a->values_.push_back(double(i) / double(n - 1));
  return a;
}

AlgebraPtr Algebra::table_unchecked(std::vector<double> values, std::vector<int> tensor,
                                    std::vector<int> residuum, double eps) {
  const std::size_t n = values.size();
  if (n < 2) fail(ErrorKind::validation, "table algebra needs at least two values");
  for (std::size_t i = 1; i < n; ++i)
    if (!(values[i] > values[i - 1]))
      fail(ErrorKind::validation, "table algebra values must be strictly ascending");
  if (tensor.size() != n * n) fail(ErrorKind::validation, "tensor table must have n*n entries");
  auto in_range = [n](const std::vector<int>& t) {
    return std::all_of(t.begin(), t.end(), [n](int i) { return i >= 0 && std::size_t(i) < n; });
  };
  if (!in_range(tensor)) fail(ErrorKind::validation, "tensor table entry outside carrier");
  if (residuum.empty()) {
    residuum.assign(n * n, 0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t z = 0; z < n; ++z) {
        int best = 0;
        for (std::size_t y = n; y-- > 0;)
          if (tensor[x * n + y] <= int(z)) {
            best = int(y);
            break;
          }
        residuum[x * n + z] = best;
      }
  }
  if (residuum.size() != n * n) fail(ErrorKind::validation, "residuum table must have n*n entries");
  if (!in_range(residuum)) fail(ErrorKind::validation, "residuum table entry outside carrier");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::table;
  a->base_ = Base::table;
  a->eps_ = eps;
  a->values_ = std::move(values);
  a->tensor_tab_ = std::move(tensor);
  a->residuum_tab_ = std::move(residuum);
  a->chain_n_ = int(n);
  return a;
}

AlgebraPtr Algebra::table(std::vector<double> values, std::vector<int> tensor,
                          std::vector<int> residuum, double eps) {
  auto a = table_unchecked(std::move(values), std::move(tensor), std::move(residuum), eps);
  auto rep = validate_algebra(*a);
  for (const auto& l : rep.laws)
    if (!l.ok) {
      std::string w;
      for (const auto& t : l.witness) w += (w.empty() ? "" : ",") + a->format(t, 6);
      fail(ErrorKind::validation, "table algebra fails law '" + l.law + "' at (" + w + ")");
    }
  return a;
}

AlgebraPtr Algebra::product_of(std::vector<AlgebraPtr> factors) {
  if (factors.size() < 2) fail(ErrorKind::validation, "product_of needs at least two factors");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::product_of;
  a->width_ = 0;
  a->eps_ = factors[0]->eps();
  for (const auto& f : factors) {
    a->width_ += f->width();
    a->eps_ = std::min(a->eps_, f->eps());
  }
  if (a->width_ > kMaxWidth)
    fail(ErrorKind::validation, "product algebra too wide (max " + std::to_string(kMaxWidth) + " leaves)");
  a->factors_ = std::move(factors);
  return a;
}

AlgebraPtr Algebra::make(AlgebraKind kind, const std::vector<std::string>& params, double eps) {
  switch (kind) {
    case AlgebraKind::boolean: return boolean(eps);
    case AlgebraKind::godel: return godel(eps);
    case AlgebraKind::lukasiewicz: return lukasiewicz(eps);
    case AlgebraKind::product: return product(eps);
    case AlgebraKind::chain: {
      if (params.empty()) fail(ErrorKind::validation, "chain needs a size");
      int n = 0;
      auto r = std::from_chars(params[0].data(), params[0].data() + params[0].size(), n);
      if (r.ec != std::errc() || r.ptr != params[0].data() + params[0].size())
        fail(ErrorKind::validation, "chain size '" + params[0] + "' is not an integer");
      Base b = Base::godel;
      if (params.size() > 1) {
        if (params[1] == "lukasiewicz") b = Base::lukasiewicz;
        else if (params[1] != "godel")
          fail(ErrorKind::validation, "chain connectives must be godel or lukasiewicz");
      }
      return chain(n, b, eps);
    }
    default: fail(ErrorKind::validation, "algebra kind " + to_string(kind) + " needs explicit data");
  }
}

// ---- carrier --------------------------------------------------------------

std::string Algebra::describe() const {
  switch (kind_) {
    case AlgebraKind::chain:
      return "chain " + std::to_string(chain_n_) +
             (base_ == Base::lukasiewicz ? " lukasiewicz" : " godel");
    case AlgebraKind::table: return "table(" + std::to_string(values_.size()) + ")";
    case AlgebraKind::product_of: {
      std::string s = "product_of(";
      for (std::size_t i = 0; i < factors_.size(); ++i)
        s += (i ? "," : "") + factors_[i]->describe();
      return s + ")";
    }
    default: return to_string(kind_);
  }
}

bool Algebra::finite() const {
  if (kind_ == AlgebraKind::product_of)
    return std::all_of(factors_.begin(), factors_.end(), [](const AlgebraPtr& f) { return f->finite(); });
  return !values_.empty();
}

bool Algebra::unit_interval() const {
  return kind_ == AlgebraKind::godel || kind_ == AlgebraKind::lukasiewicz ||
         kind_ == AlgebraKind::product;
}

int Algebra::offset(int j) const {
  if (j < 0 || std::size_t(j) >= factors_.size())
    fail(ErrorKind::precondition, "factor index " + std::to_string(j) + " out of range");
  int o = 0;
  for (int i = 0; i < j; ++i) o += factors_[i]->width();
  return o;
}

Truth Algebra::project(int j, const Truth& v) const {
  if (kind_ != AlgebraKind::product_of) fail(ErrorKind::precondition, "project on a scalar algebra");
  const int o = offset(j);
  Truth r;
  r.n = factors_[j]->width();
  for (int i = 0; i < r.n; ++i) r.c[i] = v.c[o + i];
  return r;
}

Truth Algebra::pack(const std::vector<Truth>& parts) const {
  if (kind_ != AlgebraKind::product_of) {
    if (parts.size() != 1) fail(ErrorKind::precondition, "pack: scalar algebra takes one part");
    return parts[0];
  }
  if (parts.size() != factors_.size()) fail(ErrorKind::precondition, "pack: wrong number of parts");
  Truth r;
  r.n = width_;
  int o = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    for (int i = 0; i < factors_[j]->width(); ++i) r.c[o + i] = parts[j].c[i];
    o += factors_[j]->width();
  }
  return r;
}

Truth Algebra::upper(int j, const Truth& x) const {
  std::vector<Truth> parts;
  for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(int(i) == j ? x : factors_[i]->top());
  offset(j);
  return pack(parts);
}

Truth Algebra::upper_bot(int j, const Truth& x) const {
  std::vector<Truth> parts;
  for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(int(i) == j ? x : factors_[i]->bot());
  offset(j);
  return pack(parts);
}

Truth Algebra::diagonal(const Truth& x) const {
  if (kind_ != AlgebraKind::product_of) return x;
  std::vector<Truth> parts;
  for (const auto& f : factors_) parts.push_back(f->diagonal(x));
  return pack(parts);
}

Truth Algebra::top() const {
  if (kind_ == AlgebraKind::product_of) {
    std::vector<Truth> parts;
    for (const auto& f : factors_) parts.push_back(f->top());
    return pack(parts);
  }
  return values_.empty() ? Truth(1.0) : Truth(values_.back());
}

Truth Algebra::bot() const {
  if (kind_ == AlgebraKind::product_of) {
    std::vector<Truth> parts;
    for (const auto& f : factors_) parts.push_back(f->bot());
    return pack(parts);
  }
  return values_.empty() ? Truth(0.0) : Truth(values_.front());
}

int Algebra::index_of(double x) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x - eps_);
  if (it != values_.end() && std::fabs(*it - x) <= eps_) return int(it - values_.begin());
  fail(ErrorKind::validation, "value " + format(Truth(x), 9) + " is not in the carrier of " + describe());
}

bool Algebra::contains(const Truth& x) const {
  if (kind_ == AlgebraKind::product_of) {
    if (x.n != width_) return false;
    for (std::size_t j = 0; j < factors_.size(); ++j)
      if (!factors_[j]->contains(project(int(j), x))) return false;
    return true;
  }
  if (x.n != 1 || !std::isfinite(x.c[0])) return false;
  if (values_.empty()) return x.c[0] >= -eps_ && x.c[0] <= 1.0 + eps_;
  auto it = std::lower_bound(values_.begin(), values_.end(), x.c[0] - eps_);
  return it != values_.end() && std::fabs(*it - x.c[0]) <= eps_;
}

void Algebra::check(const Truth& x) const {
  if (!contains(x))
    fail(ErrorKind::validation, "value " + format(x, 9) + " is outside the carrier of " + describe());
}

Truth Algebra::snap(const Truth& x) const {
  if (kind_ == AlgebraKind::product_of) {
    std::vector<Truth> parts;
    for (std::size_t j = 0; j < factors_.size(); ++j) parts.push_back(factors_[j]->snap(project(int(j), x)));
    return pack(parts);
  }
  if (values_.empty()) return Truth(std::clamp(x.c[0], 0.0, 1.0));
  return Truth(values_[index_of(x.c[0])]);
}

// ---- connectives ----------------------------------------------------------

double Algebra::scalar_tensor(double x, double y) const {
  switch (base_) {
    case Base::godel: return std::min(x, y);
    case Base::lukasiewicz: {
      double r = std::max(0.0, x + y - 1.0);
      if (!values_.empty()) r = values_[index_of(r)];
      return r;
    }
    case Base::product: return x * y;
    case Base::table: {
      const std::size_t n = values_.size();
      return values_[tensor_tab_[index_of(x) * n + index_of(y)]];
    }
  }
  return 0.0;
}

double Algebra::scalar_residuum(double x, double y) const {
  switch (base_) {
    case Base::godel: return x <= y + eps_ ? (values_.empty() ? 1.0 : values_.back()) : y;
    case Base::lukasiewicz: {
      double r = std::min(1.0, 1.0 - x + y);
      if (!values_.empty()) r = values_[index_of(r)];
      return r;
    }
    case Base::product: return x <= y + eps_ ? 1.0 : y / x;
    case Base::table: {
      const std::size_t n = values_.size();
      return values_[residuum_tab_[index_of(x) * n + index_of(y)]];
    }
  }
  return 0.0;
}

Truth Algebra::eval(Op op, const Truth& x, const Truth& y) const {
  if (kind_ == AlgebraKind::product_of) {
    std::vector<Truth> parts;
    for (std::size_t j = 0; j < factors_.size(); ++j)
      parts.push_back(factors_[j]->eval(op, project(int(j), x), project(int(j), y)));
    return pack(parts);
  }
  const double a = x.c[0], b = y.c[0];
  switch (op) {
    case Op::tensor: return scalar_tensor(a, b);
    case Op::residuum: return scalar_residuum(a, b);
    case Op::join: return std::max(a, b);
    case Op::meet: return std::min(a, b);
    case Op::biimp: return std::min(scalar_residuum(a, b), scalar_residuum(b, a));
    case Op::neg: return scalar_residuum(a, bot().c[0]);
  }
  return 0.0;
}

Truth Algebra::tensor(const Truth& x, const Truth& y) const { return eval(Op::tensor, x, y); }
Truth Algebra::residuum(const Truth& x, const Truth& y) const { return eval(Op::residuum, x, y); }
Truth Algebra::join(const Truth& x, const Truth& y) const { return eval(Op::join, x, y); }
Truth Algebra::meet(const Truth& x, const Truth& y) const { return eval(Op::meet, x, y); }
Truth Algebra::biimp(const Truth& x, const Truth& y) const { return eval(Op::biimp, x, y); }
Truth Algebra::neg(const Truth& x) const { return eval(Op::neg, x, x); }

bool Algebra::leq(const Truth& x, const Truth& y) const {
  const int n = std::max(x.n, y.n);
  for (int i = 0; i < n; ++i)
    if (x.c[i] > y.c[i] + eps_) return false;
  return true;
}

bool Algebra::eq(const Truth& x, const Truth& y) const {
  const int n = std::max(x.n, y.n);
  for (int i = 0; i < n; ++i)
    if (std::fabs(x.c[i] - y.c[i]) > eps_) return false;
  return true;
}

Truth eval_connective(const Algebra& a, Op op, const Truth& x, const std::optional<Truth>& y) {
  a.check(x);
  if (op == Op::neg) {
    if (y) fail(ErrorKind::validation, "neg takes one argument");
    return a.neg(x);
  }
  if (!y) fail(ErrorKind::validation, to_string(op) + " takes two arguments");
  a.check(*y);
  return a.eval(op, x, *y);
}

// ---- sampling and text ----------------------------------------------------

std::vector<Truth> Algebra::sample() const {
  if (kind_ == AlgebraKind::product_of) {
    std::vector<Truth> acc{Truth()};
    acc[0].n = 0;
    for (const auto& f : factors_) {
      std::vector<Truth> next;
      for (const auto& prefix : acc)
        for (const auto& v : f->sample()) {
          Truth t = prefix;
          for (int i = 0; i < v.n; ++i) t.c[t.n + i] = v.c[i];
          t.n += v.n;
          next.push_back(t);
        }
      acc = std::move(next);
    }
    return acc;
  }
  std::vector<Truth> out;
  if (!values_.empty()) {
    for (double v : values_) out.emplace_back(v);
  } else {
    for (int i = 0; i <= 20; ++i) out.emplace_back(double(i) / 20.0);
  }
  return out;
}

static std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return std::string(s.substr(a, b - a));
}

Truth Algebra::parse(std::string_view text) const {
  const std::string t = trim(text);
  if (kind_ == AlgebraKind::product_of) {
    if (t == "top") return top();
    if (t == "bot") return bot();
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= t.size(); ++i)
      if (i == t.size() || t[i] == '|') {
        parts.push_back(t.substr(start, i - start));
        start = i + 1;
      }
    if (int(parts.size()) != width_)
      fail(ErrorKind::parse, "value '" + t + "' needs " + std::to_string(width_) +
                                 " components separated by '|' for " + describe());
    Truth r;
    r.n = width_;
    int o = 0;
    for (const auto& f : factors_) {
      std::string sub;
      for (int i = 0; i < f->width(); ++i) sub += (i ? "|" : "") + parts[o + i];
      Truth v = f->parse(sub);
      for (int i = 0; i < v.n; ++i) r.c[o + i] = v.c[i];
      o += f->width();
    }
    return r;
  }
  if (t == "top") return top();
  if (t == "bot") return bot();
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    fail(ErrorKind::parse, "cannot read truth value '" + t + "'");
  Truth x(v);
  check(x);
  return values_.empty() ? x : snap(x);
}

std::string Algebra::format(const Truth& x, int digits) const {
  std::string s;
  for (int i = 0; i < std::max(1, x.n); ++i) {
    char buf[64];
    if (digits >= 17) {
      auto r = std::to_chars(buf, buf + sizeof buf, x.c[i]);
      *r.ptr = 0;
    } else {
      std::snprintf(buf, sizeof buf, "%.*g", digits, x.c[i]);
    }
    if (i) s += '|';
    s += buf;
  }
  return s;
}

Truth product_project(const Algebra& p, int j, const Truth& v) { return p.project(j, v); }
Truth product_upper(const Algebra& p, int j, const Truth& x) { return p.upper(j, x); }
Truth product_upper_bot(const Algebra& p, int j, const Truth& x) { return p.upper_bot(j, x); }

// ---- law checking ---------------------------------------------------------

bool AlgebraReport::ok() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawResult& l) { return l.ok; });
}

const LawResult* AlgebraReport::find(const std::string& law) const {
  for (const auto& l : laws)
    if (l.law == law) return &l;
  return nullptr;
}

namespace {

struct LawRun {
  LawResult r;
  explicit LawRun(std::string name) { r.law = std::move(name); }
  void check(bool holds, std::vector<Truth> w) {
    ++r.checked;
    if (!holds && r.ok) {
      r.ok = false;
      r.witness = std::move(w);
    }
  }
};

AlgebraReport scalar_laws(const Algebra& a) {
  const auto xs = a.sample();
  const Truth top = a.top(), bot = a.bot();
  LawRun closure("closure"), unit("unit"), comm("commutativity"), assoc("associativity"),
      lattice("lattice"), bounds("bounds"), mono("monotonicity"), resid("residuation"),
      order("order-implication"), mp("modus-ponens"), chainl("implication-chain");
  auto in = [&](const Truth& v) { return a.contains(v); };
  for (const auto& x : xs) {
    unit.check(a.eq(a.tensor(x, top), x), {x});
    bounds.check(a.leq(bot, x) && a.leq(x, top), {x});
    for (const auto& y : xs) {
      const Truth t = a.tensor(x, y), r = a.residuum(x, y);
      closure.check(in(t) && in(r) && in(a.join(x, y)) && in(a.meet(x, y)), {x, y});
      comm.check(a.eq(t, a.tensor(y, x)), {x, y});
      lattice.check(a.eq(a.meet(x, a.join(x, y)), x) && a.eq(a.join(x, a.meet(x, y)), x) &&
                        a.eq(a.meet(x, y), a.meet(y, x)) && a.eq(a.join(x, y), a.join(y, x)),
                    {x, y});
      order.check(a.leq(x, y) == a.is_top(r), {x, y});
      mp.check(a.leq(a.tensor(x, r), a.meet(x, y)), {x, y});
      for (const auto& z : xs) {
        assoc.check(a.eq(a.tensor(a.tensor(x, y), z), a.tensor(x, a.tensor(y, z))), {x, y, z});
        if (a.leq(x, y)) mono.check(a.leq(a.tensor(x, z), a.tensor(y, z)), {x, y, z});
        resid.check(a.leq(a.tensor(x, y), z) == a.leq(x, a.residuum(y, z)), {x, y, z});
        chainl.check(a.leq(a.tensor(r, a.residuum(y, z)), a.residuum(x, z)), {x, y, z});
      }
    }
  }
  AlgebraReport rep;
  for (auto* l : {&closure, &unit, &comm, &assoc, &lattice, &bounds, &mono, &resid, &order, &mp, &chainl})
    rep.laws.push_back(l->r);
  return rep;
}

}  // namespace

AlgebraReport validate_algebra(const Algebra& a) {
  if (a.kind() != AlgebraKind::product_of) return scalar_laws(a);
  // componentwise operations: a law holds iff it holds in every factor
  AlgebraReport rep;
  for (std::size_t j = 0; j < a.factors().size(); ++j) {
    auto sub = validate_algebra(*a.factors()[j]);
    for (auto& l : sub.laws) {
      auto* mine = const_cast<LawResult*>(rep.find(l.law));
      if (!mine) {
        rep.laws.push_back(LawResult{l.law, true, {}, 0});
        mine = &rep.laws.back();
      }
      mine->checked += l.checked;
      if (!l.ok && mine->ok) {
        mine->ok = false;
        for (const auto& w : l.witness) mine->witness.push_back(a.upper(int(j), w));
      }
    }
  }
  return rep;
}

bool is_divisible(const Algebra& a) {
  if (a.kind() == AlgebraKind::product_of)
    return std::all_of(a.factors().begin(), a.factors().end(),
                       [](const AlgebraPtr& f) { return is_divisible(*f); });
  for (const auto& x : a.sample())
    for (const auto& y : a.sample())
      if (!a.eq(a.tensor(x, a.residuum(x, y)), a.meet(x, y))) return false;
  return true;
}
}  // namespace semio
