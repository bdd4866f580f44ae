#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semio/error.hpp"

namespace semio {

inline constexpr int kMaxWidth = 8;
inline constexpr double kDefaultEpsilon = 1e-9;

// A truth value. Scalar algebras use c[0]; product algebras store the
// flattened leaf components.
struct Truth {
  std::array<double, kMaxWidth> c{};
  int n = 1;

  Truth() = default;
  Truth(double x) { c[0] = x; }  // NOLINT: implicit on purpose

  double scalar() const { return c[0]; }
  bool operator==(const Truth& o) const;
};

enum class AlgebraKind { boolean, chain, godel, lukasiewicz, product, table, product_of };
enum class Op { tensor, residuum, join, meet, biimp, neg };

std::string to_string(AlgebraKind k);
std::string to_string(Op op);
Op parse_op(std::string_view s);

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

class Algebra {
 public:
  // t-norm used by boolean/chain kinds
  enum class Base { godel, lukasiewicz, product, table };

  static AlgebraPtr boolean(double eps = kDefaultEpsilon);
  static AlgebraPtr godel(double eps = kDefaultEpsilon);
  static AlgebraPtr lukasiewicz(double eps = kDefaultEpsilon);
  static AlgebraPtr product(double eps = kDefaultEpsilon);
  static AlgebraPtr chain(int n, Base base = Base::godel, double eps = kDefaultEpsilon);
  // values ascending; tensor/residuum are index tables (n*n, row = x).
  // An empty residuum is derived from the tensor. Rejected if any law fails.
  static AlgebraPtr table(std::vector<double> values, std::vector<int> tensor,
                          std::vector<int> residuum = {}, double eps = kDefaultEpsilon);
  // Same without validation; used to exhibit bad tables in reports.
  static AlgebraPtr table_unchecked(std::vector<double> values, std::vector<int> tensor,
                                    std::vector<int> residuum, double eps = kDefaultEpsilon);
  static AlgebraPtr product_of(std::vector<AlgebraPtr> factors);
  static AlgebraPtr make(AlgebraKind kind, const std::vector<std::string>& params,
                         double eps = kDefaultEpsilon);

  AlgebraKind kind() const { return kind_; }
  Base base() const { return base_; }
  std::string describe() const;
  double eps() const { return eps_; }
  int width() const { return width_; }
  bool finite() const;
  bool unit_interval() const;  // scalar kind over [0,1]

  const std::vector<AlgebraPtr>& factors() const { return factors_; }
  const std::vector<double>& values() const { return values_; }  // finite scalar carriers

  Truth top() const;
  Truth bot() const;

  Truth tensor(const Truth& x, const Truth& y) const;
  Truth residuum(const Truth& x, const Truth& y) const;
  Truth join(const Truth& x, const Truth& y) const;
  Truth meet(const Truth& x, const Truth& y) const;
  Truth biimp(const Truth& x, const Truth& y) const;
  Truth neg(const Truth& x) const;
  Truth eval(Op op, const Truth& x, const Truth& y) const;

  bool leq(const Truth& x, const Truth& y) const;
  bool eq(const Truth& x, const Truth& y) const;
  bool is_top(const Truth& x) const { return eq(x, top()); }
  bool is_bot(const Truth& x) const { return eq(x, bot()); }

  bool contains(const Truth& x) const;
  // throws validation error if x is outside the carrier
  void check(const Truth& x) const;
  // snaps a value that is within eps of a carrier element onto it
  Truth snap(const Truth& x) const;

  // whole carrier when finite; otherwise the 21-point grid per unit factor
  std::vector<Truth> sample() const;

  Truth parse(std::string_view text) const;
  std::string format(const Truth& x, int digits = 17) const;

  // product-only helpers
  Truth project(int j, const Truth& v) const;
  Truth upper(int j, const Truth& x) const;      // top fillers
  Truth upper_bot(int j, const Truth& x) const;  // bottom fillers
  Truth diagonal(const Truth& x) const;          // same value in every factor
  Truth pack(const std::vector<Truth>& parts) const;

 private:
  Algebra() = default;
  double scalar_tensor(double x, double y) const;
  double scalar_residuum(double x, double y) const;
  int index_of(double x) const;
  int offset(int j) const;

  AlgebraKind kind_ = AlgebraKind::boolean;
  Base base_ = Base::godel;
  double eps_ = kDefaultEpsilon;
  int width_ = 1;
  int chain_n_ = 0;
  std::vector<double> values_;
  std::vector<int> tensor_tab_, residuum_tab_;
  std::vector<AlgebraPtr> factors_;
};

Truth eval_connective(const Algebra& a, Op op, const Truth& x, const std::optional<Truth>& y);

struct LawResult {
  std::string law;
  bool ok = true;
  std::vector<Truth> witness;
  std::size_t checked = 0;
};

struct AlgebraReport {
  std::vector<LawResult> laws;
  bool ok() const;
  const LawResult* find(const std::string& law) const;
};

// Checks unit, commutativity, associativity, lattice laws, monotonicity,
// residuation, closure and the implication inequalities, exhaustively on
// finite carriers and on the 21^3 grid otherwise.
AlgebraReport validate_algebra(const Algebra& a);
bool is_divisible(const Algebra& a);

Truth product_project(const Algebra& p, int j, const Truth& v);
Truth product_upper(const Algebra& p, int j, const Truth& x);
Truth product_upper_bot(const Algebra& p, int j, const Truth& x);

}  // namespace semio
