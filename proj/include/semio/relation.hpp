#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "semio/algebra.hpp"

namespace semio {

inline constexpr std::uint64_t kDefaultCap = 10'000'000;

// Finite carrier with an Omega-valued similarity. Product sets keep their
// factors so that attributes can be projected away.
struct OmegaSet {
  std::string name;
  std::string sign;
  AlgebraPtr alg;
  std::vector<std::string> support;
  std::vector<Truth> sim;  // row-major, support x support
  std::vector<std::shared_ptr<const OmegaSet>> factors;

  std::size_t size() const { return support.size(); }
  int index(const std::string& element) const;  // throws reference error
  int find(const std::string& element) const;   // -1 when absent
  const Truth& at(std::size_t i, std::size_t j) const { return sim[i * support.size() + j]; }
  Truth extent(std::size_t i) const { return at(i, i); }
  Truth extent(const std::string& element) const { return extent(index(element)); }
  std::vector<std::string> globals() const;
  bool crisp() const;
};
using OmegaSetPtr = std::shared_ptr<const OmegaSet>;

struct SimEntry {
  std::string a, b;
  Truth v;
};

struct Triple {
  std::string a, b, c;
};

// Diagonal defaults to top, off-diagonal to bottom; entries are mirrored.
// Transitivity violations go to *warnings, or raise when strict.
OmegaSetPtr make_omega_set(AlgebraPtr alg, const std::string& name, const std::string& sign,
                           std::vector<std::string> support, const std::vector<SimEntry>& entries,
                           bool strict = false, std::vector<std::string>* warnings = nullptr);
OmegaSetPtr crisp_omega_set(AlgebraPtr alg, const std::string& name, const std::string& sign,
                            std::vector<std::string> support);
// carrier of a finite algebra as an Omega-set with [x=y] = x<=>y
OmegaSetPtr omega_carrier(AlgebraPtr alg, const std::string& sign = "Omega");
std::vector<Triple> transitivity_violations(const OmegaSet& s);

// support = cartesian product, element names joined by ','
OmegaSetPtr product_omega_sets(const std::vector<OmegaSetPtr>& parts);
OmegaSetPtr observable_projection(const OmegaSet& s, const std::vector<std::string>& keep_signs);

enum class Role { source, target };

struct Port {
  std::string name;
  std::string sign;
  Role role = Role::source;
  OmegaSetPtr dom;
};

// Omega-valued table over the product of the port supports. Ports are kept
// sources first; tables are dense with lexicographic order.
class MultiMorphism {
 public:
  MultiMorphism() = default;
  MultiMorphism(AlgebraPtr alg, std::vector<Port> ports, std::uint64_t cap = kDefaultCap);

  const AlgebraPtr& alg() const { return alg_; }
  const std::vector<Port>& ports() const { return ports_; }
  std::size_t arity() const { return ports_.size(); }
  std::size_t size() const { return table_.size(); }
  std::vector<std::size_t> sources() const;
  std::vector<std::size_t> targets() const;
  int port_index(const std::string& name) const;  // -1 when absent

  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::vector<int>& idx) const;
  const Truth& at(std::size_t flat) const { return table_[flat]; }
  const Truth& at(const std::vector<int>& idx) const { return table_[flatten(idx)]; }
  Truth at_names(const std::vector<std::string>& elements) const;
  void set(std::size_t flat, const Truth& v) { table_[flat] = v; }
  void set(const std::vector<int>& idx, const Truth& v) { table_[flatten(idx)] = v; }
  void set_names(const std::vector<std::string>& elements, const Truth& v);
  std::vector<Truth>& table() { return table_; }
  const std::vector<Truth>& table() const { return table_; }

  // visits every tuple in lexicographic order
  void for_each(const std::function<void(const std::vector<int>&, const Truth&)>& fn) const;

 private:
  AlgebraPtr alg_;
  std::vector<Port> ports_;
  std::vector<std::size_t> strides_;
  std::vector<Truth> table_;
};

// identity similarity of s as a morphism s -> s (ports "<sign>" and "<sign>'")
MultiMorphism identity(const OmegaSetPtr& s);
// crisp identity 1_A on the support of s
MultiMorphism crisp_identity(const OmegaSetPtr& s);
// characteristic morphism of a set map given as element names
MultiMorphism chi(AlgebraPtr alg, const OmegaSetPtr& dom, const OmegaSetPtr& cod,
                  const std::map<std::string, std::string>& map);

MultiMorphism compose(const MultiMorphism& f, const MultiMorphism& g, std::uint64_t cap = kDefaultCap);
MultiMorphism transpose(const MultiMorphism& f);
// sup over every port not listed, in the listed order; listed ports keep their role
MultiMorphism project_sup(const MultiMorphism& f, const std::vector<std::string>& keep);
// same ports with every role set to source
MultiMorphism as_omega_map(const MultiMorphism& f);
// reorders g's ports to f's order, matching names first and then (sign, role)
// occurrences; throws validation error when the port sets differ
MultiMorphism align_to(const MultiMorphism& g, const MultiMorphism& f);

struct TableDiff {
  bool equal = true;
  std::vector<std::string> witness;  // element names of first differing tuple
  Truth lhs, rhs;
};
TableDiff compare(const MultiMorphism& f, const MultiMorphism& g);  // g aligned to f
bool equal(const MultiMorphism& f, const MultiMorphism& g);
bool leq(const MultiMorphism& f, const MultiMorphism& g);

struct Classification {
  bool total = false, faithful = false, epi = false, mono = false, iso = false, orthogonal = false,
       left_adjoint_of_transpose = false;
};
// alpha ranges over source tuples, beta over target tuples (flattened in
// port order). Without arguments the products of the port domains are used.
Classification classify(const MultiMorphism& f, const OmegaSet& alpha, const OmegaSet& beta);
Classification classify(const MultiMorphism& f);
bool is_total(const MultiMorphism& f, const OmegaSet& alpha);
bool is_faithful(const MultiMorphism& f, const OmegaSet& beta);
OmegaSetPtr source_set(const MultiMorphism& f);
OmegaSetPtr target_set(const MultiMorphism& f);

bool is_independent(const MultiMorphism& f, const MultiMorphism& g);

enum class BayesDirection { target_given_source, source_given_target };
// Conditional b -> [a] => f(a,b) as an Omega-map over the other side.
MultiMorphism bayes_conditional(const MultiMorphism& f, const OmegaSet& alpha,
                                const std::vector<std::string>& a, BayesDirection dir);

MultiMorphism keyed_join(const MultiMorphism& d0, const MultiMorphism& d1, const std::string& key_sign);
MultiMorphism indexed_product(const std::vector<MultiMorphism>& parts, const std::string& key_sign);

std::string tuple_name(const std::vector<std::string>& parts);

}  // namespace semio
