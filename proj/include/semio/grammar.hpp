#pragma once

#include <map>
#include <set>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "semio/error.hpp"

namespace semio {

// A sign occurrence; out marks the dual (written "a+").
struct Sym {
  std::string sign;
  bool out = false;
  bool operator==(const Sym& o) const { return sign == o.sign && out == o.out; }
  bool operator<(const Sym& o) const { return std::tie(sign, out) < std::tie(o.sign, o.out); }
};
using Word = std::vector<Sym>;

std::string to_string(const Word& w);
Word parse_word(const std::string& text);  // "a b+ c"; "" is the empty word

// Input signs with a partial order; outputs are their duals and inherit it.
class Ontology {
 public:
  void add_sign(const std::string& name);
  void add_order(const std::string& lower, const std::string& upper);  // lower <= upper
  bool contains(const std::string& name) const { return signs_.count(name) > 0; }
  bool leq(const std::string& a, const std::string& b) const;
  bool leq(const Sym& a, const Sym& b) const { return a.out == b.out && leq(a.sign, b.sign); }
  const std::set<std::string>& signs() const { return signs_; }
  const std::set<std::pair<std::string, std::string>>& order() const { return order_; }
  // (lower, upper) pairs of the reflexive-transitive closure, strict part only
  std::set<std::pair<std::string, std::string>> closure() const;

 private:
  std::set<std::string> signs_;
  std::set<std::pair<std::string, std::string>> order_;
};

enum class GlueOrder { nearest, leftmost };

struct GlueTrace {
  std::vector<std::pair<std::size_t, std::size_t>> matched;  // (position in w, position in w')
};

Word glue_words(const Word& w, const Word& w2, const Ontology& ont, GlueOrder order = GlueOrder::nearest,
                GlueTrace* trace = nullptr);
std::pair<Word, Word> word_io(const Word& w);

struct Component {
  std::string label;
  Word req;
};

struct Library {
  Ontology ont;
  std::vector<Component> comps;

  void add(const std::string& label, const Word& req);
  bool has(const std::string& label) const;
  const Word& req(const std::string& label) const;  // reference error when unknown
};

// every label of a is in b with the same requirement
bool library_leq(const Library& a, const Library& b);

Word closure_requirements(const Library& lib, const std::vector<std::string>& labels,
                          GlueOrder order = GlueOrder::nearest);

struct CVertex {
  std::string id;
  std::string sign;
  std::string oset;  // optional Omega-set binding
};

struct CArrow {
  std::string id;
  std::string label;
  std::vector<std::string> src, tgt;
};

struct Configuration {
  std::vector<CVertex> vertices;
  std::vector<CArrow> arrows;
  std::vector<std::string> sources;

  int vertex_index(const std::string& id) const;
  const CVertex& vertex(const std::string& id) const;
};

struct ConfigReport {
  bool ok = true;
  std::vector<std::string> errors;
  Word i, o;
};

ConfigReport validate_configuration(const Configuration& d, const Library& lib);
// throws a validation error listing every offending arrow
void require_valid(const Configuration& d, const Library& lib);
std::pair<Word, Word> configuration_io(const Configuration& d);
Configuration single_arrow(const Library& lib, const std::string& label, const std::string& prefix = "");

Configuration glue_diagrams(const Configuration& d, const Configuration& d2, const Library& lib);

struct Rule {
  std::string lhs;
  std::vector<std::string> rhs;
};

struct Semantics {
  std::vector<Rule> rules;
  std::map<std::string, int> sizes;
  std::vector<std::pair<Word, Word>> word_eq;

  const Rule* rule_for(const std::string& label) const;
  bool atomic(const std::string& label) const { return rule_for(label) == nullptr; }
  int size_of(const std::string& label) const;
  bool words_equivalent(const Word& a, const Word& b) const;
  // rules must shrink the size and respect requirements; throws otherwise
  void check(const Library& lib) const;
};

std::vector<std::string> normal_form(const std::string& label, const Semantics& sem);
Configuration refine(const Configuration& d, const Library& lib, const Semantics& sem);

}  // namespace semio
