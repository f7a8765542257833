#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace twinwidth {

/// Index of a variable inside the Dag that owns it.
using VarId = int;

/// Set of variables over a fixed universe (the owning Dag's node count).
using VarSet = boost::dynamic_bitset<std::uint64_t>;

/// Variable name -> state index. Used at API boundaries.
using Evidence = std::map<std::string, int>;

/// Variable index -> state index. Used by the inference engines.
using Assignment = std::map<VarId, int>;

class ModelError : public std::runtime_error {
 public:
  ModelError(std::string variable, const std::string& what)
      : std::runtime_error(what), variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<VarId> members(const VarSet& set);
VarSet make_set(std::size_t universe, const std::vector<VarId>& vars);

/// True for tokens of the form [A-Za-z_][A-Za-z0-9_'^]*.
bool is_valid_id(std::string_view id);

class Dag {
 public:
  Dag() = default;

  VarId add_node(std::string name);
  void add_edge(VarId parent, VarId child);
  void clear_parents(VarId v);

  std::size_t size() const { return names_.size(); }
  const std::string& name(VarId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<VarId> find(std::string_view name) const;
  /// Throws ModelError for unknown names.
  VarId index_of(std::string_view name) const;

  const std::vector<VarId>& parents(VarId v) const { return parents_.at(v); }
  std::vector<std::vector<VarId>> children() const;
  bool is_root(VarId v) const { return parents_.at(v).empty(); }
  std::vector<VarId> roots() const;
  std::vector<VarId> internals() const;
  std::size_t edge_count() const;

  /// Kahn order with ties broken by index; nullopt when a cycle exists.
  std::optional<std::vector<VarId>> topological_order() const;
  bool is_acyclic() const { return topological_order().has_value(); }

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.names_ == b.names_ && a.parents_ == b.parents_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<VarId>> parents_;
  std::unordered_map<std::string, VarId> index_;
};

struct Family {
  VarId child = -1;
  /// Child first, then its parents in Dag order.
  std::vector<VarId> members;
};

Family family_of(const Dag& dag, VarId v);
Family family_of(const Dag& dag, std::string_view v);

/// Per-variable metadata and mechanism. Roots carry `dist`, internals carry
/// `cpt` (one child state per parent instantiation, last parent fastest).
struct Variable {
  std::vector<std::string> states;
  bool functional = false;
  std::optional<std::vector<double>> dist;
  std::optional<std::vector<int>> cpt;

  int cardinality() const { return static_cast<int>(states.size()); }
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Scm {
  Dag dag;
  std::vector<Variable> vars;

  std::size_t size() const { return dag.size(); }
  int cardinality(VarId v) const { return vars.at(v).cardinality(); }
  std::vector<int> cardinalities() const;

  /// Adds a variable with the given parents (already present) and mechanism.
  VarId add_root(std::string name, std::vector<std::string> states,
                 std::vector<double> dist);
  VarId add_internal(std::string name, std::vector<std::string> states,
                     const std::vector<VarId>& parents, std::vector<int> cpt);

  /// Child state of `v` given full assignment `values` of its parents.
  int evaluate(VarId v, const std::vector<int>& values) const;

  friend bool operator==(const Scm&, const Scm&) = default;
};

struct Violation {
  std::string variable;
  std::string rule;
  std::string detail;
};

std::vector<Violation> validate(const Scm& scm);

/// Throws ModelError naming the first violation, if any.
void require_valid(const Scm& scm);

/// Number of instantiations of `vars` under the scm's cardinalities.
std::size_t instantiation_count(const Scm& scm, const std::vector<VarId>& vars);

/// Resolves name-keyed evidence against a dag, checking state ranges.
Assignment resolve(const Scm& scm, const Evidence& evidence);

}  // namespace twinwidth
