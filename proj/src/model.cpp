#include "twinwidth/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

namespace twinwidth {

std::vector<VarId> members(const VarSet& set) {
  std::vector<VarId> out;
  out.reserve(set.count());
  for (auto i = set.find_first(); i != VarSet::npos; i = set.find_next(i)) {
    out.push_back(static_cast<VarId>(i));
  }
  return out;
}

VarSet make_set(std::size_t universe, const std::vector<VarId>& vars) {
  VarSet s(universe);
  for (VarId v : vars) s.set(static_cast<std::size_t>(v));
  return s;
}

bool is_valid_id(std::string_view id) {
  if (id.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(id.front())) return false;
  return std::all_of(id.begin() + 1, id.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9') || c == '\'' || c == '^';
  });
}

VarId Dag::add_node(std::string name) {
  if (index_.count(name)) throw ModelError(name, "duplicate variable id '" + name + "'");
  const auto id = static_cast<VarId>(names_.size());
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  parents_.emplace_back();
  return id;
}

void Dag::add_edge(VarId parent, VarId child) {
  if (parent < 0 || child < 0 || static_cast<std::size_t>(parent) >= size() ||
      static_cast<std::size_t>(child) >= size()) {
    throw std::out_of_range("Dag::add_edge: variable index out of range");
  }
  parents_[child].push_back(parent);
}

void Dag::clear_parents(VarId v) { parents_.at(v).clear(); }

std::optional<VarId> Dag::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId Dag::index_of(std::string_view name) const {
  auto id = find(name);
  if (!id) throw ModelError(std::string(name), "unknown variable '" + std::string(name) + "'");
  return *id;
}

std::vector<std::vector<VarId>> Dag::children() const {
  std::vector<std::vector<VarId>> ch(size());
  for (std::size_t v = 0; v < size(); ++v) {
    for (VarId p : parents_[v]) ch[p].push_back(static_cast<VarId>(v));
  }
  return ch;
}

std::vector<VarId> Dag::roots() const {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (parents_[v].empty()) out.push_back(static_cast<VarId>(v));
  return out;
}

std::vector<VarId> Dag::internals() const {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (!parents_[v].empty()) out.push_back(static_cast<VarId>(v));
  return out;
}

std::size_t Dag::edge_count() const {
  std::size_t m = 0;
  for (const auto& p : parents_) m += p.size();
  return m;
}

std::optional<std::vector<VarId>> Dag::topological_order() const {
  const auto n = size();
  std::vector<int> indegree(n, 0);
  auto ch = children();
  for (std::size_t v = 0; v < n; ++v) indegree[v] = static_cast<int>(parents_[v].size());
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(static_cast<VarId>(v));
  std::vector<VarId> order;
  order.reserve(n);
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VarId c : ch[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

Family family_of(const Dag& dag, VarId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= dag.size())
    throw ModelError(std::to_string(v), "unknown variable index");
  Family f;
  f.child = v;
  f.members.push_back(v);
  for (VarId p : dag.parents(v)) f.members.push_back(p);
  return f;
}

Family family_of(const Dag& dag, std::string_view v) { return family_of(dag, dag.index_of(v)); }

std::vector<int> Scm::cardinalities() const {
  std::vector<int> out(vars.size());
  for (std::size_t v = 0; v < vars.size(); ++v) out[v] = vars[v].cardinality();
  return out;
}

VarId Scm::add_root(std::string name, std::vector<std::string> states, std::vector<double> dist) {
  VarId id = dag.add_node(std::move(name));
  Variable var;
  var.states = std::move(states);
  var.functional = false;
  var.dist = std::move(dist);
  vars.push_back(std::move(var));
  return id;
}

VarId Scm::add_internal(std::string name, std::vector<std::string> states,
                        const std::vector<VarId>& parents, std::vector<int> cpt) {
  VarId id = dag.add_node(std::move(name));
  for (VarId p : parents) dag.add_edge(p, id);
  Variable var;
  var.states = std::move(states);
  var.functional = true;
  var.cpt = std::move(cpt);
  vars.push_back(std::move(var));
  return id;
}

int Scm::evaluate(VarId v, const std::vector<int>& values) const {
  const auto& var = vars.at(v);
  if (!var.cpt) throw ModelError(dag.name(v), "variable has no structural equation");
  std::size_t index = 0;
  for (VarId p : dag.parents(v)) {
    index = index * static_cast<std::size_t>(cardinality(p)) + static_cast<std::size_t>(values[p]);
  }
  return (*var.cpt)[index];
}

std::size_t instantiation_count(const Scm& scm, const std::vector<VarId>& vars) {
  std::size_t count = 1;
  for (VarId v : vars) count *= static_cast<std::size_t>(scm.cardinality(v));
  return count;
}

std::vector<Violation> validate(const Scm& scm) {
  std::vector<Violation> out;
  const auto& dag = scm.dag;
  auto add = [&](VarId v, std::string rule, std::string detail) {
    out.push_back({dag.name(v), std::move(rule), std::move(detail)});
  };

  if (scm.vars.size() != dag.size()) {
    out.push_back({"", "metadata", "variable metadata count differs from node count"});
    return out;
  }

  for (std::size_t i = 0; i < dag.size(); ++i) {
    const auto v = static_cast<VarId>(i);
    const auto& ps = dag.parents(v);
    std::set<VarId> seen;
    for (VarId p : ps) {
      if (p == v) add(v, "cycle", "self-loop " + dag.name(v) + "->" + dag.name(v));
      if (!seen.insert(p).second) add(v, "duplicate-parent", "parent " + dag.name(p) + " listed twice");
    }
  }

  if (auto topo = dag.topological_order(); !topo) {
    // report every variable left on a cycle (those never reaching indegree 0)
    std::vector<bool> placed(dag.size(), false);
    std::vector<int> indegree(dag.size());
    auto ch = dag.children();
    std::vector<VarId> stack;
    for (std::size_t v = 0; v < dag.size(); ++v) {
      indegree[v] = static_cast<int>(dag.parents(static_cast<VarId>(v)).size());
      if (indegree[v] == 0) stack.push_back(static_cast<VarId>(v));
    }
    while (!stack.empty()) {
      VarId v = stack.back();
      stack.pop_back();
      placed[v] = true;
      for (VarId c : ch[v])
        if (--indegree[c] == 0) stack.push_back(c);
    }
    for (std::size_t v = 0; v < dag.size(); ++v) {
      const bool self_loop = std::count(dag.parents(static_cast<VarId>(v)).begin(),
                                        dag.parents(static_cast<VarId>(v)).end(),
                                        static_cast<VarId>(v)) > 0;
      if (!placed[v] && !self_loop) add(static_cast<VarId>(v), "cycle", "variable lies on a directed cycle");
    }
  }

  for (std::size_t i = 0; i < dag.size(); ++i) {
    const auto v = static_cast<VarId>(i);
    const auto& var = scm.vars[i];
    if (!is_valid_id(dag.name(v))) add(v, "id", "invalid variable id");
    if (var.states.empty()) {
      add(v, "cardinality", "variable has no states");
      continue;
    }
    const bool root = dag.is_root(v);
    if (var.dist && var.cpt) {
      add(v, "mechanism", "both a root table and a structural equation are given");
      continue;
    }
    if (!var.dist && !var.cpt) {
      add(v, "mechanism", "neither a root table nor a structural equation is given");
      continue;
    }
    if (root) {
      if (!var.dist) {
        add(v, "mechanism", "root variable needs a distribution");
        continue;
      }
      const auto& d = *var.dist;
      if (d.size() != var.states.size()) {
        add(v, "table-length", "distribution length " + std::to_string(d.size()) + " != cardinality " +
                                   std::to_string(var.states.size()));
        continue;
      }
      double sum = 0.0;
      bool negative = false;
      for (double x : d) {
        if (!(x >= 0.0)) negative = true;
        sum += x;
      }
      if (negative) add(v, "normalization", "distribution has a negative or NaN entry");
      if (std::abs(sum - 1.0) > 1e-12) add(v, "normalization", "distribution sums to " + std::to_string(sum));
    } else {
      if (!var.cpt) {
        add(v, "mechanism", "internal variable needs a structural equation");
        continue;
      }
      if (!var.functional) add(v, "functional", "internal variable of an SCM must be functional");
      bool parents_ok = true;
      for (VarId p : dag.parents(v))
        if (scm.vars[p].states.empty()) parents_ok = false;
      if (!parents_ok) continue;
      const auto expected = instantiation_count(scm, dag.parents(v));
      const auto& cpt = *var.cpt;
      if (cpt.size() != expected) {
        add(v, "table-length", "cpt length " + std::to_string(cpt.size()) + " != " + std::to_string(expected));
        continue;
      }
      for (std::size_t row = 0; row < cpt.size(); ++row) {
        if (cpt[row] < 0 || cpt[row] >= var.cardinality()) {
          add(v, "determinism", "cpt row " + std::to_string(row) + " names state " + std::to_string(cpt[row]) +
                                    " outside 0.." + std::to_string(var.cardinality() - 1));
          break;
        }
      }
    }
  }
  return out;
}

void require_valid(const Scm& scm) {
  auto violations = validate(scm);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ModelError(v.variable, v.rule + " violation at " + v.variable + ": " + v.detail);
  }
}

Assignment resolve(const Scm& scm, const Evidence& evidence) {
  Assignment out;
  for (const auto& [name, state] : evidence) {
    VarId v = scm.dag.index_of(name);
    if (state < 0 || state >= scm.cardinality(v))
      throw ModelError(name, "state " + std::to_string(state) + " out of range for " + name);
    out[v] = state;
  }
  return out;
}

}  // namespace twinwidth
