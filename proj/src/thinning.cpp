#include "twinwidth/thinning.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace twinwidth {

VarSet internal_set(const Dag& dag) {
  VarSet s(dag.size());
  for (VarId v : dag.internals()) s.set(static_cast<std::size_t>(v));
  return s;
}

namespace {

// Hangs a new leaf hosting `family` next to leaf `target`; returns the leaf.
int attach_replica(Jointree& jt, int target, VarId family, int& counter) {
  const std::string tag = std::to_string(counter++);
  int middle;
  if (jt.adj[target].empty()) {
    middle = jt.add_node("m" + tag);
    jt.add_edge(target, middle);
  } else {
    middle = jt.split_edge(jt.adj[target].front().second, "m" + tag);
  }
  const int leaf = jt.add_node("r" + tag, family);
  jt.add_edge(middle, leaf);
  return leaf;
}

}  // namespace

Jointree replicate(const Jointree& jt, const VarSet& functional, int chain_bound) {
  Jointree out = jt;
  out.lift.reset();
  if (chain_bound <= 0) return out;
  int counter = 0;
  const auto original_nodes = static_cast<int>(jt.node_count());
  const std::size_t budget = jt.var_count() * jt.var_count();
  for (int l = 0; l < original_nodes; ++l) {
    const VarId y = jt.host[l];
    if (y < 0 || !functional.test(static_cast<std::size_t>(y))) continue;
    // (variable, node hosting its child's family, chain length)
    std::deque<std::tuple<VarId, int, int>> queue;
    auto push_parents = [&](VarId child, int at, int depth) {
      if (depth > chain_bound) return;
      const auto& fam = jt.families[child];
      for (std::size_t i = 1; i < fam.size(); ++i)
        if (functional.test(static_cast<std::size_t>(fam[i]))) queue.emplace_back(fam[i], at, depth);
    };
    push_parents(y, l, 1);
    for (std::size_t placed = 0; !queue.empty() && placed < budget; ++placed) {
      auto [v, at, depth] = queue.front();
      queue.pop_front();
      const int leaf = attach_replica(out, at, v, counter);
      push_parents(v, leaf, depth + 1);
    }
  }
  return out;
}

namespace {

// Removal state of one variable across the edges whose separator holds it.
class VariableForest {
 public:
  VariableForest(const Jointree& jt, const std::vector<VarSet>& seps, VarId x) : jt_(jt), x_(x) {
    const auto n = jt.node_count();
    alive_.assign(jt.edges.size(), false);
    for (std::size_t e = 0; e < seps.size(); ++e)
      if (seps[e].test(static_cast<std::size_t>(x))) alive_[e] = true, edges_.push_back(static_cast<int>(e));
    parent_.assign(n, -1);
    parent_edge_.assign(n, -1);
    count_.assign(n, 0);
    degree_.assign(n, 0);
    for (int e : edges_) ++degree_[jt.edges[e].first], ++degree_[jt.edges[e].second];
    std::vector<bool> seen(n, false);
    std::vector<int> order;
    for (int e : edges_) {
      const int start = jt.edges[e].first;
      if (seen[start]) continue;
      seen[start] = true;
      std::vector<int> stack{start};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (auto [v, f] : jt.adj[u]) {
          if (!alive_[f] || seen[v]) continue;
          seen[v] = true;
          parent_[v] = u;
          parent_edge_[v] = f;
          stack.push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (jt.host[*it] == x) ++count_[*it];
      if (parent_[*it] >= 0) count_[parent_[*it]] += count_[*it];
    }
  }

  const std::vector<int>& edges() const { return edges_; }
  bool alive(int e) const { return alive_[e]; }
  int degree(int node) const { return degree_[node]; }

  // Child endpoint of an alive edge in the rooted forest.
  int child_of(int e) const {
    const auto [a, b] = jt_.edges[e];
    return parent_edge_[a] == e ? a : b;
  }

  int component_root(int u) const {
    while (parent_edge_[u] >= 0 && alive_[parent_edge_[u]]) u = parent_[u];
    return u;
  }

  // Both sides of e hold a host of f_x.
  bool splits_hosts(int e) const {
    const int c = child_of(e);
    const int below = count_[c];
    const int total = count_[component_root(parent_[c])];
    return below > 0 && total - below > 0;
  }

  void cut(int e) {
    const int c = child_of(e);
    const int moved = count_[c];
    alive_[e] = false;
    --degree_[jt_.edges[e].first];
    --degree_[jt_.edges[e].second];
    for (int u = parent_[c];; u = parent_[u]) {
      count_[u] -= moved;
      if (parent_edge_[u] < 0 || !alive_[parent_edge_[u]]) break;
    }
  }

  // Path between hosts of f_x through e (which must still be alive).
  std::vector<int> witness(int e) const {
    const auto [a, b] = jt_.edges[e];
    auto side = reach_host(a, e);
    auto other = reach_host(b, e);
    std::reverse(side.begin(), side.end());
    side.insert(side.end(), other.begin(), other.end());
    return side;
  }

 private:
  // Path from `from` to the nearest host of f_x, not crossing edge `banned`.
  std::vector<int> reach_host(int from, int banned) const {
    std::vector<int> prev(jt_.node_count(), -2);
    std::deque<int> queue{from};
    prev[from] = -1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      if (jt_.host[u] == x_) {
        std::vector<int> path;
        for (int v = u; v >= 0; v = prev[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (auto [v, f] : jt_.adj[u]) {
        if (f == banned || !alive_[f] || prev[v] != -2) continue;
        prev[v] = u;
        queue.push_back(v);
      }
    }
    return {from};
  }

  const Jointree& jt_;
  VarId x_;
  std::vector<int> edges_;
  std::vector<bool> alive_;
  std::vector<int> parent_, parent_edge_, count_, degree_;
};

std::vector<int> canonical_edge_order(const Jointree& jt) {
  std::vector<int> order(jt.edges.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int e) {
    auto [a, b] = jt.edges[e];
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  std::sort(order.begin(), order.end(), [&](int x, int y) { return key(x) < key(y); });
  return order;
}

}  // namespace

ThinnedJointree thin(const Jointree& jt, const VarSet& functional, const SeparatorAssignment& separators) {
  ThinnedJointree out;
  out.jointree = jt;
  out.functional = functional;
  std::vector<VarSet> seps = separators.separators;
  const auto order = canonical_edge_order(jt);
  std::vector<int> rank(jt.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

  // Removals of one variable never change the rule conditions of another,
  // so sweeping variable by variable reaches the same fixpoint as
  // interleaved sweeps.
  for (auto x = functional.find_first(); x != VarSet::npos; x = functional.find_next(x)) {
    const auto var = static_cast<VarId>(x);
    VariableForest forest(jt, seps, var);
    if (forest.edges().empty()) continue;
    std::vector<int> edges = forest.edges();
    std::sort(edges.begin(), edges.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    for (bool changed = true; changed;) {
      changed = false;
      for (int e : edges) {
        if (!forest.alive(e)) continue;
        if (forest.splits_hosts(e)) {
          out.log.push_back({e, var, 1, forest.witness(e)});
          forest.cut(e);
          seps[e].reset(x);
          changed = true;
          continue;
        }
        auto [a, b] = jt.edges[e];
        for (int end : {std::min(a, b), std::max(a, b)}) {
          if (jt.is_leaf(end) || forest.degree(end) != 1) continue;
          out.log.push_back({e, var, 2, {end}});
          forest.cut(e);
          seps[e].reset(x);
          changed = true;
          break;
        }
      }
    }
  }
  out.thinned = with_separators(jt, std::move(seps));
  return out;
}

ThinnedJointree thin(const Jointree& jt, const VarSet& functional) {
  return thin(jt, functional, classical_separators(jt));
}

std::string replay_thinning(const Jointree& jt, const SeparatorAssignment& start, const std::vector<ThinningStep>& log,
                            const SeparatorAssignment& thinned) {
  std::vector<VarSet> seps = start.separators;
  auto holds = [&](int e, VarId x) { return seps[e].test(static_cast<std::size_t>(x)); };
  for (std::size_t s = 0; s < log.size(); ++s) {
    const auto& step = log[s];
    const std::string where = "step " + std::to_string(s) + ": ";
    if (step.edge < 0 || static_cast<std::size_t>(step.edge) >= jt.edges.size()) return where + "bad edge";
    if (!holds(step.edge, step.var)) return where + "variable already absent";
    const auto [a, b] = jt.edges[step.edge];
    if (step.rule == 1) {
      const auto& path = step.witness;
      if (path.size() < 2) return where + "witness too short";
      if (jt.host[path.front()] != step.var || jt.host[path.back()] != step.var)
        return where + "witness ends are not hosts of the family";
      bool crosses = false;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int edge = -1;
        for (auto [v, f] : jt.adj[path[i]])
          if (v == path[i + 1]) edge = f;
        if (edge < 0) return where + "witness is not a path";
        if (!holds(edge, step.var)) return where + "witness separator lacks the variable";
        if (edge == step.edge) crosses = true;
      }
      if (!crosses) return where + "edge not on witness path";
    } else if (step.rule == 2) {
      if (step.witness.size() != 1) return where + "rule 2 witness must be one node";
      const int end = step.witness[0];
      if (end != a && end != b) return where + "witness is not an endpoint";
      if (jt.is_leaf(end)) return where + "rule 2 at a leaf";
      for (auto [v, f] : jt.adj[end])
        if (f != step.edge && holds(f, step.var)) return where + "another separator at the endpoint holds the variable";
    } else {
      return where + "unknown rule";
    }
    seps[step.edge].reset(static_cast<std::size_t>(step.var));
  }
  for (std::size_t e = 0; e < seps.size(); ++e)
    if (seps[e] != thinned.separators.at(e)) return "replayed separators differ at edge " + std::to_string(e);
  return {};
}

ThinnedJointree thinned_twin_separators(const ThinnedJointree& base, const Jointree& lifted) {
  ThinnedJointree out;
  out.jointree = lifted;
  out.thinned = lift_separators(base.thinned, lifted);
  out.functional = lifted.lift->map.in_all_worlds(base.functional);
  return out;
}

WidthReport causal_width_report(const Dag& dag, const VarSet& functional, int chain_bound,
                                const EliminationOrder& order) {
  WidthReport r;
  const Jointree jt = jointree_from_order(dag, order);
  r.classical = classical_separators(jt).width;
  const Jointree rep = replicate(jt, functional, chain_bound);
  const auto seps = classical_separators(rep);
  r.replicated = seps.width;
  r.thinned = thin(rep, functional, seps).thinned.width;
  return r;
}

}  // namespace twinwidth
