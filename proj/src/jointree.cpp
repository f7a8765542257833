#include "twinwidth/jointree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace twinwidth {

const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::Duplicated: return "duplicated";
    case EdgeClass::Duplicate: return "duplicate";
    case EdgeClass::Invariant: return "invariant";
    case EdgeClass::Bridge: return "bridge";
  }
  return "?";
}

EdgeClass edge_class_from_string(const std::string& s) {
  if (s == "duplicated") return EdgeClass::Duplicated;
  if (s == "duplicate") return EdgeClass::Duplicate;
  if (s == "invariant") return EdgeClass::Invariant;
  if (s == "bridge") return EdgeClass::Bridge;
  throw std::invalid_argument("unknown edge class '" + s + "'");
}

VarSet Jointree::family_set(VarId child) const { return make_set(var_count(), families.at(child)); }

std::vector<int> Jointree::hosts_of(VarId child) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < host.size(); ++i)
    if (host[i] == child) out.push_back(static_cast<int>(i));
  return out;
}

int Jointree::add_node(std::string label, VarId hosted) {
  labels.push_back(std::move(label));
  host.push_back(hosted);
  adj.emplace_back();
  return static_cast<int>(labels.size()) - 1;
}

int Jointree::add_edge(int a, int b) {
  const int e = static_cast<int>(edges.size());
  edges.emplace_back(a, b);
  adj[a].emplace_back(b, e);
  adj[b].emplace_back(a, e);
  return e;
}

int Jointree::split_edge(int edge, std::string label) {
  const auto [a, b] = edges.at(edge);
  const int m = add_node(std::move(label));
  const int f = static_cast<int>(edges.size());
  edges[edge] = {a, m};
  edges.emplace_back(m, b);
  for (auto& [nb, e] : adj[a])
    if (e == edge) nb = m;
  for (auto& [nb, e] : adj[b])
    if (e == edge) nb = m, e = f;
  adj[m] = {{a, edge}, {b, f}};
  return m;
}

Jointree Jointree::over(const Dag& dag) {
  Jointree jt;
  jt.var_names = dag.names();
  jt.families.reserve(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v) jt.families.push_back(family_of(dag, static_cast<VarId>(v)).members);
  return jt;
}

std::vector<std::string> check_jointree(const Jointree& jt) {
  std::vector<std::string> problems;
  const auto n = jt.node_count();
  if (n == 0) {
    if (jt.var_count() > 0) problems.push_back("empty tree for a non-empty network");
    return problems;
  }
  if (jt.edges.size() != n - 1) problems.push_back("edge count is not node count - 1");
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t reached = 0;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    ++reached;
    for (auto [v, e] : jt.adj[u]) {
      if (jt.other_end(e, u) != v) problems.push_back("adjacency disagrees with edge list at node " + jt.labels[u]);
      if (!seen[v]) seen[v] = true, stack.push_back(v);
    }
  }
  if (reached != n) problems.push_back("tree is not connected");
  std::vector<int> host_count(jt.var_count(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto node = static_cast<int>(i);
    if (jt.host[i] >= 0) {
      if (!jt.is_leaf(node)) problems.push_back("internal node " + jt.labels[i] + " hosts a family");
      ++host_count.at(jt.host[i]);
    } else if (jt.is_leaf(node)) {
      problems.push_back("leaf " + jt.labels[i] + " hosts no family");
    }
  }
  for (std::size_t v = 0; v < jt.var_count(); ++v)
    if (host_count[v] == 0) problems.push_back("family of " + jt.var_names[v] + " is not hosted");
  return problems;
}

SeparatorAssignment with_separators(const Jointree& jt, std::vector<VarSet> separators) {
  SeparatorAssignment sa;
  sa.separators = std::move(separators);
  sa.clusters.assign(jt.node_count(), VarSet(jt.var_count()));
  double peak = 0.0;
  for (std::size_t i = 0; i < jt.node_count(); ++i) {
    if (jt.host[i] >= 0) {
      sa.clusters[i] = jt.family_set(jt.host[i]);
    } else {
      for (auto [nb, e] : jt.adj[i]) sa.clusters[i] |= sa.separators[e];
    }
    const auto size = static_cast<int>(sa.clusters[i].count());
    sa.width = std::max(sa.width, size - 1);
    peak = std::max(peak, static_cast<double>(size));
  }
  double acc = 0.0;
  for (const auto& c : sa.clusters) acc += std::exp2(static_cast<double>(c.count()) - peak);
  sa.normalized_width = jt.node_count() ? peak + std::log2(acc) : 0.0;
  return sa;
}

namespace {

struct RootedTree {
  std::vector<int> parent, parent_edge, preorder;
  std::vector<std::vector<int>> children;
};

RootedTree root_at(const Jointree& jt, int root) {
  RootedTree t;
  const auto n = jt.node_count();
  t.parent.assign(n, -1);
  t.parent_edge.assign(n, -1);
  t.children.assign(n, {});
  std::vector<int> stack{root};
  std::vector<bool> seen(n, false);
  seen[root] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    t.preorder.push_back(u);
    for (auto [v, e] : jt.adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      t.parent[v] = u;
      t.parent_edge[v] = e;
      t.children[u].push_back(v);
      stack.push_back(v);
    }
  }
  for (auto& c : t.children) std::sort(c.begin(), c.end());
  return t;
}

}  // namespace

SeparatorAssignment classical_separators(const Jointree& jt) {
  const auto n = jt.node_count();
  std::vector<VarSet> seps(jt.edges.size(), VarSet(jt.var_count()));
  if (n == 0) return with_separators(jt, std::move(seps));
  const auto t = root_at(jt, 0);
  std::vector<VarSet> own(n, VarSet(jt.var_count()));
  for (std::size_t i = 0; i < n; ++i)
    if (jt.host[i] >= 0) own[i] = jt.family_set(jt.host[i]);

  std::vector<VarSet> below = own;
  for (auto it = t.preorder.rbegin(); it != t.preorder.rend(); ++it)
    if (t.parent[*it] >= 0) below[t.parent[*it]] |= below[*it];

  std::vector<VarSet> above(n, VarSet(jt.var_count()));
  for (int p : t.preorder) {
    const auto& ch = t.children[p];
    if (ch.empty()) continue;
    // suffix unions of the children's subtrees
    std::vector<VarSet> suffix(ch.size() + 1, VarSet(jt.var_count()));
    for (std::size_t i = ch.size(); i-- > 0;) suffix[i] = suffix[i + 1] | below[ch[i]];
    VarSet prefix = above[p] | own[p];
    for (std::size_t i = 0; i < ch.size(); ++i) {
      above[ch[i]] = prefix | suffix[i + 1];
      prefix |= below[ch[i]];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (t.parent_edge[i] >= 0) seps[t.parent_edge[i]] = below[i] & above[i];
  return with_separators(jt, std::move(seps));
}

Jointree jointree_from_order(const Dag& dag, const EliminationOrder& order) {
  const auto n = dag.size();
  Jointree jt = Jointree::over(dag);
  if (n == 0) return jt;
  const auto cs = eliminate(moral_graph(dag), order);
  std::vector<int> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order.sequence[i]] = static_cast<int>(i);

  // nodes 0..n-1 are clusters, n..2n-1 are family leaves
  std::vector<std::set<int>> nb(2 * n);
  auto link = [&](int a, int b) { nb[a].insert(b), nb[b].insert(a); };
  int previous_root = -1;
  for (std::size_t i = 0; i < n; ++i) {
    int next = -1;
    for (auto v = cs.clusters[i].find_first(); v != VarSet::npos; v = cs.clusters[i].find_next(v)) {
      if (static_cast<VarId>(v) == order.sequence[i]) continue;
      if (next < 0 || pos[v] < next) next = pos[v];
    }
    if (next >= 0) {
      link(static_cast<int>(i), next);
    } else {
      if (previous_root >= 0) link(previous_root, static_cast<int>(i));
      previous_root = static_cast<int>(i);
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    int first = -1;
    for (VarId u : jt.families[v]) first = first < 0 ? pos[u] : std::min(first, pos[u]);
    link(static_cast<int>(n + v), first);
  }

  std::vector<bool> removed(2 * n, false);
  std::vector<int> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (nb[i].size() <= 1) queue.push_back(static_cast<int>(i));
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    if (removed[u] || nb[u].size() > 1) continue;
    removed[u] = true;
    for (int v : nb[u]) {
      nb[v].erase(u);
      if (v < static_cast<int>(n) && nb[v].size() <= 1) queue.push_back(v);
    }
    nb[u].clear();
  }

  std::vector<int> id(2 * n, -1);
  for (std::size_t u = 0; u < 2 * n; ++u) {
    if (removed[u]) continue;
    const VarId hosted = u >= n ? static_cast<VarId>(u - n) : -1;
    id[u] = jt.add_node(std::to_string(jt.node_count()), hosted);
  }
  for (std::size_t u = 0; u < 2 * n; ++u)
    for (int v : nb[u])
      if (static_cast<int>(u) < v) jt.add_edge(id[u], id[v]);
  return jt;
}

Jointree make_nworld_jointree(const Jointree& jt, const Dag& base, const std::vector<bool>& shared, int worlds,
                              Naming naming) {
  const WorldMap map = make_world_map(shared, worlds);
  Jointree out = Jointree::over(world_dag(base, map, naming));
  LiftProvenance prov;
  prov.map = map;
  if (jt.node_count() == 0) {
    out.lift = std::move(prov);
    return out;
  }

  // Work on a copy in which a two-node tree gains a middle node, so that an
  // internal node exists to act as root. base_of_edge maps back to jt.
  Jointree b = jt;
  std::vector<int> base_of_edge(b.edges.size());
  for (std::size_t e = 0; e < b.edges.size(); ++e) base_of_edge[e] = static_cast<int>(e);
  std::vector<int> base_of_node(b.node_count());
  for (std::size_t i = 0; i < b.node_count(); ++i) base_of_node[i] = static_cast<int>(i);
  if (b.node_count() == 2) {
    b.split_edge(0, "aux");
    base_of_edge.push_back(0);
    base_of_node.push_back(-1);
  }

  auto emit_node = [&](int node, int world) {
    const VarId h = b.host[node];
    const int id = out.add_node(world_name(b.labels[node], world, naming), h >= 0 ? map.copy(h, world) : -1);
    prov.base_node.push_back(base_of_node[node]);
    prov.node_world.push_back(world);
    return id;
  };
  auto emit_edge = [&](int a, int c, EdgeClass cls, int base_edge, int world) {
    const int e = out.add_edge(a, c);
    prov.edge_class.push_back(cls);
    prov.base_edge.push_back(base_edge);
    prov.edge_world.push_back(world);
    return e;
  };

  for (std::size_t i = 0; i < b.node_count(); ++i) emit_node(static_cast<int>(i), 1);
  for (std::size_t e = 0; e < b.edges.size(); ++e)
    emit_edge(b.edges[e].first, b.edges[e].second, EdgeClass::Invariant, base_of_edge[e], 0);

  if (b.node_count() == 1) {
    if (!shared.at(b.host[0]) && worlds > 1) {
      const int hub = out.add_node("hub");
      prov.base_node.push_back(-1);
      prov.node_world.push_back(1);
      emit_edge(hub, 0, EdgeClass::Bridge, -1, 0);
      for (int k = 2; k <= worlds; ++k) emit_edge(hub, emit_node(0, k), EdgeClass::Bridge, -1, 0);
    }
    out.lift = std::move(prov);
    return out;
  }

  int root = 0;
  while (b.is_leaf(root)) ++root;
  const auto t = root_at(b, root);
  const auto n = b.node_count();
  std::vector<bool> has_shared(n, false), has_private(n, false);
  for (auto it = t.preorder.rbegin(); it != t.preorder.rend(); ++it) {
    const int u = *it;
    if (b.host[u] >= 0) (shared.at(b.host[u]) ? has_shared : has_private)[u] = true;
    if (t.parent[u] >= 0) {
      if (has_shared[u]) has_shared[t.parent[u]] = true;
      if (has_private[u]) has_private[t.parent[u]] = true;
    }
  }

  auto duplicate = [&](int r, int p) {
    std::vector<int> subtree{r};
    for (std::size_t i = 0; i < subtree.size(); ++i)
      for (int c : t.children[subtree[i]]) subtree.push_back(c);
    for (int u : subtree) {
      if (u == r && p < 0) continue;
      const int e = t.parent_edge[u];
      prov.edge_class[e] = EdgeClass::Duplicated;
      prov.edge_world[e] = 1;
    }
    for (int k = 2; k <= worlds; ++k) {
      std::vector<int> copy(n, -1);
      for (int u : subtree) copy[u] = emit_node(u, k);
      for (int u : subtree) {
        if (u == r) continue;
        const int e = t.parent_edge[u];
        emit_edge(copy[t.parent[u]], copy[u], EdgeClass::Duplicate, base_of_edge[e], k);
      }
      if (p >= 0) {
        emit_edge(p, copy[r], EdgeClass::Duplicate, base_of_edge[t.parent_edge[r]], k);
      } else {
        emit_edge(r, copy[r], EdgeClass::Bridge, -1, 0);
      }
    }
  };

  std::function<void(int, int)> visit = [&](int r, int p) {
    if (!has_private[r]) return;
    if (!has_shared[r]) {
      duplicate(r, p);
      return;
    }
    for (int c : t.children[r]) visit(c, r);
  };
  visit(root, -1);
  out.lift = std::move(prov);
  return out;
}

Jointree make_twin_jointree(const Jointree& jt, const Dag& base) {
  std::vector<bool> shared(base.size());
  for (std::size_t v = 0; v < base.size(); ++v) shared[v] = base.is_root(static_cast<VarId>(v));
  return make_nworld_jointree(jt, base, shared, 2, Naming::Prime);
}

SeparatorAssignment lift_separators(const SeparatorAssignment& base, const Jointree& lifted) {
  if (!lifted.lift) throw std::invalid_argument("jointree has no edge classes");
  const auto& prov = *lifted.lift;
  std::vector<VarSet> seps(lifted.edges.size(), VarSet(lifted.var_count()));
  for (std::size_t e = 0; e < lifted.edges.size(); ++e) {
    const int be = prov.base_edge[e];
    switch (prov.edge_class[e]) {
      case EdgeClass::Duplicated:
      case EdgeClass::Duplicate:
        seps[e] = prov.map.in_world(base.separators.at(be), prov.edge_world[e]);
        break;
      case EdgeClass::Invariant:
        seps[e] = prov.map.in_all_worlds(base.separators.at(be));
        break;
      case EdgeClass::Bridge:
        break;
    }
  }
  return with_separators(lifted, std::move(seps));
}

}  // namespace twinwidth
