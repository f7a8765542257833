#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "twinwidth/elimination.hpp"
#include "twinwidth/model.hpp"
#include "twinwidth/world.hpp"

namespace twinwidth {

enum class EdgeClass { Duplicated, Duplicate, Invariant, Bridge };

const char* to_string(EdgeClass c);
EdgeClass edge_class_from_string(const std::string& s);

/// Records how a multi-world jointree was derived from a base jointree.
/// Edges are indexed like the multi-world tree's edges.
struct LiftProvenance {
  WorldMap map;
  std::vector<EdgeClass> edge_class;
  std::vector<int> base_edge;   // -1 for bridge edges
  std::vector<int> edge_world;  // 1..N for duplicated/duplicate edges, 0 otherwise
  std::vector<int> base_node;   // per node, -1 for auxiliary nodes
  std::vector<int> node_world;  // per node, 1..N
};

/// Tree whose leaves host network families. Internal nodes host nothing.
struct Jointree {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, edge)
  std::vector<VarId> host;                            // hosted family child per node, -1 if none

  std::vector<std::string> var_names;
  std::vector<std::vector<VarId>> families;  // per variable, child first
  std::optional<LiftProvenance> lift;

  std::size_t node_count() const { return labels.size(); }
  std::size_t var_count() const { return var_names.size(); }
  int degree(int node) const { return static_cast<int>(adj[node].size()); }
  bool is_leaf(int node) const { return adj[node].size() <= 1; }
  int other_end(int edge, int node) const {
    return edges[edge].first == node ? edges[edge].second : edges[edge].first;
  }
  VarSet family_set(VarId child) const;
  std::vector<int> hosts_of(VarId child) const;

  int add_node(std::string label, VarId hosted = -1);
  int add_edge(int a, int b);
  /// Replaces edge (a,b) by a-m-b for a fresh node m; returns m. The edge
  /// index is reused for (a,m).
  int split_edge(int edge, std::string label);

  /// Jointree with no nodes over the variables and families of `dag`.
  static Jointree over(const Dag& dag);
};

/// Problems with the jointree invariants; empty when valid.
std::vector<std::string> check_jointree(const Jointree& jt);

struct SeparatorAssignment {
  std::vector<VarSet> separators;  // per edge
  std::vector<VarSet> clusters;    // per node
  int width = -1;
  double normalized_width = 0.0;
};

/// Derives clusters and widths from per-edge separators.
SeparatorAssignment with_separators(const Jointree& jt, std::vector<VarSet> separators);

SeparatorAssignment classical_separators(const Jointree& jt);

/// Cluster tree of the elimination, one leaf per family, and pruning of
/// cluster nodes left hosting nothing.
Jointree jointree_from_order(const Dag& dag, const EliminationOrder& order);

/// Duplication of every subtree hosting only non-shared families, with
/// N-1 copies per subtree. Roots in `shared` must be roots of `base`.
Jointree make_nworld_jointree(const Jointree& jt, const Dag& base, const std::vector<bool>& shared, int worlds,
                              Naming naming = Naming::Caret);

/// Two worlds, all roots shared, primed names.
Jointree make_twin_jointree(const Jointree& jt, const Dag& base);

/// Multi-world separators computed from base separators by edge class.
/// Throws std::invalid_argument when the jointree carries no provenance.
SeparatorAssignment lift_separators(const SeparatorAssignment& base, const Jointree& lifted);
inline SeparatorAssignment twin_separators_direct(const SeparatorAssignment& base, const Jointree& twin) {
  return lift_separators(base, twin);
}

}  // namespace twinwidth
