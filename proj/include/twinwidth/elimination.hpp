#pragma once

#include <vector>

#include "twinwidth/model.hpp"
#include "twinwidth/world.hpp"

namespace twinwidth {

struct EliminationOrder {
  std::vector<VarId> sequence;
  friend bool operator==(const EliminationOrder&, const EliminationOrder&) = default;
};

struct ClusterSequence {
  std::vector<VarId> order;
  std::vector<VarSet> clusters;  // clusters[i] belongs to order[i]
  int width = -1;

  /// Cluster formed when `v` was eliminated.
  const VarSet& cluster_of(VarId v) const;
};

bool is_permutation(const EliminationOrder& order, std::size_t n);

/// Throws std::invalid_argument when `order` is not a permutation of g's nodes.
ClusterSequence eliminate(const MoralGraph& g, const EliminationOrder& order);
int order_width(const MoralGraph& g, const EliminationOrder& order);

/// Greedy minfill. Ties: smaller resulting cluster, then smaller name.
EliminationOrder minfill_order(const MoralGraph& g);

/// Replaces each base variable by its copies in world order; shared
/// variables are emitted once.
EliminationOrder lift_order(const EliminationOrder& base, const WorldMap& map);

/// Order over the twin_network layout of `base`.
EliminationOrder twin_order(const EliminationOrder& order, const Dag& base);

/// Order over the n_world_network layout of `base`. Throws when
/// `shared_roots` contains a non-root.
EliminationOrder n_world_order(const EliminationOrder& order, const Dag& base, const std::vector<VarId>& shared_roots,
                               int worlds);

class GraphTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum width over all elimination orders. Throws GraphTooLarge above
/// `node_limit` nodes (hard maximum 64).
int exact_treewidth(const MoralGraph& g, int node_limit = 12);

}  // namespace twinwidth
