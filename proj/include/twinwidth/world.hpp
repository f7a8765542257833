#pragma once

#include <utility>
#include <vector>

#include "twinwidth/model.hpp"

namespace twinwidth {

struct MoralGraph {
  std::vector<std::string> names;
  std::vector<VarSet> adj;

  std::size_t size() const { return adj.size(); }
  bool has_edge(VarId u, VarId v) const { return adj[u].test(static_cast<std::size_t>(v)); }
  void add_edge(VarId u, VarId v);
  std::size_t edge_count() const;
  static MoralGraph empty(std::vector<std::string> names);
};

MoralGraph moral_graph(const Dag& dag);

/// How world copies are named. World 1 always keeps the base name.
enum class Naming { Prime, Caret };

std::string world_name(const std::string& base, int world, Naming naming);

/// Correspondence between base variables and the variables of a
/// multi-world network. Worlds are numbered 1..worlds.
struct WorldMap {
  int worlds = 1;
  std::vector<bool> shared;                // per base variable
  std::vector<std::vector<VarId>> copies;  // copies[base][world - 1]
  std::vector<VarId> base_of;              // per network variable
  std::vector<int> world_of;               // per network variable, 0 when shared

  std::size_t base_size() const { return shared.size(); }
  std::size_t network_size() const { return base_of.size(); }
  VarId copy(VarId base, int world) const { return copies.at(base).at(world - 1); }
  /// Image of a base variable set in one world.
  VarSet in_world(const VarSet& base_set, int world) const;
  /// Union of the images over every world.
  VarSet in_all_worlds(const VarSet& base_set) const;

  friend bool operator==(const WorldMap&, const WorldMap&) = default;
};

/// Layout used by every multi-world construction: base variables in order,
/// each emitting its single shared node or its copies for worlds 1..N.
WorldMap make_world_map(const std::vector<bool>& shared, int worlds);

/// Multi-world structure for `map`: a copy in world w gets the world-w
/// copies of its base parents; a shared variable with non-shared parents
/// gets every copy of those parents.
Dag world_dag(const Dag& base, const WorldMap& map, Naming naming);

std::pair<Scm, WorldMap> twin_network(const Scm& scm);

/// Throws ModelError when `shared_roots` names a non-root.
std::pair<Scm, WorldMap> n_world_network(const Scm& scm, const std::vector<VarId>& shared_roots, int worlds);

struct CrossEdge {
  VarId var;
  int from;  // world index, must be < to
  int to;
};

/// Structure only. Variables outside `duplicated` appear once; when such a
/// variable has a duplicated parent, it receives every copy as a parent.
std::pair<Dag, WorldMap> generalized_n_world(const Dag& dag, const std::vector<VarId>& duplicated, int worlds,
                                             const std::vector<CrossEdge>& cross_edges);

Scm mutilate(const Scm& scm, const Assignment& interventions);
Scm mutilate(const Scm& scm, const Evidence& interventions);

}  // namespace twinwidth
