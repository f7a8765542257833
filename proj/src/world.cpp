#include "twinwidth/world.hpp"

#include <algorithm>

namespace twinwidth {

void MoralGraph::add_edge(VarId u, VarId v) {
  if (u == v) return;
  adj[u].set(static_cast<std::size_t>(v));
  adj[v].set(static_cast<std::size_t>(u));
}

std::size_t MoralGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adj) twice += a.count();
  return twice / 2;
}

MoralGraph MoralGraph::empty(std::vector<std::string> names) {
  MoralGraph g;
  g.adj.assign(names.size(), VarSet(names.size()));
  g.names = std::move(names);
  return g;
}

MoralGraph moral_graph(const Dag& dag) {
  MoralGraph g = MoralGraph::empty(dag.names());
  for (std::size_t c = 0; c < dag.size(); ++c) {
    const auto& ps = dag.parents(static_cast<VarId>(c));
    for (std::size_t i = 0; i < ps.size(); ++i) {
      g.add_edge(ps[i], static_cast<VarId>(c));
      for (std::size_t j = i + 1; j < ps.size(); ++j) g.add_edge(ps[i], ps[j]);
    }
  }
  return g;
}

std::string world_name(const std::string& base, int world, Naming naming) {
  if (world <= 1) return base;
  if (naming == Naming::Prime) return base + std::string(static_cast<std::size_t>(world - 1), '\'');
  return base + "^" + std::to_string(world);
}

VarSet WorldMap::in_world(const VarSet& base_set, int world) const {
  VarSet out(network_size());
  for (auto i = base_set.find_first(); i != VarSet::npos; i = base_set.find_next(i))
    out.set(static_cast<std::size_t>(copies[i][world - 1]));
  return out;
}

VarSet WorldMap::in_all_worlds(const VarSet& base_set) const {
  VarSet out(network_size());
  for (auto i = base_set.find_first(); i != VarSet::npos; i = base_set.find_next(i))
    for (VarId c : copies[i]) out.set(static_cast<std::size_t>(c));
  return out;
}

WorldMap make_world_map(const std::vector<bool>& shared, int worlds) {
  if (worlds < 1) throw std::invalid_argument("world count must be positive");
  WorldMap m;
  m.worlds = worlds;
  m.shared = shared;
  m.copies.resize(shared.size());
  for (std::size_t b = 0; b < shared.size(); ++b) {
    if (shared[b]) {
      const auto id = static_cast<VarId>(m.base_of.size());
      m.copies[b].assign(static_cast<std::size_t>(worlds), id);
      m.base_of.push_back(static_cast<VarId>(b));
      m.world_of.push_back(0);
    } else {
      for (int w = 1; w <= worlds; ++w) {
        m.copies[b].push_back(static_cast<VarId>(m.base_of.size()));
        m.base_of.push_back(static_cast<VarId>(b));
        m.world_of.push_back(w);
      }
    }
  }
  return m;
}

Dag world_dag(const Dag& base, const WorldMap& map, Naming naming) {
  Dag out;
  for (std::size_t v = 0; v < map.network_size(); ++v) {
    const VarId b = map.base_of[v];
    out.add_node(world_name(base.name(b), std::max(1, map.world_of[v]), naming));
  }
  for (std::size_t v = 0; v < map.network_size(); ++v) {
    const VarId b = map.base_of[v];
    const int w = map.world_of[v];
    for (VarId p : base.parents(b)) {
      if (w == 0 && !map.shared[p]) {
        for (VarId c : map.copies[p]) out.add_edge(c, static_cast<VarId>(v));
      } else {
        out.add_edge(map.copy(p, std::max(1, w)), static_cast<VarId>(v));
      }
    }
  }
  return out;
}

namespace {

std::pair<Scm, WorldMap> lift_scm(const Scm& scm, const std::vector<bool>& shared, int worlds, Naming naming) {
  WorldMap map = make_world_map(shared, worlds);
  Scm out;
  out.dag = world_dag(scm.dag, map, naming);
  out.vars.reserve(map.network_size());
  for (std::size_t v = 0; v < map.network_size(); ++v) out.vars.push_back(scm.vars[map.base_of[v]]);
  return {std::move(out), std::move(map)};
}

}  // namespace

std::pair<Scm, WorldMap> twin_network(const Scm& scm) {
  std::vector<bool> shared(scm.size());
  for (std::size_t v = 0; v < scm.size(); ++v) shared[v] = scm.dag.is_root(static_cast<VarId>(v));
  return lift_scm(scm, shared, 2, Naming::Prime);
}

std::pair<Scm, WorldMap> n_world_network(const Scm& scm, const std::vector<VarId>& shared_roots, int worlds) {
  if (worlds < 1) throw std::invalid_argument("world count must be positive");
  std::vector<bool> shared(scm.size(), false);
  for (VarId r : shared_roots) {
    if (r < 0 || static_cast<std::size_t>(r) >= scm.size())
      throw ModelError(std::to_string(r), "shared root index out of range");
    if (!scm.dag.is_root(r)) throw ModelError(scm.dag.name(r), scm.dag.name(r) + " is not a root");
    shared[r] = true;
  }
  return lift_scm(scm, shared, worlds, Naming::Caret);
}

std::pair<Dag, WorldMap> generalized_n_world(const Dag& dag, const std::vector<VarId>& duplicated, int worlds,
                                             const std::vector<CrossEdge>& cross_edges) {
  std::vector<bool> shared(dag.size(), true);
  for (VarId v : duplicated) shared.at(v) = false;
  WorldMap map = make_world_map(shared, worlds);
  Dag out = world_dag(dag, map, Naming::Caret);
  for (const auto& e : cross_edges) {
    if (e.var < 0 || static_cast<std::size_t>(e.var) >= dag.size())
      throw ModelError(std::to_string(e.var), "cross edge on unknown variable");
    if (shared[e.var]) throw ModelError(dag.name(e.var), "cross edge on non-duplicated variable " + dag.name(e.var));
    if (e.from >= e.to || e.from < 1 || e.to > worlds)
      throw ModelError(dag.name(e.var), "cross edge must go from a lower to a higher world");
    const VarId child = map.copy(e.var, e.to);
    const VarId parent = map.copy(e.var, e.from);
    const auto& ps = out.parents(child);
    if (std::find(ps.begin(), ps.end(), parent) == ps.end()) out.add_edge(parent, child);
  }
  return {std::move(out), std::move(map)};
}

Scm mutilate(const Scm& scm, const Assignment& interventions) {
  Scm out = scm;
  for (const auto& [v, state] : interventions) {
    if (v < 0 || static_cast<std::size_t>(v) >= scm.size())
      throw ModelError(std::to_string(v), "unknown intervention variable");
    if (state < 0 || state >= scm.cardinality(v))
      throw ModelError(scm.dag.name(v), "intervention state out of range");
    out.dag.clear_parents(v);
    auto& var = out.vars[v];
    var.cpt.reset();
    var.functional = false;
    var.dist = std::vector<double>(static_cast<std::size_t>(var.cardinality()), 0.0);
    (*var.dist)[static_cast<std::size_t>(state)] = 1.0;
  }
  return out;
}

Scm mutilate(const Scm& scm, const Evidence& interventions) { return mutilate(scm, resolve(scm, interventions)); }

}  // namespace twinwidth
