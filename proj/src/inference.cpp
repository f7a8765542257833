#include "twinwidth/inference.hpp"

#include <algorithm>
#include <cmath>

#include "twinwidth/thinning.hpp"

namespace twinwidth {

namespace {

constexpr double kBeliefTolerance = 1e-9;

// Merges two assignments; nullopt when they disagree on a variable.
std::optional<Assignment> merge(const Assignment& a, const Assignment& b) {
  Assignment out = a;
  for (const auto& [v, s] : b) {
    auto [it, inserted] = out.emplace(v, s);
    if (!inserted && it->second != s) return std::nullopt;
  }
  return out;
}

InferenceResult finish(double joint, double pe, QueryMode mode, std::string method) {
  InferenceResult r;
  r.joint = joint;
  r.evidence_probability = pe;
  r.method = std::move(method);
  if (mode == QueryMode::Conditional) {
    if (!(pe > 0.0)) throw InferenceError("evidence has probability zero");
    r.value = joint / pe;
  } else {
    r.value = joint;
  }
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

double ve_run(const Scm& net, const Assignment& assignment, const EliminationOrder& order, int width) {
  std::vector<Factor> pool;
  pool.reserve(net.size());
  for (std::size_t v = 0; v < net.size(); ++v) pool.push_back(reduce(family_factor(net, static_cast<VarId>(v)), assignment));
  for (VarId v : order.sequence) {
    Factor product = Factor::scalar(1.0);
    bool any = false;
    std::vector<Factor> rest;
    rest.reserve(pool.size());
    for (auto& f : pool) {
      if (f.contains(v)) {
        product = multiply(product, f);
        any = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    pool = std::move(rest);
    if (!any) continue;
    if (static_cast<int>(product.scope.size()) > width + 1)
      throw std::logic_error("variable elimination produced a factor wider than the order");
    pool.push_back(sum_out(product, v));
  }
  double result = 1.0;
  for (const auto& f : pool) result *= f.total();
  return result;
}

}  // namespace

InferenceResult ve_query(const Scm& net, const Assignment& evidence, const EliminationOrder& order,
                         const Assignment& target, QueryMode mode) {
  const int width = order_width(moral_graph(net.dag), order);
  const double pe = ve_run(net, evidence, order, width);
  const auto both = merge(evidence, target);
  const double joint = both ? ve_run(net, *both, order, width) : 0.0;
  return finish(joint, pe, mode, "ve");
}

namespace {

class Propagator {
 public:
  Propagator(const Jointree& jt, const SeparatorAssignment& seps, const Scm& net) : jt_(jt), seps_(seps) {
    if (jt.var_count() != net.size()) throw std::invalid_argument("jointree and network sizes differ");
    const auto n = jt.node_count();
    if (n == 0) throw std::invalid_argument("empty jointree");
    potentials_.assign(n, Factor::scalar(1.0));
    std::vector<std::vector<int>> hosts(net.size());
    for (std::size_t i = 0; i < n; ++i)
      if (jt.host[i] >= 0) hosts[jt.host[i]].push_back(static_cast<int>(i));
    for (std::size_t v = 0; v < net.size(); ++v) {
      const auto vid = static_cast<VarId>(v);
      if (hosts[v].empty()) throw std::invalid_argument("family of " + net.dag.name(vid) + " is not hosted");
      const VarSet allowed = jt.family_set(vid);
      for (VarId u : family_of(net.dag, vid).members)
        if (!allowed.test(static_cast<std::size_t>(u)))
          throw std::invalid_argument("family of " + net.dag.name(vid) + " does not fit its host");
      const Factor f = family_factor(net, vid);
      if (f.is_indicator()) {
        for (int h : hosts[v]) potentials_[h] = multiply(potentials_[h], f);
      } else {
        potentials_[hosts[v].front()] = multiply(potentials_[hosts[v].front()], f);
      }
    }
    // rooted view
    parent_.assign(n, -1);
    parent_edge_.assign(n, -1);
    children_.assign(n, {});
    std::vector<bool> seen(n, false);
    order_.push_back(0);
    seen[0] = true;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const int u = order_[i];
      for (auto [v, e] : jt.adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        parent_[v] = u;
        parent_edge_[v] = e;
        children_[u].push_back(v);
        order_.push_back(v);
      }
    }
  }

  double run(const Assignment& assignment) const {
    const auto n = jt_.node_count();
    std::vector<Factor> local(n);
    for (std::size_t i = 0; i < n; ++i) local[i] = reduce(potentials_[i], assignment);

    std::vector<Factor> up(n), down(n);
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const int u = *it;
      if (parent_[u] < 0) continue;
      Factor f = local[u];
      for (int c : children_[u]) f = multiply(f, up[c]);
      up[u] = send(f, parent_edge_[u]);
    }
    Factor root = local[order_[0]];
    for (int c : children_[order_[0]]) root = multiply(root, up[c]);
    const double z = root.total();

    for (int u : order_) {
      for (int c : children_[u]) {
        Factor f = local[u];
        if (parent_[u] >= 0) f = multiply(f, down[u]);
        for (int s : children_[u])
          if (s != c) f = multiply(f, up[s]);
        down[c] = send(f, parent_edge_[c]);
        Factor belief = multiply(local[c], down[c]);
        for (int g : children_[c]) belief = multiply(belief, up[g]);
        const double total = belief.total();
        if (std::abs(total - z) > kBeliefTolerance * std::max(1.0, std::abs(z)))
          throw std::logic_error("inconsistent belief at jointree node " + jt_.labels[c]);
      }
    }
    return z;
  }

 private:
  Factor send(const Factor& f, int edge) const {
    Factor m = project(f, seps_.separators[edge]);
    if (m.scope.size() > seps_.separators[edge].count()) throw std::logic_error("message exceeds its separator");
    return m;
  }

  const Jointree& jt_;
  const SeparatorAssignment& seps_;
  std::vector<Factor> potentials_;
  std::vector<int> parent_, parent_edge_, order_;
  std::vector<std::vector<int>> children_;
};

}  // namespace

InferenceResult jointree_propagate(const Jointree& jt, const SeparatorAssignment& separators, const Scm& net,
                                   const Assignment& evidence, const Assignment& target, QueryMode mode) {
  Propagator prop(jt, separators, net);
  const double pe = prop.run(evidence);
  const auto both = merge(evidence, target);
  const double joint = both ? prop.run(*both) : 0.0;
  return finish(joint, pe, mode, "jointree");
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::VE: return "ve";
    case Engine::Jointree: return "jointree";
    case Engine::JointreeThinned: return "jointree-thinned";
    case Engine::Oracle: return "oracle";
  }
  return "?";
}

Engine engine_from_string(const std::string& s) {
  if (s == "ve") return Engine::VE;
  if (s == "jointree") return Engine::Jointree;
  if (s == "jointree-thinned") return Engine::JointreeThinned;
  if (s == "oracle") return Engine::Oracle;
  throw std::invalid_argument("unknown engine '" + s + "'");
}

CounterfactualNetwork prepare_counterfactual(const Scm& scm, const CounterfactualQuery& q) {
  if (q.worlds < 1) throw ModelError("", "world count must be positive");
  const auto& dag = scm.dag;
  CounterfactualNetwork cn;
  cn.shared.assign(scm.size(), false);
  std::vector<VarId> shared_ids;
  if (q.shared_roots) {
    for (const auto& name : *q.shared_roots) {
      const VarId v = dag.index_of(name);
      if (!dag.is_root(v)) throw ModelError(name, name + " is not a root and cannot be shared");
      if (!cn.shared[v]) shared_ids.push_back(v);
      cn.shared[v] = true;
    }
  } else {
    shared_ids = dag.roots();
    for (VarId v : shared_ids) cn.shared[v] = true;
  }
  std::sort(shared_ids.begin(), shared_ids.end());
  cn.twin = q.worlds == 2 && shared_ids == dag.roots();
  auto built = cn.twin ? twin_network(scm) : n_world_network(scm, shared_ids, q.worlds);
  cn.naming = cn.twin ? Naming::Prime : Naming::Caret;
  cn.map = std::move(built.second);

  auto locate = [&](const WorldEvent& ev) {
    if (ev.world < 1 || ev.world > q.worlds)
      throw ModelError(ev.var, "world index " + std::to_string(ev.world) + " out of range 1.." + std::to_string(q.worlds));
    const VarId base = dag.index_of(ev.var);
    if (ev.state < 0 || ev.state >= scm.cardinality(base))
      throw ModelError(ev.var, "state " + std::to_string(ev.state) + " out of range for " + ev.var);
    return std::make_pair(base, cn.map.copy(base, ev.world));
  };

  Assignment interventions;
  for (const auto& ev : q.intervene) {
    auto [base, id] = locate(ev);
    if (cn.shared[base]) throw ModelError(ev.var, "cannot intervene on shared root " + ev.var);
    auto [it, inserted] = interventions.emplace(id, ev.state);
    if (!inserted && it->second != ev.state) throw ModelError(ev.var, "conflicting interventions on " + ev.var);
  }
  cn.network = mutilate(built.first, interventions);

  auto collect = [&](const std::vector<WorldEvent>& events, Assignment& out, bool& conflict) {
    for (const auto& ev : events) {
      auto [base, id] = locate(ev);
      auto [it, inserted] = out.emplace(id, ev.state);
      if (!inserted && it->second != ev.state) conflict = true;
    }
  };
  collect(q.observe, cn.evidence, cn.evidence_conflict);
  collect(q.target, cn.target, cn.target_conflict);
  return cn;
}

InferenceResult counterfactual(const Scm& scm, const CounterfactualQuery& q, Engine engine, int chain_bound) {
  if (engine == Engine::Oracle) return brute_force_counterfactual(scm, q);
  const auto cn = prepare_counterfactual(scm, q);
  if (cn.evidence_conflict) return finish(0.0, 0.0, q.mode, to_string(engine));

  const EliminationOrder base_order = minfill_order(moral_graph(scm.dag));
  InferenceResult r;
  const Assignment empty;
  const Assignment& target = cn.target_conflict ? empty : cn.target;
  if (engine == Engine::VE) {
    r = ve_query(cn.network, cn.evidence, lift_order(base_order, cn.map), target, q.mode);
    r.method = cn.twin ? "ve-twin" : "ve-nworld";
  } else {
    const Jointree base_jt = jointree_from_order(scm.dag, base_order);
    if (engine == Engine::Jointree) {
      const Jointree lifted = make_nworld_jointree(base_jt, scm.dag, cn.shared, q.worlds, cn.naming);
      r = jointree_propagate(lifted, classical_separators(lifted), cn.network, cn.evidence, target, q.mode);
    } else {
      const VarSet functional = internal_set(scm.dag);
      const Jointree rep = replicate(base_jt, functional, chain_bound);
      const ThinnedJointree thinned = thin(rep, functional);
      const Jointree lifted = make_nworld_jointree(rep, scm.dag, cn.shared, q.worlds, cn.naming);
      const ThinnedJointree lifted_thin = thinned_twin_separators(thinned, lifted);
      r = jointree_propagate(lifted_thin.jointree, lifted_thin.thinned, cn.network, cn.evidence, target, q.mode);
    }
    r.method = to_string(engine);
  }
  if (cn.target_conflict) r = finish(0.0, r.evidence_probability, q.mode, r.method);
  return r;
}

namespace {

constexpr double kStateSpaceLimit = 16777216.0;  // 2^24

// Calls visit(values, probability) for every root instantiation with
// nonzero probability; internal values are filled in by the equations.
template <class Visit>
void enumerate_worlds(const Scm& scm, Visit&& visit) {
  const auto topo = scm.dag.topological_order();
  if (!topo) throw ModelError("", "network has a cycle");
  std::vector<VarId> roots = scm.dag.roots();
  std::vector<std::vector<int>> support(roots.size());
  double space = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& dist = *scm.vars[roots[i]].dist;
    for (std::size_t s = 0; s < dist.size(); ++s)
      if (dist[s] > 0.0) support[i].push_back(static_cast<int>(s));
    if (support[i].empty()) return;
    space *= static_cast<double>(support[i].size());
  }
  if (space > kStateSpaceLimit) throw InferenceError("state space exceeds 2^24 instantiations");

  std::vector<int> values(scm.size(), 0);
  std::vector<std::size_t> digit(roots.size(), 0);
  while (true) {
    double p = 1.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const int s = support[i][digit[i]];
      values[roots[i]] = s;
      p *= (*scm.vars[roots[i]].dist)[s];
    }
    for (VarId v : *topo)
      if (!scm.dag.is_root(v)) values[v] = scm.evaluate(v, values);
    visit(values, p);
    std::size_t i = roots.size();
    while (i > 0) {
      --i;
      if (++digit[i] < support[i].size()) break;
      digit[i] = 0;
      if (i == 0) return;
    }
    if (roots.empty()) return;
  }
}

bool consistent(const std::vector<int>& values, const Assignment& a) {
  for (const auto& [v, s] : a)
    if (values[v] != s) return false;
  return true;
}

}  // namespace

Factor brute_force_joint(const Scm& scm) {
  std::vector<VarId> scope(scm.size());
  double space = 1.0;
  for (std::size_t v = 0; v < scm.size(); ++v) {
    scope[v] = static_cast<VarId>(v);
    space *= scm.cardinality(static_cast<VarId>(v));
  }
  if (space > kStateSpaceLimit) throw InferenceError("state space exceeds 2^24 instantiations");
  Factor joint = Factor::over(scope, scm.cardinalities(), 0.0);
  enumerate_worlds(scm, [&](const std::vector<int>& values, double p) {
    std::size_t index = 0;
    for (std::size_t v = 0; v < scm.size(); ++v)
      index = index * static_cast<std::size_t>(scm.cardinality(static_cast<VarId>(v))) + static_cast<std::size_t>(values[v]);
    joint.table[index] += p;
  });
  return joint;
}

InferenceResult brute_force_counterfactual(const Scm& scm, const CounterfactualQuery& q) {
  const auto cn = prepare_counterfactual(scm, q);
  double pe = 0.0, joint = 0.0;
  if (!cn.evidence_conflict) {
    enumerate_worlds(cn.network, [&](const std::vector<int>& values, double p) {
      if (!consistent(values, cn.evidence)) return;
      pe += p;
      if (!cn.target_conflict && consistent(values, cn.target)) joint += p;
    });
  }
  return finish(joint, pe, q.mode, "oracle");
}

}  // namespace twinwidth
