#include "twinwidth/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "twinwidth/jointree.hpp"
#include "twinwidth/serialize.hpp"
#include "twinwidth/thinning.hpp"
#include "twinwidth/world.hpp"

namespace twinwidth {

const char* to_string(Method m) {
  switch (m) {
    case Method::BaseMf: return "BASE-MF";
    case Method::TwinAlg1: return "TWIN-ALG1";
    case Method::TwinMf: return "TWIN-MF";
    case Method::BaseMfRls: return "BASE-MF-RLS";
    case Method::TwinThm3: return "TWIN-THM3";
    case Method::TwinMfRls: return "TWIN-MF-RLS";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<bool> root_flags(const Dag& dag) {
  std::vector<bool> shared(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v) shared[v] = dag.is_root(static_cast<VarId>(v));
  return shared;
}

Dag twin_dag(const Dag& dag) { return world_dag(dag, make_world_map(root_flags(dag), 2), Naming::Prime); }

void record(MethodResult& out, const SeparatorAssignment& seps, std::size_t nodes) {
  out.width = seps.width;
  out.normalized_width = seps.normalized_width;
  out.nodes = nodes;
}

// Runs body(i) for i in [0, count) on `workers` threads; the first exception
// thrown by any task is rethrown after all threads have joined.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Task {
  int n, param, rep;
};

std::vector<Task> suite_tasks(const SuiteConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("reps must be at least 1");
  std::vector<Task> tasks;
  for (int n : cfg.ns)
    for (int param : cfg.params)
      for (int rep = 0; rep < cfg.reps; ++rep) tasks.push_back({n, param, rep});
  return tasks;
}

}  // namespace

ResultRow evaluate_instance(const Dag& dag, int chain_bound, bool timings) {
  ResultRow row;
  auto start = Clock::now();
  auto stamp = [&](Method m) {
    if (timings) row[m].ms = elapsed_ms(start);
    start = Clock::now();
  };

  const EliminationOrder base_order = minfill_order(moral_graph(dag));
  const Jointree base_jt = jointree_from_order(dag, base_order);
  record(row[Method::BaseMf], classical_separators(base_jt), base_jt.node_count());
  stamp(Method::BaseMf);

  const Jointree alg1 = make_twin_jointree(base_jt, dag);
  record(row[Method::TwinAlg1], classical_separators(alg1), alg1.node_count());
  stamp(Method::TwinAlg1);

  const Dag twin = twin_dag(dag);
  const Jointree twin_jt = jointree_from_order(twin, minfill_order(moral_graph(twin)));
  record(row[Method::TwinMf], classical_separators(twin_jt), twin_jt.node_count());
  stamp(Method::TwinMf);

  const VarSet functional = internal_set(dag);
  const ThinnedJointree base_thin = thin(replicate(base_jt, functional, chain_bound), functional);
  record(row[Method::BaseMfRls], base_thin.thinned, base_thin.jointree.node_count());
  stamp(Method::BaseMfRls);

  const Jointree lifted = make_twin_jointree(base_thin.jointree, dag);
  const ThinnedJointree lifted_thin = thinned_twin_separators(base_thin, lifted);
  record(row[Method::TwinThm3], lifted_thin.thinned, lifted.node_count());
  stamp(Method::TwinThm3);

  const VarSet twin_functional = internal_set(twin);
  const ThinnedJointree twin_thin = thin(replicate(twin_jt, twin_functional, chain_bound), twin_functional);
  record(row[Method::TwinMfRls], twin_thin.thinned, twin_thin.jointree.node_count());
  stamp(Method::TwinMfRls);
  return row;
}

std::vector<std::string> row_invariant_violations(const ResultRow& row) {
  std::vector<std::string> out;
  for (Method m : kMethods)
    if (row[m].width < 0 || row[m].normalized_width < 0.0) out.push_back(std::string(to_string(m)) + " negative");
  if (row[Method::TwinAlg1].width > 2 * row[Method::BaseMf].width + 1)
    out.push_back("TWIN-ALG1 width " + std::to_string(row[Method::TwinAlg1].width) + " > 2*" +
                  std::to_string(row[Method::BaseMf].width) + "+1");
  if (row[Method::TwinThm3].width > 2 * row[Method::BaseMfRls].width + 1)
    out.push_back("TWIN-THM3 width " + std::to_string(row[Method::TwinThm3].width) + " > 2*" +
                  std::to_string(row[Method::BaseMfRls].width) + "+1");
  if (row[Method::TwinAlg1].nodes > 2 * row[Method::BaseMf].nodes)
    out.push_back("TWIN-ALG1 nodes " + std::to_string(row[Method::TwinAlg1].nodes) + " > 2*" +
                  std::to_string(row[Method::BaseMf].nodes));
  if (row[Method::TwinThm3].nodes > 2 * row[Method::BaseMfRls].nodes)
    out.push_back("TWIN-THM3 nodes " + std::to_string(row[Method::TwinThm3].nodes) + " > 2*" +
                  std::to_string(row[Method::BaseMfRls].nodes));
  return out;
}

std::string generator_name(GenMethod method, bool scm) {
  if (method == GenMethod::RNet) return scm ? "rSCM" : "rNET";
  return scm ? "rSCM2" : "rNET2";
}

std::uint64_t task_seed(std::uint64_t seed, int n, int param, int rep) {
  std::uint64_t state = seed;
  for (std::uint64_t part : {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(param),
                             static_cast<std::uint64_t>(rep)}) {
    state = splitmix64(state) ^ part;
  }
  return splitmix64(state);
}

GenConfig task_config(const SuiteConfig& cfg, int n, int param, int rep) {
  GenConfig g;
  g.method = cfg.method;
  g.n = n;
  if (cfg.method == GenMethod::RNet) {
    g.p = param;
  } else {
    g.d = param;
  }
  g.seed = task_seed(cfg.seed, n, param, rep);
  g.scm_transform = cfg.scm;
  return g;
}

std::vector<ResultRow> run_suite(const SuiteConfig& cfg) {
  const auto tasks = suite_tasks(cfg);
  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    const GenConfig g = task_config(cfg, t.n, t.param, t.rep);
    ResultRow row = evaluate_instance(generate(g), cfg.chain_bound, cfg.timings);
    row.n = t.n;
    row.param = t.param;
    row.rep = t.rep;
    row.seed = g.seed;
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<CellStats> cell_stats(const std::vector<ResultRow>& rows) {
  std::vector<CellStats> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].n == rows[i].n && rows[j].param == rows[i].param) ++j;
    CellStats s;
    s.n = rows[i].n;
    s.param = rows[i].param;
    const double count = static_cast<double>(j - i);
    auto stats = [&](auto get, double& mean, double& sd) {
      double sum = 0.0;
      for (std::size_t k = i; k < j; ++k) sum += get(rows[k]);
      mean = sum / count;
      double sq = 0.0;
      for (std::size_t k = i; k < j; ++k) sq += (get(rows[k]) - mean) * (get(rows[k]) - mean);
      sd = count > 1 ? std::sqrt(sq / (count - 1)) : 0.0;
    };
    for (std::size_t m = 0; m < kMethodCount; ++m) {
      stats([m](const ResultRow& r) { return static_cast<double>(r.methods[m].width); }, s.mean_width[m],
            s.std_width[m]);
      stats([m](const ResultRow& r) { return r.methods[m].normalized_width; }, s.mean_nwd[m], s.std_nwd[m]);
      stats([m](const ResultRow& r) { return r.methods[m].ms; }, s.mean_ms[m], s.std_ms[m]);
    }
    out.push_back(s);
    i = j;
  }
  return out;
}

namespace {

std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

}  // namespace

std::string suite_csv(const SuiteConfig& cfg, const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  const std::string gen = generator_name(cfg.method, cfg.scm);
  out << "kind,generator,n,param,rep,seed";
  for (Method m : kMethods) {
    out << ',' << to_string(m) << "_wd," << to_string(m) << "_nwd";
    if (cfg.timings) out << ',' << to_string(m) << "_ms";
  }
  out << '\n';
  for (const auto& r : rows) {
    out << "row," << gen << ',' << r.n << ',' << r.param << ',' << r.rep << ',' << r.seed;
    for (Method m : kMethods) {
      out << ',' << r[m].width << ',' << fixed4(r[m].normalized_width);
      if (cfg.timings) out << ',' << fixed4(r[m].ms);
    }
    out << '\n';
  }
  for (const auto& s : cell_stats(rows)) {
    for (int kind = 0; kind < 2; ++kind) {
      out << (kind == 0 ? "mean," : "std,") << gen << ',' << s.n << ',' << s.param << ",,";
      for (std::size_t m = 0; m < kMethodCount; ++m) {
        out << ',' << fixed4(kind == 0 ? s.mean_width[m] : s.std_width[m]) << ','
            << fixed4(kind == 0 ? s.mean_nwd[m] : s.std_nwd[m]);
        if (cfg.timings) out << ',' << fixed4(kind == 0 ? s.mean_ms[m] : s.std_ms[m]);
      }
      out << '\n';
    }
  }
  return out.str();
}

namespace {

struct InstanceAudit {
  std::size_t checks = 0;
  std::vector<AuditViolation> violations;
  std::string instance;

  void check(bool ok, const std::string& bound, const std::string& detail) {
    ++checks;
    if (!ok) violations.push_back({bound, detail, instance});
  }
};

std::string relation(int lhs, const std::string& op, int rhs) {
  return std::to_string(lhs) + " " + op + " " + std::to_string(rhs);
}

void audit_instance(const Dag& dag, std::uint64_t seed, int chain_bound, InstanceAudit& a) {
  a.instance = dump(dag_to_json(dag));
  const MoralGraph g = moral_graph(dag);
  const EliminationOrder order = minfill_order(g);
  const int w = order_width(g, order);

  const Dag twin = twin_dag(dag);
  const int wt = order_width(moral_graph(twin), twin_order(order, dag));
  a.check(wt <= 2 * w + 1, "twin-order", "twin order width " + relation(wt, ">", 2 * w + 1));

  const Jointree jt = jointree_from_order(dag, order);
  const SeparatorAssignment base = classical_separators(jt);
  const Jointree alg1 = make_twin_jointree(jt, dag);
  const SeparatorAssignment lifted = classical_separators(alg1);
  a.check(lifted.width <= 2 * base.width + 1, "twin-jointree",
          "twin jointree width " + relation(lifted.width, ">", 2 * base.width + 1));
  a.check(alg1.node_count() <= 2 * jt.node_count(), "twin-jointree",
          "twin jointree nodes " + relation(static_cast<int>(alg1.node_count()), ">",
                                            static_cast<int>(2 * jt.node_count())));
  a.check(check_jointree(alg1).empty(), "twin-jointree", "twin jointree is malformed");
  a.check(twin_separators_direct(base, alg1).separators == lifted.separators, "lifted-separators",
          "lifted separators differ from classical separators");

  const VarSet functional = internal_set(dag);
  const ThinnedJointree bt = thin(replicate(jt, functional, chain_bound), functional);
  const ThinnedJointree tt = thinned_twin_separators(bt, make_twin_jointree(bt.jointree, dag));
  a.check(tt.thinned.width <= 2 * bt.thinned.width + 1, "thinned-twin",
          "thinned twin width " + relation(tt.thinned.width, ">", 2 * bt.thinned.width + 1));

  Rng rng(seed ^ 0x5eedf00dULL);
  const auto roots = dag.roots();
  for (int worlds : {2, 3, 5}) {
    const int bound = worlds * (w + 1) - 1;
    auto check_map = [&](const Dag& net, const WorldMap& map, const std::string& what) {
      const int wn = order_width(moral_graph(net), lift_order(order, map));
      a.check(wn <= bound, "n-world-order", what + " N=" + std::to_string(worlds) + " width " + relation(wn, ">", bound));
    };
    const WorldMap all = make_world_map(root_flags(dag), worlds);
    check_map(world_dag(dag, all, Naming::Caret), all, "all roots shared");

    std::vector<bool> subset(dag.size(), false);
    for (VarId r : roots) subset[r] = rng.bounded(2) == 1;
    const WorldMap some = make_world_map(subset, worlds);
    check_map(world_dag(dag, some, Naming::Caret), some, "random shared roots");

    std::vector<VarId> duplicated;
    std::vector<CrossEdge> cross;
    for (std::size_t v = 0; v < dag.size(); ++v) {
      if (rng.bounded(3) == 0) continue;
      duplicated.push_back(static_cast<VarId>(v));
      if (rng.bounded(4) == 0) {
        const int from = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(worlds - 1)));
        const int to = from + 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(worlds - from)));
        cross.push_back({static_cast<VarId>(v), from, to});
      }
    }
    const auto [gen, gmap] = generalized_n_world(dag, duplicated, worlds, cross);
    check_map(gen, gmap, "generalized");
  }
}

}  // namespace

AuditReport run_bound_audit(const SuiteConfig& cfg) {
  const auto tasks = suite_tasks(cfg);
  std::vector<InstanceAudit> audits(tasks.size());
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    const GenConfig g = task_config(cfg, t.n, t.param, t.rep);
    audit_instance(generate(g), g.seed, cfg.chain_bound, audits[i]);
  });
  AuditReport report;
  report.instances = tasks.size();
  for (auto& a : audits) {
    report.checks += a.checks;
    for (auto& v : a.violations) report.violations.push_back(std::move(v));
  }
  return report;
}

namespace {

// Small graphs as bit masks; used by the exhaustive witness searches.
std::vector<std::uint64_t> masks_of(const MoralGraph& g) {
  std::vector<std::uint64_t> out(g.size(), 0);
  for (std::size_t v = 0; v < g.size(); ++v)
    for (auto u = g.adj[v].find_first(); u != VarSet::npos; u = g.adj[v].find_next(u)) out[v] |= 1ULL << u;
  return out;
}

int mask_order_width(std::vector<std::uint64_t> adj, const std::vector<VarId>& order) {
  std::uint64_t alive = adj.size() == 64 ? ~0ULL : (1ULL << adj.size()) - 1;
  int width = -1;
  for (VarId v : order) {
    const std::uint64_t bit = 1ULL << v;
    const std::uint64_t nb = adj[v] & alive & ~bit;
    width = std::max(width, std::popcount(nb));
    for (std::uint64_t rest = nb; rest; rest &= rest - 1) {
      const int u = std::countr_zero(rest);
      adj[u] |= nb & ~(1ULL << u);
    }
    alive &= ~bit;
  }
  return width;
}

bool weakly_connected(const Dag& dag) {
  if (dag.size() == 0) return false;
  std::vector<std::vector<VarId>> nb(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v)
    for (VarId p : dag.parents(static_cast<VarId>(v))) {
      nb[v].push_back(p);
      nb[p].push_back(static_cast<VarId>(v));
    }
  std::vector<bool> seen(dag.size(), false);
  std::vector<VarId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    VarId v = stack.back();
    stack.pop_back();
    for (VarId u : nb[v])
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        stack.push_back(u);
      }
  }
  return count == dag.size();
}

// Visits connected DAGs whose edges go from lower to higher index, by node
// count and then by edge mask; stops when `visit` returns true.
void for_each_small_dag(int max_nodes, const std::function<bool(const Dag&)>& visit) {
  for (int n = 2; n <= max_nodes; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i) slots.emplace_back(i, j);
    for (std::uint64_t mask = 0; mask < (1ULL << slots.size()); ++mask) {
      Dag dag;
      for (int v = 0; v < n; ++v) dag.add_node("X" + std::to_string(v + 1));
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1) dag.add_edge(slots[s].first, slots[s].second);
      if (!weakly_connected(dag)) continue;
      if (visit(dag)) return;
    }
  }
}

}  // namespace

std::optional<TightnessWitness> find_order_tightness(int max_nodes, int base_width, int twin_width) {
  std::optional<TightnessWitness> found;
  for_each_small_dag(max_nodes, [&](const Dag& dag) {
    const auto base = masks_of(moral_graph(dag));
    const Dag twin = twin_dag(dag);
    const auto twin_masks = masks_of(moral_graph(twin));
    const WorldMap map = make_world_map(root_flags(dag), 2);
    std::vector<VarId> perm(dag.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (mask_order_width(base, perm) != base_width) continue;
      const EliminationOrder lifted = lift_order(EliminationOrder{perm}, map);
      if (mask_order_width(twin_masks, lifted.sequence) == twin_width) {
        found = TightnessWitness{dag, EliminationOrder{perm}, base_width, twin_width};
        return true;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  });
  return found;
}

namespace {

std::uint64_t bit(int v) { return 1ULL << v; }

// Adjacency masks of the moral graph of a DAG given by parent masks.
std::vector<std::uint64_t> moralize_masks(const std::vector<std::uint64_t>& parents) {
  std::vector<std::uint64_t> adj(parents.size(), 0);
  for (std::size_t v = 0; v < parents.size(); ++v) {
    adj[v] |= parents[v];
    for (std::uint64_t rest = parents[v]; rest; rest &= rest - 1) {
      const int p = std::countr_zero(rest);
      adj[p] |= bit(static_cast<int>(v)) | (parents[v] & ~bit(p));
    }
  }
  return adj;
}

bool connected_masks(const std::vector<std::uint64_t>& adj) {
  std::uint64_t seen = 1, frontier = 1;
  while (frontier) {
    const int x = std::countr_zero(frontier);
    frontier &= frontier - 1;
    const std::uint64_t fresh = adj[x] & ~seen;
    seen |= fresh;
    frontier |= fresh;
  }
  return std::popcount(seen) == static_cast<int>(adj.size());
}

// Degeneracy; a lower bound on treewidth.
int degeneracy(const std::vector<std::uint64_t>& adj) {
  const int n = static_cast<int>(adj.size());
  std::uint64_t alive = n == 64 ? ~0ULL : bit(n) - 1;
  int best = 0;
  while (alive) {
    int v_min = -1, d_min = 0;
    for (std::uint64_t rest = alive; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const int d = std::popcount(adj[v] & alive);
      if (v_min < 0 || d < d_min) v_min = v, d_min = d;
    }
    best = std::max(best, d_min);
    alive &= ~bit(v_min);
  }
  return best;
}

// Width of the greedy minfill order; an upper bound on treewidth.
int greedy_width(std::vector<std::uint64_t> adj) {
  const int n = static_cast<int>(adj.size());
  std::uint64_t alive = n == 64 ? ~0ULL : bit(n) - 1;
  int width = 0;
  for (int step = 0; step < n; ++step) {
    int best = -1, best_fill = 0;
    for (std::uint64_t rest = alive; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const std::uint64_t nb = adj[v] & alive & ~bit(v);
      int fill = 0;
      for (std::uint64_t r = nb; r; r &= r - 1) {
        const int x = std::countr_zero(r);
        fill += std::popcount(nb & ~adj[x] & ~bit(x));
      }
      if (best < 0 || fill < best_fill) best = v, best_fill = fill;
    }
    const std::uint64_t nb = adj[best] & alive & ~bit(best);
    width = std::max(width, std::popcount(nb));
    for (std::uint64_t r = nb; r; r &= r - 1) {
      const int x = std::countr_zero(r);
      adj[x] |= nb & ~bit(x);
    }
    alive &= ~bit(best);
  }
  return width;
}

MoralGraph graph_of_masks(const std::vector<std::uint64_t>& adj) {
  std::vector<std::string> names(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v) names[v] = "X" + std::to_string(v + 1);
  MoralGraph g = MoralGraph::empty(std::move(names));
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (std::uint64_t r = adj[v]; r; r &= r - 1)
      if (std::countr_zero(r) > static_cast<int>(v)) g.add_edge(static_cast<VarId>(v), std::countr_zero(r));
  return g;
}

// Parent masks of the twin network in the make_world_map layout.
std::vector<std::uint64_t> twin_masks(const std::vector<std::uint64_t>& parents) {
  const int n = static_cast<int>(parents.size());
  std::vector<std::array<int, 2>> id(n);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (parents[v] == 0) {
      id[v] = {next, next};
      ++next;
    } else {
      id[v] = {next, next + 1};
      next += 2;
    }
  }
  std::vector<std::uint64_t> out(next, 0);
  for (int v = 0; v < n; ++v) {
    if (parents[v] == 0) continue;
    for (int w = 0; w < 2; ++w)
      for (std::uint64_t r = parents[v]; r; r &= r - 1) out[id[v][w]] |= bit(id[std::countr_zero(r)][w]);
  }
  return out;
}

}  // namespace

std::optional<TightnessWitness> find_treewidth_tightness(int max_nodes, int base_width, int twin_width) {
  if (max_nodes > 32) throw std::invalid_argument("treewidth witness search is limited to 32 nodes");
  for (int n = 2; n <= max_nodes; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i) slots.emplace_back(i, j);
    if (slots.size() >= 64) throw std::invalid_argument("treewidth witness search is limited by its edge mask");
    // a graph of treewidth k on n nodes has at most kn - k(k+1)/2 edges
    const int max_edges = base_width * n - base_width * (base_width + 1) / 2;
    for (std::uint64_t mask = 0; mask < bit(static_cast<int>(slots.size())); ++mask) {
      const int edges = std::popcount(mask);
      if (edges < n - 1 || edges > max_edges) continue;
      std::vector<std::uint64_t> parents(n, 0);
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1) parents[slots[s].second] |= bit(slots[s].first);
      const auto base = moralize_masks(parents);
      if (!connected_masks(base) || degeneracy(base) > base_width || greedy_width(base) < base_width) continue;
      const auto twin = moralize_masks(twin_masks(parents));
      if (greedy_width(twin) < twin_width) continue;
      if (exact_treewidth(graph_of_masks(base), 64) != base_width) continue;
      if (exact_treewidth(graph_of_masks(twin), 64) != twin_width) continue;
      Dag dag;
      for (int v = 0; v < n; ++v) dag.add_node("X" + std::to_string(v + 1));
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1) dag.add_edge(slots[s].first, slots[s].second);
      return TightnessWitness{dag, {}, base_width, twin_width};
    }
  }
  return std::nullopt;
}

}  // namespace twinwidth
