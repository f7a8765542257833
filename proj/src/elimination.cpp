#include "twinwidth/elimination.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <unordered_set>

namespace twinwidth {

namespace {

// Dense adjacency matrix with raw word access; the elimination loops are hot
// enough that dynamic_bitset temporaries show up in profiles.
class BitMatrix {
 public:
  explicit BitMatrix(const MoralGraph& g) : n_(g.size()), words_((n_ + 63) / 64), bits_(n_ * words_, 0) {
    for (std::size_t u = 0; u < n_; ++u)
      for (auto v = g.adj[u].find_first(); v != VarSet::npos; v = g.adj[u].find_next(v)) set(u, v);
  }

  std::size_t words() const { return words_; }
  std::uint64_t* row(std::size_t u) { return bits_.data() + u * words_; }
  const std::uint64_t* row(std::size_t u) const { return bits_.data() + u * words_; }
  bool test(std::size_t u, std::size_t v) const { return (row(u)[v / 64] >> (v % 64)) & 1u; }
  void set(std::size_t u, std::size_t v) { row(u)[v / 64] |= std::uint64_t{1} << (v % 64); }
  void reset(std::size_t u, std::size_t v) { row(u)[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }

  std::size_t degree(std::size_t u) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(row(u)[w]));
    return c;
  }

  template <class F>
  void for_each(std::size_t u, F&& f) const {
    const auto* r = row(u);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t b = r[w];
      while (b) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(b)));
        b &= b - 1;
      }
    }
  }

  // Number of missing edges among the neighbours of u.
  std::size_t fill(std::size_t u) const {
    std::size_t missing = 0;
    const auto* nu = row(u);
    for_each(u, [&](std::size_t x) {
      const auto* nx = row(x);
      std::size_t c = 0;
      for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(nu[w] & ~nx[w]));
      missing += c - 1;  // x itself is in N(u) but not in N(x)
    });
    return missing / 2;
  }

  // Connects all neighbours of u pairwise and detaches u.
  void eliminate(std::size_t u) {
    std::vector<std::size_t> nb;
    for_each(u, [&](std::size_t x) { nb.push_back(x); });
    const auto* nu = row(u);
    for (std::size_t x : nb) {
      auto* nx = row(x);
      for (std::size_t w = 0; w < words_; ++w) nx[w] |= nu[w];
      reset(x, x);
      reset(x, u);
    }
    std::fill(row(u), row(u) + words_, 0);
  }

 private:
  std::size_t n_, words_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace

const VarSet& ClusterSequence::cluster_of(VarId v) const {
  auto it = std::find(order.begin(), order.end(), v);
  if (it == order.end()) throw std::out_of_range("variable not in cluster sequence");
  return clusters[static_cast<std::size_t>(it - order.begin())];
}

bool is_permutation(const EliminationOrder& order, std::size_t n) {
  if (order.sequence.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (VarId v : order.sequence) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

ClusterSequence eliminate(const MoralGraph& g, const EliminationOrder& order) {
  if (!is_permutation(order, g.size())) throw std::invalid_argument("elimination order is not a permutation of the graph nodes");
  BitMatrix m(g);
  ClusterSequence cs;
  cs.order = order.sequence;
  cs.clusters.reserve(g.size());
  for (VarId v : order.sequence) {
    VarSet c(g.size());
    c.set(static_cast<std::size_t>(v));
    m.for_each(static_cast<std::size_t>(v), [&](std::size_t x) { c.set(x); });
    cs.width = std::max(cs.width, static_cast<int>(c.count()) - 1);
    cs.clusters.push_back(std::move(c));
    m.eliminate(static_cast<std::size_t>(v));
  }
  return cs;
}

int order_width(const MoralGraph& g, const EliminationOrder& order) {
  if (!is_permutation(order, g.size())) throw std::invalid_argument("elimination order is not a permutation of the graph nodes");
  BitMatrix m(g);
  int width = -1;
  for (VarId v : order.sequence) {
    width = std::max(width, static_cast<int>(m.degree(static_cast<std::size_t>(v))));
    m.eliminate(static_cast<std::size_t>(v));
  }
  return width;
}

EliminationOrder minfill_order(const MoralGraph& g) {
  const std::size_t n = g.size();
  BitMatrix m(g);
  std::vector<std::size_t> by_name(n);
  std::iota(by_name.begin(), by_name.end(), 0);
  std::sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) { return g.names[a] < g.names[b]; });
  std::vector<std::size_t> name_rank(n);
  for (std::size_t i = 0; i < n; ++i) name_rank[by_name[i]] = i;

  std::vector<std::size_t> fill(n), degree(n);
  std::vector<bool> alive(n, true);
  for (std::size_t v = 0; v < n; ++v) {
    fill[v] = m.fill(v);
    degree[v] = m.degree(v);
  }

  EliminationOrder order;
  order.sequence.reserve(n);
  std::vector<char> touched(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      if (best == n || fill[v] < fill[best] || (fill[v] == fill[best] && degree[v] < degree[best]) ||
          (fill[v] == fill[best] && degree[v] == degree[best] && name_rank[v] < name_rank[best])) {
        best = v;
      }
    }
    order.sequence.push_back(static_cast<VarId>(best));
    alive[best] = false;

    std::vector<std::size_t> affected;
    m.for_each(best, [&](std::size_t x) {
      if (!touched[x]) touched[x] = 1, affected.push_back(x);
      m.for_each(x, [&](std::size_t y) {
        if (!touched[y]) touched[y] = 1, affected.push_back(y);
      });
    });
    m.eliminate(best);
    for (std::size_t x : affected) {
      touched[x] = 0;
      if (!alive[x]) continue;
      fill[x] = m.fill(x);
      degree[x] = m.degree(x);
    }
  }
  return order;
}

EliminationOrder lift_order(const EliminationOrder& base, const WorldMap& map) {
  EliminationOrder out;
  out.sequence.reserve(map.network_size());
  for (VarId b : base.sequence) {
    if (map.shared.at(b)) {
      out.sequence.push_back(map.copies[b][0]);
    } else {
      for (VarId c : map.copies[b]) out.sequence.push_back(c);
    }
  }
  return out;
}

EliminationOrder twin_order(const EliminationOrder& order, const Dag& base) {
  std::vector<bool> shared(base.size());
  for (std::size_t v = 0; v < base.size(); ++v) shared[v] = base.is_root(static_cast<VarId>(v));
  return lift_order(order, make_world_map(shared, 2));
}

EliminationOrder n_world_order(const EliminationOrder& order, const Dag& base, const std::vector<VarId>& shared_roots,
                               int worlds) {
  std::vector<bool> shared(base.size(), false);
  for (VarId r : shared_roots) {
    if (!base.is_root(r)) throw ModelError(base.name(r), base.name(r) + " is not a root");
    shared[r] = true;
  }
  return lift_order(order, make_world_map(shared, worlds));
}

namespace {

// Decision search "is treewidth <= k" over eliminated-vertex sets.
class TreewidthSearch {
 public:
  explicit TreewidthSearch(const MoralGraph& g) : n_(g.size()), adj_(g.size(), 0) {
    for (std::size_t u = 0; u < n_; ++u)
      for (auto v = g.adj[u].find_first(); v != VarSet::npos; v = g.adj[u].find_next(v))
        adj_[u] |= std::uint64_t{1} << v;
    full_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  }

  // Vertices outside S+v adjacent to v after eliminating S: those reachable
  // from v through paths whose interior lies in S.
  std::uint64_t cluster(std::uint64_t eliminated, std::size_t v) const {
    std::uint64_t component = std::uint64_t{1} << v;
    std::uint64_t frontier = component;
    std::uint64_t boundary = 0;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj_[static_cast<std::size_t>(std::countr_zero(f))];
      boundary |= next & ~eliminated;
      next &= eliminated & ~component;
      component |= next;
      frontier = next;
    }
    return boundary & ~(std::uint64_t{1} << v);
  }

  bool fits(int k) {
    failed_.clear();
    return search(0, k);
  }

 private:
  bool search(std::uint64_t eliminated, int k) {
    const auto remaining = static_cast<int>(n_) - std::popcount(eliminated);
    if (remaining <= k + 1) return true;
    if (failed_.count(eliminated)) return false;
    for (std::uint64_t rest = full_ & ~eliminated; rest; rest &= rest - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(rest));
      if (std::popcount(cluster(eliminated, v)) <= k && search(eliminated | (std::uint64_t{1} << v), k)) return true;
    }
    failed_.insert(eliminated);
    return false;
  }

  std::size_t n_;
  std::vector<std::uint64_t> adj_;
  std::uint64_t full_ = 0;
  std::unordered_set<std::uint64_t> failed_;
};

// Minimum-degree lower bound: the largest minimum degree seen while
// repeatedly deleting a minimum-degree vertex.
int degeneracy(const MoralGraph& g) {
  const std::size_t n = g.size();
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = g.adj[v].count();
  int lb = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && (best == n || degree[v] < degree[best])) best = v;
    lb = std::max(lb, static_cast<int>(degree[best]));
    alive[best] = false;
    for (auto u = g.adj[best].find_first(); u != VarSet::npos; u = g.adj[best].find_next(u))
      if (alive[u]) --degree[u];
  }
  return lb;
}

}  // namespace

int exact_treewidth(const MoralGraph& g, int node_limit) {
  const auto n = static_cast<int>(g.size());
  if (n > node_limit || n > 64)
    throw GraphTooLarge("exact treewidth: " + std::to_string(n) + " nodes exceeds limit " + std::to_string(node_limit));
  if (n == 0) return -1;
  const int upper = order_width(g, minfill_order(g));
  int k = degeneracy(g);
  TreewidthSearch search(g);
  for (; k < upper; ++k)
    if (search.fits(k)) return k;
  return upper;
}

}  // namespace twinwidth
