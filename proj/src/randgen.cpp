#include "twinwidth/randgen.hpp"

#include <algorithm>
#include <deque>

namespace twinwidth {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Rng::next() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

// Lemire's multiply-and-reject method.
std::uint64_t Rng::bounded(std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

std::string node_name(int i) { return "X" + std::to_string(i + 1); }

Dag from_parent_lists(int n, const std::vector<std::vector<int>>& parents) {
  Dag dag;
  for (int i = 0; i < n; ++i) dag.add_node(node_name(i));
  for (int i = 0; i < n; ++i)
    for (int p : parents[i]) dag.add_edge(p, i);
  return dag;
}

}  // namespace

Dag gen_rnet(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    const int limit = std::min(p, i);
    const auto k = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(limit + 1)));
    std::vector<int> pool(static_cast<std::size_t>(i));
    for (int j = 0; j < i; ++j) pool[j] = j;
    for (int j = 0; j < k; ++j) {
      const auto pick = j + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i - j)));
      std::swap(pool[j], pool[pick]);
    }
    parents[i].assign(pool.begin(), pool.begin() + k);
    std::sort(parents[i].begin(), parents[i].end());
  }
  return from_parent_lists(n, parents);
}

Dag to_rscm(const Dag& dag) {
  Dag out;
  std::vector<VarId> id(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const auto vid = static_cast<VarId>(v);
    if (!dag.is_root(vid)) {
      std::string name = "R_" + dag.name(vid);
      while (dag.find(name) || out.find(name)) name += "_";
      out.add_node(name);
    }
    id[v] = out.add_node(dag.name(vid));
  }
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const auto vid = static_cast<VarId>(v);
    if (dag.is_root(vid)) continue;
    for (VarId p : dag.parents(vid)) out.add_edge(id[p], id[v]);
    out.add_edge(id[v] - 1, id[v]);
  }
  return out;
}

Dag gen_rnet2(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  const auto N = static_cast<std::size_t>(std::max(n, 0));
  std::vector<std::vector<char>> edge(N, std::vector<char>(N, 0));
  std::vector<int> degree(N, 0);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    edge[i][i + 1] = 1;
    ++degree[i];
    ++degree[i + 1];
  }

  auto connected_without = [&](std::size_t a, std::size_t b) {
    std::vector<char> seen(N, 0);
    std::deque<std::size_t> queue{a};
    seen[a] = 1;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < N; ++v) {
        if (seen[v] || !(edge[u][v] || edge[v][u])) continue;
        if ((u == a && v == b) || (u == b && v == a)) continue;
        seen[v] = 1;
        queue.push_back(v);
      }
    }
    return static_cast<bool>(seen[b]);
  };
  auto reaches = [&](std::size_t from, std::size_t to) {
    std::vector<char> seen(N, 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (std::size_t v = 0; v < N; ++v)
        if (edge[u][v] && !seen[v]) seen[v] = 1, stack.push_back(v);
    }
    return false;
  };

  if (N >= 2) {
    const long long steps = 50LL * n * d;
    for (long long step = 0; step < steps; ++step) {
      const auto u = static_cast<std::size_t>(rng.bounded(N));
      auto v = static_cast<std::size_t>(rng.bounded(N - 1));
      if (v >= u) ++v;
      if (edge[u][v]) {
        // the rest of the graph stays connected iff u and v remain linked
        if (connected_without(u, v)) {
          edge[u][v] = 0;
          --degree[u];
          --degree[v];
        }
      } else if (!edge[v][u] && degree[u] < d && degree[v] < d && !reaches(v, u)) {
        edge[u][v] = 1;
        ++degree[u];
        ++degree[v];
      }
    }
  }
  std::vector<std::vector<int>> parents(N);
  for (std::size_t v = 0; v < N; ++v)
    for (std::size_t u = 0; u < N; ++u)
      if (edge[u][v]) parents[v].push_back(static_cast<int>(u));
  return from_parent_lists(n, parents);
}

Dag generate(const GenConfig& cfg) {
  Dag dag = cfg.method == GenMethod::RNet ? gen_rnet(cfg.n, cfg.p, cfg.seed) : gen_rnet2(cfg.n, cfg.d, cfg.seed);
  return cfg.scm_transform ? to_rscm(dag) : dag;
}

Scm parameterize(const Dag& dag, std::uint64_t seed, int cardinality) {
  Rng rng(seed);
  Scm scm;
  scm.dag = dag;
  std::vector<std::string> states;
  for (int s = 0; s < cardinality; ++s) states.push_back(std::to_string(s));
  for (std::size_t v = 0; v < dag.size(); ++v) {
    Variable var;
    var.states = states;
    if (dag.is_root(static_cast<VarId>(v))) {
      std::vector<double> dist(static_cast<std::size_t>(cardinality));
      double sum = 0.0;
      for (auto& x : dist) sum += (x = 1.0 - rng.uniform());
      for (auto& x : dist) x /= sum;
      var.dist = std::move(dist);
    } else {
      std::size_t rows = 1;
      for (std::size_t k = 0; k < dag.parents(static_cast<VarId>(v)).size(); ++k) rows *= static_cast<std::size_t>(cardinality);
      std::vector<int> cpt(rows);
      for (auto& c : cpt) c = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(cardinality)));
      var.functional = true;
      var.cpt = std::move(cpt);
    }
    scm.vars.push_back(std::move(var));
  }
  return scm;
}

}  // namespace twinwidth
