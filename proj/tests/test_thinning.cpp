#include <doctest.h>

#include "twinwidth/randgen.hpp"
#include "twinwidth/thinning.hpp"
#include "twinwidth/world.hpp"

using namespace twinwidth;

namespace {

Jointree base_jointree(const Dag& d) { return jointree_from_order(d, minfill_order(moral_graph(d))); }

}  // namespace

TEST_CASE("rule 1 cuts a path between two hosts of a family") {
  Dag d;
  const VarId r = d.add_node("R");
  const VarId x = d.add_node("X");
  const VarId y = d.add_node("Y");
  d.add_edge(r, x);
  d.add_edge(x, y);
  Jointree jt = Jointree::over(d);
  const int a = jt.add_node("a", x);
  const int b = jt.add_node("b", r);
  const int c = jt.add_node("c");
  const int dn = jt.add_node("d", y);
  const int e = jt.add_node("e", x);
  jt.add_edge(a, c);
  jt.add_edge(b, c);
  jt.add_edge(c, dn);
  jt.add_edge(c, e);
  REQUIRE(check_jointree(jt).empty());
  const SeparatorAssignment classical = classical_separators(jt);
  CHECK(classical.separators[0].test(x));
  const ThinnedJointree t = thin(jt, internal_set(d));
  REQUIRE(t.log.size() == 1);
  CHECK(t.log[0].rule == 1);
  CHECK(t.log[0].var == x);
  CHECK(t.log[0].edge == 0);
  CHECK(t.log[0].witness == std::vector<int>{a, c, e});
  CHECK_FALSE(t.thinned.separators[0].test(x));
  CHECK(replay_thinning(jt, classical, t.log, t.thinned).empty());
}

TEST_CASE("no replication, no functional variables: nothing changes") {
  const Dag d = gen_rnet(30, 4, 2);
  const Jointree jt = base_jointree(d);
  const Jointree same = replicate(jt, internal_set(d), 0);
  CHECK(same.node_count() == jt.node_count());
  CHECK(same.edges == jt.edges);
  const ThinnedJointree t = thin(jt, VarSet(d.size()));
  CHECK(t.thinned.separators == classical_separators(jt).separators);
  CHECK(t.log.empty());
  const WidthReport w = causal_width_report(d, VarSet(d.size()), 10, minfill_order(moral_graph(d)));
  CHECK(w.thinned == w.classical);
}

TEST_CASE("replication keeps the jointree valid and only adds hosts") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dag d = gen_rnet(10 + static_cast<int>(seed), 3, seed);
    const Jointree jt = base_jointree(d);
    const Jointree rep = replicate(jt, internal_set(d), 3);
    CHECK(check_jointree(rep).empty());
    CHECK(rep.node_count() >= jt.node_count());
    for (std::size_t v = 0; v < d.size(); ++v) CHECK(rep.hosts_of(static_cast<VarId>(v)).size() >= 1);
  }
}

TEST_CASE("thinning is sound, monotone and replayable") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GenConfig g;
    g.n = 8 + static_cast<int>(seed % 25);
    g.p = 2 + static_cast<int>(seed % 4);
    g.seed = seed;
    g.scm_transform = seed % 2 == 1;
    const Dag d = generate(g);
    const VarSet functional = internal_set(d);
    const Jointree rep = replicate(base_jointree(d), functional, 10);
    const SeparatorAssignment classical = classical_separators(rep);
    const ThinnedJointree t = thin(rep, functional);
    CAPTURE(seed);
    CHECK(t.thinned.width <= classical.width);
    for (std::size_t e = 0; e < rep.edges.size(); ++e) {
      CHECK(t.thinned.separators[e].is_subset_of(classical.separators[e]));
      CHECK((classical.separators[e] - t.thinned.separators[e]).is_subset_of(functional));
    }
    for (std::size_t n = 0; n < rep.node_count(); ++n)
      if (rep.host[n] >= 0) CHECK(t.thinned.clusters[n] == rep.family_set(rep.host[n]));
    CHECK(replay_thinning(rep, classical, t.log, t.thinned).empty());

    const Jointree lifted = make_twin_jointree(rep, d);
    const ThinnedJointree tt = thinned_twin_separators(t, lifted);
    CHECK(tt.thinned.width <= 2 * t.thinned.width + 1);
  }
}

TEST_CASE("replay rejects a forged log") {
  const Dag d = gen_rnet(25, 3, 4);
  const VarSet functional = internal_set(d);
  const Jointree rep = replicate(base_jointree(d), functional, 10);
  const SeparatorAssignment classical = classical_separators(rep);
  ThinnedJointree t = thin(rep, functional);
  REQUIRE_FALSE(t.log.empty());
  auto forged = t.log;
  forged.push_back(forged.front());
  CHECK_FALSE(replay_thinning(rep, classical, forged, t.thinned).empty());
  forged = t.log;
  forged.front().rule = 3;
  CHECK_FALSE(replay_thinning(rep, classical, forged, t.thinned).empty());
  forged = t.log;
  forged.pop_back();
  CHECK_FALSE(replay_thinning(rep, classical, forged, t.thinned).empty());
}

TEST_CASE("unthinned separators lift exactly like classical ones") {
  const Dag d = gen_rnet(25, 3, 8);
  const Jointree jt = base_jointree(d);
  const ThinnedJointree none = thin(jt, VarSet(d.size()));
  const Jointree lifted = make_twin_jointree(jt, d);
  CHECK(thinned_twin_separators(none, lifted).thinned.separators == classical_separators(lifted).separators);
}

TEST_CASE("thinning beats the unthinned twin width on some rSCM seeds") {
  int better = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig g;
    g.n = 10;
    g.p = 5;
    g.seed = seed;
    g.scm_transform = true;
    const Dag d = generate(g);
    std::vector<bool> roots(d.size());
    for (std::size_t v = 0; v < d.size(); ++v) roots[v] = d.is_root(static_cast<VarId>(v));
    const Dag twin = world_dag(d, make_world_map(roots, 2), Naming::Prime);
    const Jointree tj = base_jointree(twin);
    const VarSet f = internal_set(twin);
    const ThinnedJointree t = thin(replicate(tj, f, 10), f);
    if (t.thinned.width < classical_separators(tj).width) ++better;
  }
  CHECK(better > 0);
}
