#include <doctest.h>

#include <cmath>

#include "twinwidth/factor.hpp"
#include "twinwidth/model.hpp"
#include "twinwidth/serialize.hpp"

using namespace twinwidth;

namespace {

Scm small_scm() {
  Scm scm;
  const VarId u = scm.add_root("U", {"0", "1"}, {0.3, 0.7});
  const VarId x = scm.add_internal("X", {"0", "1"}, {u}, {1, 0});
  scm.add_internal("Y", {"a", "b", "c"}, {u, x}, {0, 1, 2, 0});
  return scm;
}

bool has_rule(const Scm& scm, const std::string& rule, const std::string& var) {
  for (const auto& v : validate(scm))
    if (v.rule == rule && v.variable == var) return true;
  return false;
}

}  // namespace

TEST_CASE("dag basics") {
  Dag d;
  const VarId a = d.add_node("A");
  const VarId b = d.add_node("B");
  const VarId c = d.add_node("C");
  d.add_edge(a, c);
  d.add_edge(b, c);
  CHECK(d.roots() == std::vector<VarId>{a, b});
  CHECK(d.internals() == std::vector<VarId>{c});
  CHECK(d.edge_count() == 2);
  CHECK(d.topological_order() == std::vector<VarId>{a, b, c});
  CHECK_THROWS_AS(d.add_node("A"), ModelError);
  CHECK_THROWS_AS(d.index_of("Z"), ModelError);
  CHECK(family_of(d, "C").members == std::vector<VarId>{c, a, b});
  d.add_edge(c, a);
  CHECK_FALSE(d.is_acyclic());
}

TEST_CASE("ids") {
  CHECK(is_valid_id("X"));
  CHECK(is_valid_id("_x1'"));
  CHECK(is_valid_id("X^2"));
  CHECK_FALSE(is_valid_id(""));
  CHECK_FALSE(is_valid_id("1X"));
  CHECK_FALSE(is_valid_id("X-1"));
}

TEST_CASE("validation reports each rule at the offending variable") {
  CHECK(validate(small_scm()).empty());

  auto cyc = small_scm();
  cyc.dag.add_edge(2, 1);
  CHECK(has_rule(cyc, "cycle", "X"));
  CHECK(has_rule(cyc, "cycle", "Y"));

  auto self = small_scm();
  self.dag.add_edge(1, 1);
  CHECK(has_rule(self, "cycle", "X"));

  auto dup = small_scm();
  dup.dag.add_edge(0, 1);
  CHECK(has_rule(dup, "duplicate-parent", "X"));

  auto card = small_scm();
  card.vars[1].states.clear();
  CHECK(has_rule(card, "cardinality", "X"));

  auto both = small_scm();
  both.vars[1].dist = std::vector<double>{0.5, 0.5};
  CHECK(has_rule(both, "mechanism", "X"));

  auto neither = small_scm();
  neither.vars[1].cpt.reset();
  CHECK(has_rule(neither, "mechanism", "X"));

  auto len = small_scm();
  len.vars[2].cpt = std::vector<int>{0, 1, 2};
  CHECK(has_rule(len, "table-length", "Y"));

  auto norm = small_scm();
  norm.vars[0].dist = std::vector<double>{0.3, 0.6};
  CHECK(has_rule(norm, "normalization", "U"));
  norm.vars[0].dist = std::vector<double>{-0.3, 1.3};
  CHECK(has_rule(norm, "normalization", "U"));

  auto func = small_scm();
  func.vars[1].functional = false;
  CHECK(has_rule(func, "functional", "X"));

  auto det = small_scm();
  det.vars[2].cpt = std::vector<int>{0, 1, 3, 0};
  CHECK(has_rule(det, "determinism", "Y"));
  try {
    require_valid(det);
    FAIL("expected a ModelError");
  } catch (const ModelError& e) {
    CHECK(e.variable() == "Y");
  }
}

TEST_CASE("evaluate uses last-parent-fastest rows") {
  const Scm scm = small_scm();
  CHECK(scm.evaluate(1, {0, -1, -1}) == 1);
  CHECK(scm.evaluate(2, {1, 0, -1}) == 2);
  CHECK(scm.evaluate(2, {0, 1, -1}) == 1);
  CHECK(instantiation_count(scm, {0, 2}) == 6);
}

TEST_CASE("network round trip") {
  const Scm scm = small_scm();
  const std::string text = dump(network_to_json(scm));
  CHECK(parse_network(text) == scm);
  CHECK(dump(network_to_json(parse_network(text))) == text);
}

TEST_CASE("probability rows in cpt must be point masses") {
  const std::string ok = R"({"variables": [
    {"id": "U", "states": ["0","1"], "parents": [], "dist": [0.5, 0.5]},
    {"id": "X", "states": ["0","1"], "parents": ["U"], "cpt": [[0, 1], 0]}]})";
  CHECK(*parse_network(ok).vars[1].cpt == std::vector<int>{1, 0});
  const std::string bad = R"({"variables": [
    {"id": "U", "states": ["0","1"], "parents": [], "dist": [0.5, 0.5]},
    {"id": "X", "states": ["0","1"], "parents": ["U"], "cpt": [[0.5, 0.5], 0]}]})";
  try {
    parse_network(bad);
    FAIL("expected a ModelError");
  } catch (const ModelError& e) {
    CHECK(e.variable() == "X");
    CHECK(std::string(e.what()).find("determinism") != std::string::npos);
  }
}

TEST_CASE("parse errors carry a line number or field path") {
  try {
    parse_network("{\n  \"variables\": [\n    {\"id\": \"U\",,}\n  ]\n}");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    parse_network(R"({"variables": [{"id": "U", "states": ["0"], "parents": "U", "dist": [1]}]})");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("variables[0].parents") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_network(R"({"variables": [{"id": "U", "states": ["0"], "dist": [1]},
      {"id": "U", "states": ["0"], "dist": [1]}]})"),
                  ModelError);
  CHECK_THROWS_AS(parse_network(R"({"variables": [{"id": "X", "states": ["0"], "parents": ["Q"], "cpt": [0]}]})"),
                  ModelError);
}

TEST_CASE("functional flag defaults and overrides") {
  const Scm scm = parse_network(R"({"variables": [
    {"id": "U", "states": ["0","1"], "dist": [0.5, 0.5]},
    {"id": "X", "states": ["0","1"], "parents": ["U"], "cpt": [0, 1]}]})");
  CHECK_FALSE(scm.vars[0].functional);
  CHECK(scm.vars[1].functional);
  CHECK_THROWS_AS(parse_network(R"({"variables": [
    {"id": "U", "states": ["0","1"], "dist": [0.5, 0.5]},
    {"id": "X", "states": ["0","1"], "parents": ["U"], "cpt": [0, 1], "functional": false}]})"),
                  ModelError);
}

TEST_CASE("half adder file loads") {
  const Scm scm = load_network(std::string(TW_DATA_DIR) + "/half_adder.json");
  CHECK(scm.size() == 7);
  CHECK(scm.dag.roots().size() == 3);
}

TEST_CASE("factor identities") {
  Factor f = Factor::over({0, 1}, {2, 3});
  for (std::size_t i = 0; i < f.size(); ++i) f.table[i] = static_cast<double>(i + 1);
  const Factor g = multiply(f, Factor::scalar(1.0));
  CHECK(g.scope == f.scope);
  CHECK(g.table == f.table);

  Factor root = Factor::over({4}, {2});
  root.table = {0.25, 0.75};
  CHECK(sum_out(root, 4).total() == doctest::Approx(1.0));
}

TEST_CASE("reduce then sum out matches enumeration") {
  Factor f = Factor::over({0, 1, 2}, {2, 3, 2});
  for (std::size_t i = 0; i < f.size(); ++i) f.table[i] = 0.1 * static_cast<double>((i * 7) % 11 + 1);
  for (int ev = 0; ev < 3; ++ev) {
    const Factor r = sum_out(reduce(f, {{1, ev}}), 2);
    REQUIRE(r.scope == std::vector<VarId>{0});
    for (int a = 0; a < 2; ++a) {
      double expected = 0.0;
      for (int c = 0; c < 2; ++c) expected += f.table[(a * 3 + ev) * 2 + c];
      CHECK(r.table[a] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  Factor other = Factor::over({1}, {2});
  CHECK_THROWS_AS(multiply(f, other), FactorError);
}

TEST_CASE("family factor of a structural equation") {
  const Scm scm = small_scm();
  const Factor f = family_factor(scm, 2);
  CHECK(f.scope == std::vector<VarId>{2, 0, 1});
  CHECK(f.is_indicator());
  CHECK(f.total() == doctest::Approx(4.0));
  CHECK(f.at({{2, 2}, {0, 1}, {1, 0}}) == 1.0);
  CHECK(f.at({{2, 0}, {0, 1}, {1, 0}}) == 0.0);
}

TEST_CASE("structure-only documents") {
  const auto s = parse_structure(R"({"variables": [
    {"id": "A", "parents": []},
    {"id": "B", "parents": ["A"]},
    {"id": "C", "parents": ["A", "B"], "functional": false}]})");
  CHECK(s.dag.size() == 3);
  CHECK(s.dag.parents(2) == std::vector<VarId>{0, 1});
  CHECK_FALSE(s.functional.test(0));
  CHECK(s.functional.test(1));
  CHECK_FALSE(s.functional.test(2));
  CHECK_THROWS_AS(parse_structure(R"({"variables": [{"id": "A", "parents": ["Z"]}]})"), ModelError);
  CHECK_THROWS_AS(parse_structure(R"({"variables": [{"id": "A", "parents": ["B"]}, {"id": "B", "parents": ["A"]}]})"),
                  ModelError);
  CHECK_THROWS_AS(parse_structure(R"({"variables": [{"id": "A"}, {"id": "B", "parents": ["A", "A"]}]})"), ModelError);
  CHECK_THROWS_AS(parse_structure(R"({"variables": {}})"), ParseError);
  const Scm full = load_network(std::string(TW_DATA_DIR) + "/half_adder.json");
  CHECK(load_structure(std::string(TW_DATA_DIR) + "/half_adder.json").dag == full.dag);
}
