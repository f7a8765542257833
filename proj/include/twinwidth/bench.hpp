#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twinwidth/elimination.hpp"
#include "twinwidth/randgen.hpp"

namespace twinwidth {

enum class Method { BaseMf, TwinAlg1, TwinMf, BaseMfRls, TwinThm3, TwinMfRls };
inline constexpr std::size_t kMethodCount = 6;
inline constexpr std::array<Method, kMethodCount> kMethods = {Method::BaseMf,    Method::TwinAlg1, Method::TwinMf,
                                                              Method::BaseMfRls, Method::TwinThm3, Method::TwinMfRls};
const char* to_string(Method m);

struct MethodResult {
  int width = -1;
  double normalized_width = 0.0;
  std::size_t nodes = 0;  // jointree node count
  double ms = 0.0;
};

struct ResultRow {
  int n = 0;
  int param = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::array<MethodResult, kMethodCount> methods;

  const MethodResult& operator[](Method m) const { return methods[static_cast<std::size_t>(m)]; }
  MethodResult& operator[](Method m) { return methods[static_cast<std::size_t>(m)]; }
};

/// Builds all six jointrees for one base network. Internal variables are
/// treated as functional by the replicate-and-thin methods.
ResultRow evaluate_instance(const Dag& dag, int chain_bound = 10, bool timings = false);

/// Violated per-row relations between methods, empty when none.
std::vector<std::string> row_invariant_violations(const ResultRow& row);

struct SuiteConfig {
  GenMethod method = GenMethod::RNet;
  bool scm = false;
  std::vector<int> ns = {50};
  std::vector<int> params = {3, 5, 7};  // p for rNET, d for rNET2
  int reps = 50;
  int chain_bound = 10;
  std::uint64_t seed = 0;
  int workers = 1;
  bool timings = false;
};

std::string generator_name(GenMethod method, bool scm);
/// Seed of one (cell, rep) task; independent of scheduling.
std::uint64_t task_seed(std::uint64_t seed, int n, int param, int rep);
GenConfig task_config(const SuiteConfig& cfg, int n, int param, int rep);

/// Rows ordered by n, then param, then rep, whatever the worker count.
std::vector<ResultRow> run_suite(const SuiteConfig& cfg);

struct CellStats {
  int n = 0;
  int param = 0;
  std::array<double, kMethodCount> mean_width{}, std_width{};
  std::array<double, kMethodCount> mean_nwd{}, std_nwd{};
  std::array<double, kMethodCount> mean_ms{}, std_ms{};
};

/// Mean and sample standard deviation per (n, param) cell, in row order.
std::vector<CellStats> cell_stats(const std::vector<ResultRow>& rows);

std::string suite_csv(const SuiteConfig& cfg, const std::vector<ResultRow>& rows);

struct AuditViolation {
  std::string bound;
  std::string detail;
  std::string instance;  // JSON network document
};

struct AuditReport {
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::vector<AuditViolation> violations;
};

/// Checks, on every generated instance, the lifted order bound, the
/// lifted twin jointree width and node bounds, the thinned twin bound and
/// the N-world order bound for N in {2, 3, 5}.
AuditReport run_bound_audit(const SuiteConfig& cfg);

struct TightnessWitness {
  Dag dag;
  EliminationOrder order;  // over the base network, empty for treewidth witnesses
  int base_width = -1;
  int twin_width = -1;
};

/// First connected DAG (at most `max_nodes` nodes, fixed topological
/// labelling, increasing edge mask) with an order of width `base_width`
/// whose twin order reaches `twin_width`.
std::optional<TightnessWitness> find_order_tightness(int max_nodes = 6, int base_width = 2, int twin_width = 5);

/// First connected DAG, in the same enumeration order, whose moral graph has
/// exact treewidth `base_width` while its twin network has exact treewidth
/// `twin_width`. For widths 2 and 4 the smallest such DAG has 8 nodes.
std::optional<TightnessWitness> find_treewidth_tightness(int max_nodes = 8, int base_width = 2, int twin_width = 4);

}  // namespace twinwidth
