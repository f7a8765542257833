#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twinwidth/elimination.hpp"
#include "twinwidth/factor.hpp"
#include "twinwidth/jointree.hpp"
#include "twinwidth/model.hpp"
#include "twinwidth/world.hpp"

namespace twinwidth {

enum class QueryMode { Joint, Conditional };

struct InferenceResult {
  double value = 0.0;                 // Pr(target, evidence) or Pr(target | evidence)
  double joint = 0.0;                 // Pr(target, evidence)
  double evidence_probability = 0.0;  // Pr(evidence)
  std::string method;
};

class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two variable-elimination runs (with and without the target). Throws
/// InferenceError on zero-probability evidence in conditional mode, and
/// std::logic_error if an intermediate factor outgrows the order's width.
InferenceResult ve_query(const Scm& net, const Assignment& evidence, const EliminationOrder& order,
                         const Assignment& target, QueryMode mode = QueryMode::Conditional);

/// Collect/distribute propagation over `separators` (classical or thinned).
/// Every family of `net` must be contained in the jointree family hosted
/// for the same variable. 0/1 factors are placed at every host, others at
/// the first host only.
InferenceResult jointree_propagate(const Jointree& jt, const SeparatorAssignment& separators, const Scm& net,
                                   const Assignment& evidence, const Assignment& target,
                                   QueryMode mode = QueryMode::Conditional);

struct WorldEvent {
  int world = 1;
  std::string var;
  int state = 0;
  friend bool operator==(const WorldEvent&, const WorldEvent&) = default;
};

struct CounterfactualQuery {
  int worlds = 2;
  /// Roots shared by every world; all roots when absent.
  std::optional<std::vector<std::string>> shared_roots;
  std::vector<WorldEvent> observe;
  std::vector<WorldEvent> intervene;
  std::vector<WorldEvent> target;
  QueryMode mode = QueryMode::Conditional;
};

enum class Engine { VE, Jointree, JointreeThinned, Oracle };

const char* to_string(Engine e);
Engine engine_from_string(const std::string& s);

/// The mutilated multi-world network of a query with its evidence mapped.
struct CounterfactualNetwork {
  Scm network;
  WorldMap map;
  std::vector<bool> shared;
  Naming naming = Naming::Caret;
  bool twin = false;  // two worlds, all roots shared
  Assignment evidence;
  Assignment target;
  bool evidence_conflict = false;  // two events force different states on one variable
  bool target_conflict = false;
};

/// Validates the query against `scm` and builds its network. Throws
/// ModelError for unknown variables, world indices out of range, shared
/// roots that are not roots, and interventions on shared roots.
CounterfactualNetwork prepare_counterfactual(const Scm& scm, const CounterfactualQuery& q);

InferenceResult counterfactual(const Scm& scm, const CounterfactualQuery& q, Engine engine,
                               int chain_bound = 10);

/// Joint distribution over every variable by enumeration. Throws
/// InferenceError when the state space exceeds 2^24.
Factor brute_force_joint(const Scm& scm);

/// Enumerates root instantiations of the mutilated multi-world network.
InferenceResult brute_force_counterfactual(const Scm& scm, const CounterfactualQuery& q);

}  // namespace twinwidth
