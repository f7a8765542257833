#pragma once

#include <string>
#include <vector>

#include "twinwidth/elimination.hpp"
#include "twinwidth/jointree.hpp"

namespace twinwidth {

struct ThinningStep {
  int edge;
  VarId var;
  int rule;                  // 1 or 2
  std::vector<int> witness;  // rule 1: host-to-host path; rule 2: the endpoint
};

struct ThinnedJointree {
  Jointree jointree;
  SeparatorAssignment thinned;
  VarSet functional;
  std::vector<ThinningStep> log;
};

/// For every original host of a functional family f_Y, hangs a replica of
/// f_X next to the host of each functional parent X, then repeats from the
/// new replica, following functional chains of at most `chain_bound` edges.
/// Chains are unfolded (an ancestor reached along two chains is replicated
/// twice), breadth first, with at most |V|^2 replicas per original host.
Jointree replicate(const Jointree& jt, const VarSet& functional, int chain_bound);

/// Applies both thinning rules to exhaustion starting from `separators`.
/// Rule 2 is only applied at endpoints that are not leaves.
ThinnedJointree thin(const Jointree& jt, const VarSet& functional, const SeparatorAssignment& separators);
ThinnedJointree thin(const Jointree& jt, const VarSet& functional);

/// Replays `log` from `start`, checking that every step was justified when
/// taken and that the result equals `thinned`. Returns an empty string on
/// success, otherwise a description of the first problem.
std::string replay_thinning(const Jointree& jt, const SeparatorAssignment& start, const std::vector<ThinningStep>& log,
                            const SeparatorAssignment& thinned);

/// Lifts thinned base separators onto a jointree built by
/// make_nworld_jointree from `base.jointree`.
ThinnedJointree thinned_twin_separators(const ThinnedJointree& base, const Jointree& lifted);

struct WidthReport {
  int classical = -1;   // jointree_from_order
  int replicated = -1;  // after replication, classical separators
  int thinned = -1;     // after thinning
};

WidthReport causal_width_report(const Dag& dag, const VarSet& functional, int chain_bound,
                                const EliminationOrder& order);

/// Internal (non-root) variables of `dag`.
VarSet internal_set(const Dag& dag);

}  // namespace twinwidth
