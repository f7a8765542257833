#pragma once

#include <cstdint>
#include <string>

#include "twinwidth/model.hpp"

namespace twinwidth {

/// xoshiro256** seeded through splitmix64. Implemented here rather than
/// taken from <random> so that streams are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t bounded(std::uint64_t n);
  /// Uniform double in [0, 1).
  double uniform();

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

enum class GenMethod { RNet, RNet2 };

struct GenConfig {
  GenMethod method = GenMethod::RNet;
  int n = 50;
  int p = 3;  // rNET max parents
  int d = 5;  // rNET2 max degree
  std::uint64_t seed = 0;
  bool scm_transform = false;
};

/// Parents of X_i: a uniform count in 0..min(p, i-1), drawn without
/// replacement from X_1..X_{i-1}.
Dag gen_rnet(int n, int p, std::uint64_t seed);

/// Adds a fresh root R_<name> as the last parent of every internal node,
/// placed immediately before that node.
Dag to_rscm(const Dag& dag);

/// Markov chain over connected DAGs with degree at most d, started from the
/// path X_1 -> ... -> X_n and run for 50*n*d steps.
Dag gen_rnet2(int n, int d, std::uint64_t seed);

Dag generate(const GenConfig& cfg);

/// Random root tables and random deterministic equations.
Scm parameterize(const Dag& dag, std::uint64_t seed, int cardinality = 2);

}  // namespace twinwidth
