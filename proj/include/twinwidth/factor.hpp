#pragma once

#include <vector>

#include "twinwidth/model.hpp"

namespace twinwidth {

/// Discrete potential. Table is indexed lexicographically over `scope`
/// with the last variable varying fastest.
struct Factor {
  std::vector<VarId> scope;
  std::vector<int> cards;
  std::vector<double> table{1.0};

  static Factor scalar(double value);
  static Factor over(std::vector<VarId> scope, std::vector<int> cards, double fill = 0.0);

  std::size_t size() const { return table.size(); }
  double total() const;
  bool contains(VarId v) const;
  int card_of(VarId v) const;
  /// 0/1-valued tables can be multiplied in repeatedly without changing results.
  bool is_indicator() const;
  double at(const Assignment& values) const;
};

class FactorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Factor multiply(const Factor& a, const Factor& b);
Factor sum_out(const Factor& f, VarId v);
/// Keeps only rows consistent with `evidence` and drops the evidence
/// variables that occur in the scope.
Factor reduce(const Factor& f, const Assignment& evidence);
/// Sums out every scope variable not in `keep`.
Factor project(const Factor& f, const VarSet& keep);

/// Family factor of `v` in `scm`: the root table, or a 0/1 table for a
/// structural equation. Scope is the family (child first).
Factor family_factor(const Scm& scm, VarId v);

}  // namespace twinwidth
