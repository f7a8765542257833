#include "twinwidth/factor.hpp"

#include <algorithm>
#include <numeric>

namespace twinwidth {

namespace {

std::vector<std::size_t> strides_of(const std::vector<int>& cards) {
  std::vector<std::size_t> s(cards.size());
  std::size_t acc = 1;
  for (std::size_t i = cards.size(); i-- > 0;) {
    s[i] = acc;
    acc *= static_cast<std::size_t>(cards[i]);
  }
  return s;
}

std::size_t product(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// Stride of each `target` scope variable inside `source` (0 when absent).
std::vector<std::size_t> embed_strides(const Factor& source, const std::vector<VarId>& target) {
  auto s = strides_of(source.cards);
  std::vector<std::size_t> out(target.size(), 0);
  for (std::size_t i = 0; i < target.size(); ++i) {
    auto it = std::find(source.scope.begin(), source.scope.end(), target[i]);
    if (it != source.scope.end()) out[i] = s[static_cast<std::size_t>(it - source.scope.begin())];
  }
  return out;
}

}  // namespace

Factor Factor::scalar(double value) {
  Factor f;
  f.table = {value};
  return f;
}

Factor Factor::over(std::vector<VarId> scope, std::vector<int> cards, double fill) {
  Factor f;
  f.scope = std::move(scope);
  f.cards = std::move(cards);
  f.table.assign(product(f.cards), fill);
  return f;
}

double Factor::total() const { return std::accumulate(table.begin(), table.end(), 0.0); }

bool Factor::contains(VarId v) const { return std::find(scope.begin(), scope.end(), v) != scope.end(); }

int Factor::card_of(VarId v) const {
  auto it = std::find(scope.begin(), scope.end(), v);
  if (it == scope.end()) throw FactorError("variable not in factor scope");
  return cards[static_cast<std::size_t>(it - scope.begin())];
}

bool Factor::is_indicator() const {
  return std::all_of(table.begin(), table.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

double Factor::at(const Assignment& values) const {
  auto s = strides_of(cards);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope.size(); ++i) idx += s[i] * static_cast<std::size_t>(values.at(scope[i]));
  return table[idx];
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor r;
  r.scope = a.scope;
  r.cards = a.cards;
  for (std::size_t i = 0; i < b.scope.size(); ++i) {
    auto it = std::find(a.scope.begin(), a.scope.end(), b.scope[i]);
    if (it == a.scope.end()) {
      r.scope.push_back(b.scope[i]);
      r.cards.push_back(b.cards[i]);
    } else if (a.cards[static_cast<std::size_t>(it - a.scope.begin())] != b.cards[i]) {
      throw FactorError("cardinality mismatch in multiply");
    }
  }
  const auto sa = embed_strides(a, r.scope);
  const auto sb = embed_strides(b, r.scope);
  const std::size_t n = product(r.cards);
  r.table.assign(n, 0.0);
  std::vector<int> counter(r.scope.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < n; ++k) {
    r.table[k] = a.table[ia] * b.table[ib];
    for (std::size_t d = r.scope.size(); d-- > 0;) {
      if (++counter[d] < r.cards[d]) {
        ia += sa[d];
        ib += sb[d];
        break;
      }
      counter[d] = 0;
      ia -= sa[d] * static_cast<std::size_t>(r.cards[d] - 1);
      ib -= sb[d] * static_cast<std::size_t>(r.cards[d] - 1);
    }
  }
  return r;
}

Factor project(const Factor& f, const VarSet& keep) {
  Factor r;
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    const auto v = static_cast<std::size_t>(f.scope[i]);
    if (v < keep.size() && keep.test(v)) {
      r.scope.push_back(f.scope[i]);
      r.cards.push_back(f.cards[i]);
    }
  }
  if (r.scope.size() == f.scope.size()) return f;
  // strides of f's variables inside r (0 for summed-out ones)
  const auto sr = embed_strides(r, f.scope);
  r.table.assign(product(r.cards), 0.0);
  std::vector<int> counter(f.scope.size(), 0);
  std::size_t ir = 0;
  for (std::size_t k = 0; k < f.table.size(); ++k) {
    r.table[ir] += f.table[k];
    for (std::size_t d = f.scope.size(); d-- > 0;) {
      if (++counter[d] < f.cards[d]) {
        ir += sr[d];
        break;
      }
      counter[d] = 0;
      ir -= sr[d] * static_cast<std::size_t>(f.cards[d] - 1);
    }
  }
  return r;
}

Factor sum_out(const Factor& f, VarId v) {
  if (!f.contains(v)) return f;
  VarId top = v;
  for (VarId u : f.scope) top = std::max(top, u);
  VarSet keep(static_cast<std::size_t>(top) + 1);
  for (VarId u : f.scope)
    if (u != v) keep.set(static_cast<std::size_t>(u));
  return project(f, keep);
}

Factor reduce(const Factor& f, const Assignment& evidence) {
  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < f.scope.size(); ++i)
    if (evidence.count(f.scope[i])) fixed.push_back(i);
  if (fixed.empty()) return f;

  Factor r;
  const auto sf = strides_of(f.cards);
  std::size_t base = 0;
  std::vector<std::size_t> free_strides;
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    auto it = evidence.find(f.scope[i]);
    if (it != evidence.end()) {
      if (it->second < 0 || it->second >= f.cards[i]) throw FactorError("evidence state out of range");
      base += sf[i] * static_cast<std::size_t>(it->second);
    } else {
      r.scope.push_back(f.scope[i]);
      r.cards.push_back(f.cards[i]);
      free_strides.push_back(sf[i]);
    }
  }
  const std::size_t n = product(r.cards);
  r.table.assign(n, 0.0);
  std::vector<int> counter(r.scope.size(), 0);
  std::size_t idx = base;
  for (std::size_t k = 0; k < n; ++k) {
    r.table[k] = f.table[idx];
    for (std::size_t d = r.scope.size(); d-- > 0;) {
      if (++counter[d] < r.cards[d]) {
        idx += free_strides[d];
        break;
      }
      counter[d] = 0;
      idx -= free_strides[d] * static_cast<std::size_t>(r.cards[d] - 1);
    }
  }
  return r;
}

Factor family_factor(const Scm& scm, VarId v) {
  const auto fam = family_of(scm.dag, v);
  std::vector<int> cards;
  for (VarId u : fam.members) cards.push_back(scm.cardinality(u));
  Factor f = Factor::over(fam.members, cards, 0.0);
  const auto& var = scm.vars.at(v);
  if (var.dist) {
    f.table = *var.dist;
    return f;
  }
  // child is the slowest-varying variable; parent instantiations follow
  const auto& cpt = *var.cpt;
  const std::size_t rows = cpt.size();
  for (std::size_t row = 0; row < rows; ++row) {
    f.table[static_cast<std::size_t>(cpt[row]) * rows + row] = 1.0;
  }
  return f;
}

}  // namespace twinwidth
