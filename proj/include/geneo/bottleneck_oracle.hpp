#pragma once

// Exhaustive bottleneck distance for small diagrams. Used to check
// bottleneck(); shares nothing with it except d_star.

#include <algorithm>
#include <numeric>
#include <vector>

#include "geneo/bottleneck.hpp"

namespace geneo {

inline constexpr std::size_t kOracleMaxPoints = 8;

namespace detail {

// Every bijection between the diagonal-augmented diagrams is determined by a
// partial injection from p into q: matched pairs pay d*, everything left over
// goes to (or comes from) the diagonal and pays its half-persistence.
class InjectionSearch {
 public:
  InjectionSearch(const std::vector<DiagramPoint>& p, const std::vector<DiagramPoint>& q)
      : p_(p), q_(q), used_(q.size(), false) {}

  double run() {
    best_ = kInfinity;
    descend(0, 0.0);
    return best_;
  }

 private:
  static double to_diagonal(const DiagramPoint& x) { return d_star(x, {x.birth, x.birth, 1}); }

  void descend(std::size_t i, double cost) {
    if (cost >= best_) return;
    if (i == p_.size()) {
      for (std::size_t j = 0; j < q_.size(); ++j) {
        if (!used_[j]) cost = std::max(cost, to_diagonal(q_[j]));
      }
      best_ = std::min(best_, cost);
      return;
    }
    descend(i + 1, std::max(cost, to_diagonal(p_[i])));
    for (std::size_t j = 0; j < q_.size(); ++j) {
      if (used_[j]) continue;
      used_[j] = true;
      descend(i + 1, std::max(cost, d_star(p_[i], q_[j])));
      used_[j] = false;
    }
  }

  const std::vector<DiagramPoint>& p_;
  const std::vector<DiagramPoint>& q_;
  std::vector<bool> used_;
  double best_ = kInfinity;
};

}  // namespace detail

/// Brute-force bottleneck distance; at most kOracleMaxPoints finite and
/// kOracleMaxPoints essential points per diagram.
inline double bottleneck_oracle(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.degree != b.degree) throw UsageError("bottleneck_oracle: diagrams of different degree");
  const auto pa = detail::expand(a.points), pb = detail::expand(b.points);
  const auto ea = detail::expand(a.essential), eb = detail::expand(b.essential);
  if (pa.size() > kOracleMaxPoints || pb.size() > kOracleMaxPoints || ea.size() > kOracleMaxPoints ||
      eb.size() > kOracleMaxPoints) {
    throw UsageError("bottleneck_oracle: more than 8 points in a diagram");
  }

  // d* is infinite between a finite and an essential point, and an essential
  // point sent to the diagonal costs inf as well, so any finite-cost bijection
  // pairs essential points among themselves.
  double essential = kInfinity;
  if (ea.size() == eb.size()) {
    std::vector<std::size_t> perm(eb.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double cost = 0.0;
      for (std::size_t i = 0; i < ea.size(); ++i) cost = std::max(cost, d_star(ea[i], eb[perm[i]]));
      essential = std::min(essential, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (std::isinf(essential)) return kInfinity;
  return std::max(essential, detail::InjectionSearch(pa, pb).run());
}

}  // namespace geneo
