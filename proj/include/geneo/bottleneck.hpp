#pragma once

// The extended pseudo-metric d* on diagram points and the bottleneck
// (matching) distance between persistence diagrams.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "geneo/core.hpp"

namespace geneo {

/// d*((x, y), (x2, y2)) = min{ max(|x - x2|, |y - y2|), max((y - x)/2, (y2 - x2)/2) }
/// under the conventions inf - inf = 0, inf - c = inf, min{inf, c} = c.
/// Points at infinity are at finite distance only from each other.
inline double d_star(double x, double y, double x2, double y2) {
  if (x > y || x2 > y2) throw UsageError("d_star: point with birth > death");
  const bool inf1 = std::isinf(y), inf2 = std::isinf(y2);
  if (inf1 && inf2) return std::abs(x - x2);
  if (inf1 || inf2) return kInfinity;
  const double move = std::max(std::abs(x - x2), std::abs(y - y2));
  const double to_diagonal = std::max((y - x) / 2.0, (y2 - x2) / 2.0);
  return std::min(move, to_diagonal);
}

inline double d_star(const DiagramPoint& p, const DiagramPoint& q) { return d_star(p.birth, p.death, q.birth, q.death); }

namespace detail {

inline std::vector<DiagramPoint> expand(const std::vector<DiagramPoint>& pts) {
  std::vector<DiagramPoint> out;
  for (const auto& p : pts) {
    if (p.multiplicity < 1) throw UsageError("diagram point with multiplicity < 1");
    for (int i = 0; i < p.multiplicity; ++i) out.push_back({p.birth, p.death, 1});
  }
  return out;
}

// Hopcroft-Karp on a bipartite graph given as adjacency lists from the left.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), match_l_(left), match_r_(right), dist_(left) {}

  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(static_cast<int>(r)); }

  std::size_t max_matching() {
    std::fill(match_l_.begin(), match_l_.end(), -1);
    std::fill(match_r_.begin(), match_r_.end(), -1);
    std::size_t size = 0;
    while (bfs()) {
      for (std::size_t l = 0; l < adj_.size(); ++l) {
        if (match_l_[l] == -1 && dfs(static_cast<int>(l))) ++size;
      }
    }
    return size;
  }

 private:
  bool bfs() {
    std::queue<int> q;
    bool found = false;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      if (match_l_[l] == -1) {
        dist_[l] = 0;
        q.push(static_cast<int>(l));
      } else {
        dist_[l] = -1;
      }
    }
    while (!q.empty()) {
      const int l = q.front();
      q.pop();
      for (int r : adj_[static_cast<std::size_t>(l)]) {
        const int next = match_r_[static_cast<std::size_t>(r)];
        if (next == -1) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(next)] == -1) {
          dist_[static_cast<std::size_t>(next)] = dist_[static_cast<std::size_t>(l)] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  bool dfs(int l) {
    for (int r : adj_[static_cast<std::size_t>(l)]) {
      const int next = match_r_[static_cast<std::size_t>(r)];
      if (next == -1 || (dist_[static_cast<std::size_t>(next)] == dist_[static_cast<std::size_t>(l)] + 1 && dfs(next))) {
        match_l_[static_cast<std::size_t>(l)] = r;
        match_r_[static_cast<std::size_t>(r)] = l;
        return true;
      }
    }
    dist_[static_cast<std::size_t>(l)] = -1;
    return false;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> match_l_, match_r_, dist_;
};

// Essential classes: sort both abscissa lists and pair them in order.
inline double essential_cost(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  auto births = [](const PersistenceDiagram& d) {
    std::vector<double> out;
    for (const auto& p : expand(d.essential)) out.push_back(p.birth);
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto xa = births(a), xb = births(b);
  if (xa.size() != xb.size()) return kInfinity;
  double cost = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) cost = std::max(cost, std::abs(xa[i] - xb[i]));
  return cost;
}

// Finite points: smallest candidate cost r admitting a perfect matching in
// which every point goes to a partner within d* <= r or to the diagonal.
inline double finite_cost(const std::vector<DiagramPoint>& p, const std::vector<DiagramPoint>& q) {
  const std::size_t n = p.size(), m = q.size();
  if (n == 0 && m == 0) return 0.0;

  std::vector<double> half_p(n), half_q(m), cross(n * m);
  std::vector<double> candidates;
  candidates.reserve(n * m + n + m);
  for (std::size_t i = 0; i < n; ++i) candidates.push_back(half_p[i] = (p[i].death - p[i].birth) / 2.0);
  for (std::size_t j = 0; j < m; ++j) candidates.push_back(half_q[j] = (q[j].death - q[j].birth) / 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) candidates.push_back(cross[i * m + j] = d_star(p[i], q[j]));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Left: p_0..p_{n-1}, then diagonal slots for q. Right: q_0..q_{m-1}, then
  // diagonal slots for p.
  auto feasible = [&](double r) {
    BipartiteMatcher matcher(n + m, m + n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (cross[i * m + j] <= r) matcher.add_edge(i, j);
      }
      if (half_p[i] <= r) matcher.add_edge(i, m + i);
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (half_q[j] <= r) matcher.add_edge(n + j, j);
      for (std::size_t i = 0; i < n; ++i) matcher.add_edge(n + j, m + i);
    }
    return matcher.max_matching() == n + m;
  };

  // The largest half-persistence is always feasible (everything to the diagonal).
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace detail

/// Bottleneck distance between two diagrams of the same degree. Returns +inf
/// when the numbers of essential classes differ.
inline double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.degree != b.degree) throw UsageError("bottleneck: diagrams of different degree");
  const double essential = detail::essential_cost(a, b);
  if (std::isinf(essential)) return kInfinity;
  return std::max(essential, detail::finite_cost(detail::expand(a.points), detail::expand(b.points)));
}

}  // namespace geneo
