#pragma once

// Average-linkage (UPGMA) agglomerative clustering over a DistanceMatrix.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "geneo/core.hpp"

namespace geneo {

/// Repeatedly merges the two closest clusters, where the distance between
/// clusters is the mean distance between their members. Ties go to the
/// smallest (i, j) pair of node ids.
inline Dendrogram cluster_average_linkage(const DistanceMatrix& m, std::vector<int> labels) {
  const std::size_t n = m.n();
  if (n < 2) throw UsageError("cluster_average_linkage: need at least two samples");
  if (labels.size() != n) throw UsageError("cluster_average_linkage: one label per sample");
  require_valid(m, "cluster_average_linkage");

  const std::size_t nodes = 2 * n - 1;
  std::vector<double> dist(nodes * nodes, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * nodes + j] = m(i, j);
  }
  std::vector<std::size_t> size(nodes, 1);
  std::vector<double> height(nodes, 0.0);
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  Dendrogram d;
  d.labels = std::move(labels);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 1;
    double best = kInfinity;
    // `active` stays sorted, so the first minimum found is the smallest (i, j).
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = dist[active[a] * nodes + active[b]];
        if (v < best) {
          best = v;
          bi = a;
          bj = b;
        }
      }
    }
    const std::size_t left = active[bi], right = active[bj], node = n + step;
    size[node] = size[left] + size[right];
    // Rounding in the running averages can dip an ulp below a child's height.
    height[node] = std::max({best, height[left], height[right]});
    for (std::size_t c : active) {
      if (c == left || c == right) continue;
      const double v = (static_cast<double>(size[left]) * dist[left * nodes + c] +
                        static_cast<double>(size[right]) * dist[right * nodes + c]) /
                       static_cast<double>(size[node]);
      dist[node * nodes + c] = dist[c * nodes + node] = v;
    }
    d.merges.push_back({left, right, height[node], size[node]});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
    active.push_back(node);
  }
  return d;
}

struct ClusterAssignment {
  std::vector<std::size_t> cluster;  // per leaf, numbered by smallest member
  std::size_t clusters = 0;
  double purity = 0.0;
};

/// Drops the k-1 highest merges and reports the resulting clusters together
/// with their purity against the leaf labels.
inline ClusterAssignment cut_dendrogram(const Dendrogram& d, std::size_t k) {
  const std::size_t n = d.leaves();
  if (k < 1 || k > n) throw UsageError("cut_dendrogram: k must lie in [1, n]");
  require_valid(d, "cut_dendrogram");

  std::vector<std::size_t> parent(2 * n - 1);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i + k < n; ++i) {
    const auto& merge = d.merges[i];
    parent[find(merge.left)] = n + i;
    parent[find(merge.right)] = n + i;
  }

  ClusterAssignment out;
  out.cluster.resize(n);
  std::map<std::size_t, std::size_t> number;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const auto root = find(leaf);
    const auto [it, fresh] = number.emplace(root, number.size());
    out.cluster[leaf] = it->second;
  }
  out.clusters = number.size();

  std::vector<std::map<int, std::size_t>> counts(out.clusters);
  for (std::size_t leaf = 0; leaf < n; ++leaf) ++counts[out.cluster[leaf]][d.labels[leaf]];
  std::size_t majority = 0;
  for (const auto& c : counts) {
    std::size_t top = 0;
    for (const auto& [label, count] : c) top = std::max(top, count);
    majority += top;
  }
  out.purity = static_cast<double>(majority) / static_cast<double>(n);
  return out;
}

/// Newick text; leaves are named s<index>_l<label>, branch lengths are
/// height differences.
inline std::string to_newick(const Dendrogram& d) {
  const std::size_t n = d.leaves();
  require_valid(d, "to_newick");
  std::vector<double> height(n + d.merges.size(), 0.0);
  for (std::size_t i = 0; i < d.merges.size(); ++i) height[n + i] = d.merges[i].height;

  auto fmt = [](double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  };
  auto render = [&](auto&& self, std::size_t node) -> std::string {
    if (node < n) return "s" + std::to_string(node) + "_l" + std::to_string(d.labels[node]);
    const auto& merge = d.merges[node - n];
    return "(" + self(self, merge.left) + ":" + fmt(merge.height - height[merge.left]) + "," +
           self(self, merge.right) + ":" + fmt(merge.height - height[merge.right]) + ")";
  };
  if (n == 1) return render(render, 0) + ";";
  return render(render, n + d.merges.size() - 1) + ";";
}

}  // namespace geneo
