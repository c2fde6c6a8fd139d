#pragma once

// Operator selection and sampling on a labelled dataset, and the distance d_S
// induced by the surviving operators.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "geneo/bottleneck.hpp"
#include "geneo/core.hpp"
#include "geneo/metrics.hpp"
#include "geneo/operators.hpp"
#include "geneo/parallel.hpp"
#include "geneo/persistence.hpp"

namespace geneo {

/// D_k(F(φ)) for a list of operators (rows) and samples (columns).
class DiagramTable {
 public:
  DiagramTable() = default;
  DiagramTable(std::size_t operators, std::size_t samples)
      : operators_(operators), samples_(samples), diagrams_(operators * samples) {}

  std::size_t operators() const noexcept { return operators_; }
  std::size_t samples() const noexcept { return samples_; }
  const PersistenceDiagram& operator()(std::size_t op, std::size_t sample) const noexcept {
    return diagrams_[op * samples_ + sample];
  }
  PersistenceDiagram& operator()(std::size_t op, std::size_t sample) noexcept {
    return diagrams_[op * samples_ + sample];
  }

 private:
  std::size_t operators_ = 0;
  std::size_t samples_ = 0;
  std::vector<PersistenceDiagram> diagrams_;
};

inline DiagramTable compute_diagrams(std::span<const Kernel> kernels, std::span<const GridFunction> samples,
                                     int degree, unsigned threads = 0) {
  DiagramTable table(kernels.size(), samples.size());
  parallel_for(
      kernels.size() * samples.size(),
      [&](std::size_t item) {
        const std::size_t op = item / samples.size(), s = item % samples.size();
        table(op, s) = persistence(apply(kernels[op], samples[s]), degree);
      },
      threads);
  return table;
}

inline std::vector<Kernel> kernels_of(const OperatorSet& set, bool selected_only = false) {
  std::vector<Kernel> out;
  for (const auto& e : set.operators) {
    if (!selected_only || e.status == OperatorStatus::selected) out.push_back(e.kernel);
  }
  return out;
}

/// Sample indices grouped by label, labels ascending.
inline std::map<int, std::vector<std::size_t>> class_members(std::span<const int> labels) {
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  return members;
}

struct SelectionReport {
  std::vector<int> classes;
  std::vector<int> ids;                       // every operator examined
  std::vector<std::vector<double>> s_values;  // [operator][class]
  double eps = 0.0;
  std::vector<int> selected;

  /// max over classes of s_l for the operator with the given id.
  double selectivity(int id) const {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw UsageError("selection report has no operator " + std::to_string(id));
    const auto& row = s_values[static_cast<std::size_t>(it - ids.begin())];
    return *std::max_element(row.begin(), row.end());
  }
};

/// s_l(F) = max over pairs (i, j) in class l of bottleneck(D(F φ_i), D(F φ_j)).
/// F is selected when s_l(F) < eps for every class.
inline SelectionReport select_from_diagrams(const DiagramTable& table, std::span<const int> ids,
                                            std::span<const int> labels, double eps, unsigned threads = 0) {
  if (!(eps > 0.0)) throw UsageError("select_operators: eps must be positive");
  if (labels.size() != table.samples() || ids.size() != table.operators()) {
    throw UsageError("select_operators: table does not match ids/labels");
  }
  const auto members = class_members(labels);
  SelectionReport report;
  report.eps = eps;
  report.ids.assign(ids.begin(), ids.end());
  for (const auto& [label, idx] : members) {
    if (idx.size() < 2) throw UsageError("select_operators: class " + std::to_string(label) + " has fewer than 2 samples");
    report.classes.push_back(label);
  }
  report.s_values.assign(ids.size(), std::vector<double>(report.classes.size(), 0.0));
  parallel_for(
      ids.size(),
      [&](std::size_t op) {
        std::size_t c = 0;
        for (const auto& [label, idx] : members) {
          double s = 0.0;
          for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a + 1; b < idx.size(); ++b) s = std::max(s, bottleneck(table(op, idx[a]), table(op, idx[b])));
          }
          report.s_values[op][c++] = s;
        }
      },
      threads);
  for (std::size_t op = 0; op < ids.size(); ++op) {
    const auto& row = report.s_values[op];
    if (std::all_of(row.begin(), row.end(), [&](double s) { return s < eps; })) report.selected.push_back(ids[op]);
  }
  return report;
}

inline SelectionReport select_operators(const OperatorSet& candidates, const LabeledDataset& data, double eps,
                                        int degree, unsigned threads = 0) {
  if (data.samples.size() != data.labels.size()) throw UsageError("select_operators: samples/labels mismatch");
  const auto kernels = kernels_of(candidates);
  std::vector<int> ids;
  for (const auto& e : candidates.operators) ids.push_back(e.id);
  const auto table = compute_diagrams(kernels, data.samples, degree, threads);
  return select_from_diagrams(table, ids, data.labels, eps, threads);
}

/// Marks selected operators; everything else goes back to candidate.
inline void mark_selection(OperatorSet& set, const SelectionReport& report) {
  for (auto& e : set.operators) {
    const bool sel = std::find(report.selected.begin(), report.selected.end(), e.id) != report.selected.end();
    e.status = sel ? OperatorStatus::selected : OperatorStatus::candidate;
  }
}

struct SamplingReport {
  std::vector<int> ids;                         // operators examined, in set order
  std::vector<int> classes;
  std::vector<std::vector<double>> delta;       // [class][pair]
  std::vector<std::vector<std::size_t>> rank;   // [class][pair]
  std::vector<std::size_t> scores;              // [pair]
  double threshold = 0.0;
  std::vector<int> survivors;
  std::vector<int> dropped;                     // in the order they were removed

  /// Pairs are (i, j), i < j, over positions in `ids`, enumerated row by row.
  static std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }
};

/// Nearest-rank percentile of `values` (p in [0, 100]).
inline double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) throw UsageError("percentile of an empty list");
  if (p < 0.0 || p > 100.0) throw UsageError("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
  return values[rank == 0 ? 0 : rank - 1];
}

/// Ranks operator pairs per class by ascending Δ^l (ties by pair index), sums
/// the ranks into contrastive scores, and removes one member of each redundant
/// pair. A pair is redundant when its score is below the t-th percentile of all
/// scores, or when Δ^l vanishes for every class. Redundant pairs are visited in
/// ascending (score, pair index); if both members are still alive the one with
/// the larger selectivity (max_l s_l) is dropped, the larger id on ties.
inline SamplingReport resolve_redundancy(std::vector<int> ids, std::vector<int> classes,
                                         std::vector<std::vector<double>> delta, std::span<const double> selectivity,
                                         double t_percentile) {
  const std::size_t n = ids.size();
  if (n == 0) throw UsageError("sample_operators: empty operator set");
  if (selectivity.size() != n) throw UsageError("sample_operators: one selectivity value per operator");
  const std::size_t pairs = n * (n - 1) / 2;
  for (const auto& row : delta) {
    if (row.size() != pairs) throw UsageError("sample_operators: Δ table has the wrong number of pairs");
  }

  SamplingReport r;
  r.ids = std::move(ids);
  r.classes = std::move(classes);
  r.delta = std::move(delta);
  r.scores.assign(pairs, 0);
  for (const auto& row : r.delta) {
    std::vector<std::size_t> order(pairs);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    std::vector<std::size_t> rank(pairs);
    for (std::size_t pos = 0; pos < pairs; ++pos) rank[order[pos]] = pos;
    for (std::size_t p = 0; p < pairs; ++p) r.scores[p] += rank[p];
    r.rank.push_back(std::move(rank));
  }

  std::vector<bool> alive(n, true);
  if (pairs > 0) {
    r.threshold = nearest_rank_percentile(std::vector<double>(r.scores.begin(), r.scores.end()), t_percentile);
    std::vector<std::size_t> order(pairs);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.scores[a] < r.scores[b]; });

    std::vector<std::pair<std::size_t, std::size_t>> members(pairs);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) members[SamplingReport::pair_index(i, j, n)] = {i, j};
    }
    for (std::size_t p : order) {
      const bool identical = std::all_of(r.delta.begin(), r.delta.end(), [&](const auto& row) { return row[p] == 0.0; });
      if (!(static_cast<double>(r.scores[p]) < r.threshold) && !identical) continue;
      const auto [i, j] = members[p];
      if (!alive[i] || !alive[j]) continue;
      std::size_t victim;
      if (selectivity[i] != selectivity[j]) {
        victim = selectivity[i] > selectivity[j] ? i : j;
      } else {
        victim = r.ids[i] > r.ids[j] ? i : j;
      }
      alive[victim] = false;
      r.dropped.push_back(r.ids[victim]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) r.survivors.push_back(r.ids[i]);
  }
  return r;
}

/// Δ^l(F_p, F_q) = max over class-l samples of bottleneck(D(F_p φ), D(F_q φ)),
/// for every pair of operators in the table.
inline std::vector<std::vector<double>> delta_tables(const DiagramTable& table, std::span<const int> labels,
                                                     std::vector<int>* classes_out = nullptr, unsigned threads = 0) {
  const auto members = class_members(labels);
  const std::size_t n = table.operators();
  const std::size_t pairs = n * (n - 1) / 2;
  std::vector<std::vector<double>> delta(members.size(), std::vector<double>(pairs, 0.0));
  if (classes_out) classes_out->clear();
  std::vector<const std::vector<std::size_t>*> idx;
  for (const auto& [label, m] : members) {
    if (classes_out) classes_out->push_back(label);
    idx.push_back(&m);
  }
  parallel_for(
      n,
      [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const std::size_t p = SamplingReport::pair_index(i, j, n);
          for (std::size_t c = 0; c < idx.size(); ++c) {
            double d = 0.0;
            for (std::size_t s : *idx[c]) d = std::max(d, bottleneck(table(i, s), table(j, s)));
            delta[c][p] = d;
          }
        }
      },
      threads);
  return delta;
}

/// Sampling over the operators of `set` whose status is `selected`.
/// `selection` supplies their selectivities.
inline SamplingReport sample_operators(const OperatorSet& set, const LabeledDataset& data, double t_percentile,
                                       int degree, const SelectionReport& selection, unsigned threads = 0) {
  std::vector<int> ids;
  std::vector<double> selectivity;
  for (const auto& e : set.operators) {
    if (e.status != OperatorStatus::selected) continue;
    ids.push_back(e.id);
    selectivity.push_back(selection.selectivity(e.id));
  }
  if (ids.empty()) throw UsageError("sample_operators: no selected operators");
  const auto table = compute_diagrams(kernels_of(set, true), data.samples, degree, threads);
  std::vector<int> classes;
  auto delta = delta_tables(table, data.labels, &classes, threads);
  return resolve_redundancy(std::move(ids), std::move(classes), std::move(delta), selectivity, t_percentile);
}

/// Sampling when no selection report is at hand: selectivities are recomputed.
inline SamplingReport sample_operators(const OperatorSet& set, const LabeledDataset& data, double t_percentile,
                                       int degree, unsigned threads = 0) {
  std::vector<int> ids;
  for (const auto& e : set.operators) {
    if (e.status == OperatorStatus::selected) ids.push_back(e.id);
  }
  if (ids.empty()) throw UsageError("sample_operators: no selected operators");
  const auto table = compute_diagrams(kernels_of(set, true), data.samples, degree, threads);
  const auto sel = select_from_diagrams(table, ids, data.labels, kInfinity, threads);
  std::vector<double> selectivity;
  for (int id : ids) selectivity.push_back(sel.selectivity(id));
  std::vector<int> classes;
  auto delta = delta_tables(table, data.labels, &classes, threads);
  return resolve_redundancy(std::move(ids), std::move(classes), std::move(delta), selectivity, t_percentile);
}

inline void mark_sampling(OperatorSet& set, const SamplingReport& report) {
  for (auto& e : set.operators) {
    if (std::find(report.dropped.begin(), report.dropped.end(), e.id) != report.dropped.end()) {
      e.status = OperatorStatus::sampled_out;
    }
  }
}

/// d_S(f1, f2) = max over F in S of bottleneck(D_k(F f1), D_k(F f2)).
template <std::ranges::input_range Ops>
  requires GridOperator<std::ranges::range_value_t<Ops>>
double metric_dS(const GridFunction& f1, const GridFunction& f2, const Ops& S, int degree) {
  return dmatch_family(f1, f2, S, degree);
}

inline double metric_dS(const GridFunction& f1, const GridFunction& f2, const OperatorSet& S, int degree) {
  return dmatch_family(f1, f2, S, degree);
}

/// Pairwise d_S over the samples of a diagram table (operators = S).
inline DistanceMatrix distance_matrix_dS(const DiagramTable& table, unsigned threads = 0) {
  if (table.operators() == 0) throw UsageError("metric_dS: empty operator set");
  const std::size_t n = table.samples();
  DistanceMatrix m(n);
  std::vector<double> row_values(n * n, 0.0);
  parallel_for(
      n,
      [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double d = 0.0;
          for (std::size_t op = 0; op < table.operators(); ++op) d = std::max(d, bottleneck(table(op, i), table(op, j)));
          row_values[i * n + j] = d;
        }
      },
      threads);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, row_values[i * n + j]);
  }
  return m;
}

}  // namespace geneo
