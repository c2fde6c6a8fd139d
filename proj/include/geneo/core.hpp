#pragma once

// Shared domain types. Everything here is a plain value type; algorithms live
// in the other headers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace geneo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or unmet preconditions (wrong sizes, degree mismatch, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// An object failed validation.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated input files.
class DataError : public Error {
 public:
  using Error::Error;
};

struct Violation {
  std::string message;
};

using Violations = std::vector<Violation>;

/// A real-valued function sampled on a width x height pixel grid, row-major.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), values_(width * height, fill) {}

  GridFunction(std::size_t width, std::size_t height, std::vector<double> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (values_.size() != width_ * height_) {
      throw UsageError("GridFunction: " + std::to_string(values_.size()) +
                       " values for a " + std::to_string(width_) + "x" +
                       std::to_string(height_) + " grid");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t x, std::size_t y) const noexcept {
    return values_[y * width_ + x];
  }
  double& operator()(std::size_t x, std::size_t y) noexcept {
    return values_[y * width_ + x];
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> row(std::size_t y) const noexcept {
    return {values_.data() + y * width_, width_};
  }
  std::span<double> row(std::size_t y) noexcept {
    return {values_.data() + y * width_, width_};
  }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

struct DiagramPoint {
  double birth = 0.0;
  double death = kInfinity;
  int multiplicity = 1;

  bool essential() const noexcept { return std::isinf(death); }
  double persistence() const noexcept { return death - birth; }

  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Points off the diagonal for one homology degree. Finite points and
/// essential classes (death = +inf) are kept apart; the diagonal is implicit.
struct PersistenceDiagram {
  int degree = 0;
  std::vector<DiagramPoint> points;
  std::vector<DiagramPoint> essential;

  std::size_t finite_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : points) n += static_cast<std::size_t>(p.multiplicity);
    return n;
  }
  std::size_t essential_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : essential) n += static_cast<std::size_t>(p.multiplicity);
    return n;
  }

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// A point on the parameter manifold of radial Gaussian-mixture kernels.
/// `tau` is dimensionless (unit sphere); `sigma` and `support` are pixels.
struct IeneoParams {
  std::vector<double> a;
  std::vector<double> tau;
  double sigma = 1.0;
  int support = 7;

  std::size_t k() const noexcept { return a.size(); }

  friend bool operator==(const IeneoParams&, const IeneoParams&) = default;
};

/// A realized, L1-normalized convolution stencil.
struct Kernel {
  int side = 0;
  std::vector<double> weights;  // side * side, row-major
  double l1_norm = 0.0;         // sum of |raw| before normalization

  int radius() const noexcept { return (side - 1) / 2; }
  double operator()(int col, int row) const noexcept {
    return weights[static_cast<std::size_t>(row) * static_cast<std::size_t>(side) +
                   static_cast<std::size_t>(col)];
  }

  friend bool operator==(const Kernel&, const Kernel&) = default;
};

/// Element of the grid-exact isometry group: x -> shift + rot^q(flip^r(x)),
/// acting on pixel coordinates centred on the grid centre.
struct GridIsometry {
  int quarter_turns = 0;  // rotation by 90 * quarter_turns degrees, 0..3
  bool reflect = false;   // flip about the vertical axis, applied before rotating
  int dx = 0;
  int dy = 0;

  int rotation_degrees() const noexcept { return 90 * quarter_turns; }
  static GridIsometry identity() { return {}; }

  friend bool operator==(const GridIsometry&, const GridIsometry&) = default;
};

enum class OperatorStatus { candidate, selected, sampled_out };

struct OperatorEntry {
  int id = 0;
  IeneoParams params;
  Kernel kernel;
  OperatorStatus status = OperatorStatus::candidate;

  friend bool operator==(const OperatorEntry&, const OperatorEntry&) = default;
};

struct OperatorSet {
  std::vector<OperatorEntry> operators;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return operators.size(); }
  bool empty() const noexcept { return operators.empty(); }

  friend bool operator==(const OperatorSet&, const OperatorSet&) = default;
};

struct LabeledDataset {
  std::vector<GridFunction> samples;
  std::vector<int> labels;

  std::size_t size() const noexcept { return samples.size(); }

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

/// Dense symmetric n x n matrix of pairwise distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}
  DistanceMatrix(std::size_t n, std::vector<double> entries)
      : n_(n), entries_(std::move(entries)) {
    if (entries_.size() != n_ * n_) {
      throw UsageError("DistanceMatrix: expected " + std::to_string(n_ * n_) + " entries");
    }
  }

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double d) noexcept {
    entries_[i * n_ + j] = d;
    entries_[j * n_ + i] = d;
  }
  std::span<const double> entries() const noexcept { return entries_; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Agglomerative merge tree. Leaves are 0..n-1; the i-th merge creates node n+i.
struct Dendrogram {
  struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;

    friend bool operator==(const Merge&, const Merge&) = default;
  };

  std::vector<Merge> merges;
  std::vector<int> labels;

  std::size_t leaves() const noexcept { return labels.size(); }

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

// ---------------------------------------------------------------------------
// Validation. Violations are returned as data; require_valid() throws.

namespace detail {

inline void expect(Violations& out, bool ok, std::string message) {
  if (!ok) out.push_back({std::move(message)});
}

inline double sum_of_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline bool lex_less(const DiagramPoint& p, const DiagramPoint& q) {
  return p.birth < q.birth || (p.birth == q.birth && p.death < q.death);
}

}  // namespace detail

inline Violations validate(const GridFunction& f) {
  Violations v;
  detail::expect(v, f.width() > 0 && f.height() > 0, "grid must have positive width and height");
  detail::expect(v, f.width() * f.height() == f.size(), "width*height must equal the number of values");
  std::size_t bad = 0;
  for (double x : f.values()) bad += std::isfinite(x) ? 0 : 1;
  detail::expect(v, bad == 0, std::to_string(bad) + " non-finite values");
  return v;
}

inline Violations validate(const DiagramPoint& p) {
  Violations v;
  detail::expect(v, !std::isnan(p.birth) && !std::isnan(p.death), "NaN coordinate");
  detail::expect(v, std::isfinite(p.birth), "birth must be finite");
  detail::expect(v, !(p.birth > p.death), "birth>death");
  detail::expect(v, p.multiplicity >= 1, "multiplicity must be >= 1");
  return v;
}

inline Violations validate(const PersistenceDiagram& d) {
  Violations v;
  detail::expect(v, d.degree >= 0, "degree must be non-negative");
  for (const auto& p : d.points) {
    for (auto& e : validate(p)) v.push_back(std::move(e));
    detail::expect(v, std::isfinite(p.death), "finite point list holds an infinite death");
    detail::expect(v, p.birth != p.death, "diagonal point stored");
  }
  for (const auto& p : d.essential) {
    for (auto& e : validate(p)) v.push_back(std::move(e));
    detail::expect(v, std::isinf(p.death) && p.death > 0, "essential point with finite death");
  }
  for (std::size_t i = 1; i < d.points.size(); ++i) {
    if (detail::lex_less(d.points[i], d.points[i - 1])) {
      v.push_back({"points not sorted by (birth, death)"});
      break;
    }
  }
  for (std::size_t i = 1; i < d.essential.size(); ++i) {
    if (d.essential[i].birth < d.essential[i - 1].birth) {
      v.push_back({"essential points not sorted by birth"});
      break;
    }
  }
  return v;
}

inline constexpr double kUnitSphereTolerance = 1e-9;

inline Violations validate(const IeneoParams& p) {
  Violations v;
  detail::expect(v, p.k() >= 1, "at least one Gaussian component required");
  detail::expect(v, p.a.size() == p.tau.size(), "a and tau must have the same length");
  detail::expect(v, std::abs(detail::sum_of_squares(p.a) - 1.0) <= kUnitSphereTolerance, "Σa²≠1");
  detail::expect(v, std::abs(detail::sum_of_squares(p.tau) - 1.0) <= kUnitSphereTolerance, "Στ²≠1");
  detail::expect(v, p.sigma > 0.0 && std::isfinite(p.sigma), "sigma must be positive");
  detail::expect(v, p.support >= 3 && p.support % 2 == 1, "support must be odd and >= 3");
  return v;
}

inline Violations validate(const Kernel& k) {
  Violations v;
  detail::expect(v, k.side >= 1 && k.side % 2 == 1, "kernel side must be odd");
  const auto n = static_cast<std::size_t>(k.side) * static_cast<std::size_t>(k.side);
  if (k.side < 1 || k.weights.size() != n) {
    v.push_back({"kernel must hold side² weights"});
    return v;
  }
  double l1 = 0.0;
  for (double w : k.weights) l1 += std::abs(w);
  detail::expect(v, std::abs(l1 - 1.0) <= 1e-12, "Σ|w|≠1");
  detail::expect(v, k.l1_norm > 0.0, "l1_norm must be positive");
  // The eight symmetries of the square.
  const int s = k.side;
  double worst = 0.0;
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      const double w = k(c, r);
      const double images[] = {k(s - 1 - c, r), k(c, s - 1 - r), k(s - 1 - c, s - 1 - r),
                               k(r, c),         k(s - 1 - r, c), k(r, s - 1 - c),
                               k(s - 1 - r, s - 1 - c)};
      for (double u : images) worst = std::max(worst, std::abs(w - u));
    }
  }
  detail::expect(v, worst <= 1e-12, "kernel not radially symmetric");
  return v;
}

inline Violations validate(const GridIsometry& g) {
  Violations v;
  detail::expect(v, g.quarter_turns >= 0 && g.quarter_turns < 4, "rotation must be 0, 90, 180 or 270 degrees");
  return v;
}

inline Violations validate(const OperatorSet& s) {
  Violations v;
  for (std::size_t i = 0; i < s.operators.size(); ++i) {
    if (s.operators[i].id != static_cast<int>(i)) {
      v.push_back({"operator ids must be unique and dense from 0"});
      break;
    }
  }
  for (const auto& op : s.operators) {
    for (auto& e : validate(op.params)) v.push_back({"operator " + std::to_string(op.id) + ": " + e.message});
    for (auto& e : validate(op.kernel)) v.push_back({"operator " + std::to_string(op.id) + ": " + e.message});
  }
  return v;
}

inline Violations validate(const LabeledDataset& d) {
  Violations v;
  detail::expect(v, d.samples.size() == d.labels.size(), "samples and labels differ in length");
  for (int l : d.labels) {
    if (l < 0) {
      v.push_back({"labels must be non-negative"});
      break;
    }
  }
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    for (auto& e : validate(d.samples[i])) v.push_back({"sample " + std::to_string(i) + ": " + e.message});
  }
  return v;
}

inline Violations validate(const DistanceMatrix& m) {
  Violations v;
  detail::expect(v, m.n() >= 1, "distance matrix must be non-empty");
  bool sym = true, diag = true, nonneg = true;
  for (std::size_t i = 0; i < m.n(); ++i) {
    diag = diag && m(i, i) == 0.0;
    for (std::size_t j = 0; j < m.n(); ++j) {
      nonneg = nonneg && m(i, j) >= 0.0;
      sym = sym && std::abs(m(i, j) - m(j, i)) <= 1e-12;
    }
  }
  detail::expect(v, sym, "matrix not symmetric");
  detail::expect(v, diag, "non-zero diagonal");
  detail::expect(v, nonneg, "negative entry");
  return v;
}

inline Violations validate(const Dendrogram& d) {
  Violations v;
  const std::size_t n = d.leaves();
  detail::expect(v, n == 0 || d.merges.size() == n - 1, "a dendrogram over n leaves needs n-1 merges");
  std::vector<double> height(n + d.merges.size(), 0.0);
  std::vector<bool> used(n + d.merges.size(), false);
  for (std::size_t i = 0; i < d.merges.size(); ++i) {
    const auto& m = d.merges[i];
    const std::size_t node = n + i;
    if (m.left >= node || m.right >= node || m.left == m.right) {
      v.push_back({"merge " + std::to_string(i) + " refers to an unknown node"});
      continue;
    }
    detail::expect(v, !used[m.left] && !used[m.right], "node merged twice");
    used[m.left] = used[m.right] = true;
    detail::expect(v, m.height >= 0.0, "negative merge height");
    detail::expect(v, m.height >= height[m.left] && m.height >= height[m.right],
                   "merge heights decrease towards the root");
    height[node] = m.height;
  }
  return v;
}

inline std::string describe(const Violations& v) {
  std::string out;
  for (const auto& e : v) {
    if (!out.empty()) out += "; ";
    out += e.message;
  }
  return out;
}

template <class T>
void require_valid(const T& object, const char* what) {
  auto v = validate(object);
  if (!v.empty()) throw InvariantError(std::string(what) + ": " + describe(v));
}

}  // namespace geneo
