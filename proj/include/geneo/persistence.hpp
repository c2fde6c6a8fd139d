#pragma once

// Sublevel-set persistent homology of a GridFunction on the cubical complex
// whose vertices are pixels (V-construction): edges join 4-adjacent pixels,
// squares fill 2x2 pixel blocks, and every cell takes the max of its vertices.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <vector>

#include "geneo/core.hpp"

namespace geneo {

/// Sorts points lexicographically and folds repeated points into multiplicities.
inline PersistenceDiagram canonicalize(PersistenceDiagram d) {
  auto fold = [](std::vector<DiagramPoint>& pts) {
    std::sort(pts.begin(), pts.end(), detail::lex_less);
    std::vector<DiagramPoint> out;
    for (const auto& p : pts) {
      if (!out.empty() && out.back().birth == p.birth && out.back().death == p.death) {
        out.back().multiplicity += p.multiplicity;
      } else {
        out.push_back(p);
      }
    }
    pts = std::move(out);
  };
  std::erase_if(d.points, [](const DiagramPoint& p) { return p.birth == p.death; });
  fold(d.points);
  fold(d.essential);
  return d;
}

namespace detail {

// LSD radix sort on the low `bits` bits of key(item), 16 bits per pass.
template <class T, class Key>
void radix_sort(std::vector<T>& items, int bits, Key key) {
  std::vector<T> buffer(items.size());
  std::vector<std::size_t> count(1u << 16);
  for (int shift = 0; shift < bits; shift += 16) {
    std::fill(count.begin(), count.end(), 0);
    for (const T& item : items) ++count[(key(item) >> shift) & 0xffffu];
    std::size_t sum = 0;
    for (auto& c : count) {
      const std::size_t here = c;
      c = sum;
      sum += here;
    }
    for (const T& item : items) buffer[count[(key(item) >> shift) & 0xffffu]++] = item;
    items.swap(buffer);
  }
}

// Order-preserving map from doubles to unsigned integers (-0.0 and 0.0 are
// merged so that equal values share a key).
inline std::uint64_t ordered_bits(double x) {
  if (x == 0.0) x = 0.0;
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  return (u & 0x8000000000000000ULL) ? ~u : (u | 0x8000000000000000ULL);
}

inline int bit_width(std::uint64_t x) {
  int w = 0;
  while (x != 0) {
    ++w;
    x >>= 1;
  }
  return w;
}

}  // namespace detail

struct Cell {
  double value = 0.0;
  std::uint8_t dim = 0;
  std::uint32_t index = 0;  // canonical index within its dimension

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// The filtered cubical complex of a grid function. Cells are ordered by
/// (value, dimension, canonical index); canonical indices are row-major by
/// anchor pixel, with the horizontal edge before the vertical one.
class CubicalFiltration {
 public:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  explicit CubicalFiltration(const GridFunction& f, int max_dim = 2)
      : width_(f.width()), height_(f.height()) {
    require_valid(f, "build_filtration");
    const std::size_t w = width_, h = height_;
    horizontal_.assign(w * h, kNone);
    vertical_.assign(w * h, kNone);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const auto v = static_cast<std::uint32_t>(y * w + x);
        if (x + 1 < w) {
          horizontal_[v] = static_cast<std::uint32_t>(edges_.size());
          edges_.push_back({v, v + 1});
        }
        if (y + 1 < h) {
          vertical_[v] = static_cast<std::uint32_t>(edges_.size());
          edges_.push_back({v, static_cast<std::uint32_t>(v + w)});
        }
      }
    }
    const std::size_t squares = (w > 1 && h > 1) ? (w - 1) * (h - 1) : 0;

    // Cells are sorted through packed keys (dense value rank, dim, index);
    // ranks preserve the order of values, so this is the (value, dim, index)
    // order without a comparator over doubles.
    const auto vals = f.values();
    const std::size_t n = w * h;
    struct Keyed {
      std::uint64_t bits;
      std::uint32_t vertex;
    };
    std::vector<Keyed> order(n);
    for (std::uint32_t v = 0; v < n; ++v) order[v] = {detail::ordered_bits(vals[v]), v};
    detail::radix_sort(order, 64, [](const Keyed& k) { return k.bits; });
    std::vector<std::uint64_t> rank(n);
    std::vector<double> level;
    for (const auto& [bits, v] : order) {
      if (level.empty() || level.back() != vals[v]) level.push_back(vals[v]);
      rank[v] = level.size() - 1;
    }

    std::vector<std::uint64_t> keys;
    keys.reserve(n + (max_dim >= 1 ? edges_.size() : 0) + (max_dim >= 2 ? squares : 0));
    auto key = [](std::uint64_t r, std::uint64_t dim, std::uint64_t index) { return (r << 34) | (dim << 32) | index; };
    for (std::uint32_t v = 0; v < n; ++v) keys.push_back(key(rank[v], 0, v));
    if (max_dim >= 1) {
      for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        keys.push_back(key(std::max(rank[edges_[e][0]], rank[edges_[e][1]]), 1, e));
      }
    }
    if (max_dim >= 2) {
      for (std::uint32_t s = 0; s < squares; ++s) {
        std::uint64_t m = rank[square_vertex(s, 0)];
        for (int i = 1; i < 4; ++i) m = std::max(m, rank[square_vertex(s, i)]);
        keys.push_back(key(m, 2, s));
      }
    }
    detail::radix_sort(keys, 34 + detail::bit_width(level.size()), [](std::uint64_t k) { return k; });
    cells_.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const std::uint64_t k = keys[i];
      cells_[i] = {level[k >> 34], static_cast<std::uint8_t>((k >> 32) & 3u), static_cast<std::uint32_t>(k)};
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  std::size_t count(int dim) const noexcept {
    switch (dim) {
      case 0: return width_ * height_;
      case 1: return edges_.size();
      case 2: return (width_ > 1 && height_ > 1) ? (width_ - 1) * (height_ - 1) : 0;
      default: return 0;
    }
  }

  std::array<std::uint32_t, 2> edge_vertices(std::uint32_t e) const noexcept { return edges_[e]; }

  /// Edges of square s: top, left, right, bottom.
  std::array<std::uint32_t, 4> square_edges(std::uint32_t s) const noexcept {
    const auto v = anchor(s);
    return {horizontal_[v], vertical_[v], vertical_[v + 1],
            horizontal_[v + static_cast<std::uint32_t>(width_)]};
  }

  std::uint32_t square_vertex(std::uint32_t s, int corner) const noexcept {
    const auto v = anchor(s);
    const auto w = static_cast<std::uint32_t>(width_);
    switch (corner) {
      case 0: return v;
      case 1: return v + 1;
      case 2: return v + w;
      default: return v + w + 1;
    }
  }

 private:
  std::uint32_t anchor(std::uint32_t s) const noexcept {
    const auto sw = static_cast<std::uint32_t>(width_ - 1);
    return (s / sw) * static_cast<std::uint32_t>(width_) + s % sw;
  }

  std::size_t width_;
  std::size_t height_;
  std::vector<std::array<std::uint32_t, 2>> edges_;
  std::vector<std::uint32_t> horizontal_;
  std::vector<std::uint32_t> vertical_;
  std::vector<Cell> cells_;
};

inline CubicalFiltration build_filtration(const GridFunction& f) { return CubicalFiltration(f); }

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) noexcept {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void attach(std::uint32_t child_root, std::uint32_t parent_root) noexcept { parent_[child_root] = parent_root; }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/// Degree-0 diagram by union-find over vertices and edges in filtration
/// order. At a merge the component with the later-born root dies (elder rule);
/// every surviving component contributes one essential point.
inline PersistenceDiagram persistence_degree0(const GridFunction& f) {
  const CubicalFiltration filtration(f, 1);
  const std::size_t n = filtration.count(0);
  detail::DisjointSets sets(n);
  std::vector<std::uint32_t> born_at(n, 0);  // filtration position of each root's birth
  std::vector<double> birth(n, 0.0);

  PersistenceDiagram d;
  d.degree = 0;
  const auto& cells = filtration.cells();
  for (std::uint32_t pos = 0; pos < cells.size(); ++pos) {
    const Cell& c = cells[pos];
    if (c.dim == 0) {
      born_at[c.index] = pos;
      birth[c.index] = c.value;
      continue;
    }
    const auto [u, v] = filtration.edge_vertices(c.index);
    std::uint32_t ru = sets.find(u), rv = sets.find(v);
    if (ru == rv) continue;
    if (born_at[ru] > born_at[rv]) std::swap(ru, rv);  // ru is the elder
    if (birth[rv] < c.value) d.points.push_back({birth[rv], c.value, 1});
    sets.attach(rv, ru);
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (sets.find(v) == v) d.essential.push_back({birth[v], kInfinity, 1});
  }
  return canonicalize(std::move(d));
}

struct BoundaryReduction {
  PersistenceDiagram degree0;
  PersistenceDiagram degree1;
};

/// Standard column reduction of the filtered boundary matrix, squares first.
/// Edges that appear as pivots of reduced square columns are positive, so
/// their own columns are cleared before the edge columns are reduced.
inline BoundaryReduction reduce_boundary_matrix(const CubicalFiltration& filtration, bool with_degree0 = true) {
  const auto& cells = filtration.cells();
  const std::size_t total = cells.size();
  std::vector<std::uint32_t> edge_pos(filtration.count(1));
  std::vector<std::uint32_t> vertex_pos(filtration.count(0));
  for (std::uint32_t pos = 0; pos < total; ++pos) {
    if (cells[pos].dim == 1) edge_pos[cells[pos].index] = pos;
    if (cells[pos].dim == 0) vertex_pos[cells[pos].index] = pos;
  }

  constexpr std::uint32_t kNone = CubicalFiltration::kNone;
  // Reduced columns live back to back in `pool`; pivot_owner maps a pivot row
  // to the column's start offset there.
  std::vector<std::uint32_t> pivot_owner(total, kNone);
  std::vector<std::uint32_t> pool;
  std::vector<bool> cleared(total, false);
  std::vector<std::uint32_t> column, scratch;
  pool.reserve(total * 2);

  auto reduce = [&]() -> std::uint32_t {
    while (!column.empty()) {
      const std::uint32_t low = column.back();
      const std::uint32_t owner = pivot_owner[low];
      if (owner == kNone) {
        pivot_owner[low] = static_cast<std::uint32_t>(pool.size());
        pool.push_back(static_cast<std::uint32_t>(column.size()));
        pool.insert(pool.end(), column.begin(), column.end());
        return low;
      }
      const std::uint32_t* src = pool.data() + owner + 1;
      scratch.clear();
      std::set_symmetric_difference(column.begin(), column.end(), src, src + pool[owner],
                                    std::back_inserter(scratch));
      column.swap(scratch);
    }
    return kNone;
  };

  BoundaryReduction out;
  out.degree0.degree = 0;
  out.degree1.degree = 1;

  for (std::uint32_t pos = 0; pos < total; ++pos) {
    if (cells[pos].dim != 2) continue;
    const auto e = filtration.square_edges(cells[pos].index);
    column = {edge_pos[e[0]], edge_pos[e[1]], edge_pos[e[2]], edge_pos[e[3]]};
    std::sort(column.begin(), column.end());
    const std::uint32_t low = reduce();
    if (low == kNone) continue;
    cleared[low] = true;
    if (cells[low].value < cells[pos].value) out.degree1.points.push_back({cells[low].value, cells[pos].value, 1});
  }
  out.degree1 = canonicalize(std::move(out.degree1));
  if (!with_degree0) return out;

  std::vector<bool> vertex_paired(total, false);
  for (std::uint32_t pos = 0; pos < total; ++pos) {
    if (cells[pos].dim != 1 || cleared[pos]) continue;
    const auto [u, v] = filtration.edge_vertices(cells[pos].index);
    column = {vertex_pos[u], vertex_pos[v]};
    std::sort(column.begin(), column.end());
    const std::uint32_t low = reduce();
    if (low == kNone) {
      // A positive edge not killed by any square would be an essential
      // 1-cycle; the full grid complex is contractible, so none survive.
      continue;
    }
    vertex_paired[low] = true;
    if (cells[low].value < cells[pos].value) out.degree0.points.push_back({cells[low].value, cells[pos].value, 1});
  }
  for (std::uint32_t pos = 0; pos < total; ++pos) {
    if (cells[pos].dim == 0 && !vertex_paired[pos]) out.degree0.essential.push_back({cells[pos].value, kInfinity, 1});
  }
  out.degree0 = canonicalize(std::move(out.degree0));
  return out;
}

/// Degree-1 diagram via boundary-matrix reduction with clearing.
inline PersistenceDiagram persistence_degree1(const GridFunction& f) {
  return reduce_boundary_matrix(CubicalFiltration(f, 2), false).degree1;
}

/// Degree-0 diagram through the boundary-matrix route (cross-check for the
/// union-find path).
inline PersistenceDiagram persistence_degree0_reduction(const GridFunction& f) {
  return reduce_boundary_matrix(CubicalFiltration(f, 2)).degree0;
}

inline PersistenceDiagram persistence(const GridFunction& f, int degree) {
  switch (degree) {
    case 0: return persistence_degree0(f);
    case 1: return persistence_degree1(f);
    default: throw UsageError("only homology degrees 0 and 1 are supported");
  }
}

}  // namespace geneo
