#pragma once

// Grid-exact plane isometries. An element acts on doubled, centred pixel
// coordinates u = 2x - (w - 1), v = 2y - (h - 1) as u -> A u + 2t with A a
// signed permutation matrix, so the group law does not depend on image size.

#include <algorithm>
#include <array>
#include <vector>

#include "geneo/core.hpp"

namespace geneo {

namespace detail {

using Mat2 = std::array<int, 4>;  // row-major {a, b, c, d}

inline constexpr Mat2 kRotate = {0, -1, 1, 0};
inline constexpr Mat2 kFlip = {-1, 0, 0, 1};
inline constexpr Mat2 kEye = {1, 0, 0, 1};

inline constexpr Mat2 mul(const Mat2& p, const Mat2& q) {
  return {p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
          p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]};
}

inline Mat2 linear_part(const GridIsometry& g) {
  Mat2 m = g.reflect ? kFlip : kEye;
  for (int i = 0; i < g.quarter_turns; ++i) m = mul(kRotate, m);
  return m;
}

inline GridIsometry from_parts(const Mat2& m, int tx, int ty) {
  const bool reflect = m[0] * m[3] - m[1] * m[2] < 0;
  const Mat2 rot = reflect ? mul(m, kFlip) : m;
  Mat2 r = kEye;
  for (int q = 0; q < 4; ++q) {
    if (r == rot) return {q, reflect, tx, ty};
    r = mul(kRotate, r);
  }
  throw UsageError("not a signed permutation matrix");
}

}  // namespace detail

/// (a ∘ b)(x) = a(b(x)).
inline GridIsometry compose(const GridIsometry& a, const GridIsometry& b) {
  const auto ma = detail::linear_part(a);
  const auto mb = detail::linear_part(b);
  const int tx = ma[0] * b.dx + ma[1] * b.dy + a.dx;
  const int ty = ma[2] * b.dx + ma[3] * b.dy + a.dy;
  return detail::from_parts(detail::mul(ma, mb), tx, ty);
}

inline GridIsometry inverse(const GridIsometry& g) {
  const auto m = detail::linear_part(g);
  // Signed permutation matrices are orthogonal: the inverse is the transpose.
  const detail::Mat2 mt = {m[0], m[2], m[1], m[3]};
  const int tx = -(mt[0] * g.dx + mt[1] * g.dy);
  const int ty = -(mt[2] * g.dx + mt[3] * g.dy);
  return detail::from_parts(mt, tx, ty);
}

struct Pixel {
  long x = 0;
  long y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Image of pixel p under g for a width x height grid. The result may fall
/// outside the grid; odd quarter turns need width == height to stay on it.
inline Pixel map_pixel(const GridIsometry& g, Pixel p, std::size_t width, std::size_t height) {
  const auto m = detail::linear_part(g);
  const long w1 = static_cast<long>(width) - 1;
  const long h1 = static_cast<long>(height) - 1;
  const long u = 2 * p.x - w1;
  const long v = 2 * p.y - h1;
  const long u2 = m[0] * u + m[1] * v + 2L * g.dx;
  const long v2 = m[2] * u + m[3] * v + 2L * g.dy;
  return {(u2 + w1) / 2, (v2 + h1) / 2};
}

/// The function f ∘ g, with zero outside the grid.
inline GridFunction transform(const GridFunction& f, const GridIsometry& g) {
  require_valid(g, "transform");
  if (g.quarter_turns % 2 == 1 && f.width() != f.height()) {
    throw UsageError("odd quarter turns need a square grid; pad_to_square first");
  }
  GridFunction out(f.width(), f.height());
  const long w = static_cast<long>(f.width());
  const long h = static_cast<long>(f.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      const Pixel q = map_pixel(g, {x, y}, f.width(), f.height());
      if (q.x >= 0 && q.x < w && q.y >= 0 && q.y < h) {
        out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
            f(static_cast<std::size_t>(q.x), static_cast<std::size_t>(q.y));
      }
    }
  }
  return out;
}

/// Embeds f in a zero-filled square of side max(width, height), centred
/// (extra column/row goes right/bottom when the difference is odd).
inline GridFunction pad_to_square(const GridFunction& f) {
  const std::size_t n = std::max(f.width(), f.height());
  if (f.width() == n && f.height() == n) return f;
  GridFunction out(n, n);
  const std::size_t ox = (n - f.width()) / 2;
  const std::size_t oy = (n - f.height()) / 2;
  for (std::size_t y = 0; y < f.height(); ++y) {
    for (std::size_t x = 0; x < f.width(); ++x) out(x + ox, y + oy) = f(x, y);
  }
  return out;
}

/// The eight symmetries of the square (no translation).
inline std::vector<GridIsometry> dihedral_group() {
  std::vector<GridIsometry> g;
  for (int r = 0; r < 2; ++r) {
    for (int q = 0; q < 4; ++q) g.push_back({q, r == 1, 0, 0});
  }
  return g;
}

/// True when `g` contains the identity and is closed under composition and
/// inverses.
inline bool is_group(const std::vector<GridIsometry>& g) {
  auto contains = [&](const GridIsometry& e) { return std::find(g.begin(), g.end(), e) != g.end(); };
  if (g.empty() || !contains(GridIsometry::identity())) return false;
  for (const auto& a : g) {
    if (!validate(a).empty() || !contains(inverse(a))) return false;
    for (const auto& b : g) {
      if (!contains(compose(a, b))) return false;
    }
  }
  return true;
}

}  // namespace geneo
