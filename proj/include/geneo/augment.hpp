#pragma once

// Random plane isometries for validation-time augmentation: a small rotation,
// a 1-2 pixel translation, or a reflection about one of the two axes.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "geneo/core.hpp"
#include "geneo/isometry.hpp"
#include "geneo/rng.hpp"

namespace geneo {

inline constexpr double kMinRotationDegrees = 1.0;
inline constexpr double kMaxRotationDegrees = 30.0;

enum class AugmentKind { rotation, translation, reflection };

struct Augmentation {
  AugmentKind kind = AugmentKind::rotation;
  double degrees = 0.0;        // rotation, counter-clockwise on screen
  int dx = 0;                  // translation, pixels
  int dy = 0;
  bool vertical_axis = true;   // reflection about x = (w-1)/2, else y = (h-1)/2

  bool operator==(const Augmentation&) const = default;
};

/// Rotation about the grid centre with bilinear resampling and zero fill.
inline GridFunction rotate_bilinear(const GridFunction& f, double degrees) {
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const double cx = (static_cast<double>(f.width()) - 1.0) / 2.0;
  const double cy = (static_cast<double>(f.height()) - 1.0) / 2.0;
  const auto w = static_cast<long>(f.width()), h = static_cast<long>(f.height());
  auto at = [&](long x, long y) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : f(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };
  GridFunction out(f.width(), f.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      // Inverse map: rows grow downwards, so a counter-clockwise turn on
      // screen is clockwise in (x, y).
      const double u = static_cast<double>(x) - cx, v = static_cast<double>(y) - cy;
      const double sx = c * u - s * v + cx;
      const double sy = s * u + c * v + cy;
      const double x0 = std::floor(sx), y0 = std::floor(sy);
      const double fx = sx - x0, fy = sy - y0;
      const auto ix = static_cast<long>(x0), iy = static_cast<long>(y0);
      out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
          (1 - fx) * (1 - fy) * at(ix, iy) + fx * (1 - fy) * at(ix + 1, iy) + (1 - fx) * fy * at(ix, iy + 1) +
          fx * fy * at(ix + 1, iy + 1);
    }
  }
  return out;
}

inline Augmentation draw_augmentation(std::uint64_t seed) {
  Rng rng(seed);
  Augmentation a;
  switch (rng.below(3)) {
    case 0:
      a.kind = AugmentKind::rotation;
      a.degrees = rng.uniform(kMinRotationDegrees, kMaxRotationDegrees);
      break;
    case 1: {
      a.kind = AugmentKind::translation;
      auto offset = [&] {
        const int magnitude = 1 + static_cast<int>(rng.below(2));
        return rng.below(2) == 0 ? magnitude : -magnitude;
      };
      a.dx = offset();
      a.dy = offset();
      break;
    }
    default:
      a.kind = AugmentKind::reflection;
      a.vertical_axis = rng.below(2) == 0;
      break;
  }
  return a;
}

inline GridFunction apply_augmentation(const GridFunction& f, const Augmentation& a) {
  switch (a.kind) {
    case AugmentKind::rotation:
      return rotate_bilinear(f, a.degrees);
    case AugmentKind::translation:
      return transform(f, GridIsometry{0, false, a.dx, a.dy});
    case AugmentKind::reflection:
      return transform(f, a.vertical_axis ? GridIsometry{0, true, 0, 0} : GridIsometry{2, true, 0, 0});
  }
  return f;
}

/// One uniformly chosen transform, deterministic per seed.
inline GridFunction augment(const GridFunction& f, std::uint64_t seed) {
  require_valid(f, "augment");
  return apply_augmentation(f, draw_augmentation(seed));
}

}  // namespace geneo
