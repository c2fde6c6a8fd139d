#pragma once

// Image preprocessing: resize to 128x128, 3x3 binomial blur, standardize.

#include <algorithm>
#include <cmath>

#include "geneo/core.hpp"

namespace geneo {

inline constexpr std::size_t kPreprocessSide = 128;
inline constexpr double kStdFloor = 1e-8;

/// Bilinear resampling with pixel-centre alignment and clamped borders.
inline GridFunction resize_bilinear(const GridFunction& f, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0 || f.empty()) throw UsageError("resize_bilinear: empty grid");
  GridFunction out(width, height);
  const double sx = static_cast<double>(f.width()) / static_cast<double>(width);
  const double sy = static_cast<double>(f.height()) / static_cast<double>(height);
  const double max_x = static_cast<double>(f.width() - 1), max_y = static_cast<double>(f.height() - 1);
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, f.height() - 1);
    const double ty = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, f.width() - 1);
      const double tx = fx - static_cast<double>(x0);
      out(x, y) = (1 - ty) * ((1 - tx) * f(x0, y0) + tx * f(x1, y0)) + ty * ((1 - tx) * f(x0, y1) + tx * f(x1, y1));
    }
  }
  return out;
}

/// [1 2 1; 2 4 2; 1 2 1] / 16 with replicated borders (constants are preserved).
inline GridFunction blur_binomial3(const GridFunction& f) {
  const auto w = static_cast<long>(f.width()), h = static_cast<long>(f.height());
  auto at = [&](long x, long y) {
    return f(static_cast<std::size_t>(std::clamp(x, 0L, w - 1)), static_cast<std::size_t>(std::clamp(y, 0L, h - 1)));
  };
  static constexpr double kTap[3] = {1.0, 2.0, 1.0};
  GridFunction out(f.width(), f.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) acc += kTap[i + 1] * kTap[j + 1] * at(x + i, y + j);
      }
      out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc / 16.0;
    }
  }
  return out;
}

/// (x - mean) / max(std, 1e-8), population standard deviation.
inline GridFunction standardize(const GridFunction& f) {
  const auto v = f.values();
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double correction = 0.0;  // second pass removes the rounding left in the first
  for (double x : v) correction += x - mean;
  mean += correction / n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::max(std::sqrt(var / n), kStdFloor);
  GridFunction out(f.width(), f.height());
  auto o = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) o[i] = (v[i] - mean) / sd;
  return out;
}

inline GridFunction preprocess(const GridFunction& f) {
  require_valid(f, "preprocess");
  return standardize(blur_binomial3(resize_bilinear(f, kPreprocessSide, kPreprocessSide)));
}

}  // namespace geneo
