#pragma once

// Seeded random inputs for property tests.

#include <cstdint>
#include <vector>

#include "geneo/core.hpp"
#include "geneo/operators.hpp"
#include "geneo/persistence.hpp"
#include "geneo/rng.hpp"

namespace gen {

using geneo::GridFunction;
using geneo::Rng;

/// Uniform values in [lo, hi).
inline GridFunction image(Rng& rng, std::size_t w, std::size_t h, double lo = -1.0, double hi = 1.0) {
  GridFunction f(w, h);
  for (auto& v : f.values()) v = rng.uniform(lo, hi);
  return f;
}

/// Small integer values, so that ties in the filtration are common.
inline GridFunction integer_image(Rng& rng, std::size_t w, std::size_t h, int levels) {
  GridFunction f(w, h);
  for (auto& v : f.values()) v = static_cast<double>(rng.below(static_cast<std::uint64_t>(levels)));
  return f;
}

/// Non-zero only at distance >= margin from every border.
inline GridFunction interior_image(Rng& rng, std::size_t n, std::size_t margin) {
  GridFunction f(n, n);
  for (std::size_t y = margin; y + margin < n; ++y) {
    for (std::size_t x = margin; x + margin < n; ++x) f(x, y) = rng.uniform(-1.0, 1.0);
  }
  return f;
}

/// f plus noise of amplitude at most `amplitude` per pixel.
inline GridFunction perturb(Rng& rng, const GridFunction& f, double amplitude) {
  GridFunction g = f;
  for (auto& v : g.values()) v += rng.uniform(-amplitude, amplitude);
  return g;
}

/// Up to `max_finite` finite points, coordinates on a coarse grid so that
/// ties and equal costs occur; optionally a few essential points.
inline geneo::PersistenceDiagram diagram(Rng& rng, std::size_t max_finite, std::size_t essential, int degree = 1) {
  geneo::PersistenceDiagram d;
  d.degree = degree;
  const auto n = rng.below(max_finite + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double b = static_cast<double>(rng.below(20)) * 0.25 - 2.0;
    const double len = static_cast<double>(1 + rng.below(12)) * 0.25;
    d.points.push_back({b, b + len, 1});
  }
  for (std::size_t i = 0; i < essential; ++i) d.essential.push_back({rng.uniform(-2.0, 2.0), geneo::kInfinity, 1});
  return geneo::canonicalize(std::move(d));
}

/// Diagram with continuous coordinates.
inline geneo::PersistenceDiagram diagram_continuous(Rng& rng, std::size_t max_finite, int degree = 1) {
  geneo::PersistenceDiagram d;
  d.degree = degree;
  const auto n = rng.below(max_finite + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double b = rng.uniform(-3.0, 3.0);
    d.points.push_back({b, b + rng.uniform(0.01, 4.0), 1});
  }
  return geneo::canonicalize(std::move(d));
}

inline int support(Rng& rng) {
  static constexpr int kSizes[] = {3, 5, 7, 11};
  return kSizes[rng.below(4)];
}

inline geneo::Kernel kernel(Rng& rng, int side) {
  const auto p = geneo::sample_params(rng.below(~std::uint64_t{0}), geneo::default_gaussians(side),
                                      geneo::default_sigma_range(side), side);
  return geneo::make_kernel(p);
}

}  // namespace gen
