#pragma once

// Pseudo-metrics on functions, group elements and operators. Every supremum
// over the function space is a maximum over the finite sample list given.

#include <algorithm>
#include <cmath>
#include <ranges>
#include <span>
#include <vector>

#include "geneo/bottleneck.hpp"
#include "geneo/core.hpp"
#include "geneo/isometry.hpp"
#include "geneo/operators.hpp"
#include "geneo/persistence.hpp"

namespace geneo {

/// Sup-norm distance D_Φ.
inline double dist_phi(const GridFunction& f1, const GridFunction& f2) {
  if (f1.width() != f2.width() || f1.height() != f2.height()) throw UsageError("dist_phi: dimension mismatch");
  double d = 0.0;
  const auto a = f1.values(), b = f2.values();
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline void require_samples(std::span<const GridFunction> phi, const char* what) {
  if (phi.empty()) throw UsageError(std::string(what) + ": empty function set");
}

/// D_X(x1, x2) = max over φ of |φ(x1) - φ(x2)|.
inline double dist_x(Pixel x1, Pixel x2, std::span<const GridFunction> phi) {
  require_samples(phi, "dist_x");
  double d = 0.0;
  for (const auto& f : phi) {
    auto inside = [&](Pixel p) {
      return p.x >= 0 && p.y >= 0 && static_cast<std::size_t>(p.x) < f.width() &&
             static_cast<std::size_t>(p.y) < f.height();
    };
    if (!inside(x1) || !inside(x2)) throw UsageError("dist_x: pixel outside the grid");
    d = std::max(d, std::abs(f(static_cast<std::size_t>(x1.x), static_cast<std::size_t>(x1.y)) -
                             f(static_cast<std::size_t>(x2.x), static_cast<std::size_t>(x2.y))));
  }
  return d;
}

/// D_G(g1, g2) = max over φ of ||φ∘g1 - φ∘g2||, images zero-padded to a square.
inline double dist_g(const GridIsometry& g1, const GridIsometry& g2, std::span<const GridFunction> phi) {
  require_samples(phi, "dist_g");
  double d = 0.0;
  for (const auto& f : phi) {
    const GridFunction sq = pad_to_square(f);
    d = std::max(d, dist_phi(transform(sq, g1), transform(sq, g2)));
  }
  return d;
}

/// d_G(f1, f2) = min over g in G of ||f1 - f2∘g||, for a finite group G.
inline double natural_pseudo_distance(const GridFunction& f1, const GridFunction& f2,
                                      const std::vector<GridIsometry>& group) {
  if (!is_group(group)) throw UsageError("natural_pseudo_distance: G is not a group");
  if (f1.width() != f2.width() || f1.height() != f2.height()) {
    throw UsageError("natural_pseudo_distance: dimension mismatch");
  }
  const GridFunction a = pad_to_square(f1), b = pad_to_square(f2);
  double d = kInfinity;
  for (const auto& g : group) d = std::min(d, dist_phi(a, transform(b, g)));
  return d;
}

/// D_GENEO(F1, F2) = max over φ of ||F1(φ) - F2(φ)||.
template <GridOperator Op1, GridOperator Op2>
double dist_geneo(const Op1& F1, const Op2& F2, std::span<const GridFunction> phi) {
  require_samples(phi, "dist_geneo");
  double d = 0.0;
  for (const auto& f : phi) d = std::max(d, dist_phi(F1(f), F2(f)));
  return d;
}

/// D_GENEO,H(F1, F2) = max over φ of d_H(F1(φ), F2(φ)).
template <GridOperator Op1, GridOperator Op2>
double dist_geneo_h(const Op1& F1, const Op2& F2, std::span<const GridFunction> phi,
                    const std::vector<GridIsometry>& group) {
  require_samples(phi, "dist_geneo_h");
  double d = 0.0;
  for (const auto& f : phi) d = std::max(d, natural_pseudo_distance(F1(f), F2(f), group));
  return d;
}

/// max over F of bottleneck(D_k(F(f1)), D_k(F(f2))).
template <std::ranges::input_range Ops>
  requires GridOperator<std::ranges::range_value_t<Ops>>
double dmatch_family(const GridFunction& f1, const GridFunction& f2, const Ops& family, int degree) {
  double d = 0.0;
  bool any = false;
  for (const auto& F : family) {
    any = true;
    d = std::max(d, bottleneck(persistence(F(f1), degree), persistence(F(f2), degree)));
  }
  if (!any) throw UsageError("dmatch_family: empty operator set");
  return d;
}

inline std::vector<Ieneo> operators_of(const OperatorSet& set) {
  std::vector<Ieneo> ops;
  ops.reserve(set.size());
  for (const auto& e : set.operators) ops.emplace_back(e.kernel);
  return ops;
}

inline double dmatch_family(const GridFunction& f1, const GridFunction& f2, const OperatorSet& set, int degree) {
  return dmatch_family(f1, f2, operators_of(set), degree);
}

/// Δ_GENEO(F1, F2) = max over φ of bottleneck(D_k(F1(φ)), D_k(F2(φ))).
template <GridOperator Op1, GridOperator Op2>
double delta_geneo(const Op1& F1, const Op2& F2, std::span<const GridFunction> phi, int degree) {
  require_samples(phi, "delta_geneo");
  double d = 0.0;
  for (const auto& f : phi) d = std::max(d, bottleneck(persistence(F1(f), degree), persistence(F2(f), degree)));
  return d;
}

/// Hausdorff distance between two operator sets under D_GENEO,H.
template <std::ranges::forward_range OpsA, std::ranges::forward_range OpsB>
double hausdorff_operator_sets(const OpsA& A, const OpsB& B, std::span<const GridFunction> phi,
                               const std::vector<GridIsometry>& group) {
  const auto na = static_cast<std::size_t>(std::ranges::distance(A));
  const auto nb = static_cast<std::size_t>(std::ranges::distance(B));
  if (na == 0 || nb == 0) throw UsageError("hausdorff_operator_sets: empty operator set");
  std::vector<double> table(na * nb);
  std::size_t i = 0;
  for (const auto& F : A) {
    std::size_t j = 0;
    for (const auto& G : B) table[i * nb + j++] = dist_geneo_h(F, G, phi, group);
    ++i;
  }
  double a_to_b = 0.0, b_to_a = 0.0;
  for (i = 0; i < na; ++i) {
    double best = kInfinity;
    for (std::size_t j = 0; j < nb; ++j) best = std::min(best, table[i * nb + j]);
    a_to_b = std::max(a_to_b, best);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    double best = kInfinity;
    for (i = 0; i < na; ++i) best = std::min(best, table[i * nb + j]);
    b_to_a = std::max(b_to_a, best);
  }
  return std::max(a_to_b, b_to_a);
}

}  // namespace geneo
