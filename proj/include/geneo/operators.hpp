#pragma once

// Radial Gaussian-mixture convolution operators (IENEOs) and the two ways of
// building new non-expansive equivariant operators from old ones: convex
// combination and composition.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <utility>
#include <vector>

#include "geneo/core.hpp"
#include "geneo/rng.hpp"

namespace geneo {

template <class Op>
concept GridOperator = requires(const Op& op, const GridFunction& f) {
  { op(f) } -> std::convertible_to<GridFunction>;
};

/// Stencil of side p.support holding sum_i a_i exp(-(r - tau_i r_max)^2 / 2 sigma^2)
/// at pixel offset (dx, dy), r = |(dx, dy)|, r_max = (support - 1) / 2,
/// divided by the sum of absolute values.
inline Kernel make_kernel(const IeneoParams& p) {
  require_valid(p, "make_kernel");
  const int s = p.support;
  const int c = (s - 1) / 2;
  const double r_max = static_cast<double>(c);
  const double two_sigma2 = 2.0 * p.sigma * p.sigma;

  Kernel k{.side = s, .weights = std::vector<double>(static_cast<std::size_t>(s * s)), .l1_norm = 0.0};
  for (int row = 0; row < s; ++row) {
    for (int col = 0; col < s; ++col) {
      const int dx = col - c, dy = row - c;
      const double r = std::sqrt(static_cast<double>(dx * dx + dy * dy));
      double raw = 0.0;
      for (std::size_t i = 0; i < p.k(); ++i) {
        const double t = r - p.tau[i] * r_max;
        raw += p.a[i] * std::exp(-(t * t) / two_sigma2);
      }
      k.weights[static_cast<std::size_t>(row * s + col)] = raw;
      k.l1_norm += std::abs(raw);
    }
  }
  if (!(k.l1_norm > 0.0) || !std::isfinite(k.l1_norm)) {
    throw UsageError("make_kernel: degenerate kernel (all raw weights vanish)");
  }
  for (double& w : k.weights) w /= k.l1_norm;
  return k;
}

/// round(s/2 + 1), halves rounded up: 7 -> 5, 11 -> 7, 21 -> 12.
inline int default_gaussians(int support) { return static_cast<int>(std::floor(support / 2.0 + 1.5)); }

struct SigmaRange {
  double lo = 0.5;
  double hi = 1.75;
};

inline SigmaRange default_sigma_range(int support) { return {0.5, support / 4.0}; }

/// Draws a and tau from an isotropic Gaussian and projects both onto the unit
/// sphere; sigma is uniform on [lo, hi).
inline IeneoParams sample_params(std::uint64_t seed, int k, SigmaRange sigma_range, int support) {
  if (!(sigma_range.lo > 0.0) || !(sigma_range.lo < sigma_range.hi)) {
    throw UsageError("sample_params: empty sigma_range");
  }
  if (k < 1) throw UsageError("sample_params: k must be positive");
  if (support < 3 || support % 2 == 0) throw UsageError("sample_params: support must be odd and >= 3");

  Rng rng(seed);
  auto unit_vector = [&] {
    std::vector<double> v(static_cast<std::size_t>(k));
    double norm = 0.0;
    while (norm == 0.0) {
      norm = 0.0;
      for (double& x : v) {
        x = rng.normal();
        norm += x * x;
      }
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
  };
  IeneoParams p;
  p.a = unit_vector();
  p.tau = unit_vector();
  p.sigma = rng.uniform(sigma_range.lo, sigma_range.hi);
  p.support = support;
  return p;
}

/// Cross-correlation with zero padding; the output has the input's shape.
inline GridFunction apply(const Kernel& kernel, const GridFunction& f) {
  const auto w = static_cast<long>(f.width()), h = static_cast<long>(f.height());
  if (kernel.side > w || kernel.side > h) throw UsageError("apply: kernel larger than image");
  const long c = kernel.radius();
  GridFunction out(f.width(), f.height());
  for (long y = 0; y < h; ++y) {
    double* dst = out.row(static_cast<std::size_t>(y)).data();
    for (long j = 0; j < kernel.side; ++j) {
      const long sy = y + j - c;
      if (sy < 0 || sy >= h) continue;
      const double* src = f.row(static_cast<std::size_t>(sy)).data();
      for (long i = 0; i < kernel.side; ++i) {
        const double wgt = kernel(static_cast<int>(i), static_cast<int>(j));
        const long shift = i - c;
        const long x0 = std::max(0L, -shift);
        const long x1 = std::min(w, w - shift);
        for (long x = x0; x < x1; ++x) dst[x] += wgt * src[x + shift];
      }
    }
  }
  return out;
}

/// A single IENEO F_p: convolution with a realized kernel.
class Ieneo {
 public:
  explicit Ieneo(Kernel kernel) : kernel_(std::move(kernel)) {}
  explicit Ieneo(const IeneoParams& p) : kernel_(make_kernel(p)) {}

  GridFunction operator()(const GridFunction& f) const { return apply(kernel_, f); }
  const Kernel& kernel() const noexcept { return kernel_; }

 private:
  Kernel kernel_;
};

inline constexpr double kCoefficientSlack = 1e-12;

/// f -> sum_i c_i apply(K_i, f), with sum |c_i| <= 1.
class ConvexCombination {
 public:
  ConvexCombination(std::vector<Kernel> kernels, std::vector<double> coeffs)
      : kernels_(std::move(kernels)), coeffs_(std::move(coeffs)) {
    if (kernels_.size() != coeffs_.size()) throw UsageError("convex_combine: one coefficient per operator");
    double l1 = 0.0;
    for (double c : coeffs_) l1 += std::abs(c);
    if (l1 > 1.0 + kCoefficientSlack) throw UsageError("convex_combine: sum of |coeffs| exceeds 1");
  }

  GridFunction operator()(const GridFunction& f) const {
    GridFunction out(f.width(), f.height());
    for (std::size_t i = 0; i < kernels_.size(); ++i) {
      const GridFunction term = apply(kernels_[i], f);
      auto dst = out.values();
      auto src = term.values();
      for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += coeffs_[i] * src[p];
    }
    return out;
  }

  const std::vector<Kernel>& kernels() const noexcept { return kernels_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

 private:
  std::vector<Kernel> kernels_;
  std::vector<double> coeffs_;
};

inline ConvexCombination convex_combine(std::vector<Kernel> kernels, std::vector<double> coeffs) {
  return ConvexCombination(std::move(kernels), std::move(coeffs));
}

/// f -> outer(inner(f)).
template <GridOperator Outer, GridOperator Inner>
class Composition {
 public:
  Composition(Outer outer, Inner inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}

  GridFunction operator()(const GridFunction& f) const { return outer_(inner_(f)); }

 private:
  Outer outer_;
  Inner inner_;
};

template <GridOperator Outer, GridOperator Inner>
Composition<Outer, Inner> compose(Outer outer, Inner inner) {
  return Composition<Outer, Inner>(std::move(outer), std::move(inner));
}

/// N candidates; candidate i is drawn with seed mix_seed(seed, i).
inline OperatorSet sample_candidates(std::uint64_t seed, std::size_t count, int k, SigmaRange sigma_range,
                                     int support) {
  OperatorSet set;
  set.seed = seed;
  set.operators.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto params = sample_params(mix_seed(seed, i), k, sigma_range, support);
    auto kernel = make_kernel(params);
    set.operators.push_back({static_cast<int>(i), std::move(params), std::move(kernel), OperatorStatus::candidate});
  }
  return set;
}

}  // namespace geneo
