#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "geneo/augment.hpp"
#include "geneo/metrics.hpp"
#include "geneo/preprocess.hpp"

namespace {

using namespace geneo;

double mean_of(const GridFunction& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / static_cast<double>(f.size());
}

double std_of(const GridFunction& f) {
  const double m = mean_of(f);
  double s = 0.0;
  for (double v : f.values()) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(f.size()));
}

TEST(Preprocess, ConstantImageBecomesZero) {
  const auto out = preprocess(GridFunction(28, 28, 37.0));
  EXPECT_EQ(out.width(), 128u);
  EXPECT_EQ(out.height(), 128u);
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(Preprocess, StandardisedOutput) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto out = preprocess(gen::image(rng, 20 + rng.below(20), 20 + rng.below(20), 0, 255));
    EXPECT_EQ(out.width(), 128u);
    EXPECT_EQ(out.height(), 128u);
    EXPECT_NEAR(mean_of(out), 0.0, 1e-9);
    EXPECT_NEAR(std_of(out), 1.0, 1e-9);
  }
}

TEST(Preprocess, RejectsEmptyInput) { EXPECT_THROW(preprocess(GridFunction()), InvariantError); }

TEST(Resize, SameSizeIsIdentity) {
  Rng rng(2);
  const auto f = gen::image(rng, 9, 7);
  EXPECT_EQ(resize_bilinear(f, 9, 7), f);
}

TEST(Resize, DoublingAHorizontalRamp) {
  GridFunction f(2, 1, std::vector<double>{0, 4});
  const auto out = resize_bilinear(f, 4, 1);
  // Source positions -0.25, 0.25, 0.75, 1.25, clamped to [0, 1].
  EXPECT_EQ(out.values()[0], 0.0);
  EXPECT_EQ(out.values()[1], 1.0);
  EXPECT_EQ(out.values()[2], 3.0);
  EXPECT_EQ(out.values()[3], 4.0);
}

TEST(Blur, ImpulseAndConstant) {
  GridFunction f(5, 5);
  f(2, 2) = 16.0;
  const auto out = blur_binomial3(f);
  EXPECT_EQ(out(2, 2), 4.0);
  EXPECT_EQ(out(1, 2), 2.0);
  EXPECT_EQ(out(1, 1), 1.0);
  EXPECT_EQ(out(0, 0), 0.0);
  const auto flat = blur_binomial3(GridFunction(4, 3, 2.5));
  for (double v : flat.values()) EXPECT_EQ(v, 2.5);
}

TEST(Standardize, FloorOnTheDeviation) {
  GridFunction f(2, 1, std::vector<double>{1.0, 1.0 + 1e-12});
  const auto out = standardize(f);
  EXPECT_NEAR(out.values()[0], -0.5e-12 / 1e-8, 1e-8);
}

TEST(Augment, ReflectionTwiceIsIdentity) {
  Rng rng(3);
  const auto f = gen::image(rng, 9, 6);
  for (bool vertical : {true, false}) {
    Augmentation a;
    a.kind = AugmentKind::reflection;
    a.vertical_axis = vertical;
    EXPECT_EQ(apply_augmentation(apply_augmentation(f, a), a), f);
  }
}

TEST(Augment, ReflectionAxes) {
  GridFunction f(3, 2, std::vector<double>{1, 2, 3, 4, 5, 6});
  Augmentation a;
  a.kind = AugmentKind::reflection;
  a.vertical_axis = true;
  EXPECT_EQ(apply_augmentation(f, a), GridFunction(3, 2, std::vector<double>{3, 2, 1, 6, 5, 4}));
  a.vertical_axis = false;
  EXPECT_EQ(apply_augmentation(f, a), GridFunction(3, 2, std::vector<double>{4, 5, 6, 1, 2, 3}));
}

TEST(Augment, TranslationShiftsExactly) {
  Rng rng(4);
  const auto f = gen::image(rng, 6, 5);
  Augmentation a;
  a.kind = AugmentKind::translation;
  a.dx = 1;
  a.dy = 0;
  const auto out = apply_augmentation(f, a);
  // out = f∘g with g(x, y) = (x + 1, y); the last column falls outside.
  for (std::size_t y = 0; y < 5; ++y) {
    EXPECT_EQ(out(5, y), 0.0);
    for (std::size_t x = 0; x < 5; ++x) EXPECT_EQ(out(x, y), f(x + 1, y));
  }
}

TEST(Augment, RotationByZeroAndQuarterTurn) {
  Rng rng(5);
  const auto f = gen::image(rng, 7, 7);
  EXPECT_LE(dist_phi(rotate_bilinear(f, 0.0), f), 1e-15);
  // A quarter turn lands on pixel centres and matches the exact grid rotation.
  const auto exact = transform(f, GridIsometry{1, false, 0, 0});
  const auto r = rotate_bilinear(f, 90.0);
  const auto back = rotate_bilinear(f, -90.0);
  EXPECT_TRUE(dist_phi(r, exact) <= 1e-12 || dist_phi(back, exact) <= 1e-12);
}

TEST(Augment, DrawsStayInRange) {
  int seen[3] = {0, 0, 0};
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    const auto a = draw_augmentation(seed);
    EXPECT_EQ(a, draw_augmentation(seed));
    seen[static_cast<int>(a.kind)]++;
    switch (a.kind) {
      case AugmentKind::rotation:
        EXPECT_GE(a.degrees, 1.0);
        EXPECT_LE(a.degrees, 30.0);
        break;
      case AugmentKind::translation:
        EXPECT_TRUE(std::abs(a.dx) == 1 || std::abs(a.dx) == 2);
        EXPECT_TRUE(std::abs(a.dy) == 1 || std::abs(a.dy) == 2);
        break;
      case AugmentKind::reflection:
        break;
    }
  }
  for (int n : seen) EXPECT_GT(n, 150);
}

TEST(Augment, DeterministicPerSeed) {
  Rng rng(6);
  const auto f = gen::image(rng, 12, 12);
  EXPECT_EQ(augment(f, 99), augment(f, 99));
}

}  // namespace
