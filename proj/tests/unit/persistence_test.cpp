#include <gtest/gtest.h>

#include "generators.hpp"
#include "geneo/bottleneck.hpp"
#include "geneo/isometry.hpp"
#include "geneo/persistence.hpp"
#include "oracles.hpp"

namespace {

using namespace geneo;

GridFunction grid(std::size_t w, std::size_t h, std::vector<double> v) { return GridFunction(w, h, std::move(v)); }

std::vector<double> values_of_dim(const CubicalFiltration& f, int dim) {
  std::vector<double> out;
  for (const auto& c : f.cells()) {
    if (c.dim == dim) out.push_back(c.value);
  }
  return out;
}

void expect_matches_oracle(const PersistenceDiagram& d, const oracle::Diagram& o) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : d.points) {
    for (int i = 0; i < p.multiplicity; ++i) pts.emplace_back(p.birth, p.death);
  }
  std::vector<double> ess;
  for (const auto& p : d.essential) {
    for (int i = 0; i < p.multiplicity; ++i) ess.push_back(p.birth);
  }
  EXPECT_EQ(pts, o.points);
  EXPECT_EQ(ess, o.essential);
}

TEST(Filtration, OneByTwo) {
  const auto f = build_filtration(grid(2, 1, {0, 1}));
  EXPECT_EQ(values_of_dim(f, 0), (std::vector<double>{0, 1}));
  EXPECT_EQ(values_of_dim(f, 1), (std::vector<double>{1}));
  EXPECT_TRUE(values_of_dim(f, 2).empty());
}

TEST(Filtration, ConstantTwoByTwo) {
  const auto f = build_filtration(grid(2, 2, {5, 5, 5, 5}));
  EXPECT_EQ(values_of_dim(f, 0), std::vector<double>(4, 5));
  EXPECT_EQ(values_of_dim(f, 1), std::vector<double>(4, 5));
  EXPECT_EQ(values_of_dim(f, 2), std::vector<double>(1, 5));
}

TEST(Filtration, TwoByTwoMaxOfFaces) {
  const auto f = build_filtration(grid(2, 2, {0, 1, 2, 3}));
  EXPECT_EQ(values_of_dim(f, 1), (std::vector<double>{1, 2, 3, 3}));
  EXPECT_EQ(values_of_dim(f, 2), (std::vector<double>{3}));
}

TEST(Filtration, OrderedByValueDimensionIndexAndMonotone) {
  Rng rng(8);
  const auto g = gen::integer_image(rng, 6, 5, 4);
  const auto f = build_filtration(g);
  EXPECT_EQ(f.cells().size(), f.count(0) + f.count(1) + f.count(2));
  std::vector<std::size_t> position[3] = {std::vector<std::size_t>(f.count(0)), std::vector<std::size_t>(f.count(1)),
                                          std::vector<std::size_t>(f.count(2))};
  for (std::size_t i = 0; i < f.cells().size(); ++i) {
    const auto& c = f.cells()[i];
    position[c.dim][c.index] = i;
    if (i > 0) {
      const auto& p = f.cells()[i - 1];
      EXPECT_TRUE(std::tie(p.value, p.dim, p.index) < std::tie(c.value, c.dim, c.index));
    }
  }
  // Every face enters no later than its coface.
  for (std::uint32_t e = 0; e < f.count(1); ++e) {
    for (auto v : f.edge_vertices(e)) EXPECT_LT(position[0][v], position[1][e]);
  }
  for (std::uint32_t s = 0; s < f.count(2); ++s) {
    for (auto e : f.square_edges(s)) EXPECT_LT(position[1][e], position[2][s]);
  }
}

TEST(Degree0, ConstantGridHasOneEssentialClass) {
  const auto d = persistence_degree0(GridFunction(3, 3, 5.0));
  EXPECT_TRUE(d.points.empty());
  EXPECT_EQ(d.essential, (std::vector<DiagramPoint>{{5, kInfinity, 1}}));
}

TEST(Degree0, PathWithTwoMinima) {
  const auto d = persistence_degree0(grid(3, 1, {0, 2, 1}));
  EXPECT_EQ(d.essential, (std::vector<DiagramPoint>{{0, kInfinity, 1}}));
  EXPECT_EQ(d.points, (std::vector<DiagramPoint>{{1, 2, 1}}));
}

TEST(Degree0, DiagonalZerosAreNotAdjacent) {
  const auto d = persistence_degree0(grid(2, 2, {0, 1, 1, 0}));
  EXPECT_EQ(d.essential, (std::vector<DiagramPoint>{{0, kInfinity, 1}}));
  EXPECT_EQ(d.points, (std::vector<DiagramPoint>{{0, 1, 1}}));
}

TEST(Degree1, PathsHaveNoCycles) {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const auto d = persistence_degree1(gen::image(rng, 1 + rng.below(8), 1));
    EXPECT_TRUE(d.points.empty());
    EXPECT_TRUE(d.essential.empty());
    EXPECT_TRUE(persistence_degree1(gen::image(rng, 1, 1 + rng.below(8))).points.empty());
  }
}

TEST(Degree1, RingKilledByCentre) {
  const auto d = persistence_degree1(grid(3, 3, {0, 0, 0, 0, 9, 0, 0, 0, 0}));
  EXPECT_EQ(d.points, (std::vector<DiagramPoint>{{0, 9, 1}}));
  EXPECT_TRUE(d.essential.empty());
}

TEST(Degree1, ConstantGridIsEmpty) {
  const auto d = persistence_degree1(GridFunction(4, 4, 2.0));
  EXPECT_TRUE(d.points.empty());
  EXPECT_TRUE(d.essential.empty());
}

TEST(Persistence, RejectsOtherDegrees) {
  EXPECT_THROW(persistence(GridFunction(2, 2), 2), UsageError);
  EXPECT_THROW(persistence(GridFunction(2, 2), -1), UsageError);
}

// Both degrees against inclusion-exclusion of persistent Betti numbers,
// computed by GF(2) ranks on an independently built complex.
TEST(PersistenceOracle, RandomSmallGridsBothDegrees) {
  Rng rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t w = 1 + rng.below(6), h = 1 + rng.below(6);
    const auto f = trial % 2 == 0 ? gen::integer_image(rng, w, h, 3 + static_cast<int>(rng.below(4)))
                                  : gen::image(rng, w, h);
    for (int k = 0; k <= 1; ++k) {
      SCOPED_TRACE("trial " + std::to_string(trial) + " degree " + std::to_string(k));
      expect_matches_oracle(persistence(f, k), oracle::persistence(f, k));
    }
  }
}

TEST(PersistenceOracle, Degree0ReductionAgreesWithUnionFind) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = trial % 2 ? gen::integer_image(rng, 9, 7, 5) : gen::image(rng, 8, 8);
    EXPECT_EQ(persistence_degree0_reduction(f), persistence_degree0(f));
  }
}

TEST(PersistenceProperty, DiagramsAreValidAndCanonical) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = gen::integer_image(rng, 10, 10, 6);
    for (int k = 0; k <= 1; ++k) {
      const auto d = persistence(f, k);
      EXPECT_TRUE(validate(d).empty()) << describe(validate(d));
      EXPECT_EQ(canonicalize(d), d);
    }
  }
}

TEST(PersistenceProperty, InvariantUnderDihedralIsometries) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = gen::integer_image(rng, 9, 9, 5);
    for (const auto& g : dihedral_group()) {
      EXPECT_EQ(persistence(transform(f, g), 0), persistence(f, 0));
      EXPECT_EQ(persistence(transform(f, g), 1), persistence(f, 1));
    }
  }
}

TEST(PersistenceProperty, AddingAConstantShiftsEveryPoint) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = gen::integer_image(rng, 8, 8, 6);
    const double c = 2.5;
    GridFunction g = f;
    for (auto& v : g.values()) v += c;
    for (int k = 0; k <= 1; ++k) {
      auto shifted = persistence(f, k);
      for (auto& p : shifted.points) p.birth += c, p.death += c;
      for (auto& p : shifted.essential) p.birth += c;
      EXPECT_EQ(persistence(g, k), shifted);
    }
  }
}

TEST(PersistenceProperty, StableUnderSupNormPerturbation) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = gen::image(rng, 12, 12);
    const auto g = gen::perturb(rng, f, 0.3);
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sup = std::max(sup, std::abs(f.values()[i] - g.values()[i]));
    for (int k = 0; k <= 1; ++k) EXPECT_LE(bottleneck(persistence(f, k), persistence(g, k)), sup + 1e-12);
  }
}

}  // namespace
