#include <gtest/gtest.h>

#include "generators.hpp"
#include "geneo/core.hpp"
#include "geneo/operators.hpp"
#include "geneo/serialize.hpp"

namespace {

using namespace geneo;

bool mentions(const Violations& v, const std::string& text) {
  for (const auto& e : v) {
    if (e.message.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(Validate, UnitSphereParamsAreValid) {
  IeneoParams p{{0.6, 0.8}, {0.6, 0.8}, 1.0, 7};
  EXPECT_TRUE(validate(p).empty());
}

TEST(Validate, ParamsOffTheSphereReportSumOfSquares) {
  IeneoParams p{{1.0, 1.0}, {0.6, 0.8}, 1.0, 7};
  EXPECT_TRUE(mentions(validate(p), "Σa²≠1"));
}

TEST(Validate, ParamsNeedOddSupportAndPositiveSigma) {
  IeneoParams p{{1.0}, {1.0}, 0.0, 4};
  const auto v = validate(p);
  EXPECT_TRUE(mentions(v, "sigma"));
  EXPECT_TRUE(mentions(v, "support"));
}

TEST(Validate, PointWithBirthAfterDeath) {
  EXPECT_TRUE(mentions(validate(DiagramPoint{3, 1, 1}), "birth>death"));
  EXPECT_TRUE(validate(DiagramPoint{1, 3, 1}).empty());
  EXPECT_TRUE(validate(DiagramPoint{1, kInfinity, 1}).empty());
  EXPECT_TRUE(mentions(validate(DiagramPoint{1, 3, 0}), "multiplicity"));
}

TEST(Validate, DiagramRejectsDiagonalAndUnsortedPoints) {
  PersistenceDiagram d{1, {{2, 3, 1}, {1, 1, 1}}, {}};
  const auto v = validate(d);
  EXPECT_TRUE(mentions(v, "diagonal"));
  EXPECT_TRUE(mentions(v, "sorted"));
}

TEST(Validate, GridFunctionRejectsNonFinite) {
  GridFunction f(2, 1, std::vector<double>{1.0, std::nan("")});
  EXPECT_FALSE(validate(f).empty());
  EXPECT_THROW(GridFunction(2, 2, std::vector<double>{1.0}), UsageError);
}

TEST(Validate, KernelNormAndSymmetry) {
  Kernel k{3, {0, 0, 0, 0, 1, 0, 0, 0, 0}, 1.0};
  EXPECT_TRUE(validate(k).empty());
  k.weights = {0.5, 0, 0, 0, 0.5, 0, 0, 0, 0};
  EXPECT_TRUE(mentions(validate(k), "radially symmetric"));
  k.weights = {0, 0, 0, 0, 2, 0, 0, 0, 0};
  EXPECT_TRUE(mentions(validate(k), "Σ|w|≠1"));
}

TEST(Validate, DistanceMatrixInvariants) {
  DistanceMatrix m(2, {0, 1, 2, 0});
  EXPECT_TRUE(mentions(validate(m), "symmetric"));
  DistanceMatrix z(2, {1, 0, 0, 0});
  EXPECT_TRUE(mentions(validate(z), "diagonal"));
  DistanceMatrix ok(2);
  ok.set(0, 1, 3.0);
  EXPECT_TRUE(validate(ok).empty());
}

TEST(Validate, DendrogramNeedsNMinusOneMonotoneMerges) {
  Dendrogram d;
  d.labels = {0, 0, 1};
  d.merges = {{0, 1, 2.0, 2}};
  EXPECT_FALSE(validate(d).empty());
  d.merges.push_back({3, 2, 1.0, 3});
  EXPECT_TRUE(mentions(validate(d), "decrease"));
  d.merges[1].height = 2.5;
  EXPECT_TRUE(validate(d).empty());
}

TEST(Validate, OperatorSetIdsDenseFromZero) {
  auto set = sample_candidates(4, 3, 2, {0.5, 1.0}, 5);
  EXPECT_TRUE(validate(set).empty());
  set.operators[1].id = 7;
  EXPECT_TRUE(mentions(validate(set), "dense"));
}

TEST(Validate, RequireValidThrows) {
  EXPECT_THROW(require_valid(DiagramPoint{3, 1, 1}, "test"), InvariantError);
}

template <class T>
T round_trip(const T& x) {
  return json::parse(json(x).dump()).template get<T>();
}

TEST(Serialize, EveryCoreTypeRoundTripsExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = gen::image(rng, 1 + rng.below(6), 1 + rng.below(6), -1e3, 1e3);
    EXPECT_EQ(round_trip(f), f);

    auto d = gen::diagram_continuous(rng, 6);
    d.essential.push_back({rng.uniform(), kInfinity, 1});
    EXPECT_EQ(round_trip(d), d);

    const auto set = sample_candidates(rng.below(1000), 3, 3, {0.5, 2.0}, 7);
    EXPECT_EQ(round_trip(set), set);
    EXPECT_EQ(round_trip(set.operators[0].params), set.operators[0].params);
    EXPECT_EQ(round_trip(set.operators[0].kernel), set.operators[0].kernel);

    GridIsometry g{static_cast<int>(rng.below(4)), rng.below(2) == 1, static_cast<int>(rng.below(5)) - 2, 3};
    EXPECT_EQ(round_trip(g), g);

    DistanceMatrix m(3);
    m.set(0, 1, rng.uniform());
    m.set(1, 2, rng.uniform());
    EXPECT_EQ(round_trip(m), m);

    LabeledDataset ds{{f, f}, {1, 2}};
    EXPECT_EQ(round_trip(ds), ds);
  }
  Dendrogram dg;
  dg.labels = {0, 1, 1};
  dg.merges = {{1, 2, 0.1 + 0.2, 2}, {0, 3, 4.5, 3}};
  EXPECT_EQ(round_trip(dg), dg);
}

TEST(Serialize, DiagramSchema) {
  PersistenceDiagram d{1, {{0, 2, 2}}, {{-1, kInfinity, 1}}};
  const auto j = json(d);
  EXPECT_EQ(j.at("degree"), 1);
  EXPECT_EQ(j.at("points"), json::parse("[[0.0,2.0],[0.0,2.0]]"));
  EXPECT_EQ(j.at("essential"), json::parse("[-1.0]"));
  EXPECT_EQ(round_trip(d), d);
}

TEST(Serialize, DiagramReadIsCanonical) {
  const auto j = json::parse(R"({"degree":0,"points":[[3,4],[1,2],[1,1],[1,2]],"essential":[5,0]})");
  const auto d = j.get<PersistenceDiagram>();
  ASSERT_EQ(d.points.size(), 2u);
  EXPECT_EQ(d.points[0], (DiagramPoint{1, 2, 2}));
  EXPECT_EQ(d.points[1], (DiagramPoint{3, 4, 1}));
  EXPECT_EQ(d.essential[0].birth, 0);
  EXPECT_TRUE(validate(d).empty());
}

TEST(Serialize, BadIsometryRotation) {
  EXPECT_THROW(json::parse(R"({"rotation":45,"reflect":false,"shift":[0,0]})").get<GridIsometry>(), DataError);
}

}  // namespace
