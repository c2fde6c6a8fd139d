#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "geneo/pipeline.hpp"

namespace {

using namespace geneo;

TEST(Split, PerClassCountsAndDeterminism) {
  const auto [images, labels] = fixture::shapes(6, 1);
  LabeledDataset data;
  for (std::size_t i = 0; i < images.size(); ++i) {
    data.samples.push_back(GridFunction(16, 16, std::vector<double>(images[i].begin(), images[i].end())));
    data.labels.push_back(labels[i]);
  }
  const auto a = split_dataset(data, {3, 8}, 4, 2, 5);
  const auto b = split_dataset(data, {3, 8}, 4, 2, 5);
  EXPECT_EQ(a.train_index, b.train_index);
  EXPECT_EQ(a.val_index, b.val_index);
  EXPECT_EQ(a.train.size(), 8u);
  EXPECT_EQ(a.val.size(), 4u);
  EXPECT_EQ(std::count(a.train.labels.begin(), a.train.labels.end(), 3), 4);
  EXPECT_EQ(std::count(a.val.labels.begin(), a.val.labels.end(), 8), 2);
  std::set<std::size_t> used(a.train_index.begin(), a.train_index.end());
  for (auto i : a.val_index) EXPECT_TRUE(used.insert(i).second);
  for (std::size_t i = 0; i < a.train.size(); ++i) EXPECT_EQ(a.train.labels[i], data.labels[a.train_index[i]]);
  EXPECT_THROW(split_dataset(data, {3, 8}, 5, 2, 5), DataError);
  EXPECT_THROW(split_dataset(data, {3, 4}, 1, 1, 5), DataError);
}

TEST(Config, RoundTripAndDefaults) {
  PipelineConfig c;
  c.dataset.images = "i";
  c.dataset.labels = "l";
  c.seed = 9;
  const auto back = json(c).get<PipelineConfig>();
  EXPECT_EQ(json(back), json(c));
  EXPECT_EQ(back.resolved_k(), 5);
  const auto j = json(c);
  EXPECT_EQ(j.at("sigma_range"), (json{0.5, 1.75}));
  EXPECT_FALSE(j.contains("threads"));
  EXPECT_EQ(json::parse(R"({"dataset":{"images":"a","labels":"b"}})").get<PipelineConfig>().classes, (std::vector<int>{5, 7}));
}

TEST(Config, Errors) {
  EXPECT_THROW(json::parse(R"({"epsilon": 1})").get<PipelineConfig>(), UsageError);
  EXPECT_THROW(json::parse(R"([1])").get<PipelineConfig>(), UsageError);
  EXPECT_THROW(json::parse(R"({"sigma_range": [1]})").get<PipelineConfig>(), UsageError);
  PipelineConfig c;
  EXPECT_THROW(validate_config(c), UsageError);
  c.dataset.images = "i";
  c.dataset.labels = "l";
  EXPECT_NO_THROW(validate_config(c));
  auto bad = [&](auto change) {
    auto copy = c;
    change(copy);
    EXPECT_THROW(validate_config(copy), UsageError);
  };
  bad([](PipelineConfig& x) { x.candidates = 0; });
  bad([](PipelineConfig& x) { x.classes = {5}; });
  bad([](PipelineConfig& x) { x.classes = {5, 5}; });
  bad([](PipelineConfig& x) { x.support = 8; });
  bad([](PipelineConfig& x) { x.eps = 0; });
  bad([](PipelineConfig& x) { x.t_percentile = 101; });
  bad([](PipelineConfig& x) { x.degree = 2; });
  bad([](PipelineConfig& x) { x.train_per_class = 1; });
  bad([](PipelineConfig& x) { x.cluster_k = 21; });
  bad([](PipelineConfig& x) { x.sigma_range = SigmaRange{1.0, 1.0}; });
  bad([](PipelineConfig& x) { x.dataset.format = "png"; });
  try {
    auto copy = c;
    copy.candidates = 0;
    validate_config(copy);
  } catch (const UsageError& e) {
    EXPECT_STREQ(e.what(), "config: candidates must be positive");
  }
}

TEST(Sha256, KnownDigest) {
  const std::string abc = "abc";
  EXPECT_EQ(sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size())),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Pipeline, RunWritesEveryArtifact) {
  const auto dir = fixture::tmp_dir("pipeline_run");
  const auto config = fixture::shapes_config(dir);
  const auto result = run_pipeline(config, dir / "out");
  const auto manifest = read_json(dir / "out" / "manifest.json");
  EXPECT_EQ(manifest, result.manifest);
  EXPECT_EQ(manifest.at("status"), "complete");
  std::set<std::string> names;
  for (const auto& a : manifest.at("artifacts")) {
    names.insert(a.at("path").get<std::string>());
    EXPECT_EQ(a.at("sha256"), sha256_file(dir / "out" / a.at("path").get<std::string>()));
  }
  for (const char* n : {"config.json", "split.json", "selection.json", "sampling.json", "operators.json",
                        "distance_matrix.json", "distance_matrix.csv", "dendrogram.json", "dendrogram.nwk",
                        "clusters.json", "kernels/meta.json", "kernels/kernels.f32"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  EXPECT_EQ(result.distances.n(), 6u);
  EXPECT_EQ(result.selection.selected.size(), 6u);
  EXPECT_EQ(load_kernel_export(dir / "out" / "kernels").ids, result.sampling.survivors);
  EXPECT_EQ(manifest.at("summary").at("survivors"), result.sampling.survivors.size());
  EXPECT_EQ(read_json(dir / "out" / "config.json").get<PipelineConfig>().seed, config.seed);
}

TEST(Pipeline, RerunIsByteIdentical) {
  const auto dir = fixture::tmp_dir("pipeline_rerun");
  auto config = fixture::shapes_config(dir);
  config.augment = true;
  const auto a = run_pipeline(config, dir / "a");
  config.threads = 3;
  const auto b = run_pipeline(config, dir / "b");
  EXPECT_EQ(a.manifest, b.manifest);
}

TEST(Pipeline, AugmentationOnlyTouchesValidation) {
  const auto dir = fixture::tmp_dir("pipeline_augment");
  auto config = fixture::shapes_config(dir);
  const auto data = load_dataset(config.dataset);
  const auto plain = prepare_data(config, data);
  config.augment = true;
  const auto augmented = prepare_data(config, data);
  EXPECT_EQ(plain.train.samples, augmented.train.samples);
  EXPECT_EQ(plain.val_index, augmented.val_index);
  EXPECT_NE(plain.val.samples, augmented.val.samples);
}

TEST(Pipeline, FailureStillWritesAManifest) {
  const auto dir = fixture::tmp_dir("pipeline_fail");
  auto config = fixture::shapes_config(dir);
  config.eps = 1e-9;
  EXPECT_THROW(run_pipeline(config, dir / "out"), InvariantError);
  const auto manifest = read_json(dir / "out" / "manifest.json");
  EXPECT_EQ(manifest.at("status"), "failed");
  EXPECT_EQ(manifest.at("failed_stage"), "select");
  EXPECT_TRUE(manifest.contains("error"));
  EXPECT_FALSE(manifest.contains("summary"));
}

TEST(Pipeline, BadConfigIsRejectedBeforeAnyOutput) {
  const auto dir = fixture::tmp_dir("pipeline_bad");
  auto config = fixture::shapes_config(dir);
  config.candidates = 0;
  EXPECT_THROW(run_pipeline(config, dir / "out"), UsageError);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Csv, HeaderAndRows) {
  DistanceMatrix m(2);
  m.set(0, 1, 0.5);
  EXPECT_EQ(distance_csv(m, sample_names({3, 8})), "sample,s0_l3,s1_l8\ns0_l3,0.0,0.5\ns1_l8,0.5,0.0\n");
}

}  // namespace
