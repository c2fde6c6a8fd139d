#pragma once

// The full experiment: preprocess -> candidates -> select -> sample -> d_S
// distance matrix on validation images -> dendrogram -> kernel export, with
// a manifest of hashes for every artifact.

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geneo/augment.hpp"
#include "geneo/cluster.hpp"
#include "geneo/core.hpp"
#include "geneo/io.hpp"
#include "geneo/learn.hpp"
#include "geneo/operators.hpp"
#include "geneo/parallel.hpp"
#include "geneo/preprocess.hpp"
#include "geneo/rng.hpp"
#include "geneo/serialize.hpp"

#ifndef GENEO_VERSION
#define GENEO_VERSION "0.0.0"
#endif

namespace geneo {

struct DatasetConfig {
  std::string format = "idx";  // idx | cifar10
  std::string images;          // idx
  std::string labels;          // idx
  std::string path;            // cifar10
};

struct PipelineConfig {
  DatasetConfig dataset;
  std::vector<int> classes{5, 7};
  std::size_t train_per_class = 20;
  std::size_t val_per_class = 10;
  std::uint64_t seed = 0;
  std::size_t candidates = 500;
  int support = 7;
  std::optional<int> k;                   // default_gaussians(support)
  std::optional<SigmaRange> sigma_range;  // default_sigma_range(support)
  double eps = 1.5;
  double t_percentile = 75.0;
  int degree = 1;
  bool augment = false;
  std::size_t cluster_k = 2;
  bool export_kernels = true;
  unsigned threads = 0;

  int resolved_k() const { return k.value_or(default_gaussians(support)); }
  SigmaRange resolved_sigma_range() const { return sigma_range.value_or(default_sigma_range(support)); }
};

inline void to_json(json& j, const PipelineConfig& c) {
  json dataset{{"format", c.dataset.format}};
  if (c.dataset.format == "cifar10") {
    dataset["path"] = c.dataset.path;
  } else {
    dataset["images"] = c.dataset.images;
    dataset["labels"] = c.dataset.labels;
  }
  const auto range = c.resolved_sigma_range();
  j = json{{"dataset", std::move(dataset)},
           {"classes", c.classes},
           {"train_per_class", c.train_per_class},
           {"val_per_class", c.val_per_class},
           {"seed", c.seed},
           {"candidates", c.candidates},
           {"support", c.support},
           {"k", c.resolved_k()},
           {"sigma_range", {range.lo, range.hi}},
           {"eps", c.eps},
           {"t_percentile", c.t_percentile},
           {"degree", c.degree},
           {"augment", c.augment},
           {"cluster_k", c.cluster_k},
           {"export_kernels", c.export_kernels}};
}

/// Unknown keys are rejected so that typos do not silently fall back to
/// defaults. `threads` is accepted but never written back: it does not affect
/// results.
inline void from_json(const json& j, PipelineConfig& c) {
  static const std::array<const char*, 16> kKeys = {
      "dataset", "classes", "train_per_class", "val_per_class", "seed",      "candidates",     "support", "k",
      "sigma_range", "eps", "t_percentile",    "degree",        "augment",   "cluster_k",      "export_kernels", "threads"};
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(kKeys.begin(), kKeys.end(), [&](const char* k) { return key == k; }) == kKeys.end()) {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }
  c = PipelineConfig{};
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    c.dataset.format = d.value("format", std::string("idx"));
    c.dataset.images = d.value("images", std::string());
    c.dataset.labels = d.value("labels", std::string());
    c.dataset.path = d.value("path", std::string());
  }
  c.classes = j.value("classes", c.classes);
  c.train_per_class = j.value("train_per_class", c.train_per_class);
  c.val_per_class = j.value("val_per_class", c.val_per_class);
  c.seed = j.value("seed", c.seed);
  c.candidates = j.value("candidates", c.candidates);
  c.support = j.value("support", c.support);
  if (j.contains("k") && !j.at("k").is_null()) c.k = j.at("k").get<int>();
  if (j.contains("sigma_range") && !j.at("sigma_range").is_null()) {
    const auto& r = j.at("sigma_range");
    if (!r.is_array() || r.size() != 2) throw UsageError("config: sigma_range must be [lo, hi]");
    c.sigma_range = SigmaRange{r[0].get<double>(), r[1].get<double>()};
  }
  c.eps = j.value("eps", c.eps);
  c.t_percentile = j.value("t_percentile", c.t_percentile);
  c.degree = j.value("degree", c.degree);
  c.augment = j.value("augment", c.augment);
  c.cluster_k = j.value("cluster_k", c.cluster_k);
  c.export_kernels = j.value("export_kernels", c.export_kernels);
  c.threads = j.value("threads", c.threads);
}

inline void validate_config(const PipelineConfig& c) {
  auto fail = [](const std::string& m) { throw UsageError("config: " + m); };
  if (c.dataset.format == "idx") {
    if (c.dataset.images.empty() || c.dataset.labels.empty()) fail("idx dataset needs images and labels");
  } else if (c.dataset.format == "cifar10") {
    if (c.dataset.path.empty()) fail("cifar10 dataset needs path");
  } else {
    fail("dataset.format must be idx or cifar10");
  }
  if (c.classes.size() < 2) fail("need at least two classes");
  if (std::set<int>(c.classes.begin(), c.classes.end()).size() != c.classes.size()) fail("classes repeat");
  if (c.train_per_class < 2) fail("train_per_class must be at least 2");
  if (c.val_per_class < 1) fail("val_per_class must be at least 1");
  if (c.candidates == 0) fail("candidates must be positive");
  if (c.support < 1 || c.support % 2 == 0) fail("support must be a positive odd integer");
  if (c.resolved_k() < 1) fail("k must be positive");
  const auto r = c.resolved_sigma_range();
  if (!(r.lo > 0.0) || !(r.lo < r.hi)) fail("sigma_range must satisfy 0 < lo < hi");
  if (!(c.eps > 0.0)) fail("eps must be positive");
  if (!(c.t_percentile >= 0.0 && c.t_percentile <= 100.0)) fail("t_percentile must lie in [0, 100]");
  if (c.degree != 0 && c.degree != 1) fail("degree must be 0 or 1");
  if (c.cluster_k < 1 || c.cluster_k > c.classes.size() * c.val_per_class) fail("cluster_k must lie in [1, validation size]");
}

inline std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

inline std::string sha256_file(const fs::path& path) { return sha256_hex(read_bytes(path)); }

/// Train and validation splits drawn per class from a labelled dataset.
struct Split {
  LabeledDataset train;
  LabeledDataset val;
  std::vector<std::size_t> train_index;  // positions in the source dataset
  std::vector<std::size_t> val_index;
};

/// For each class (in config order) the member indices are shuffled with
/// mix_seed(seed, class); the first train_per_class go to training, the next
/// val_per_class to validation.
inline Split split_dataset(const LabeledDataset& data, const std::vector<int>& classes, std::size_t train_per_class,
                           std::size_t val_per_class, std::uint64_t seed) {
  if (data.samples.size() != data.labels.size()) throw DataError("dataset: samples/labels mismatch");
  Split s;
  for (int label : classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
      if (data.labels[i] == label) members.push_back(i);
    }
    if (members.size() < train_per_class + val_per_class) {
      throw DataError("dataset: class " + std::to_string(label) + " has only " + std::to_string(members.size()) +
                      " samples");
    }
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(static_cast<std::uint32_t>(label))));
    rng.shuffle(members.begin(), members.end());
    for (std::size_t i = 0; i < train_per_class + val_per_class; ++i) {
      auto& part = i < train_per_class ? s.train : s.val;
      auto& index = i < train_per_class ? s.train_index : s.val_index;
      part.samples.push_back(data.samples[members[i]]);
      part.labels.push_back(label);
      index.push_back(members[i]);
    }
  }
  return s;
}

inline LabeledDataset load_dataset(const DatasetConfig& d) {
  if (d.format == "cifar10") return load_cifar10(d.path);
  return load_idx_dataset(d.images, d.labels);
}

inline std::vector<GridFunction> preprocess_all(std::span<const GridFunction> images, unsigned threads = 0) {
  std::vector<GridFunction> out(images.size());
  parallel_for(images.size(), [&](std::size_t i) { out[i] = preprocess(images[i]); }, threads);
  return out;
}

inline json to_json(const SelectionReport& r) {
  return json{{"eps", r.eps}, {"classes", r.classes}, {"ids", r.ids}, {"s_values", r.s_values}, {"selected", r.selected}};
}

inline json to_json(const SamplingReport& r) {
  return json{{"ids", r.ids},         {"classes", r.classes},         {"delta", r.delta},
              {"rank", r.rank},       {"scores", r.scores},           {"threshold", r.threshold},
              {"survivors", r.survivors}, {"dropped", r.dropped}};
}

inline json to_json(const ClusterAssignment& a) {
  return json{{"clusters", a.clusters}, {"purity", a.purity}, {"assignment", a.cluster}};
}

/// Row-major CSV with a header row of sample names.
inline std::string distance_csv(const DistanceMatrix& m, const std::vector<std::string>& names) {
  if (names.size() != m.n()) throw UsageError("distance_csv: one name per row");
  std::string out = "sample";
  for (const auto& name : names) out += "," + name;
  out += "\n";
  for (std::size_t i = 0; i < m.n(); ++i) {
    out += names[i];
    for (std::size_t j = 0; j < m.n(); ++j) out += "," + json(m(i, j)).dump();
    out += "\n";
  }
  return out;
}

/// s<index>_l<label>, matching the Newick leaf names.
inline std::vector<std::string> sample_names(const std::vector<int>& labels) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < labels.size(); ++i) names.push_back("s" + std::to_string(i) + "_l" + std::to_string(labels[i]));
  return names;
}

inline std::uint64_t augment_seed(const PipelineConfig& c) { return mix_seed(c.seed, 0xa06); }

/// The split of `data` with every image preprocessed. With `augment` set,
/// each validation image is transformed (seeded by its dataset index) before
/// preprocessing.
inline Split prepare_data(const PipelineConfig& config, const LabeledDataset& data) {
  auto split = split_dataset(data, config.classes, config.train_per_class, config.val_per_class, config.seed);
  if (config.augment) {
    for (std::size_t i = 0; i < split.val.samples.size(); ++i) {
      split.val.samples[i] = augment(split.val.samples[i], mix_seed(augment_seed(config), split.val_index[i]));
    }
  }
  split.train.samples = preprocess_all(split.train.samples, config.threads);
  split.val.samples = preprocess_all(split.val.samples, config.threads);
  return split;
}

struct PipelineResult {
  OperatorSet operators;
  SelectionReport selection;
  SamplingReport sampling;
  DistanceMatrix distances;
  Dendrogram dendrogram;
  ClusterAssignment clusters;
  json manifest;
};

namespace detail {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path root) : root_(std::move(root)) {}

  void text(const std::string& name, const std::string& body) {
    write_text(root_ / name, body);
    record(name);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  void record(const std::string& name) {
    const auto path = root_ / name;
    artifacts_.push_back({{"path", name}, {"bytes", fs::file_size(path)}, {"sha256", sha256_file(path)}});
  }
  const json& artifacts() const { return artifacts_; }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  json artifacts_ = json::array();
};

}  // namespace detail

/// Runs every stage and writes artifacts into `out_dir`. The manifest lists
/// each artifact with its SHA-256; on failure it is still written, with
/// status "failed" and the failing stage, before the error is rethrown.
inline PipelineResult run_pipeline(const PipelineConfig& config, const LabeledDataset& data, const fs::path& out_dir) {
  validate_config(config);
  fs::create_directories(out_dir);
  detail::ArtifactWriter out(out_dir);
  PipelineResult result;
  std::string stage = "config";

  auto manifest = [&](const std::string& status, const std::string& error) {
    json m{{"geneo_version", GENEO_VERSION},
           {"json_library", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
           {"status", status},
           {"seeds", {{"run", config.seed}, {"candidates", config.seed}, {"split", config.seed},
                      {"augment", augment_seed(config)}}},
           {"artifacts", out.artifacts()}};
    if (!error.empty()) {
      m["failed_stage"] = stage;
      m["error"] = error;
    }
    return m;
  };

  try {
    out.json_file("config.json", json(config));
    const unsigned threads = config.threads;
    const int degree = config.degree;

    stage = "data";
    const auto split = prepare_data(config, data);
    out.json_file("split.json", json{{"train", split.train_index}, {"val", split.val_index},
                                     {"train_labels", split.train.labels}, {"val_labels", split.val.labels}});
    const auto& train = split.train.samples;
    const auto& val = split.val.samples;

    stage = "candidates";
    result.operators = sample_candidates(config.seed, config.candidates, config.resolved_k(),
                                         config.resolved_sigma_range(), config.support);

    stage = "select";
    const auto all_kernels = kernels_of(result.operators);
    std::vector<int> ids;
    for (const auto& e : result.operators.operators) ids.push_back(e.id);
    const auto table = compute_diagrams(all_kernels, train, degree, threads);
    result.selection = select_from_diagrams(table, ids, split.train.labels, config.eps, threads);
    mark_selection(result.operators, result.selection);
    out.json_file("selection.json", to_json(result.selection));
    if (result.selection.selected.empty()) throw InvariantError("no operator passed selection (eps too small?)");

    stage = "sample";
    std::vector<std::size_t> rows;
    std::vector<double> selectivity;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (result.operators.operators[i].status != OperatorStatus::selected) continue;
      rows.push_back(i);
      selectivity.push_back(result.selection.selectivity(ids[i]));
    }
    DiagramTable selected_table(rows.size(), train.size());
    std::vector<int> selected_ids;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      selected_ids.push_back(ids[rows[r]]);
      for (std::size_t s = 0; s < train.size(); ++s) selected_table(r, s) = table(rows[r], s);
    }
    std::vector<int> classes;
    auto delta = delta_tables(selected_table, split.train.labels, &classes, threads);
    result.sampling = resolve_redundancy(selected_ids, std::move(classes), std::move(delta), selectivity,
                                         config.t_percentile);
    mark_sampling(result.operators, result.sampling);
    out.json_file("sampling.json", to_json(result.sampling));
    out.json_file("operators.json", json(result.operators));

    stage = "distance";
    const auto survivors = kernels_of(result.operators, true);
    const auto val_table = compute_diagrams(survivors, val, degree, threads);
    result.distances = distance_matrix_dS(val_table, threads);
    out.json_file("distance_matrix.json", json(result.distances));
    out.text("distance_matrix.csv", distance_csv(result.distances, sample_names(split.val.labels)));

    stage = "cluster";
    result.dendrogram = cluster_average_linkage(result.distances, split.val.labels);
    result.clusters = cut_dendrogram(result.dendrogram, config.cluster_k);
    out.json_file("dendrogram.json", json(result.dendrogram));
    out.text("dendrogram.nwk", to_newick(result.dendrogram) + "\n");
    out.json_file("clusters.json", to_json(result.clusters));

    if (config.export_kernels) {
      stage = "export";
      export_kernels(out_dir / "kernels", result.operators);
      out.record("kernels/meta.json");
      out.record("kernels/kernels.f32");
    }
  } catch (const std::exception& e) {
    write_json(out_dir / "manifest.json", manifest("failed", e.what()));
    throw;
  }

  result.manifest = manifest("complete", "");
  result.manifest["summary"] = {{"candidates", config.candidates},
                                {"selected", result.selection.selected.size()},
                                {"survivors", result.sampling.survivors.size()},
                                {"clusters", result.clusters.clusters},
                                {"purity", result.clusters.purity}};
  write_json(out_dir / "manifest.json", result.manifest);
  return result;
}

inline PipelineResult run_pipeline(const PipelineConfig& config, const fs::path& out_dir) {
  validate_config(config);
  return run_pipeline(config, load_dataset(config.dataset), out_dir);
}

}  // namespace geneo
