#pragma once

// Small on-disk datasets for pipeline and CLI tests.

#include <cmath>
#include <string>

#include "geneo/io.hpp"
#include "geneo/pipeline.hpp"
#include "geneo/rng.hpp"

namespace fixture {

inline geneo::fs::path tmp_dir(const std::string& name) {
  const auto dir = geneo::fs::path(GENEO_TEST_TMP) / name;
  geneo::fs::remove_all(dir);
  geneo::fs::create_directories(dir);
  return dir;
}

inline void push_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::vector<std::uint8_t> idx_images(const std::vector<std::vector<std::uint8_t>>& images, std::uint32_t rows,
                                            std::uint32_t cols) {
  std::vector<std::uint8_t> out;
  push_be32(out, geneo::kIdxImages);
  push_be32(out, static_cast<std::uint32_t>(images.size()));
  push_be32(out, rows);
  push_be32(out, cols);
  for (const auto& im : images) out.insert(out.end(), im.begin(), im.end());
  return out;
}

inline std::vector<std::uint8_t> idx_labels(const std::vector<int>& labels) {
  std::vector<std::uint8_t> out;
  push_be32(out, geneo::kIdxLabels);
  push_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (int l : labels) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

/// 16x16 images: label 3 is a filled disc, label 8 a ring; both with noise.
inline std::pair<std::vector<std::vector<std::uint8_t>>, std::vector<int>> shapes(std::size_t per_class,
                                                                                 std::uint64_t seed) {
  geneo::Rng rng(seed);
  std::vector<std::vector<std::uint8_t>> images;
  std::vector<int> labels;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool ring = i % 2 == 1;
    std::vector<std::uint8_t> im(256);
    const double cx = 7.5 + rng.uniform(-1, 1), cy = 7.5 + rng.uniform(-1, 1);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        const double r = std::hypot(x - cx, y - cy);
        const bool on = ring ? (r > 3.0 && r < 5.5) : r < 5.0;
        im[static_cast<std::size_t>(16 * y + x)] = static_cast<std::uint8_t>((on ? 200 : 0) + rng.below(40));
      }
    }
    images.push_back(std::move(im));
    labels.push_back(ring ? 8 : 3);
  }
  return {images, labels};
}

/// Writes an IDX pair into `dir` and returns a config that reads it.
inline geneo::PipelineConfig shapes_config(const geneo::fs::path& dir, std::size_t per_class = 8) {
  const auto [images, labels] = shapes(per_class, 7);
  geneo::write_bytes(dir / "images.idx", idx_images(images, 16, 16));
  geneo::write_bytes(dir / "labels.idx", idx_labels(labels));
  geneo::PipelineConfig c;
  c.dataset.images = (dir / "images.idx").string();
  c.dataset.labels = (dir / "labels.idx").string();
  c.classes = {3, 8};
  c.train_per_class = 4;
  c.val_per_class = 3;
  c.candidates = 6;
  c.support = 5;
  c.eps = 100.0;
  return c;
}

}  // namespace fixture
