#pragma once

// Readers and writers for the on-disk formats: IDX (MNIST), CIFAR-10 binary
// batches, raw float32 images with a JSON sidecar, and kernel export
// directories.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "geneo/core.hpp"
#include "geneo/operators.hpp"
#include "geneo/serialize.hpp"

namespace geneo {

namespace fs = std::filesystem;

inline std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

inline std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

inline void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

inline json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

/// Pretty-printed with a trailing newline.
inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// ---- IDX ------------------------------------------------------------------

inline constexpr std::uint32_t kIdxImages = 0x00000803;
inline constexpr std::uint32_t kIdxLabels = 0x00000801;

/// One file of an IDX pair: either images or labels.
struct IdxData {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
  std::vector<GridFunction> images;
  std::vector<int> labels;
};

namespace detail {

inline std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

inline void append_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t read_le32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
         (std::uint32_t{b[at + 3]} << 24);
}

}  // namespace detail

inline IdxData parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw DataError("idx: truncated header");
  IdxData out;
  out.magic = detail::read_be32(bytes, 0);
  std::size_t rank;
  if (out.magic == kIdxImages) {
    rank = 3;
  } else if (out.magic == kIdxLabels) {
    rank = 1;
  } else {
    throw DataError("idx: bad magic");
  }
  if (bytes.size() < 4 + 4 * rank) throw DataError("idx: truncated header");
  std::uint64_t payload = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    out.dims.push_back(detail::read_be32(bytes, 4 + 4 * i));
    payload *= out.dims.back();
  }
  const std::size_t offset = 4 + 4 * rank;
  if (bytes.size() - offset < payload) throw DataError("idx: truncated payload");
  if (bytes.size() - offset > payload) throw DataError("idx: trailing bytes after payload");

  if (rank == 1) {
    out.labels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
    return out;
  }
  const std::size_t rows = out.dims[1], cols = out.dims[2];
  out.images.reserve(out.dims[0]);
  for (std::size_t n = 0; n < out.dims[0]; ++n) {
    GridFunction f(cols, rows);
    auto v = f.values();
    const std::size_t base = offset + n * rows * cols;
    for (std::size_t i = 0; i < rows * cols; ++i) v[i] = bytes[base + i];
    out.images.push_back(std::move(f));
  }
  return out;
}

inline IdxData load_idx(const fs::path& path) { return parse_idx(read_bytes(path)); }

/// Images and labels from a matching IDX pair.
inline LabeledDataset load_idx_dataset(const fs::path& images, const fs::path& labels) {
  auto im = load_idx(images);
  auto lb = load_idx(labels);
  if (im.magic != kIdxImages || lb.magic != kIdxLabels) throw DataError("idx: expected an images file and a labels file");
  if (im.images.size() != lb.labels.size()) throw DataError("idx: image and label counts differ");
  return {std::move(im.images), std::move(lb.labels)};
}

// ---- CIFAR-10 -------------------------------------------------------------

inline constexpr std::size_t kCifarSide = 32;
inline constexpr std::size_t kCifarRecord = 1 + 3 * kCifarSide * kCifarSide;

/// ITU-R 601 luminance.
inline double luminance(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

inline LabeledDataset parse_cifar10(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kCifarRecord != 0) throw DataError("cifar10: size is not a multiple of 3073");
  constexpr std::size_t plane = kCifarSide * kCifarSide;
  LabeledDataset out;
  for (std::size_t at = 0; at < bytes.size(); at += kCifarRecord) {
    out.labels.push_back(bytes[at]);
    GridFunction f(kCifarSide, kCifarSide);
    auto v = f.values();
    const auto* px = bytes.data() + at + 1;
    for (std::size_t i = 0; i < plane; ++i) v[i] = luminance(px[i], px[plane + i], px[2 * plane + i]);
    out.samples.push_back(std::move(f));
  }
  return out;
}

inline LabeledDataset load_cifar10(const fs::path& path) { return parse_cifar10(read_bytes(path)); }

// ---- raw float32 images ---------------------------------------------------

inline fs::path sidecar_path(const fs::path& image) { return fs::path(image.string() + ".json"); }

inline std::vector<std::uint8_t> encode_f32(std::span<const double> values) {
  std::vector<std::uint8_t> out;
  out.reserve(4 * values.size());
  for (double v : values) detail::append_le32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

inline std::vector<float> decode_f32(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 4 != 0) throw DataError("f32: size is not a multiple of 4");
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::bit_cast<float>(detail::read_le32(bytes, 4 * i));
  return out;
}

/// Writes <path> (little-endian float32, row-major) and <path>.json.
inline void write_f32_image(const fs::path& path, const GridFunction& f) {
  write_bytes(path, encode_f32(f.values()));
  write_json(sidecar_path(path), json{{"width", f.width()}, {"height", f.height()}});
}

inline GridFunction read_f32_image(const fs::path& path) {
  const auto meta = read_json(sidecar_path(path));
  const auto w = meta.at("width").get<std::size_t>(), h = meta.at("height").get<std::size_t>();
  const auto values = decode_f32(read_bytes(path));
  if (values.size() != w * h) throw DataError(path.string() + ": pixel count does not match sidecar");
  return GridFunction(w, h, std::vector<double>(values.begin(), values.end()));
}

// ---- kernel export --------------------------------------------------------

struct KernelExport {
  std::vector<int> ids;
  std::vector<IeneoParams> params;
  std::uint64_t seed = 0;
  int side = 0;
  std::vector<std::vector<float>> kernels;  // row-major, side * side each
};

/// meta.json plus kernels.f32 for the operators of `set` that are still
/// selected. Returns the number of kernels written.
inline std::size_t export_kernels(const fs::path& dir, const OperatorSet& set) {
  std::vector<int> ids;
  json params = json::array();
  std::vector<double> flat;
  int side = 0;
  for (const auto& e : set.operators) {
    if (e.status != OperatorStatus::selected) continue;
    if (side != 0 && e.kernel.side != side) throw UsageError("export_kernels: kernels of different sizes");
    side = e.kernel.side;
    ids.push_back(e.id);
    params.push_back(e.params);
    flat.insert(flat.end(), e.kernel.weights.begin(), e.kernel.weights.end());
  }
  fs::create_directories(dir);
  write_bytes(dir / "kernels.f32", encode_f32(flat));
  write_json(dir / "meta.json", json{{"count", ids.size()},
                                     {"side", side},
                                     {"dtype", "float32-le"},
                                     {"layout", "row-major, concatenated"},
                                     {"seed", set.seed},
                                     {"ids", ids},
                                     {"params", std::move(params)}});
  return ids.size();
}

inline KernelExport load_kernel_export(const fs::path& dir) {
  const auto meta = read_json(dir / "meta.json");
  KernelExport out;
  out.ids = meta.at("ids").get<std::vector<int>>();
  out.params = meta.at("params").get<std::vector<IeneoParams>>();
  out.seed = meta.at("seed").get<std::uint64_t>();
  out.side = meta.at("side").get<int>();
  const auto count = meta.at("count").get<std::size_t>();
  if (out.ids.size() != count || out.params.size() != count) throw DataError("kernel export: count mismatch in meta.json");
  const auto values = decode_f32(read_bytes(dir / "kernels.f32"));
  const auto per = static_cast<std::size_t>(out.side) * static_cast<std::size_t>(out.side);
  if (values.size() != count * per) throw DataError("kernel export: kernels.f32 does not hold count * side^2 floats");
  for (std::size_t i = 0; i < count; ++i) {
    out.kernels.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(i * per),
                             values.begin() + static_cast<std::ptrdiff_t>((i + 1) * per));
  }
  return out;
}

}  // namespace geneo
