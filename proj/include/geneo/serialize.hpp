#pragma once

// JSON encodings of the core types (nlohmann::json ADL hooks). Schemas are
// documented in docs/formats.md.

#include <cmath>
#include <string>

#include "geneo/core.hpp"
#include "geneo/operators.hpp"
#include "geneo/persistence.hpp"
#include "json.hpp"

namespace geneo {

using json = nlohmann::json;

inline void to_json(json& j, const GridFunction& f) {
  j = json{{"width", f.width()}, {"height", f.height()}, {"values", f.values()}};
}
inline void from_json(const json& j, GridFunction& f) {
  f = GridFunction(j.at("width").get<std::size_t>(), j.at("height").get<std::size_t>(),
                   j.at("values").get<std::vector<double>>());
}

// Infinite deaths are written as null.
inline void to_json(json& j, const DiagramPoint& p) {
  j = json{{"birth", p.birth}, {"death", nullptr}, {"multiplicity", p.multiplicity}};
  if (std::isfinite(p.death)) j["death"] = p.death;
}
inline void from_json(const json& j, DiagramPoint& p) {
  p.birth = j.at("birth").get<double>();
  p.death = j.at("death").is_null() ? kInfinity : j.at("death").get<double>();
  p.multiplicity = j.value("multiplicity", 1);
}

// {"degree": k, "points": [[b, d], ...], "essential": [b, ...]}; a point of
// multiplicity m is listed m times.
inline void to_json(json& j, const PersistenceDiagram& d) {
  json points = json::array(), essential = json::array();
  for (const auto& p : d.points) {
    for (int i = 0; i < p.multiplicity; ++i) points.push_back({p.birth, p.death});
  }
  for (const auto& p : d.essential) {
    for (int i = 0; i < p.multiplicity; ++i) essential.push_back(p.birth);
  }
  j = json{{"degree", d.degree}, {"points", std::move(points)}, {"essential", std::move(essential)}};
}
inline void from_json(const json& j, PersistenceDiagram& d) {
  d = PersistenceDiagram{};
  d.degree = j.at("degree").get<int>();
  for (const auto& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2) throw DataError("diagram point must be [birth, death]");
    d.points.push_back({p[0].get<double>(), p[1].get<double>(), 1});
  }
  for (const auto& b : j.at("essential")) d.essential.push_back({b.get<double>(), kInfinity, 1});
  d = canonicalize(std::move(d));
  if (const auto v = validate(d); !v.empty()) throw DataError("diagram: " + describe(v));
}

inline void to_json(json& j, const IeneoParams& p) {
  j = json{{"k", p.k()}, {"a", p.a}, {"tau", p.tau}, {"sigma", p.sigma}, {"support", p.support}};
}
inline void from_json(const json& j, IeneoParams& p) {
  p.a = j.at("a").get<std::vector<double>>();
  p.tau = j.at("tau").get<std::vector<double>>();
  p.sigma = j.at("sigma").get<double>();
  p.support = j.at("support").get<int>();
}

inline void to_json(json& j, const Kernel& k) {
  j = json{{"side", k.side}, {"weights", k.weights}, {"l1_norm", k.l1_norm}};
}
inline void from_json(const json& j, Kernel& k) {
  k.side = j.at("side").get<int>();
  k.weights = j.at("weights").get<std::vector<double>>();
  k.l1_norm = j.at("l1_norm").get<double>();
}

inline void to_json(json& j, const GridIsometry& g) {
  j = json{{"rotation", g.rotation_degrees()}, {"reflect", g.reflect}, {"shift", {g.dx, g.dy}}};
}
inline void from_json(const json& j, GridIsometry& g) {
  const int deg = j.at("rotation").get<int>();
  if (deg % 90 != 0 || deg < 0 || deg >= 360) throw DataError("rotation must be 0, 90, 180 or 270");
  g.quarter_turns = deg / 90;
  g.reflect = j.at("reflect").get<bool>();
  g.dx = j.at("shift").at(0).get<int>();
  g.dy = j.at("shift").at(1).get<int>();
}

NLOHMANN_JSON_SERIALIZE_ENUM(OperatorStatus, {{OperatorStatus::candidate, "candidate"},
                                              {OperatorStatus::selected, "selected"},
                                              {OperatorStatus::sampled_out, "sampled-out"}})

// Kernels are not stored: they are realized again from the parameters, which
// reproduces them bit for bit.
inline void to_json(json& j, const OperatorSet& s) {
  json ops = json::array();
  for (const auto& e : s.operators) ops.push_back({{"id", e.id}, {"params", e.params}, {"status", e.status}});
  j = json{{"seed", s.seed}, {"operators", std::move(ops)}};
}
inline void from_json(const json& j, OperatorSet& s) {
  s = OperatorSet{};
  s.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& e : j.at("operators")) {
    OperatorEntry entry;
    entry.id = e.at("id").get<int>();
    entry.params = e.at("params").get<IeneoParams>();
    entry.kernel = make_kernel(entry.params);
    entry.status = e.at("status").get<OperatorStatus>();
    s.operators.push_back(std::move(entry));
  }
}

inline void to_json(json& j, const LabeledDataset& d) { j = json{{"samples", d.samples}, {"labels", d.labels}}; }
inline void from_json(const json& j, LabeledDataset& d) {
  d.samples = j.at("samples").get<std::vector<GridFunction>>();
  d.labels = j.at("labels").get<std::vector<int>>();
}

inline void to_json(json& j, const DistanceMatrix& m) { j = json{{"n", m.n()}, {"entries", m.entries()}}; }
inline void from_json(const json& j, DistanceMatrix& m) {
  m = DistanceMatrix(j.at("n").get<std::size_t>(), j.at("entries").get<std::vector<double>>());
}

inline void to_json(json& j, const Dendrogram& d) {
  json merges = json::array();
  for (const auto& m : d.merges) {
    merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  }
  j = json{{"labels", d.labels}, {"merges", std::move(merges)}};
}
inline void from_json(const json& j, Dendrogram& d) {
  d = Dendrogram{};
  d.labels = j.at("labels").get<std::vector<int>>();
  for (const auto& m : j.at("merges")) {
    d.merges.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(), m.at("height").get<double>(),
                        m.at("size").get<std::size_t>()});
  }
}

}  // namespace geneo
