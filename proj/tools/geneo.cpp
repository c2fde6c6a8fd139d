// geneo: command-line front end for the library.
//
// Exit codes: 0 success, 1 invalid data or failed invariant, 2 usage error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geneo/geneo.hpp"

namespace {

using geneo::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

geneo::PipelineConfig load_config(const fs::path& path, unsigned threads) {
  auto config = geneo::read_json(path).get<geneo::PipelineConfig>();
  if (threads != 0) config.threads = threads;
  geneo::validate_config(config);
  return config;
}

geneo::OperatorSet load_operators(const fs::path& path) {
  const auto j = geneo::read_json(path);
  try {
    return j.get<geneo::OperatorSet>();
  } catch (const json::exception& e) {
    throw geneo::DataError(path.string() + ": " + e.what());
  }
}

/// The operators marked selected, or every operator when none is.
std::vector<geneo::Ieneo> active_operators(const geneo::OperatorSet& set) {
  std::vector<geneo::Ieneo> out;
  for (const auto& e : set.operators) {
    if (e.status == geneo::OperatorStatus::selected) out.emplace_back(e.kernel);
  }
  if (out.empty()) {
    for (const auto& e : set.operators) out.emplace_back(e.kernel);
  }
  return out;
}

void emit(const std::string& out, const std::string& body) {
  if (out.empty() || out == "-") {
    std::cout << body;
  } else {
    geneo::write_text(out, body);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GENEO persistence, operator selection and metric learning"};
  app.set_version_flag("--version", GENEO_VERSION);
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

  // persistence
  auto* persistence = app.add_subcommand("persistence", "persistence diagram of a raw float32 image");
  int p_degree = 1;
  std::string p_in, p_out;
  persistence->add_option("--degree", p_degree, "homology degree")->check(CLI::IsMember({0, 1}));
  persistence->add_option("--in", p_in, "image (.f32 with .f32.json sidecar)")->required();
  persistence->add_option("--out", p_out, "diagram JSON (default stdout)");

  // bottleneck
  auto* bottleneck = app.add_subcommand("bottleneck", "bottleneck distance between two diagram files");
  std::string b_a, b_b;
  bottleneck->add_option("a", b_a)->required();
  bottleneck->add_option("b", b_b)->required();

  // dist
  auto* dist = app.add_subcommand("dist", "pairwise distance matrix over images");
  std::string d_metric = "dmatch", d_operators, d_group = "dihedral", d_format = "json", d_out;
  std::vector<std::string> d_images;
  int d_degree = 1;
  dist->add_option("--metric", d_metric, "phi | dg | dmatch")->check(CLI::IsMember({"phi", "dg", "dmatch"}));
  dist->add_option("--operators", d_operators, "operator set JSON (dmatch)");
  dist->add_option("--group", d_group, "identity | dihedral (dg)")->check(CLI::IsMember({"identity", "dihedral"}));
  dist->add_option("--degree", d_degree, "homology degree (dmatch)")->check(CLI::IsMember({0, 1}));
  dist->add_option("--format", d_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  dist->add_option("--out", d_out, "output file (default stdout)");
  dist->add_option("images", d_images, "images (.f32)")->required()->expected(1, -1);

  // select
  auto* select = app.add_subcommand("select", "draw candidates and select them on the training split");
  std::string s_config, s_out;
  select->add_option("--config", s_config)->required();
  select->add_option("--out", s_out, "output directory")->required();

  // sample
  auto* sample = app.add_subcommand("sample", "drop redundant operators from a selected set");
  std::string m_config, m_operators, m_out;
  sample->add_option("--config", m_config)->required();
  sample->add_option("--operators", m_operators, "operators.json written by select")->required();
  sample->add_option("--out", m_out, "output directory")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "average-linkage clustering of a distance matrix");
  std::string c_matrix, c_labels, c_out;
  std::size_t c_k = 2;
  cluster->add_option("--matrix", c_matrix, "distance matrix JSON")->required();
  cluster->add_option("--labels", c_labels, "JSON array of integer labels")->required();
  cluster->add_option("--k", c_k, "number of clusters for the cut");
  cluster->add_option("--out", c_out, "output directory")->required();

  // export-kernels
  auto* exporter = app.add_subcommand("export-kernels", "write selected kernels as float32");
  std::string e_operators, e_out;
  exporter->add_option("--operators", e_operators)->required();
  exporter->add_option("--out", e_out, "output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "the whole pipeline");
  std::string r_config, r_out;
  run->add_option("--config", r_config)->required();
  run->add_option("--out", r_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*persistence) {
      const auto d = geneo::persistence(geneo::read_f32_image(p_in), p_degree);
      emit(p_out, json(d).dump(2) + "\n");
    } else if (*bottleneck) {
      const auto a = geneo::read_json(b_a).get<geneo::PersistenceDiagram>();
      const auto b = geneo::read_json(b_b).get<geneo::PersistenceDiagram>();
      std::cout << json(geneo::bottleneck(a, b)).dump() << "\n";
    } else if (*dist) {
      std::vector<geneo::GridFunction> images;
      for (const auto& path : d_images) images.push_back(geneo::read_f32_image(path));
      std::vector<geneo::Ieneo> ops;
      if (d_metric == "dmatch") {
        if (d_operators.empty()) throw geneo::UsageError("dist --metric dmatch needs --operators");
        ops = active_operators(load_operators(d_operators));
      }
      const auto group = d_group == "dihedral" ? geneo::dihedral_group() : std::vector<geneo::GridIsometry>{{}};
      geneo::DistanceMatrix m(images.size());
      for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t j = i + 1; j < images.size(); ++j) {
          double v = 0.0;
          if (d_metric == "phi") {
            v = geneo::dist_phi(images[i], images[j]);
          } else if (d_metric == "dg") {
            v = geneo::natural_pseudo_distance(images[i], images[j], group);
          } else {
            v = geneo::dmatch_family(images[i], images[j], ops, d_degree);
          }
          m.set(i, j, v);
        }
      }
      emit(d_out, d_format == "csv" ? geneo::distance_csv(m, d_images) : json(m).dump(2) + "\n");
    } else if (*select) {
      const auto config = load_config(s_config, threads);
      const auto split = geneo::prepare_data(config, geneo::load_dataset(config.dataset));
      auto set = geneo::sample_candidates(config.seed, config.candidates, config.resolved_k(),
                                          config.resolved_sigma_range(), config.support);
      const auto report = geneo::select_operators(set, split.train, config.eps, config.degree, config.threads);
      geneo::mark_selection(set, report);
      geneo::write_json(fs::path(s_out) / "selection.json", geneo::to_json(report));
      geneo::write_json(fs::path(s_out) / "operators.json", json(set));
      std::cout << report.selected.size() << " of " << set.operators.size() << " operators selected\n";
    } else if (*sample) {
      const auto config = load_config(m_config, threads);
      auto set = load_operators(m_operators);
      const auto split = geneo::prepare_data(config, geneo::load_dataset(config.dataset));
      const auto report = geneo::sample_operators(set, split.train, config.t_percentile, config.degree, config.threads);
      geneo::mark_sampling(set, report);
      geneo::write_json(fs::path(m_out) / "sampling.json", geneo::to_json(report));
      geneo::write_json(fs::path(m_out) / "operators.json", json(set));
      std::cout << report.survivors.size() << " of " << report.ids.size() << " operators kept\n";
    } else if (*cluster) {
      const auto m = geneo::read_json(c_matrix).get<geneo::DistanceMatrix>();
      const auto labels = geneo::read_json(c_labels).get<std::vector<int>>();
      const auto d = geneo::cluster_average_linkage(m, labels);
      const auto cut = geneo::cut_dendrogram(d, c_k);
      geneo::write_json(fs::path(c_out) / "dendrogram.json", json(d));
      geneo::write_text(fs::path(c_out) / "dendrogram.nwk", geneo::to_newick(d) + "\n");
      geneo::write_json(fs::path(c_out) / "clusters.json", geneo::to_json(cut));
      std::cout << "purity " << json(cut.purity).dump() << "\n";
    } else if (*exporter) {
      const auto n = geneo::export_kernels(e_out, load_operators(e_operators));
      std::cout << n << " kernels written\n";
    } else if (*run) {
      const auto config = load_config(r_config, threads);
      const auto result = geneo::run_pipeline(config, r_out);
      std::cout << result.manifest["summary"].dump() << "\n";
    }
  } catch (const geneo::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
