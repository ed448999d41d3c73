#include "mgwb/synthgen/corpus.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mgwb/graphcore/graph_io.hpp"
#include "mgwb/graphcore/metrics.hpp"
#include "mgwb/synthgen/generator.hpp"
#include "mgwb/worker_pool.hpp"

namespace mgwb {

namespace fs = std::filesystem;

CorpusManifest generate_corpus(const GenConfig& cfg, int count, uint64_t base_seed,
                               const std::string& out_dir, int jobs) {
  cfg.validate();
  fs::create_directories(out_dir);
  CorpusManifest manifest;
  manifest.entries.resize(count);
  std::string failure;
  try {
    parallel_for(count, jobs, [&](int i) {
      uint64_t seed = base_seed + uint64_t(i);
      MultiplexGraph g = generate_graph(cfg, seed);
      TaskBundle tasks = make_task_bundle(g, cfg, Rng(seed).child("tasks"));
      char name[64];
      std::snprintf(name, sizeof(name), "graph_%08" PRIu64 ".json", seed);
      std::string path = (fs::path(out_dir) / name).string();
      save_graph(path, g, &tasks);
      CorpusEntry e;
      e.seed = seed;
      e.path = path;
      e.n = g.n;
      e.k = g.k;
      e.m = g.edge_count();
      e.clustering = avg_clustering(g);
      e.path_length = avg_shortest_path(g);
      manifest.entries[i] = std::move(e);
    });
  } catch (const std::exception& ex) {
    // keep whatever completed, note the abort, then propagate
    CorpusManifest partial;
    for (auto& e : manifest.entries)
      if (!e.path.empty()) partial.entries.push_back(e);
    save_manifest((fs::path(out_dir) / "manifest.tsv").string(), partial, ex.what());
    throw;
  }
  save_manifest((fs::path(out_dir) / "manifest.tsv").string(), manifest);
  return manifest;
}

void save_manifest(const std::string& path, const CorpusManifest& m,
                   const std::string& abort_note) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_manifest: cannot open " + path);
  f << "seed\tpath\tn\tk\tm\tclustering\tpath_length\n";
  char line[512];
  for (const auto& e : m.entries) {
    std::snprintf(line, sizeof(line), "%" PRIu64 "\t%s\t%d\t%d\t%d\t%.17g\t%.17g\n",
                  e.seed, e.path.c_str(), e.n, e.k, e.m, e.clustering,
                  e.path_length);
    f << line;
  }
  if (!abort_note.empty()) f << "# aborted: " << abort_note << "\n";
}

CorpusManifest load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_manifest: cannot open " + path);
  CorpusManifest m;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    CorpusEntry e;
    ss >> e.seed >> e.path >> e.n >> e.k >> e.m >> e.clustering >> e.path_length;
    if (ss.fail()) throw std::runtime_error("load_manifest: bad row: " + line);
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace mgwb
