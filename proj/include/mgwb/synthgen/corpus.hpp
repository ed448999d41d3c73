#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgwb/synthgen/gen_config.hpp"

namespace mgwb {

struct CorpusEntry {
  uint64_t seed = 0;
  std::string path;
  int n = 0;
  int k = 0;
  int m = 0;
  double clustering = 0.0;
  double path_length = 0.0;
};

struct CorpusManifest {
  std::vector<CorpusEntry> entries;
};

// Generates `count` graphs with task bundles under out_dir (seeds
// base_seed..base_seed+count-1, parallel across seeds) and writes a
// delimited manifest. On failure the partial manifest is written with an
// abort note before the error propagates.
CorpusManifest generate_corpus(const GenConfig& cfg, int count, uint64_t base_seed,
                               const std::string& out_dir, int jobs);

void save_manifest(const std::string& path, const CorpusManifest& m,
                   const std::string& abort_note = "");
CorpusManifest load_manifest(const std::string& path);

}  // namespace mgwb
