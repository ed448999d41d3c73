#include "mgwb/graphcore/wl_hash.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace mgwb {

namespace {

uint64_t mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<double> wl_hash(const MultiplexGraph& g, const std::vector<int>& subset,
                            int iterations, int dim) {
  if (subset.empty()) throw std::invalid_argument("wl_hash: empty subset");
  int s = int(subset.size());
  std::vector<int> pos(g.n, -1);
  for (int i = 0; i < s; ++i) pos[subset[i]] = i;

  // induced adjacency in local ids
  std::vector<std::vector<int>> nbrs(s);
  for (int i = 0; i < s; ++i) {
    int v = subset[i];
    for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
      if (pos[*it] >= 0) nbrs[i].push_back(pos[*it]);
  }

  std::vector<uint64_t> label(s), next(s);
  for (int i = 0; i < s; ++i) {
    int bucket = std::min(int(nbrs[i].size()), 5);
    label[i] = mix(uint64_t(bucket) + 1);
  }

  std::vector<double> hist(dim, 0.0);
  auto deposit = [&](uint64_t l) { hist[mix(l) % uint64_t(dim)] += 1.0; };
  for (int i = 0; i < s; ++i) deposit(label[i]);

  std::vector<uint64_t> sorted;
  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i < s; ++i) {
      if (nbrs[i].empty()) {
        next[i] = label[i];  // no neighborhood signal; label is stable
        continue;
      }
      sorted.clear();
      for (int j : nbrs[i]) sorted.push_back(label[j]);
      std::sort(sorted.begin(), sorted.end());
      uint64_t h = mix(label[i]);
      for (uint64_t l : sorted) h = mix(h ^ mix(l));
      next[i] = h;
    }
    label = next;
    for (int i = 0; i < s; ++i) deposit(label[i]);
  }

  double total = double(s) * (iterations + 1);
  for (double& v : hist) v /= total;
  return hist;
}

}  // namespace mgwb
