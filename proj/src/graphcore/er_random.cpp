#include "mgwb/graphcore/er_random.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "mgwb/rng.hpp"

namespace mgwb {

MultiplexGraph er_reference(int n, long m, uint64_t seed) {
  long max_edges = long(n) * (n - 1) / 2;
  if (m > max_edges)
    throw std::invalid_argument("er_reference: m exceeds n(n-1)/2");
  Rng rng(seed);
  std::unordered_set<long> seen;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  while (long(edges.size()) < m) {
    int u = int(rng.uniform_int(0, n - 1));
    int v = int(rng.uniform_int(0, n - 1));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    long key = long(u) * n + v;
    if (seen.insert(key).second) edges.emplace_back(u, v);
  }
  std::sort(edges.begin(), edges.end());

  MultiplexGraph g;
  g.n = n;
  g.k = 1;
  g.features = Matrix::zeros(n, 6);
  g.edges = std::move(edges);
  g.edge_attrs = Matrix(int(m), 2);
  for (int i = 0; i < int(m); ++i) g.edge_attrs(i, 0) = 1.0;
  g.channel_present.assign(m, {true, false});
  g.community.assign(n, 0);
  g.site.assign(n, 0);
  g.finalize();
  return g;
}

}  // namespace mgwb
