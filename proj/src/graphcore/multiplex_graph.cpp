#include "mgwb/graphcore/multiplex_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mgwb {

Csr build_adjacency(int n, const std::vector<std::pair<int, int>>& edges) {
  Csr adj;
  adj.offsets.assign(n + 1, 0);
  for (auto [u, v] : edges) {
    adj.offsets[u + 1]++;
    adj.offsets[v + 1]++;
  }
  for (int i = 0; i < n; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.targets.resize(adj.offsets[n]);
  std::vector<int> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (auto [u, v] : edges) {
    adj.targets[cursor[u]++] = v;
    adj.targets[cursor[v]++] = u;
  }
  for (int i = 0; i < n; ++i)
    std::sort(adj.targets.begin() + adj.offsets[i],
              adj.targets.begin() + adj.offsets[i + 1]);
  return adj;
}

void MultiplexGraph::finalize() {
  if (features.rows != n || (n > 0 && features.cols != 6))
    throw std::invalid_argument("graph: features must be n x 6");
  if (int(community.size()) != n || int(site.size()) != n)
    throw std::invalid_argument("graph: community/site size mismatch");
  if (edge_attrs.rows != edge_count() || int(channel_present.size()) != edge_count())
    throw std::invalid_argument("graph: edge attribute size mismatch");
  std::pair<int, int> prev{-1, -1};
  for (size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (u < 0 || v >= n || u >= v)
      throw std::invalid_argument("graph: bad edge (" + std::to_string(u) + "," +
                                  std::to_string(v) + ")");
    if (edges[i] <= prev)
      throw std::invalid_argument("graph: edges not sorted/unique");
    prev = edges[i];
    const auto& pres = channel_present[i];
    if (!pres[0] && !pres[1])
      throw std::invalid_argument("graph: edge with no channel present");
    for (int c = 0; c < 2; ++c)
      if (!pres[c] && edge_attrs(int(i), c) != 0.0)
        throw std::invalid_argument("graph: absent channel with nonzero attr");
  }
  adj_ = build_adjacency(n, edges);
}

bool MultiplexGraph::has_edge(int u, int v) const {
  if (u == v) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  return std::binary_search(neighbors_begin(u), neighbors_end(u), v);
}

std::vector<int> largest_component(const MultiplexGraph& g) {
  std::vector<int> comp(g.n, -1);
  std::vector<int> best, queue;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    queue.clear();
    queue.push_back(s);
    comp[s] = s;
    std::vector<int> members{s};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it) {
        if (comp[*it] < 0) {
          comp[*it] = s;
          queue.push_back(*it);
          members.push_back(*it);
        }
      }
    }
    if (members.size() > best.size()) best = std::move(members);
  }
  std::sort(best.begin(), best.end());
  return best;
}

bool is_connected(const MultiplexGraph& g) {
  return g.n == 0 || int(largest_component(g).size()) == g.n;
}

}  // namespace mgwb
