#include "mgwb/graphcore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgwb {

double avg_clustering(const MultiplexGraph& g) {
  if (g.n < 3) throw std::invalid_argument("avg_clustering: need n >= 3");
  std::vector<char> mark(g.n, 0);
  double acc = 0.0;
  for (int v = 0; v < g.n; ++v) {
    int d = g.degree(v);
    if (d < 2) continue;
    for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
      mark[*it] = 1;
    long links = 0;
    for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it) {
      int u = *it;
      for (const int* jt = g.neighbors_begin(u); jt != g.neighbors_end(u); ++jt)
        if (*jt > u && mark[*jt]) links++;
    }
    for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
      mark[*it] = 0;
    acc += 2.0 * double(links) / (double(d) * (d - 1));
  }
  return acc / g.n;
}

double avg_shortest_path(const MultiplexGraph& g) {
  if (g.n < 2) throw std::invalid_argument("avg_shortest_path: need n >= 2");
  std::vector<int> comp = largest_component(g);
  std::vector<char> in_comp(g.n, 0);
  for (int v : comp) in_comp[v] = 1;
  std::vector<int> dist(g.n);
  std::vector<int> queue;
  queue.reserve(comp.size());
  double total = 0.0;
  long pairs = 0;
  for (size_t si = 0; si < comp.size(); ++si) {
    int s = comp[si];
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it) {
        if (dist[*it] < 0) {
          dist[*it] = dist[v] + 1;
          queue.push_back(*it);
        }
      }
    }
    for (int t : comp) {
      if (t > s && dist[t] > 0) {
        total += dist[t];
        pairs++;
      }
    }
  }
  if (pairs == 0) return 0.0;
  return total / double(pairs);
}

std::vector<double> pagerank(const MultiplexGraph& g, double damping, double tol) {
  int n = g.n;
  std::vector<double> x(n, 1.0 / n), nx(n);
  for (int iter = 0; iter < 10000; ++iter) {
    double dangling = 0.0;
    for (int v = 0; v < n; ++v)
      if (g.degree(v) == 0) dangling += x[v];
    double base = (1.0 - damping) / n + damping * dangling / n;
    std::fill(nx.begin(), nx.end(), base);
    for (int v = 0; v < n; ++v) {
      int d = g.degree(v);
      if (d == 0) continue;
      double share = damping * x[v] / d;
      for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
        nx[*it] += share;
    }
    double diff = 0.0;
    for (int v = 0; v < n; ++v) diff += std::fabs(nx[v] - x[v]);
    x.swap(nx);
    if (diff < tol) break;
  }
  return x;
}

double jaccard(const MultiplexGraph& g, int u, int v) {
  if (u == v) throw std::invalid_argument("jaccard: u == v");
  const int* a = g.neighbors_begin(u);
  const int* ae = g.neighbors_end(u);
  const int* b = g.neighbors_begin(v);
  const int* be = g.neighbors_end(v);
  long inter = 0;
  while (a != ae && b != be) {
    if (*a < *b)
      ++a;
    else if (*b < *a)
      ++b;
    else {
      ++inter;
      ++a;
      ++b;
    }
  }
  long uni = g.degree(u) + g.degree(v) - inter;
  if (uni == 0) return 0.0;
  return double(inter) / double(uni);
}

namespace {
long internal_edges(const MultiplexGraph& g, const std::vector<int>& subset,
                    std::vector<char>& mark) {
  for (int v : subset) mark[v] = 1;
  long internal = 0;
  for (int v : subset)
    for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
      if (*it > v && mark[*it]) internal++;
  for (int v : subset) mark[v] = 0;
  return internal;
}
}  // namespace

double density(const MultiplexGraph& g, const std::vector<int>& subset) {
  size_t s = subset.size();
  if (s < 2) return 0.0;
  std::vector<char> mark(g.n, 0);
  long internal = internal_edges(g, subset, mark);
  return double(internal) / (double(s) * double(s - 1) / 2.0);
}

double conductance(const MultiplexGraph& g, const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("conductance: empty subset");
  std::vector<char> mark(g.n, 0);
  for (int v : subset) mark[v] = 1;
  long cut = 0, vol_s = 0;
  for (int v : subset) {
    vol_s += g.degree(v);
    for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
      if (!mark[*it]) cut++;
  }
  long vol_total = 2L * g.edge_count();
  long vol_rest = vol_total - vol_s;
  long denom = std::min(vol_s, vol_rest);
  if (denom == 0) return 1.0;
  return double(cut) / double(denom);
}

}  // namespace mgwb
