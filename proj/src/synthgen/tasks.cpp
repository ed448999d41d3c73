#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mgwb/graphcore/metrics.hpp"
#include "mgwb/synthgen/generator.hpp"

namespace mgwb {

namespace {

std::vector<double> minmax_norm(const std::vector<double>& x) {
  double lo = *std::min_element(x.begin(), x.end());
  double hi = *std::max_element(x.begin(), x.end());
  std::vector<double> out(x.size());
  if (hi - lo < 1e-300) return out;
  for (size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - lo) / (hi - lo);
  return out;
}

// 70/15/15 by largest remainder; every count within one of the exact target
std::array<int, 3> split_counts(int m) {
  const double frac[3] = {0.70, 0.15, 0.15};
  std::array<int, 3> base;
  std::array<double, 3> rem;
  int used = 0;
  for (int i = 0; i < 3; ++i) {
    double t = frac[i] * m;
    base[i] = int(std::floor(t));
    rem[i] = t - base[i];
    used += base[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rem[a] != rem[b] ? rem[a] > rem[b] : a < b; });
  for (int i = 0; i < m - used; ++i) base[order[i]] += 1;
  return base;
}

std::pair<int, int> canonical(int u, int v) {
  return {std::min(u, v), std::max(u, v)};
}

}  // namespace

TaskBundle make_task_bundle(const MultiplexGraph& g, const GenConfig& cfg, Rng rng) {
  (void)cfg;
  TaskBundle t;
  int n = g.n;

  // ---- node labels: blended PageRank and feature score, tertiles ----
  std::vector<double> pr = pagerank(g);
  std::vector<double> pr_mm = minmax_norm(pr);

  std::vector<double> feat_score(n, 0.0);
  for (int f = 0; f < 4; ++f) {  // the four neuro-named features
    double mean = 0.0;
    for (int v = 0; v < n; ++v) mean += g.features(v, f);
    mean /= n;
    double var = 0.0;
    for (int v = 0; v < n; ++v) {
      double d = g.features(v, f) - mean;
      var += d * d;
    }
    double inv = var > 1e-300 ? 1.0 / std::sqrt(var / n) : 0.0;
    for (int v = 0; v < n; ++v) feat_score[v] += (g.features(v, f) - mean) * inv / 4.0;
  }
  std::vector<double> fs_mm = minmax_norm(feat_score);

  std::vector<double> score(n);
  for (int v = 0; v < n; ++v) score[v] = 0.5 * pr_mm[v] + 0.5 * fs_mm[v];

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return score[a] != score[b] ? score[a] < score[b] : a < b;  // ties by node id
  });
  t.node_labels.assign(n, 0);
  for (int r = 0; r < n; ++r) t.node_labels[order[r]] = std::min(2, 3 * r / n);

  // ---- stratified node split ----
  Rng node_rng = rng.child("node_split");
  std::vector<int> node_test;
  for (int cls = 0; cls < 3; ++cls) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (t.node_labels[v] == cls) members.push_back(v);
    node_rng.shuffle(members);
    auto counts = split_counts(int(members.size()));
    int i = 0;
    for (int j = 0; j < counts[0]; ++j) t.node_train.push_back(members[i++]);
    for (int j = 0; j < counts[1]; ++j) t.node_val.push_back(members[i++]);
    for (int j = 0; j < counts[2]; ++j) node_test.push_back(members[i++]);
  }
  std::sort(t.node_train.begin(), t.node_train.end());
  std::sort(t.node_val.begin(), t.node_val.end());
  std::sort(node_test.begin(), node_test.end());
  t.set_node_test(std::move(node_test));

  // ---- link folds: test drawn first, then probe train/val ----
  Rng link_rng = rng.child("link");
  int m = g.edge_count();
  std::vector<int> eidx(m);
  std::iota(eidx.begin(), eidx.end(), 0);
  link_rng.shuffle(eidx);
  int test_count = int(std::lround(0.15 * m));
  int train_count = int(std::lround(0.70 * m));
  train_count = std::min(train_count, m - test_count);
  int val_count = m - test_count - train_count;

  std::vector<std::pair<int, int>> test_pos, train_pos, val_pos;
  for (int i = 0; i < m; ++i) {
    auto e = g.edges[eidx[i]];
    if (i < test_count)
      test_pos.push_back(e);
    else if (i < test_count + train_count)
      train_pos.push_back(e);
    else
      val_pos.push_back(e);
  }
  std::sort(test_pos.begin(), test_pos.end());
  std::sort(train_pos.begin(), train_pos.end());
  std::sort(val_pos.begin(), val_pos.end());

  std::set<std::pair<int, int>> forbidden(g.edges.begin(), g.edges.end());
  auto draw_negatives = [&](int count) {
    std::vector<std::pair<int, int>> negs;
    negs.reserve(count);
    long guard = 0;
    while (int(negs.size()) < count) {
      if (++guard > 1000L * count + 100000L)
        throw std::runtime_error("make_task_bundle: negative sampling stalled");
      int u = int(link_rng.uniform_int(0, n - 1));
      int v = int(link_rng.uniform_int(0, n - 1));
      if (u == v) continue;  // reject self-loops
      auto p = canonical(u, v);
      if (forbidden.insert(p).second) negs.push_back(p);  // reject duplicates
    }
    std::sort(negs.begin(), negs.end());
    return negs;
  };
  auto test_neg = draw_negatives(test_count);
  t.link_train_neg = draw_negatives(train_count);
  t.link_val_neg = draw_negatives(val_count);
  t.link_train_pos = std::move(train_pos);
  t.link_val_pos = std::move(val_pos);
  t.set_link_test(std::move(test_pos), std::move(test_neg));

  // ---- subgraph regression: random-walk-induced node sets ----
  Rng sub_rng = rng.child("subgraphs");
  const int sample_count = 200;
  std::vector<double> dens(sample_count), cond(sample_count);
  for (int i = 0; i < sample_count; ++i) {
    int target = int(sub_rng.uniform_int(20, 60));
    std::vector<int> nodes;
    for (int attempt = 0; attempt < 200; ++attempt) {
      std::set<int> visited;
      int cur = int(sub_rng.uniform_int(0, n - 1));
      visited.insert(cur);
      long max_steps = 200L * target;
      for (long s = 0; s < max_steps && int(visited.size()) < target; ++s) {
        int deg = g.degree(cur);
        if (deg == 0) break;
        const int* nb = g.neighbors_begin(cur);
        cur = nb[sub_rng.uniform_int(0, deg - 1)];
        visited.insert(cur);
      }
      if (int(visited.size()) >= target) {
        nodes.assign(visited.begin(), visited.end());
        break;
      }
      // walk came up short; restart from a new seed node
    }
    if (nodes.empty())
      throw std::runtime_error("make_task_bundle: subgraph walk failed repeatedly");
    SubgraphTask st;
    st.nodes = std::move(nodes);
    dens[i] = density(g, st.nodes);
    cond[i] = conductance(g, st.nodes);
    t.subgraphs.push_back(std::move(st));
  }
  auto dens_mm = minmax_norm(dens);
  auto cond_mm = minmax_norm(cond);
  for (int i = 0; i < sample_count; ++i)
    t.subgraphs[i].target = 0.5 * dens_mm[i] + 0.5 * (1.0 - cond_mm[i]);

  std::vector<int> sidx(sample_count);
  std::iota(sidx.begin(), sidx.end(), 0);
  sub_rng.shuffle(sidx);
  auto scounts = split_counts(sample_count);
  std::vector<int> sub_test;
  for (int i = 0; i < sample_count; ++i) {
    if (i < scounts[0])
      t.subgraph_train.push_back(sidx[i]);
    else if (i < scounts[0] + scounts[1])
      t.subgraph_val.push_back(sidx[i]);
    else
      sub_test.push_back(sidx[i]);
  }
  std::sort(t.subgraph_train.begin(), t.subgraph_train.end());
  std::sort(t.subgraph_val.begin(), t.subgraph_val.end());
  std::sort(sub_test.begin(), sub_test.end());
  t.set_subgraph_test(std::move(sub_test));

  return t;
}

}  // namespace mgwb
