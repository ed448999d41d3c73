#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "mgwb/graphcore/er_random.hpp"
#include "mgwb/graphcore/graph_io.hpp"
#include "mgwb/graphcore/metrics.hpp"
#include "mgwb/graphcore/multiplex_graph.hpp"
#include "mgwb/graphcore/wl_hash.hpp"
#include "mgwb/rng.hpp"

using namespace mgwb;

namespace {

MultiplexGraph make_graph(int n, std::vector<std::pair<int, int>> edges) {
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  MultiplexGraph g;
  g.n = n;
  g.k = 1;
  g.features = Matrix::zeros(n, 6);
  g.edge_attrs = Matrix(int(edges.size()), 2);
  for (int i = 0; i < int(edges.size()); ++i) g.edge_attrs(i, 0) = 1.0;
  g.channel_present.assign(edges.size(), {true, false});
  g.edges = std::move(edges);
  g.community.assign(n, 0);
  g.site.assign(n, 0);
  g.finalize();
  return g;
}

// exhaustive oracle: mean local clustering by direct triangle counting
double clustering_oracle(const MultiplexGraph& g) {
  double acc = 0.0;
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> nb(g.neighbors_begin(v), g.neighbors_end(v));
    if (nb.size() < 2) continue;
    int links = 0;
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j)
        if (g.has_edge(nb[i], nb[j])) links++;
    acc += 2.0 * links / (double(nb.size()) * (nb.size() - 1));
  }
  return acc / g.n;
}

// exhaustive oracle: Floyd-Warshall mean distance on the largest component
double path_oracle(const MultiplexGraph& g) {
  const int INF = 1 << 20;
  std::vector<std::vector<int>> d(g.n, std::vector<int>(g.n, INF));
  for (int v = 0; v < g.n; ++v) d[v][v] = 0;
  for (auto [u, v] : g.edges) d[u][v] = d[v][u] = 1;
  for (int k = 0; k < g.n; ++k)
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<int> comp = largest_component(g);
  double total = 0.0;
  long pairs = 0;
  for (size_t i = 0; i < comp.size(); ++i)
    for (size_t j = i + 1; j < comp.size(); ++j) {
      total += d[comp[i]][comp[j]];
      pairs++;
    }
  return pairs ? total / pairs : 0.0;
}

}  // namespace

TEST_CASE("avg_clustering on canonical graphs") {
  auto k3 = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(avg_clustering(k3) == doctest::Approx(1.0));
  auto star = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK(avg_clustering(star) == doctest::Approx(0.0));
}

TEST_CASE("avg_shortest_path on canonical graphs") {
  auto k4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(avg_shortest_path(k4) == doctest::Approx(1.0));
  auto path3 = make_graph(3, {{0, 1}, {1, 2}});
  CHECK(avg_shortest_path(path3) == doctest::Approx(4.0 / 3.0));
  MultiplexGraph tiny = make_graph(3, {{0, 1}});
  tiny.n = 1;
  CHECK_THROWS(avg_shortest_path(make_graph(1, {})));
}

TEST_CASE("clustering and path length match exhaustive oracles on small graphs") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + int(rng.uniform_int(0, 4));  // up to 8 nodes
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.bernoulli(0.45)) edges.emplace_back(u, v);
    if (edges.size() < 2) continue;
    auto g = make_graph(n, edges);
    CHECK(avg_clustering(g) == doctest::Approx(clustering_oracle(g)).epsilon(1e-14));
    CHECK(avg_shortest_path(g) == doctest::Approx(path_oracle(g)).epsilon(1e-14));
  }
}

TEST_CASE("pagerank sums to one and is symmetric on a 2-clique") {
  auto pair = make_graph(2, {{0, 1}});
  auto pr = pagerank(pair);
  CHECK(pr[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pr[1] == doctest::Approx(0.5).epsilon(1e-9));

  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 6 + int(rng.uniform_int(0, 4));
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.bernoulli(0.4)) edges.emplace_back(u, v);
    if (edges.empty()) continue;
    auto g = make_graph(n, edges);
    auto pr2 = pagerank(g);
    double s = 0.0;
    for (double v : pr2) s += v;
    CHECK(std::fabs(s - 1.0) < 1e-9);
  }
}

TEST_CASE("pagerank matches a dense linear-system oracle") {
  Rng rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 5 + int(rng.uniform_int(0, 7));  // up to 12 nodes
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.bernoulli(0.5)) edges.emplace_back(u, v);
    auto g = make_graph(n, edges);
    auto pr = pagerank(g, 0.85, 1e-13);

    // oracle: solve (I - d*P) x = (1-d)/n * 1 with dangling teleport
    double d = 0.85;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v) {
      int deg = g.degree(v);
      if (deg == 0) {
        for (int u = 0; u < n; ++u) P(u, v) = 1.0 / n;
      } else {
        for (const int* it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
          P(*it, v) = 1.0 / deg;
      }
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - d * P;
    Eigen::VectorXd b = Eigen::VectorXd::Constant(n, (1.0 - d) / n);
    Eigen::VectorXd x = A.fullPivLu().solve(b);
    for (int v = 0; v < n; ++v) CHECK(std::fabs(pr[v] - x(v)) < 1e-8);
  }
}

TEST_CASE("jaccard") {
  // u and v with identical neighborhoods
  auto g = make_graph(5, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK(jaccard(g, 0, 1) == doctest::Approx(1.0));
  // disjoint neighborhoods
  auto h = make_graph(6, {{0, 2}, {0, 3}, {1, 4}, {1, 5}});
  CHECK(jaccard(h, 0, 1) == doctest::Approx(0.0));
  // N(u)={a,b,c}, N(v)={b,c,d} -> 2/4
  auto m = make_graph(6, {{0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {1, 5}});
  CHECK(jaccard(m, 0, 1) == doctest::Approx(0.5));
  CHECK_THROWS(jaccard(g, 2, 2));
}

TEST_CASE("density and conductance") {
  auto k4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(density(k4, {0, 1, 2}) == doctest::Approx(1.0));

  // two components; one full component has zero cut
  auto two = make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  CHECK(conductance(two, {0, 1, 2}) == doctest::Approx(0.0));

  // 4-cycle, two adjacent nodes: density 1, conductance 2/4
  auto c4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK(density(c4, {0, 1}) == doctest::Approx(1.0));
  CHECK(conductance(c4, {0, 1}) == doctest::Approx(0.5));
}

TEST_CASE("conductance is symmetric under complement") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 8;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.bernoulli(0.4)) edges.emplace_back(u, v);
    if (edges.empty()) continue;
    auto g = make_graph(n, edges);
    std::vector<int> s{0, 2, 5};
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
      if (!std::count(s.begin(), s.end(), v)) rest.push_back(v);
    CHECK(conductance(g, s) == doctest::Approx(conductance(g, rest)).epsilon(1e-14));
  }
}

TEST_CASE("wl_hash properties") {
  SUBCASE("isomorphic subgraphs hash identically") {
    auto g = make_graph(8, {{0, 1}, {1, 2}, {0, 2}, {4, 5}, {5, 6}, {4, 6}, {2, 4}});
    auto a = wl_hash(g, {0, 1, 2});
    auto b = wl_hash(g, {4, 5, 6});
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
  SUBCASE("single isolated node is one-hot, stable across iterations") {
    auto g = make_graph(3, {{0, 1}});
    auto h = wl_hash(g, {2});
    double total = 0.0;
    int nonzero = 0;
    for (double v : h) {
      total += v;
      if (v > 0) nonzero++;
    }
    CHECK(nonzero == 1);
    CHECK(total == doctest::Approx(1.0));
  }
  SUBCASE("triangle and 3-path differ") {
    auto g = make_graph(7, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}});
    auto tri = wl_hash(g, {0, 1, 2});
    auto path = wl_hash(g, {3, 4, 5});
    bool differ = false;
    for (size_t i = 0; i < tri.size(); ++i) differ |= (tri[i] != path[i]);
    CHECK(differ);
  }
  SUBCASE("invariant under node-id permutation") {
    // same structure placed at different ids with shuffled order
    auto g = make_graph(10, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {5, 7}, {7, 9}, {9, 6}, {5, 6}});
    auto a = wl_hash(g, {0, 1, 2, 3});
    auto b = wl_hash(g, {5, 6, 7, 9});
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
  SUBCASE("empty subset throws") {
    auto g = make_graph(3, {{0, 1}});
    CHECK_THROWS(wl_hash(g, {}));
  }
}

TEST_CASE("er_reference") {
  SUBCASE("forced complete graph") {
    auto g = er_reference(4, 6, 1);
    CHECK(g.edge_count() == 6);
    CHECK(avg_clustering(g) == doctest::Approx(1.0));
  }
  SUBCASE("same seed reproduces the edge set") {
    auto a = er_reference(50, 200, 42);
    auto b = er_reference(50, 200, 42);
    CHECK(a.edges == b.edges);
  }
  SUBCASE("infeasible edge count throws") {
    CHECK_THROWS(er_reference(4, 7, 1));
  }
  SUBCASE("clustering matches the ER expectation") {
    // C_ER ~ p = m / C(n,2); averaged over seeds it should sit within 3 SE
    int n = 800;
    long m = 7000;
    double p = double(m) / (double(n) * (n - 1) / 2.0);
    double acc = 0.0;
    const int seeds = 20;
    std::vector<double> cs;
    for (int s = 0; s < seeds; ++s) {
      double c = avg_clustering(er_reference(n, m, 100 + s));
      cs.push_back(c);
      acc += c;
    }
    double mean = acc / seeds;
    double var = 0.0;
    for (double c : cs) var += (c - mean) * (c - mean);
    double se = std::sqrt(var / (seeds - 1)) / std::sqrt(double(seeds));
    CHECK(std::fabs(mean - p) < std::max(3.0 * se, 0.003));
  }
}

TEST_CASE("degree sums equal twice the edge count and adjacency is symmetric") {
  Rng rng(3);
  auto g = er_reference(60, 300, 9);
  long degs = 0;
  for (int v = 0; v < g.n; ++v) degs += g.degree(v);
  CHECK(degs == 2L * g.edge_count());
  for (auto [u, v] : g.edges) {
    CHECK(g.has_edge(u, v));
    CHECK(g.has_edge(v, u));
  }
}

TEST_CASE("graph serialization round-trips bit-exactly") {
  Rng rng(17);
  auto g = er_reference(30, 90, 11);
  for (double& v : g.features.data) v = rng.normal() * 3.14159;
  for (int i = 0; i < g.edge_count(); ++i) {
    g.edge_attrs(i, 0) = rng.lognormal(0.0, 0.5);
    if (rng.bernoulli(0.5)) {
      g.edge_attrs(i, 1) = rng.uniform(-1.0, 1.0);
      g.channel_present[i] = {true, true};
    }
  }
  g.finalize();

  TaskBundle t;
  t.node_labels.assign(30, 1);
  t.node_train = {0, 1, 2};
  t.node_val = {3, 4};
  t.set_node_test({5, 6});
  t.link_train_pos = {{0, 1}};
  t.link_train_neg = {{0, 5}};
  t.link_val_pos = {{1, 2}};
  t.link_val_neg = {{1, 9}};
  t.set_link_test({{2, 3}}, {{2, 8}});
  t.subgraphs.push_back({{0, 1, 2}, 0.7342019});
  t.subgraph_train = {0};
  t.set_subgraph_test({});

  std::string s1 = graph_to_json(g, &t);
  MultiplexGraph g2;
  std::optional<TaskBundle> t2;
  graph_from_json(s1, g2, &t2);
  REQUIRE(t2.has_value());
  std::string s2 = graph_to_json(g2, &*t2);
  CHECK(s1 == s2);
  CHECK(g2.features.data == g.features.data);
  CHECK(g2.edges == g.edges);
  CHECK(g2.edge_attrs.data == g.edge_attrs.data);
}

TEST_CASE("task bundle guards test folds while locked") {
  TaskBundle t;
  t.set_node_test({1, 2});
  t.lock_test_folds();
  CHECK_THROWS_AS(t.node_test(), std::logic_error);
  t.unlock_test_folds();
  CHECK(t.node_test().size() == 2);
}
