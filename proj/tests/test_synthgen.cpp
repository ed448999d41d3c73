#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "mgwb/graphcore/graph_io.hpp"
#include "mgwb/graphcore/metrics.hpp"
#include "mgwb/synthgen/corpus.hpp"
#include "mgwb/synthgen/generator.hpp"

using namespace mgwb;

namespace {

GenConfig small_cfg() {
  GenConfig cfg;
  cfg.node_min = 120;
  cfg.node_max = 160;
  cfg.community_min = 4;
  cfg.community_max = 6;
  cfg.fc_top_k = 8;
  return cfg;
}

std::vector<int> round_robin_communities(int n, int k, uint64_t seed) {
  std::vector<int> c(n);
  for (int v = 0; v < n; ++v) c[v] = v % k;
  Rng rng(seed);
  rng.shuffle(c);
  return c;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  int n = int(a.size());
  double ma = 0, mb = 0;
  for (int i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double num = 0, va = 0, vb = 0;
  for (int i = 0; i < n; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va <= 0 || vb <= 0) return 0.0;
  return num / std::sqrt(va * vb);
}

// least-squares R^2 of y on columns of Z (oracle for feature provenance)
double r2_on(const Matrix& Z, const std::vector<double>& y) {
  int n = Z.rows, d = Z.cols;
  Eigen::MatrixXd X(n, d + 1);
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) X(i, j) = Z(i, j);
    X(i, d) = 1.0;
    Y(i) = y[i];
  }
  Eigen::VectorXd w = (X.transpose() * X).ldlt().solve(X.transpose() * Y);
  double ss_res = (Y - X * w).squaredNorm();
  double mean = Y.mean();
  double ss_tot = (Y.array() - mean).square().sum();
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

TEST_CASE("sample_latents") {
  GenConfig cfg = small_cfg();
  int n = 600, k = 4;
  auto comm = round_robin_communities(n, k, 1);

  SUBCASE("zero spread collapses nodes onto community centers") {
    GenConfig c0 = cfg;
    c0.latent_spread = 0.0;
    Latents L = sample_latents(c0, k, n, comm, Rng(2));
    for (int v = 0; v < n; ++v)
      for (int d = 0; d < 3; ++d) {
        CHECK(L.z_a(v, d) == L.mu_a(comm[v], d));
        CHECK(L.z_b(v, d) == L.mu_b(comm[v], d));
      }
  }

  SUBCASE("within-community mean of z_B concentrates on the center") {
    Latents L = sample_latents(cfg, k, n, comm, Rng(3));
    for (int c = 0; c < k; ++c) {
      int count = 0;
      double mean[3] = {0, 0, 0};
      for (int v = 0; v < n; ++v) {
        if (comm[v] != c) continue;
        count++;
        for (int d = 0; d < 3; ++d) mean[d] += L.z_b(v, d);
      }
      double bound = 3.0 * cfg.latent_spread / std::sqrt(double(count));
      for (int d = 0; d < 3; ++d)
        CHECK(std::fabs(mean[d] / count - L.mu_b(c, d)) < bound);
    }
  }

  SUBCASE("cosine similarity is higher within communities than between") {
    double within = 0, between = 0;
    long nw = 0, nb = 0;
    for (int seed = 0; seed < 5; ++seed) {
      Latents L = sample_latents(cfg, k, 200, round_robin_communities(200, k, seed), Rng(100 + seed));
      Matrix zb = l2_normalize_rows(L.z_b);
      for (int u = 0; u < 200; u += 3)
        for (int v = u + 1; v < 200; v += 3) {
          double cos = 0;
          for (int d = 0; d < 3; ++d) cos += zb(u, d) * zb(v, d);
          auto cu = round_robin_communities(200, k, seed);
          if (cu[u] == cu[v]) {
            within += cos;
            nw++;
          } else {
            between += cos;
            nb++;
          }
        }
    }
    CHECK(within / nw > between / nb);
  }
}

TEST_CASE("node_features") {
  GenConfig cfg = small_cfg();
  int n = 400, k = 4;
  auto comm = round_robin_communities(n, k, 7);
  std::vector<int> sites(n);
  for (int v = 0; v < n; ++v) sites[v] = v % 3;

  SUBCASE("degenerate config gives identical volume within community") {
    GenConfig c0 = cfg;
    c0.latent_spread = 0.0;
    c0.feature_noise_std = 0.0;
    c0.site_offset_std = 0.0;
    Latents L = sample_latents(c0, k, n, comm, Rng(8));
    Matrix X = node_features(L, sites, c0, Rng(9));
    for (int v = 1; v < n; ++v) {
      int u = -1;
      for (int w = 0; w < v; ++w)
        if (comm[w] == comm[v]) {
          u = w;
          break;
        }
      if (u >= 0) CHECK(X(v, 0) == doctest::Approx(X(u, 0)).epsilon(1e-12));
    }
  }

  SUBCASE("FA and MD live in (0,1) before site offsets") {
    GenConfig c0 = cfg;
    c0.site_offset_std = 0.0;
    Latents L = sample_latents(c0, k, n, comm, Rng(10));
    Matrix X = node_features(L, sites, c0, Rng(11));
    for (int v = 0; v < n; ++v) {
      CHECK(X(v, 2) > 0.0);
      CHECK(X(v, 2) < 1.0);
      CHECK(X(v, 3) > 0.0);
      CHECK(X(v, 3) < 1.0);
    }
  }

  SUBCASE("morphometric features track z_A and microstructure tracks z_B") {
    int wins_morpho = 0, wins_micro = 0;
    for (int seed = 0; seed < 5; ++seed) {
      Latents L = sample_latents(cfg, k, n, comm, Rng(20 + seed));
      Matrix X = node_features(L, sites, cfg, Rng(40 + seed));
      std::vector<double> log_volume(n), fa(n);
      for (int v = 0; v < n; ++v) {
        log_volume[v] = std::log(std::max(X(v, 0), 1e-12));
        fa[v] = X(v, 2);
      }
      if (r2_on(L.z_a, log_volume) > r2_on(L.z_b, log_volume)) wins_morpho++;
      if (r2_on(L.z_b, fa) > r2_on(L.z_a, fa)) wins_micro++;
    }
    CHECK(wins_morpho >= 4);
    CHECK(wins_micro >= 4);
  }
}

TEST_CASE("sc_edges") {
  GenConfig cfg = small_cfg();
  int n = 100, k = 4;
  auto comm = round_robin_communities(n, k, 3);
  Latents L = sample_latents(cfg, k, n, comm, Rng(5));

  SUBCASE("all-zero coefficients give rate one half") {
    GenConfig c0 = cfg;
    c0.beta_comm = 0.0;
    c0.beta_sim = 0.0;
    c0.bias = 0.0;
    auto edges = sc_edges(L, comm, c0, Rng(6));
    double pairs = n * (n - 1) / 2.0;
    double rate = edges.size() / pairs;
    CHECK(std::fabs(rate - 0.5) < 4.0 / std::sqrt(pairs));  // 4 sigma
  }

  SUBCASE("strongly negative bias empties the edge set") {
    GenConfig c0 = cfg;
    c0.bias = -50.0;
    auto edges = sc_edges(L, comm, c0, Rng(6));
    CHECK(edges.empty());
  }

  SUBCASE("default config is assortative") {
    long w_edges = 0, w_pairs = 0, b_edges = 0, b_pairs = 0;
    for (int seed = 0; seed < 10; ++seed) {
      auto cm = round_robin_communities(n, k, 50 + seed);
      Latents Ls = sample_latents(cfg, k, n, cm, Rng(60 + seed));
      auto edges = sc_edges(Ls, cm, cfg, Rng(70 + seed));
      std::set<std::pair<int, int>> es(edges.size() ? std::set<std::pair<int, int>>() : std::set<std::pair<int, int>>());
      for (const auto& e : edges) es.insert({e.u, e.v});
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
          bool same = cm[u] == cm[v];
          bool has = es.count({u, v}) > 0;
          (same ? w_pairs : b_pairs)++;
          if (has) (same ? w_edges : b_edges)++;
        }
    }
    CHECK(double(w_edges) / w_pairs > double(b_edges) / b_pairs);
  }

  SUBCASE("weights are positive") {
    auto edges = sc_edges(L, comm, cfg, Rng(6));
    for (const auto& e : edges) CHECK(e.w > 0.0);
  }
}

TEST_CASE("apply_missing_sc") {
  std::vector<WeightedEdge> sc;
  for (int i = 0; i < 1000; ++i) sc.push_back({i, i + 1000, 1.0});

  SUBCASE("fraction zero is identity") {
    auto kept = apply_missing_sc(sc, 0.0, Rng(1));
    CHECK(kept.size() == 1000);
  }
  SUBCASE("quarter of a thousand leaves exactly 750") {
    auto kept = apply_missing_sc(sc, 0.25, Rng(1));
    CHECK(kept.size() == 750);
  }
  SUBCASE("survivors are a subset and the removal is a partition") {
    auto kept = apply_missing_sc(sc, 0.25, Rng(2));
    std::set<int> orig, surv;
    for (const auto& e : sc) orig.insert(e.u);
    for (const auto& e : kept) {
      CHECK(orig.count(e.u) == 1);
      surv.insert(e.u);
    }
    CHECK(surv.size() == kept.size());  // no duplicates introduced
  }
}

TEST_CASE("simulate_timeseries") {
  GenConfig cfg = small_cfg();
  int n = 40, k = 4;
  auto comm = round_robin_communities(n, k, 4);

  SUBCASE("no driver coupling gives near-zero cross correlations") {
    GenConfig c0 = cfg;
    c0.driver_weight = 0.0;
    Matrix x = simulate_timeseries(comm, k, c0, Rng(5));
    double acc = 0;
    int cnt = 0;
    for (int u = 0; u < n; u += 2)
      for (int v = u + 1; v < n; v += 3) {
        std::vector<double> a(x.row(u), x.row(u) + x.cols);
        std::vector<double> b(x.row(v), x.row(v) + x.cols);
        acc += pearson(a, b);
        cnt++;
      }
    CHECK(std::fabs(acc / cnt) < 3.0 / std::sqrt(double(cfg.ts_length)));
  }

  SUBCASE("white-noise mode has no lag-1 autocorrelation") {
    GenConfig c0 = cfg;
    c0.ar_rho = 0.0;
    c0.driver_weight = 0.0;
    Matrix x = simulate_timeseries(comm, k, c0, Rng(6));
    int T = x.cols;
    double acc = 0;
    for (int v = 0; v < n; ++v) {
      std::vector<double> a(x.row(v), x.row(v) + T - 1);
      std::vector<double> b(x.row(v) + 1, x.row(v) + T);
      acc += pearson(a, b);
    }
    CHECK(std::fabs(acc / n) < 3.0 / std::sqrt(double(T)));
  }

  SUBCASE("shared drivers induce within-community correlation") {
    int wins = 0;
    for (int seed = 0; seed < 5; ++seed) {
      Matrix x = simulate_timeseries(comm, k, cfg, Rng(30 + seed));
      double w = 0, b = 0;
      int nw = 0, nb = 0;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
          std::vector<double> a(x.row(u), x.row(u) + x.cols);
          std::vector<double> c(x.row(v), x.row(v) + x.cols);
          double r = pearson(a, c);
          if (comm[u] == comm[v]) {
            w += r;
            nw++;
          } else {
            b += r;
            nb++;
          }
        }
      if (w / nw > b / nb) wins++;
    }
    CHECK(wins == 5);
  }
}

TEST_CASE("bandpass") {
  int T = 400;
  double dt = 1.0;

  SUBCASE("in-band sinusoid is preserved") {
    Matrix x(1, T);
    for (int t = 0; t < T; ++t) x(0, t) = std::sin(2.0 * M_PI * 0.15 * t);
    Matrix y = bandpass(x, 0.10, 0.20, dt);
    double in = 0, out = 0;
    for (int t = 0; t < T; ++t) {
      in += x(0, t) * x(0, t);
      out += y(0, t) * y(0, t);
    }
    CHECK(std::fabs(std::sqrt(out / in) - 1.0) < 0.01);
  }

  SUBCASE("out-of-band sinusoid is annihilated") {
    Matrix x(1, T);
    for (int t = 0; t < T; ++t) x(0, t) = std::sin(2.0 * M_PI * 0.05 * t);
    Matrix y = bandpass(x, 0.10, 0.20, dt);
    double in = 0, out = 0;
    for (int t = 0; t < T; ++t) {
      in += x(0, t) * x(0, t);
      out += y(0, t) * y(0, t);
    }
    CHECK(out / in < 1e-6);
  }

  SUBCASE("white noise keeps at least 95 percent of output power in band") {
    Rng rng(9);
    Matrix x(1, T);
    for (int t = 0; t < T; ++t) x(0, t) = rng.normal();
    Matrix y = bandpass(x, 0.10, 0.20, dt);
    // periodogram oracle via direct DFT
    double in_band = 0, total = 0;
    for (int k = 1; k <= T / 2; ++k) {
      double re = 0, im = 0;
      for (int t = 0; t < T; ++t) {
        double a = 2.0 * M_PI * k * t / T;
        re += y(0, t) * std::cos(a);
        im -= y(0, t) * std::sin(a);
      }
      double p = re * re + im * im;
      total += p;
      double f = double(k) / (T * dt);
      if (f >= 0.10 && f <= 0.20) in_band += p;
    }
    CHECK(in_band / total >= 0.95);
    double mean = 0;
    for (int t = 0; t < T; ++t) mean += y(0, t);
    CHECK(std::fabs(mean / T) < 1e-9);
  }

  SUBCASE("band outside (0, Nyquist) throws") {
    Matrix x(1, T);
    CHECK_THROWS(bandpass(x, 0.0, 0.2, dt));
    CHECK_THROWS(bandpass(x, 0.3, 0.6, dt));
  }
}

TEST_CASE("fc_edges") {
  SUBCASE("identical series correlate at one and are retained") {
    Rng rng(3);
    int T = 200;
    Matrix x(5, T);
    for (int t = 0; t < T; ++t) x(0, t) = rng.normal();
    for (int t = 0; t < T; ++t) x(1, t) = x(0, t);
    for (int v = 2; v < 5; ++v)
      for (int t = 0; t < T; ++t) x(v, t) = rng.normal();
    auto edges = fc_edges(x, 2);
    bool found = false;
    for (const auto& e : edges)
      if (e.u == 0 && e.v == 1) {
        found = true;
        CHECK(e.w == doctest::Approx(1.0).epsilon(1e-9));
      }
    CHECK(found);
  }

  SUBCASE("k of n-1 yields the complete graph") {
    Rng rng(4);
    int n = 31, T = 150;
    Matrix x(n, T);
    for (double& v : x.data) v = rng.normal();
    auto edges = fc_edges(x, 30);
    CHECK(int(edges.size()) == n * (n - 1) / 2);
  }

  SUBCASE("per-node retention forces min degree >= k") {
    Rng rng(5);
    int n = 40, T = 150;
    Matrix x(n, T);
    for (double& v : x.data) v = rng.normal();
    auto edges = fc_edges(x, 30);
    std::vector<int> deg(n, 0);
    for (const auto& e : edges) {
      deg[e.u]++;
      deg[e.v]++;
    }
    for (int v = 0; v < n; ++v) CHECK(deg[v] >= 30);
  }

  SUBCASE("constant series correlate at zero") {
    int T = 100;
    Matrix x(3, T);
    for (int t = 0; t < T; ++t) {
      x(0, t) = 5.0;  // constant
      x(1, t) = std::sin(0.3 * t);
      x(2, t) = std::cos(0.3 * t);
    }
    auto edges = fc_edges(x, 2);
    for (const auto& e : edges)
      if (e.u == 0 || e.v == 0) CHECK(e.w == 0.0);
  }
}

TEST_CASE("generate_graph determinism and shape") {
  GenConfig cfg = small_cfg();
  MultiplexGraph a = generate_graph(cfg, 77);
  MultiplexGraph b = generate_graph(cfg, 77);
  CHECK(graph_to_json(a) == graph_to_json(b));
  CHECK(a.n >= cfg.node_min);
  CHECK(a.n <= cfg.node_max);
  CHECK(a.k >= cfg.community_min);
  CHECK(a.k <= cfg.community_max);
  // balanced round-robin community sizes
  std::vector<int> sizes(a.k, 0);
  for (int c : a.community) sizes[c]++;
  int lo = *std::min_element(sizes.begin(), sizes.end());
  int hi = *std::max_element(sizes.begin(), sizes.end());
  CHECK(hi - lo <= 1);
  for (int s : a.site) {
    CHECK(s >= 0);
    CHECK(s < 3);
  }
  MultiplexGraph c = generate_graph(cfg, 78);
  CHECK(graph_to_json(a) != graph_to_json(c));
}

TEST_CASE("generated union graphs are connected with default-shaped config") {
  GenConfig cfg = small_cfg();
  for (uint64_t seed = 200; seed < 204; ++seed)
    CHECK(is_connected(generate_graph(cfg, seed)));
}

TEST_CASE("task bundle contracts") {
  GenConfig cfg = small_cfg();
  MultiplexGraph g = generate_graph(cfg, 301);
  TaskBundle t = make_task_bundle(g, cfg, Rng(301).child("tasks"));

  SUBCASE("stratified node split within one of target") {
    for (int cls = 0; cls < 3; ++cls) {
      int total = 0;
      for (int v = 0; v < g.n; ++v)
        if (t.node_labels[v] == cls) total++;
      auto count_in = [&](const std::vector<int>& fold) {
        int c = 0;
        for (int v : fold)
          if (t.node_labels[v] == cls) c++;
        return c;
      };
      CHECK(std::abs(count_in(t.node_train) - 0.70 * total) <= 1.0);
      CHECK(std::abs(count_in(t.node_val) - 0.15 * total) <= 1.0);
      CHECK(std::abs(count_in(t.node_test()) - 0.15 * total) <= 1.0);
    }
    // label classes are balanced by construction (tertiles)
    int c0 = 0, c1 = 0, c2 = 0;
    for (int v : t.node_labels) (v == 0 ? c0 : v == 1 ? c1 : c2)++;
    CHECK(std::abs(c0 - c1) <= 1);
    CHECK(std::abs(c1 - c2) <= 1);
  }

  SUBCASE("link folds are disjoint and positives partition the edges") {
    std::set<std::pair<int, int>> all(g.edges.begin(), g.edges.end());
    std::set<std::pair<int, int>> seen;
    auto check_fold = [&](const std::vector<std::pair<int, int>>& pos) {
      for (auto e : pos) {
        CHECK(all.count(e) == 1);
        CHECK(seen.insert(e).second);
      }
    };
    check_fold(t.link_train_pos);
    check_fold(t.link_val_pos);
    check_fold(t.link_test_pos());
    CHECK(seen.size() == all.size());

    std::set<std::pair<int, int>> negs;
    auto check_negs = [&](const std::vector<std::pair<int, int>>& neg) {
      for (auto e : neg) {
        CHECK(all.count(e) == 0);          // never an observed edge
        CHECK(e.first < e.second);         // no self loops, canonical
        CHECK(negs.insert(e).second);      // no duplicates across folds
      }
    };
    check_negs(t.link_train_neg);
    check_negs(t.link_val_neg);
    check_negs(t.link_test_neg());
    CHECK(t.link_test_pos().size() == t.link_test_neg().size());
  }

  SUBCASE("subgraph targets follow the density/conductance blend") {
    REQUIRE(t.subgraphs.size() == 200);
    std::vector<double> dens, cond;
    for (const auto& s : t.subgraphs) {
      CHECK(s.nodes.size() >= 20);
      CHECK(s.nodes.size() <= 60);
      dens.push_back(density(g, s.nodes));
      cond.push_back(conductance(g, s.nodes));
    }
    double dlo = *std::min_element(dens.begin(), dens.end());
    double dhi = *std::max_element(dens.begin(), dens.end());
    double clo = *std::min_element(cond.begin(), cond.end());
    double chi = *std::max_element(cond.begin(), cond.end());
    for (size_t i = 0; i < dens.size(); ++i) {
      double y = 0.5 * (dens[i] - dlo) / (dhi - dlo) +
                 0.5 * (1.0 - (cond[i] - clo) / (chi - clo));
      CHECK(t.subgraphs[i].target == doctest::Approx(y).epsilon(1e-12));
      CHECK(std::isfinite(t.subgraphs[i].target));
    }
  }

  SUBCASE("bundle construction is deterministic") {
    TaskBundle t2 = make_task_bundle(g, cfg, Rng(301).child("tasks"));
    CHECK(t2.node_labels == t.node_labels);
    CHECK(t2.link_train_pos == t.link_train_pos);
    CHECK(t2.subgraph_train == t.subgraph_train);
  }
}

TEST_CASE("corpus generation writes files and an identical manifest on rerun") {
  namespace fs = std::filesystem;
  GenConfig cfg = small_cfg();
  std::string dir = (fs::temp_directory_path() / "mgwb_corpus_test").string();
  fs::remove_all(dir);
  CorpusManifest m = generate_corpus(cfg, 4, 500, dir, 2);
  REQUIRE(m.entries.size() == 4);
  for (const auto& e : m.entries) {
    CHECK(fs::exists(e.path));
    CHECK(e.n >= cfg.node_min);
    MultiplexGraph g;
    std::optional<TaskBundle> t;
    load_graph(e.path, g, &t);
    CHECK(t.has_value());
    CHECK(g.n == e.n);
    CHECK(g.edge_count() == e.m);
  }
  CorpusManifest loaded = load_manifest(dir + "/manifest.tsv");
  CHECK(loaded.entries.size() == 4);
  CHECK(loaded.entries[2].seed == 502);
  CHECK(loaded.entries[2].clustering == m.entries[2].clustering);

  std::string dir2 = (fs::temp_directory_path() / "mgwb_corpus_test2").string();
  fs::remove_all(dir2);
  CorpusManifest m2 = generate_corpus(cfg, 4, 500, dir2, 1);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(m2.entries[i].m == m.entries[i].m);
    CHECK(m2.entries[i].clustering == m.entries[i].clustering);
  }
  fs::remove_all(dir);
  fs::remove_all(dir2);
}
