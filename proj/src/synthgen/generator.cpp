#include "mgwb/synthgen/generator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace mgwb {

namespace {
using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;

double sigmoid_scalar(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

Latents sample_latents(const GenConfig& cfg, int k, int n,
                       const std::vector<int>& community, Rng rng) {
  Latents L;
  L.mu_a = Matrix(k, 3);
  L.mu_b = Matrix(k, 3);
  Rng centers = rng.child("centers");
  for (int c = 0; c < k; ++c)
    for (int d = 0; d < 3; ++d) L.mu_a(c, d) = centers.normal();
  for (int c = 0; c < k; ++c)
    for (int d = 0; d < 3; ++d) L.mu_b(c, d) = centers.normal();
  L.z_a = Matrix(n, 3);
  L.z_b = Matrix(n, 3);
  Rng draws = rng.child("draws");
  for (int v = 0; v < n; ++v) {
    int c = community[v];
    for (int d = 0; d < 3; ++d)
      L.z_a(v, d) = L.mu_a(c, d) + cfg.latent_spread * draws.normal();
    for (int d = 0; d < 3; ++d)
      L.z_b(v, d) = L.mu_b(c, d) + cfg.latent_spread * draws.normal();
  }
  return L;
}

Matrix node_features(const Latents& latents, const std::vector<int>& sites,
                     const GenConfig& cfg, Rng rng) {
  int n = latents.z_a.rows;
  // per-graph unit projection vectors, one per feature
  Rng proj = rng.child("projections");
  auto unit3 = [&]() {
    std::array<double, 3> w;
    double s = 0.0;
    for (double& x : w) {
      x = proj.normal();
      s += x * x;
    }
    double inv = 1.0 / std::max(std::sqrt(s), 1e-12);
    for (double& x : w) x *= inv;
    return w;
  };
  std::array<std::array<double, 3>, 6> w;
  for (auto& wi : w) wi = unit3();

  int site_count = 1 + *std::max_element(sites.begin(), sites.end());
  Rng offs = rng.child("site_offsets");
  Matrix site_offset(site_count, 6);
  for (int s = 0; s < site_count; ++s)
    for (int f = 0; f < 6; ++f) site_offset(s, f) = cfg.site_offset_std * offs.normal();

  auto dot3 = [](const std::array<double, 3>& a, const Matrix& z, int v) {
    return a[0] * z(v, 0) + a[1] * z(v, 1) + a[2] * z(v, 2);
  };

  Rng noise = rng.child("noise");
  Matrix X(n, 6);
  for (int v = 0; v < n; ++v) {
    double eps[6];
    for (double& e : eps) e = cfg.feature_noise_std * noise.normal();
    X(v, 0) = std::exp(dot3(w[0], latents.z_a, v) + eps[0]);      // volume
    X(v, 1) = std::exp(dot3(w[1], latents.z_a, v) + eps[1]);      // thickness
    X(v, 2) = sigmoid_scalar(dot3(w[2], latents.z_b, v) + eps[2]);  // FA
    X(v, 3) = sigmoid_scalar(dot3(w[3], latents.z_b, v) + eps[3]);  // MD
    X(v, 4) = dot3(w[4], latents.z_a, v) + eps[4];                // aux 1
    X(v, 5) = dot3(w[5], latents.z_b, v) + eps[5];                // aux 2
    for (int f = 0; f < 6; ++f) X(v, f) += site_offset(sites[v], f);
  }
  return X;
}

std::vector<WeightedEdge> sc_edges(const Latents& latents,
                                   const std::vector<int>& community,
                                   const GenConfig& cfg, Rng rng) {
  int n = latents.z_b.rows;
  // unit connectivity latents; cosine becomes a dot product
  Matrix zb = l2_normalize_rows(latents.z_b);
  Rng coin = rng.child("bernoulli");
  Rng wrng = rng.child("weights");
  std::vector<WeightedEdge> out;
  for (int u = 0; u < n; ++u) {
    const double* zu = zb.row(u);
    for (int v = u + 1; v < n; ++v) {
      const double* zv = zb.row(v);
      double cos_uv = zu[0] * zv[0] + zu[1] * zv[1] + zu[2] * zv[2];
      double logit = cfg.beta_comm * (community[u] == community[v] ? 1.0 : 0.0) +
                     cfg.beta_sim * cos_uv + cfg.bias;
      if (coin.uniform() < sigmoid_scalar(logit))
        out.push_back({u, v, wrng.lognormal(cfg.sc_weight_mu, cfg.sc_weight_sigma)});
    }
  }
  return out;
}

std::vector<WeightedEdge> apply_missing_sc(std::vector<WeightedEdge> sc,
                                           double fraction, Rng rng) {
  if (fraction < 0.0 || fraction >= 1.0)
    throw std::invalid_argument("apply_missing_sc: fraction outside [0,1)");
  int remove = int(std::floor(fraction * double(sc.size())));
  if (remove == 0) return sc;
  std::vector<int> drop = rng.sample_without_replacement(int(sc.size()), remove);
  std::vector<WeightedEdge> kept;
  kept.reserve(sc.size() - remove);
  size_t di = 0;
  for (int i = 0; i < int(sc.size()); ++i) {
    if (di < drop.size() && drop[di] == i) {
      ++di;
      continue;
    }
    kept.push_back(sc[i]);
  }
  return kept;
}

Matrix simulate_timeseries(const std::vector<int>& community, int k,
                           const GenConfig& cfg, Rng rng) {
  int n = int(community.size());
  int T = cfg.ts_length;
  const int burn_in = 64;
  double rho = cfg.ar_rho;

  Rng drv = rng.child("drivers");
  Matrix driver(k, burn_in + T);
  std::vector<double> dstate(k, 0.0);
  for (int t = 0; t < burn_in + T; ++t) {
    for (int c = 0; c < k; ++c) {
      dstate[c] = rho * dstate[c] + drv.normal();
      driver(c, t) = dstate[c];
    }
  }

  Rng node_rng = rng.child("nodes");
  Matrix x(n, T);
  for (int v = 0; v < n; ++v) {
    double state = 0.0;
    int c = community[v];
    for (int t = 0; t < burn_in + T; ++t) {
      state = rho * state + cfg.driver_weight * driver(c, t) + node_rng.normal();
      if (t >= burn_in) x(v, t - burn_in) = state;
    }
  }
  return x;
}

Matrix bandpass(const Matrix& series, double band_lo, double band_hi, double dt) {
  int T = series.cols;
  double nyquist = 0.5 / dt;
  if (!(0.0 < band_lo && band_lo < band_hi && band_hi < nyquist))
    throw std::invalid_argument("bandpass: band outside (0, Nyquist)");

  // projection onto the kept Fourier modes; exact brick-wall mask
  EMat P = EMat::Zero(T, T);
  Eigen::VectorXd basis(T);
  const double two_pi = 6.283185307179586476925286766559;
  for (int k = 1; k <= T / 2; ++k) {
    double f = double(k) / (double(T) * dt);
    if (f < band_lo || f > band_hi) continue;
    bool nyq_bin = (T % 2 == 0) && (k == T / 2);
    double scale = nyq_bin ? 1.0 / T : 2.0 / T;
    for (int t = 0; t < T; ++t) basis(t) = std::cos(two_pi * k * t / T);
    P.noalias() += scale * (basis * basis.transpose());
    if (!nyq_bin) {
      for (int t = 0; t < T; ++t) basis(t) = std::sin(two_pi * k * t / T);
      P.noalias() += scale * (basis * basis.transpose());
    }
  }
  Matrix out(series.rows, T);
  MMap(out.data.data(), out.rows, out.cols).noalias() =
      CMap(series.data.data(), series.rows, series.cols) * P;
  return out;
}

std::vector<WeightedEdge> fc_edges(const Matrix& filtered, int top_k) {
  int n = filtered.rows;
  int T = filtered.cols;
  // standardize rows; constant rows correlate with nothing
  Matrix s(n, T);
  for (int v = 0; v < n; ++v) {
    double mean = 0.0;
    for (int t = 0; t < T; ++t) mean += filtered(v, t);
    mean /= T;
    double var = 0.0;
    for (int t = 0; t < T; ++t) {
      double d = filtered(v, t) - mean;
      var += d * d;
    }
    double inv = var > 1e-24 ? 1.0 / std::sqrt(var) : 0.0;
    for (int t = 0; t < T; ++t) s(v, t) = (filtered(v, t) - mean) * inv;
  }
  Matrix corr = matmul_nt(s, s);

  std::set<std::pair<int, int>> chosen;
  std::vector<std::pair<double, int>> cand;
  for (int v = 0; v < n; ++v) {
    cand.clear();
    for (int j = 0; j < n; ++j)
      if (j != v) cand.emplace_back(-corr(v, j), j);
    int keep = std::min(top_k, n - 1);
    std::partial_sort(cand.begin(), cand.begin() + keep, cand.end());
    for (int i = 0; i < keep; ++i) {
      int j = cand[i].second;
      chosen.emplace(std::min(v, j), std::max(v, j));
    }
  }
  std::vector<WeightedEdge> out;
  out.reserve(chosen.size());
  for (auto [u, v] : chosen) out.push_back({u, v, corr(u, v)});
  return out;
}

MultiplexGraph generate_graph(const GenConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(seed);

  Rng shape = rng.child("shape");
  int n = int(shape.uniform_int(cfg.node_min, cfg.node_max));
  int k = int(shape.uniform_int(cfg.community_min, cfg.community_max));

  // balanced round-robin communities, shuffled membership
  std::vector<int> community(n);
  for (int v = 0; v < n; ++v) community[v] = v % k;
  Rng crng = rng.child("communities");
  crng.shuffle(community);

  std::vector<int> site(n);
  Rng srng = rng.child("sites");
  for (int v = 0; v < n; ++v) site[v] = int(srng.uniform_int(0, cfg.site_count - 1));

  Latents latents = sample_latents(cfg, k, n, community, rng.child("latents"));
  Matrix X = node_features(latents, site, cfg, rng.child("features"));

  std::vector<WeightedEdge> sc = sc_edges(latents, community, cfg, rng.child("sc"));
  sc = apply_missing_sc(std::move(sc), cfg.missing_sc_fraction, rng.child("missing"));

  Matrix ts = simulate_timeseries(community, k, cfg, rng.child("timeseries"));
  Matrix filtered = bandpass(ts, cfg.band_lo, cfg.band_hi, cfg.ts_dt);
  std::vector<WeightedEdge> fc = fc_edges(filtered, cfg.fc_top_k);

  // assemble union edge list with 2-channel attributes
  std::map<std::pair<int, int>, std::pair<double, double>> merged;  // sc_w, fc_c
  std::map<std::pair<int, int>, std::pair<bool, bool>> present;
  for (const auto& e : sc) {
    merged[{e.u, e.v}].first = e.w;
    present[{e.u, e.v}].first = true;
  }
  for (const auto& e : fc) {
    merged[{e.u, e.v}].second = e.w;
    present[{e.u, e.v}].second = true;
  }

  MultiplexGraph g;
  g.n = n;
  g.k = k;
  g.features = std::move(X);
  g.community = std::move(community);
  g.site = std::move(site);
  int m = int(merged.size());
  g.edges.reserve(m);
  g.edge_attrs = Matrix(m, 2);
  g.channel_present.resize(m);
  int i = 0;
  for (const auto& [uv, attrs] : merged) {
    g.edges.push_back(uv);
    const auto& pres = present[uv];
    g.edge_attrs(i, 0) = pres.first ? attrs.first : 0.0;
    g.edge_attrs(i, 1) = pres.second ? attrs.second : 0.0;
    g.channel_present[i] = {pres.first, pres.second};
    ++i;
  }
  g.finalize();
  return g;
}

}  // namespace mgwb
