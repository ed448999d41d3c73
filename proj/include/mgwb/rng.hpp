#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <string_view>
#include <vector>

namespace mgwb {

// Deterministic seeded RNG with named substreams. Every random decision in
// the workbench draws from an Rng reached through child() calls, so a run is
// fully reproducible from its master seed regardless of evaluation order or
// worker count.
class Rng {
 public:
  explicit Rng(uint64_t seed)
      : base_(splitmix(seed ^ 0x9e3779b97f4a7c15ULL)), state_(base_ | 1ULL) {}

  // Derives an independent substream. Children with different names (or
  // indices) never share state with the parent or each other.
  Rng child(std::string_view name) const {
    return Rng(splitmix(seed_base() ^ fnv1a(name)));
  }
  Rng child(std::string_view name, uint64_t index) const {
    uint64_t h = fnv1a(name);
    h ^= 0x100000001b3ULL * (index + 1);
    return Rng(splitmix(seed_base() ^ splitmix(h)));
  }

  uint64_t next_u64() {
    // xorshift* step on splitmix-initialized state
    uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  // uniform double in [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [lo, hi] inclusive
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = uint64_t(hi - lo) + 1;
    // rejection sampling to avoid modulo bias
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + int64_t(x % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; second value cached
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = size_t(uniform_int(0, int64_t(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), ascending order
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
      int j = int(uniform_int(i, n - 1));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
  }

 private:
  uint64_t base_;   // construction-time value; children derive from this
  uint64_t state_;  // draw position
  double cached_ = 0.0;
  bool has_cached_ = false;

  // child() derives from the construction-time value, not the current draw
  // position, so substream layout is independent of how much the parent drew.
  uint64_t seed_base() const { return base_; }

  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
      h ^= uint8_t(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

}  // namespace mgwb
