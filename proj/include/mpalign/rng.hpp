#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mpalign {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// All randomness flows from one root seed through named sub-streams
// ("graph-negatives", "nmf-init", "ablation-subsets", "synth", ...), keyed
// further by verse id where work is per-verse. Enabling one randomized
// feature therefore never perturbs another's draws.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream,
                                 std::string_view key = {}) {
  std::uint64_t h = splitmix64(root ^ fnv1a(stream));
  if (!key.empty()) h = splitmix64(h ^ fnv1a(key));
  return h;
}

// mt19937_64 output is bit-exact across implementations; the std::
// distributions are not, so the draws below are hand-rolled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // uniform in [0, n); rejection sampling, no modulo bias
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) return 0;
    const std::uint64_t span = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return static_cast<std::size_t>(x % span);
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]
  double uniform_pos01() { return 1.0 - uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Knuth's method; fine for the small rates used here
  std::size_t poisson(double rate) {
    if (rate <= 0.0) return 0;
    const double l = std::exp(-rate);
    std::size_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > l);
    return k - 1;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mpalign
