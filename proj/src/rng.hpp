#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tfwl {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream seed for (master seed, stream index). Chains, probe
// suites and importance samplers each get their own stream.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// mt19937_64 engine with hand-rolled variate transforms so that output is
// reproducible across standard libraries (std::*_distribution is not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform integer in [0, n); modulo bias is negligible for our n
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<uint64_t>(n)); }

  int sign() { return (engine_() & 1u) ? 1 : -1; }

  // Knuth multiplication method; split recursively to avoid underflow for
  // large means (never hit at our scales, but cheap to guard).
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 200.0) return poisson(mean / 2) + poisson(mean / 2);
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tfwl
