#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cgambit {

/// Deterministic random stream. The engine is std::mt19937_64, whose
/// state transition and output are fixed by the C++ standard, so the raw
/// sequence is identical on every platform. The <random> distributions
/// are implementation-defined, so every distribution used here is
/// implemented on top of the raw stream: identical seed, identical
/// draws, everywhere.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform over {0, ..., n-1}.
  int uniform_index(int n);

  /// Index drawn from an unnormalized-tolerant probability vector.
  int categorical(std::span<const double> probs);

  /// Standard normal via Box-Muller (cosine branch only).
  double normal01();

  /// Unit-scale gamma variate, Marsaglia-Tsang squeeze method; shapes
  /// below 1 use the boost G(a) = G(a+1) * U^(1/a).
  double gamma(double shape);

  /// Dirichlet draw: independent unit-scale gammas with shapes alpha,
  /// normalized.
  std::vector<double> dirichlet(std::span<const double> alpha);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cgambit
