#pragma once

#include <cstdint>
#include <random>

namespace gmedyn {

/// Reproducible random source.
///
/// Algorithm "mt19937_64/splitmix64/polar, v1": the engine is
/// std::mt19937_64 (its output sequence is fixed by the C++ standard),
/// uniforms take the top 53 bits, normal variates come from the Marsaglia
/// polar method consuming uniforms pairwise and returning both outputs in
/// order.  child(i) seeds a fresh stream with splitmix64(seed ^ golden*i).
/// Nothing here depends on library-specific distribution objects, so the
/// same seed gives the same numbers on every conforming platform.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi].
  double uniform(double lo, double hi);
  /// Standard normal.
  double normal();

  /// Independent stream for ensemble member `index`.
  RandomStream child(std::uint64_t index) const;

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace gmedyn
