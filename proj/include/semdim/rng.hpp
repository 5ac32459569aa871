#pragma once

#include <cstddef>
#include <cstdint>

namespace semdim {

/// Counter-based generator: the k-th draw of stream s under seed is a pure
/// function of (seed, s, k), so substreams can be handed to parallel workers
/// and still reproduce a serial run bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n);
  /// Standard normal via Box-Muller.
  double normal();

  /// Independent child stream keyed by `stream`.
  CounterRng split(std::uint64_t stream) const;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace semdim
