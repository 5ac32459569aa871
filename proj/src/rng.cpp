#include "semdim/rng.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace semdim {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ splitmix64(stream * kGolden + 1))) {}

std::uint64_t CounterRng::next() {
  // Two rounds decorrelate neighbouring counters under the same key.
  return splitmix64(splitmix64(key_ + counter_++ * kGolden) ^ key_);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t CounterRng::below(std::size_t n) {
  assert(n > 0);
  // Lemire's multiply-shift with rejection.
  const auto bound = static_cast<std::uint64_t>(n);
  std::uint64_t x = next();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = next();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CounterRng CounterRng::split(std::uint64_t stream) const {
  CounterRng child(key_, stream);
  return child;
}

}  // namespace semdim
