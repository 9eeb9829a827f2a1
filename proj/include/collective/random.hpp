#pragma once

// Portable random streams.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so every variate used by the simulations is
// produced here from raw engine output:
//
//   uniform01        (u64 >> 11) * 2^-53, in [0, 1)
//   uniform_index    rejection sampling on the top bits, unbiased
//   standard_normal  Box-Muller, cosine branch only, one pair of uniforms
//                    per draw
//   shuffle          Fisher-Yates from the back, j = uniform_index(i + 1)
//
// Sub-seeds are derived with derive_seed(), a SplitMix64 fold over the
// master seed and a list of 64-bit tags:
//
//   h = splitmix64(master)
//   for each tag t: h = splitmix64(h ^ t)
//
// String tags are mapped to 64 bits with FNV-1a.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace collective {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t tag(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = splitmix64(master);
  for (auto t : tags) h = splitmix64(h ^ t);
  return h;
}

inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// True with probability p. p <= 0 never fires, p >= 1 always fires.
inline bool bernoulli(Engine& eng, double p) { return uniform01(eng) < p; }

/// Uniform integer in [0, bound). bound must be positive.
inline std::size_t uniform_index(Engine& eng, std::size_t bound) {
  const std::uint64_t b = bound;
  if ((b & (b - 1)) == 0) return static_cast<std::size_t>(eng() & (b - 1));
  int shift = 0;
  while (shift < 64 && (b - 1) >> shift) ++shift;
  for (;;) {
    const std::uint64_t r = eng() >> (64 - shift);
    if (r < b) return static_cast<std::size_t>(r);
  }
}

inline double standard_normal(Engine& eng) {
  const double u1 = 1.0 - uniform01(eng);  // (0, 1]
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <class T>
void shuffle(Engine& eng, std::span<T> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_index(eng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace collective
