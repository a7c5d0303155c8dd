#pragma once

#include <cstdint>
#include <initializer_list>

namespace xtpn {

// Counter-based pseudo-random primitives. Every draw is a pure function of
// its key, so unrelated consumers never perturb each other's streams.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x8BADF00DDEADBEEFULL;
  for (const std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
  return h;
}

// Uniform draw in [0, n) from the stream rooted at key (rejection sampled).
inline std::uint64_t bounded_uniform(std::uint64_t key, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
  std::uint64_t round = 0;
  for (;;) {
    const std::uint64_t r = splitmix64(key + round++);
    if (r < limit) return r % n;
  }
}

}  // namespace xtpn
