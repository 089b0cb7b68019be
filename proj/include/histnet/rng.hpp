#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace histnet {

inline std::uint64_t
splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream derivation: independent seeds for (seed, i, j, ...).
inline std::uint64_t
derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
{
  std::uint64_t h = splitmix64(seed);
  for (auto p : path)
    h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

using Rng = std::mt19937_64;

// Uniform on [0,1) from the top 53 bits; identical on every platform.
inline double
uniform01(Rng& g)
{
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double
uniform(Rng& g, double lo, double hi)
{
  return lo + (hi - lo) * uniform01(g);
}

} // namespace histnet
