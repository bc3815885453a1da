#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rta {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Independent per-stream RNG so per-item work is order-free.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::string_view stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(fnv1a64(stream)),
                    static_cast<std::uint32_t>(fnv1a64(stream) >> 32)};
  return std::mt19937_64(seq);
}

// Bounded draw and shuffle are hand-rolled: std::uniform_int_distribution and
// std::shuffle are implementation-defined, which would break pinned fixtures.
inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

inline double rng_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, one value per call (the sibling draw is discarded).
inline double rng_normal(std::mt19937_64& rng) {
  double u1 = rng_unit(rng);
  double u2 = rng_unit(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

template <typename T>
void rng_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// k distinct elements drawn uniformly, in draw order.
template <typename T>
std::vector<T> rng_sample(const std::vector<T>& pool, std::size_t k, std::mt19937_64& rng) {
  std::vector<T> scratch = pool;
  if (k > scratch.size()) k = scratch.size();
  std::vector<T> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = static_cast<std::size_t>(rng_below(rng, scratch.size()));
    out.push_back(scratch[j]);
    scratch[j] = scratch.back();
    scratch.pop_back();
  }
  return out;
}

}  // namespace rta
