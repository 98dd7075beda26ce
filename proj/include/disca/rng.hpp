#pragma once

#include <cstdint>
#include <initializer_list>

namespace disca {

//! SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

//! Derives a child seed from a master seed and a sequence of stream tags.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = splitmix64(master);
  for (const std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t + 0x632BE59BD9B4E019ULL));
  return h;
}

}  // namespace disca
