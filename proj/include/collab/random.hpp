#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace collab {

// Independent, reproducible stream for a tuple of integers (base seed,
// repeat, instance, view, ...). No global RNG state anywhere in the library.
inline std::mt19937_64 make_rng(std::initializer_list<std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  words.reserve(key.size() * 2);
  for (auto k : key) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace collab
