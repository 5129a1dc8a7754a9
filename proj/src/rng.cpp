#include "mhk/rng.hpp"

namespace mhk {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t i) {
  return mix_seed(mix_seed(master) ^ mix_seed(i + 0x632BE59BD9B4E019ULL));
}

Rng::Rng(std::uint64_t seed, Stream stream) : engine_(child_seed(seed, static_cast<std::uint64_t>(stream))) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Multiply-shift with rejection of the biased low region.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * bound;
    if (static_cast<std::uint64_t>(product) >= threshold) return static_cast<std::uint64_t>(product >> 64);
  }
}

}  // namespace mhk
