#include "entrokey/rng.hpp"

#include <limits>

namespace entrokey {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stage) {
  return splitmix64(global_seed ^ splitmix64(fnv1a(stage)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::uniform_real() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace entrokey
