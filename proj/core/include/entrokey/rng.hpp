#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace entrokey {

/// Derives an independent seed for a named stage from the global seed.
/// Adding a new stage name never changes the seeds of existing ones.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stage);

/// Mixes a small integer (fold index, epoch, ...) into a seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

// Seeded generator whose bounded draws do not depend on the standard
// library's distribution implementations, so streams are reproducible
// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform_real();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace entrokey
