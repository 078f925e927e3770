#ifndef GFWOPT_RNG_HPP_
#define GFWOPT_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace gfwopt {

// mt19937_64 with hand-rolled uniform/normal transforms. The standard
// distributions are implementation-defined, which would break the
// byte-identical reproduction contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (pairs cached).
  double normal();

  // Uniform index in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  // k distinct indices from [0, n), ascending.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable per-task seed derivation (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace gfwopt

#endif  // GFWOPT_RNG_HPP_
