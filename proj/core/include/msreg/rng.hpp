#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace msreg {

// splitmix64; small, well-mixed, and good enough to derive independent
// child seeds from a parent seed plus a few integer tags.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Every parallel unit of work (k-means restart, forest tree, CV fold, CLI
// task) gets its own seed derived from its parent's seed and its position.
// That keeps results independent of scheduling and thread count.
inline std::uint64_t derive_seed(std::uint64_t parent,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = parent;
  for (std::uint64_t tag : tags) {
    std::uint64_t s = h ^ (tag + 0x9e3779b97f4a7c15ULL);
    h = splitmix64_next(s);
  }
  return h;
}

// Thin wrapper over std::mt19937_64 (whose output sequence the standard
// pins down exactly). Bounded draws use rejection sampling instead of
// std::uniform_int_distribution, which is implementation-defined and would
// make results differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // uniform integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n);

  // uniform real in [0, 1) with 53 random bits
  double unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // standard normal via the Marsaglia polar method
  double gaussian();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// k distinct values from {0, ..., n-1}, in draw order
std::vector<int> sample_without_replacement(int n, int k, Rng& rng);

template <typename T>
void fisher_yates(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace msreg
