#pragma once

#include <cstdint>
#include <random>

namespace wsum {

// A reproducible random stream identified by (seed, stream index).
//
// Every variate is produced by explicit transforms of the raw 64-bit engine
// output, so sequences are identical across standard libraries (the
// std::*_distribution classes are not portable and are not used).
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return index_; }

  // Uniform on the open interval (0, 1).
  double uniform();
  double standard_normal();
  double standard_exponential();
  // Gamma(shape, 1), Marsaglia-Tsang squeeze with the shape < 1 boost.
  double standard_gamma(double shape);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
};

}  // namespace wsum
