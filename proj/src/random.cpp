#include "wsum/random.hpp"

#include <cmath>
#include <numbers>

namespace wsum {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), index_(stream_index), engine_(make_engine(seed, stream_index)) {}

double SeededStream::uniform() {
  // 53 random bits, shifted half a step off zero
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededStream::standard_normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SeededStream::standard_exponential() { return -std::log(uniform()); }

double SeededStream::standard_gamma(double shape) {
  if (shape < 1.0) {
    const double g = standard_gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t SeededStream::below(std::uint64_t n) {
  // rejection keeps the result unbiased
  const std::uint64_t limit = engine_.max() - engine_.max() % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

}  // namespace wsum
