#pragma once

#include "shiftlab/errors.hpp"
#include "shiftlab/types.hpp"

#include <cmath>
#include <cstdint>

namespace shiftlab {

// Counter-based pseudo-random stream: draw k is a pure function of
// (seed, k), so sequences are identical across runs and platforms and
// streams can be split without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53-bit resolution.
  Scalar uniform() { return static_cast<Scalar>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1]; safe as a log argument.
  Scalar uniform_pos() {
    return (static_cast<Scalar>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; two uniforms per draw, no cached spare.
  Scalar gaussian() {
    const Scalar u1 = uniform_pos();
    const Scalar u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Index in [0,n); multiply-shift mapping of a 64-bit draw.
  Index uniform_index(Index n) {
    if (n <= 0) throw ContractError("uniform_index: n must be positive");
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<Index>(wide >> 64);
  }

  Matrix gaussian_matrix(Index rows, Index cols) {
    if (rows < 1 || cols < 1)
      throw ContractError("gaussian_matrix: rows and cols must be >= 1");
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) out(i, j) = gaussian();
    return out;
  }

  Vector gaussian_vector(Index n) {
    Matrix m = gaussian_matrix(n, 1);
    return m.col(0);
  }

  // Independent derived stream; never advances this one.
  Rng split(std::uint64_t stream) const {
    std::uint64_t z = seed_ ^ (0x9E3779B97F4A7C15ULL + stream * 0xD1B54A32D192ED03ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace shiftlab
