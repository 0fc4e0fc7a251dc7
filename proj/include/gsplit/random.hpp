#pragma once

#include <cstdint>
#include <optional>

#include "gsplit/matlin.hpp"

namespace gsplit {

/// SplitMix64 stream with Box-Muller normals. The mapping from seed to values
/// is fixed (no std:: distributions) so fixtures reproduce across platforms:
///   u = (x >> 11) * 2^-53 in [0, 1)
///   normals come in pairs r cos(2 pi u2), r sin(2 pi u2) with
///   r = sqrt(-2 ln(1 - u1)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();
  double normal();
  /// Uniform integer in [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi);

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

Vector gaussian_vector(std::size_t n, Rng& rng);
/// Filled row by row.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace gsplit
