// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/types.hpp"

#include <array>
#include <cstdint>
#include <limits>

namespace irsbeam {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A substream
/// is fixed by (key, stream, a, b); draws advance the remaining counter word,
/// so distinct substreams never share a block.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t key, std::uint32_t stream, std::uint32_t a, std::uint32_t b);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Circularly-symmetric CN(0, 1): E|g|^2 = 1, real and imaginary variance 1/2.
  cdouble complex_normal();

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;
};

/// Stream tags; one per independent use of randomness.
enum class Stream : std::uint32_t {
  UserPositions = 1,
  SmallScaleFading = 2,
  InitialTheta = 3,
  RandomTheta = 4,
};

/// Folds (master, snapshot, realization) into a 64-bit seed for APIs that take
/// a single seed (the optimizer's random initialization).
std::uint64_t derive_seed(std::uint64_t master, std::uint32_t snapshot, std::uint32_t realization,
                          Stream stream);

}  // namespace irsbeam
