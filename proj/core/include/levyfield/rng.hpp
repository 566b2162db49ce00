#pragma once

#include <array>
#include <cstdint>

namespace levyfield {

/// Philox4x32-10 counter-based generator. A block cipher over a 128-bit
/// counter and 64-bit key: identical (key, counter) inputs give identical
/// outputs on every platform, so replica/mode substreams are reproducible
/// without any sequential state.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                            const std::array<std::uint32_t, 2>& key);
};

/// Deterministic stream of standard Gaussians addressed by
/// (seed, replica, stream, index). Each index yields an independent
/// N(0,1) pair via Box-Muller on one Philox block.
class GaussianStream {
public:
  GaussianStream(std::uint64_t seed, std::uint32_t replica, std::uint32_t stream)
      : key_{static_cast<std::uint32_t>(seed & 0xffffffffu),
             static_cast<std::uint32_t>(seed >> 32) ^ replica},
        stream_(stream) {}

  /// z0, z1 ~ N(0,1) independent, for the given draw index.
  std::pair<double, double> normal_pair(std::uint32_t index) const;

  /// Single N(0,1) (first element of the pair).
  double normal(std::uint32_t index) const { return normal_pair(index).first; }

private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
};

}  // namespace levyfield
