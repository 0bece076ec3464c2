#pragma once

#include <cstdint>
#include <vector>

namespace cbp {

/// Deterministic Gaussian increments keyed by (seed, stream, channel).
/// Channels are independent streams indexed by rank (or name); the n-th draw
/// of a channel does not depend on how many other channels exist, so two
/// coupled systems of different size share their common channels exactly.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t stream, bool zero_noise = false);

  /// Standard normal draw for 1-based channel k; consecutive calls on the
  /// same channel walk its stream.
  double gaussian(std::size_t channel);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  struct Channel {
    std::uint64_t state = 0;
    bool has_spare = false;
    double spare = 0.0;
  };

  Channel& channel(std::size_t k);

  std::uint64_t seed_;
  std::uint64_t stream_;
  bool zero_noise_;
  std::vector<Channel> channels_;
};

}  // namespace cbp
