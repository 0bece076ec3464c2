#include "cbp/noise.hpp"

#include <cmath>

namespace cbp {

namespace {

// splitmix64 finalizer; the per-channel stream is the splitmix64 sequence.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t next_u64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform in (0, 1): 53 mantissa bits, zero excluded.
double next_unit(std::uint64_t& state) {
  return (static_cast<double>(next_u64(state) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream, bool zero_noise)
    : seed_(seed), stream_(stream), zero_noise_(zero_noise) {}

NoiseSource::Channel& NoiseSource::channel(std::size_t k) {
  if (k > channels_.size()) {
    const std::size_t old = channels_.size();
    channels_.resize(k);
    for (std::size_t i = old; i < k; ++i) {
      std::uint64_t h = mix64(seed_ ^ 0x517CC1B727220A95ULL);
      h = mix64(h ^ stream_);
      h = mix64(h ^ static_cast<std::uint64_t>(i + 1));
      channels_[i].state = h;
    }
  }
  return channels_[k - 1];
}

double NoiseSource::gaussian(std::size_t k) {
  if (zero_noise_) return 0.0;
  Channel& ch = channel(k);
  if (ch.has_spare) {
    ch.has_spare = false;
    return ch.spare;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * next_unit(ch.state) - 1.0;
    v = 2.0 * next_unit(ch.state) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  ch.spare = v * f;
  ch.has_spare = true;
  return u * f;
}

}  // namespace cbp
