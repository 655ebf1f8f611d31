#pragma once

#include <cmath>
#include <cstdint>

namespace lamina {

// Identifies one reproducible random stream. Equal (seed, stream_id) pairs
// reproduce identical draw sequences bit for bit; distinct stream_ids under
// the same seed give statistically independent streams. stream_id is normally
// the replicate index.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return RandomStream{seed, stream_id};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64(s);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256++ seeded through splitmix64 from (seed, stream_id). The stream id
// acts as a counter into the seeding sequence, so streams never share state.
class Rng {
 public:
  explicit Rng(RandomStream stream) {
    std::uint64_t s = stream.seed ^ detail::mix64(stream.stream_id);
    state_[0] = detail::splitmix64(s);
    state_[1] = detail::splitmix64(s);
    state_[2] = detail::splitmix64(s);
    state_[3] = detail::splitmix64(s);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
      state_[0] = 0x9E3779B97F4A7C15ull;  // all-zero state is the one invalid seed
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result =
        detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1); safe as a log argument.
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double angle = 6.283185307179586476925286766559 * uniform();
    cached_ = r * std::sin(angle);
    have_cached_ = true;
    return r * std::cos(angle);
  }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace lamina
