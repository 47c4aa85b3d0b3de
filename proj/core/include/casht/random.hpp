#pragma once

#include <array>
#include <cstdint>

namespace casht {

// Counter-based generator (Philox4x32-10).
//
// A (seed, stream_id) pair keys a fixed permutation applied to a 128-bit
// counter whose high 64 bits hold the stream id and whose low 64 bits count
// draws. Distinct stream ids therefore index disjoint counter blocks: two
// streams with the same seed never share a draw within 2^64 draws per
// stream. All arithmetic is 32/64-bit integer, so sequences are identical
// on every platform.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // 53-bit uniform in [0, 1).
  double uniform01();
  // Uniform in the open interval (0, 1); safe for inverse-CDF transforms.
  double uniform_open01();
  double uniform(double lo, double hi);
  // Standard normal via the polar (Marsaglia) method.
  double normal();
  // Exponential with the given rate.
  double exponential(double rate);
  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;  // forces refill on first draw
};

inline RandomStream rng_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return RandomStream(seed, stream_id);
}

}  // namespace casht
