#include "casht/random.hpp"

#include <cmath>

namespace casht {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {}

void RandomStream::refill() {
  std::uint32_t x0 = static_cast<std::uint32_t>(counter_);
  std::uint32_t x1 = static_cast<std::uint32_t>(counter_ >> 32);
  std::uint32_t x2 = static_cast<std::uint32_t>(stream_);
  std::uint32_t x3 = static_cast<std::uint32_t>(stream_ >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, x0, hi0, lo0);
    mulhilo(kPhiloxM1, x2, hi1, lo1);
    const std::uint32_t y0 = hi1 ^ x1 ^ k0;
    const std::uint32_t y1 = lo1;
    const std::uint32_t y2 = hi0 ^ x3 ^ k1;
    const std::uint32_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  block_ = {x0, x1, x2, x3};
  block_pos_ = 0;
  ++counter_;
}

std::uint64_t RandomStream::next_u64() {
  if (block_pos_ >= 4) refill();
  const std::uint64_t lo = block_[static_cast<std::size_t>(block_pos_)];
  const std::uint64_t hi = block_[static_cast<std::size_t>(block_pos_ + 1)];
  block_pos_ += 2;
  return (hi << 32) | lo;
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open01() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RandomStream::normal() {
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RandomStream::exponential(double rate) {
  return -std::log(uniform_open01()) / rate;
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  // Multiply-shift bounded draw; bias is O(n / 2^64), negligible for the
  // hypothesis counts used here.
  const std::uint64_t x = next_u64();
  using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(x) * n) >> 64);
}

}  // namespace casht
