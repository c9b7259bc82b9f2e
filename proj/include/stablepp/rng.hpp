#pragma once

#include <array>
#include <cstdint>

namespace stablepp {

namespace detail {

// 64x64 -> 128 bit multiply, split into (hi, lo).
struct HiLo {
  std::uint64_t hi;
  std::uint64_t lo;
};

inline HiLo mulhilo64(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
}

}  // namespace detail

// Philox 4x64 block cipher with 10 rounds, used in counter mode.  The 256-bit
// counter is four u64 words: words 0-1 hold the running block index (word 0 is
// low, carries into word 1), word 2 and word 3 identify the logical stream.
// Output blocks match numpy.random.Philox for the same counter and key.
class Philox4x64 {
 public:
  using Block = std::array<std::uint64_t, 4>;

  Philox4x64(std::uint64_t key0, std::uint64_t key1, Block counter)
      : key_{key0, key1}, counter_(counter) {}

  static Block encrypt(Block ctr, std::uint64_t key0, std::uint64_t key1) {
    std::uint64_t k0 = key0;
    std::uint64_t k1 = key1;
    round(ctr, k0, k1);
    for (int r = 1; r < 10; ++r) {
      k0 += kWeyl0;
      k1 += kWeyl1;
      round(ctr, k0, k1);
    }
    return ctr;
  }

  // Advances the block index, then encrypts it.  With this order a stream
  // started at block index zero emits exactly the raw word sequence of
  // numpy.random.Philox for the same counter words and key.
  Block next_block() {
    if (++counter_[0] == 0) ++counter_[1];
    return encrypt(counter_, key_[0], key_[1]);
  }

  const Block& counter() const { return counter_; }

 private:
  static void round(Block& v, std::uint64_t k0, std::uint64_t k1) {
    const auto m0 = detail::mulhilo64(kMul0, v[0]);
    const auto m1 = detail::mulhilo64(kMul1, v[2]);
    v = {m1.hi ^ v[1] ^ k0, m1.lo, m0.hi ^ v[3] ^ k1, m0.lo};
  }

  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  std::array<std::uint64_t, 2> key_;
  Block counter_;
};

// Role of a stream within one replication.  Each role gets its own counter
// word, so streams never overlap no matter how much any one of them consumes.
enum class Purpose : std::uint64_t {
  kArrivals = 0,
  kMarks = 1,
  kCoins = 2,
  kTransient = 3,
  kStraddle = 4,
  kArrivalsFwd = 5,
  kMarksFwd = 6,
  kCoinsFwd = 7,
};

// Uniform random stream addressed by (seed, replication, purpose).  Streams
// with any differing coordinate are independent by construction, so
// replications can run in any order (or in parallel) and reproduce exactly.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replication, Purpose purpose)
      : cipher_(seed, kKeySalt,
                {0, 0, replication, static_cast<std::uint64_t>(purpose)}) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      buffer_ = cipher_.next_block();
      pos_ = 0;
    }
    ++draws_;
    return buffer_[pos_++];
  }

  // Uniform on the open interval (0,1): 53 random bits centered in the cell,
  // so 0 and 1 are unreachable and logs/quantiles are always finite.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Number of u64 words consumed; used to audit reproducibility.
  std::uint64_t draws() const { return draws_; }

  static constexpr std::uint64_t kKeySalt = 0x243F6A8885A308D3ULL;

 private:
  Philox4x64 cipher_;
  Philox4x64::Block buffer_{};
  int pos_ = 4;
  std::uint64_t draws_ = 0;
};

}  // namespace stablepp
