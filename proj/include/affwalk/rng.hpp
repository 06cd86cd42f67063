#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace affwalk {

/// Philox4x64-10 counter-based generator. The key is (master_seed, stream_id),
/// so distinct streams never share a sequence; the 256-bit counter is
/// incremented before each block, matching numpy.random.Philox.
class Philox4x64 {
public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  Philox4x64(std::uint64_t master_seed, std::uint64_t stream_id);

  static Block block(Block counter, Key key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      refill();
    }
    return buffer_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open0() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }
  /// Exactly uniform integer in [0, range), range >= 1 (Lemire's rejection).
  std::uint64_t bounded(std::uint64_t range);
  /// Exactly uniform integer in [0, range) for range < 2^32; consumes 32-bit halves.
  std::uint32_t bounded32(std::uint32_t range);
  /// Fair +-1.
  int sign();
  /// Standard normal (Boost ziggurat).
  double normal();

private:
  void refill();
  std::uint32_t next32();

  Key key_;
  Block counter_{};
  Block buffer_{};
  int pos_ = 4;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
  std::uint64_t half_ = 0;
  bool has_half_ = false;
};

}  // namespace affwalk
