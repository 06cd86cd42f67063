#include "affwalk/rng.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <numbers>

namespace affwalk {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Philox4x64::Philox4x64(std::uint64_t master_seed, std::uint64_t stream_id)
    : key_{master_seed, stream_id} {}

Philox4x64::Block Philox4x64::block(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

void Philox4x64::refill() {
  for (auto& word : counter_) {
    if (++word != 0) {
      break;
    }
  }
  buffer_ = block(counter_, key_);
  pos_ = 0;
}

std::uint32_t Philox4x64::next32() {
  if (has_half_) {
    has_half_ = false;
    return static_cast<std::uint32_t>(half_ >> 32);
  }
  half_ = (*this)();
  has_half_ = true;
  return static_cast<std::uint32_t>(half_);
}

std::uint64_t Philox4x64::bounded(std::uint64_t range) {
  std::uint64_t x = (*this)();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<unsigned __int128>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint32_t Philox4x64::bounded32(std::uint32_t range) {
  std::uint32_t x = next32();
  std::uint64_t m = static_cast<std::uint64_t>(x) * range;
  std::uint32_t low = static_cast<std::uint32_t>(m);
  if (low < range) {
    const std::uint32_t threshold = (0u - range) % range;
    while (low < threshold) {
      x = next32();
      m = static_cast<std::uint64_t>(x) * range;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

int Philox4x64::sign() {
  if (bits_left_ == 0) {
    bits_ = (*this)();
    bits_left_ = 64;
  }
  const int bit = static_cast<int>(bits_ & 1u);
  bits_ >>= 1;
  --bits_left_;
  return bit ? 1 : -1;
}

double Philox4x64::normal() { return boost::random::normal_distribution<double>{}(*this); }

}  // namespace affwalk
