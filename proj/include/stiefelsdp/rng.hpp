#pragma once

#include <cstdint>
#include <string>
#include <string_view>

// Counter-based pseudo-random stream used by the instance generators.
//
// The generator is splitmix64 run in counter mode: draw i of the stream
// with key k is finalize(k + (i+1) * 0x9E3779B97F4A7C15), where finalize
// is the splitmix64 output mixer. Identical (key, position) pairs yield
// identical bits on every platform. Normal variates come from the trig
// form of the Box-Muller transform (both outputs consumed, cos branch
// first); bounded integers use modulo reduction. Both choices are part
// of the stream contract: changing them would change every generated
// instance.

namespace stiefel {

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  // splitmix64 output mixer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Stream key for a named instance cell. Folds the class tag (FNV-1a),
  // the dimensions, and the user seed through the mixer, one field at a
  // time.
  static std::uint64_t derive_key(std::string_view tag, std::uint64_t n,
                                  std::uint64_t p, std::uint64_t seed);

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log argument.
  double next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double next_normal();

  // Uniform integer on [lo, hi] inclusive via modulo reduction.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);

  std::string algorithm() const { return "splitmix64-counter"; }
  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stiefel
