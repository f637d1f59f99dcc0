#include "stiefelsdp/rng.hpp"

#include <cmath>

#include "stiefelsdp/errors.hpp"

namespace stiefel {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t RngStream::derive_key(std::string_view tag, std::uint64_t n,
                                    std::uint64_t p, std::uint64_t seed) {
  std::uint64_t k = seed;
  k = mix(k ^ fnv1a64(tag));
  k = mix(k ^ n);
  k = mix(k ^ p);
  return k;
}

double RngStream::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit_open();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::int64_t RngStream::next_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ParameterError("next_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

}  // namespace stiefel
