#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace metapac {

// Counter-based random stream. Every draw is a pure function of
// (seed, stream id, draw index), so streams can be recreated anywhere in the
// program and used concurrently without coordination; draw order inside one
// stream is the only state. The generator is the splitmix64 finalizer applied
// to key + counter, which is plenty for Monte-Carlo use.
namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Combine an arbitrary list of identifiers into one stream id.
inline std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t p : parts) h = detail::mix64(h ^ detail::mix64(p));
  return h;
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : key_(stream_id({seed, stream})) {}

  std::uint64_t next_u64() { return detail::mix64(key_ ^ detail::mix64(counter_++)); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; draws two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace metapac
