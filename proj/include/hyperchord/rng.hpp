#pragma once

// Counter-based random numbers. Philox4x32-10 keyed by the seed, with the
// stream id in the upper half of the counter: every (seed, stream_id) pair
// names an independent, reproducible sequence and no state is shared.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace hyperchord {

struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t m0 = 0xD2511F53u;
  constexpr std::uint32_t m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u;
  constexpr std::uint32_t w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

}  // namespace detail

class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  explicit Philox4x32(RngState state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) {
      block_ = generate(counter_++);
      lane_ = 0;
    }
    const auto i = 2 * lane_++;
    return (static_cast<std::uint64_t>(block_[i]) << 32) | block_[i + 1];
  }

  const RngState& state() const noexcept { return state_; }

 private:
  std::array<std::uint32_t, 4> generate(std::uint64_t counter) const {
    return detail::philox4x32_10(
        {static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
         static_cast<std::uint32_t>(state_.stream_id),
         static_cast<std::uint32_t>(state_.stream_id >> 32)},
        {static_cast<std::uint32_t>(state_.seed), static_cast<std::uint32_t>(state_.seed >> 32)});
  }

  RngState state_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int lane_ = 2;
};

/// Variate generation on top of Philox. Algorithms are fixed here rather
/// than taken from <random>, whose distributions differ across libraries.
class RandomSource {
 public:
  explicit RandomSource(RngState state) : engine_(state) {}

  const RngState& state() const noexcept { return engine_.state(); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

  /// Standard normal, Marsaglia polar method.
  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u;
    double v;
    double s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    return u * factor;
  }

  /// Gamma(shape, 1), Marsaglia-Tsang squeeze.
  double gamma(double shape) {
    if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      const double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  Philox4x32 engine_;
  std::optional<double> spare_;
};

}  // namespace hyperchord
