#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polybasin {

/// Portable subtractive lagged-Fibonacci generator
///   X[n] = (X[n-100] - X[n-37]) mod 2^30
/// seeded and cycled exactly like Knuth's `ran_start` / `ran_arr_cycle`
/// (TAOCP vol. 2, 3rd ed., 2002 revision). All arithmetic is on unsigned
/// 32-bit words reduced by masking, which is defined behaviour for unsigned
/// types, so the stream is identical on every conforming platform.
///
/// Words are produced in blocks of 1009 of which only the first 100 are
/// used. A uniform deviate consumes two words and carries 53 random bits.
class LaggedFibonacci {
 public:
  static constexpr std::size_t kLongLag = 100;
  static constexpr std::size_t kShortLag = 37;
  static constexpr std::uint32_t kModulus = 1u << 30;
  static constexpr std::size_t kBlock = 1009;
  static constexpr std::uint32_t kMaxSeed = kModulus - 1;

  explicit LaggedFibonacci(std::uint32_t seed) {
    if (seed > kMaxSeed) {
      throw std::invalid_argument("lagged-Fibonacci seed must be < 2^30, got " +
                                  std::to_string(seed));
    }
    start(seed);
  }

  /// Next 30-bit word.
  std::uint32_t next_word() {
    if (cursor_ == kLongLag) refill();
    return block_[cursor_++];
  }

  /// Next deviate in [0, 1).
  double next_uniform() {
    const std::uint64_t hi = next_word();
    const std::uint64_t lo = next_word();
    const std::uint64_t bits = (hi << 23) | (lo >> 7);
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  /// Next deviate in (0, 1): zero draws are discarded.
  double next_open_uniform() {
    double u = next_uniform();
    while (u == 0.0) u = next_uniform();
    return u;
  }

  /// Fill `out` (size >= 100) with the next words of the raw sequence,
  /// advancing the internal state. This is Knuth's `ran_array`.
  template <class Span>
  void fill(Span&& out) {
    const std::size_t n = out.size();
    if (n < kLongLag) throw std::invalid_argument("ran_array needs at least 100 words");
    std::size_t j = 0;
    for (; j < kLongLag; ++j) out[j] = state_[j];
    for (; j < n; ++j) out[j] = mod_diff(out[j - kLongLag], out[j - kShortLag]);
    std::size_t i = 0;
    for (; i < kShortLag; ++i, ++j) state_[i] = mod_diff(out[j - kLongLag], out[j - kShortLag]);
    for (; i < kLongLag; ++i, ++j) state_[i] = mod_diff(out[j - kLongLag], state_[i - kShortLag]);
  }

 private:
  static constexpr std::uint32_t mod_diff(std::uint32_t x, std::uint32_t y) {
    return (x - y) & (kModulus - 1);
  }

  void start(std::uint32_t seed) {
    constexpr std::size_t kk = kLongLag;
    constexpr std::size_t ll = kShortLag;
    constexpr int kSeparation = 70;
    std::array<std::uint32_t, kk + kk - 1> x{};

    std::uint32_t ss = (seed + 2) & (kModulus - 2);
    for (std::size_t j = 0; j < kk; ++j) {
      x[j] = ss;
      ss <<= 1;
      if (ss >= kModulus) ss -= kModulus - 2;
    }
    ++x[1];
    ss = seed & (kModulus - 1);
    for (int t = kSeparation - 1; t != 0;) {
      // square
      for (std::size_t j = kk - 1; j > 0; --j) {
        x[j + j] = x[j];
        x[j + j - 1] = 0;
      }
      for (std::size_t j = kk + kk - 2; j >= kk; --j) {
        x[j - (kk - ll)] = mod_diff(x[j - (kk - ll)], x[j]);
        x[j - kk] = mod_diff(x[j - kk], x[j]);
      }
      // multiply by z
      if (ss & 1u) {
        for (std::size_t j = kk; j > 0; --j) x[j] = x[j - 1];
        x[0] = x[kk];
        x[ll] = mod_diff(x[ll], x[kk]);
      }
      if (ss != 0) {
        ss >>= 1;
      } else {
        --t;
      }
    }
    for (std::size_t j = 0; j < ll; ++j) state_[j + kk - ll] = x[j];
    for (std::size_t j = ll; j < kk; ++j) state_[j - ll] = x[j];
    for (int j = 0; j < 10; ++j) fill(x);
    cursor_ = kLongLag;
  }

  void refill() {
    fill(block_);
    cursor_ = 0;
  }

  std::array<std::uint32_t, kLongLag> state_{};
  std::array<std::uint32_t, kBlock> block_{};
  std::size_t cursor_ = kLongLag;
};

/// Seed of function `nf` (1..100) in a class of dimension `dim` with
/// `num_minima` minimizers:
///   (nf - 1) + (m - 1) * 100 + (N - 1) * 1'000'000   (mod 2^30)
constexpr std::uint32_t function_seed(int nf, std::size_t num_minima, std::size_t dim) {
  const std::uint64_t raw = static_cast<std::uint64_t>(nf - 1) +
                            static_cast<std::uint64_t>(num_minima - 1) * 100u +
                            static_cast<std::uint64_t>(dim - 1) * 1'000'000u;
  return static_cast<std::uint32_t>(raw % LaggedFibonacci::kModulus);
}

}  // namespace polybasin
