#pragma once

// Counter-based random streams.
//
// A stream is the pair (seed, stream_id): the seed is the Philox key and the
// stream id occupies the upper half of the 128-bit counter, so every
// (seed, stream_id) pair walks its own disjoint counter range. Monte Carlo
// drivers give path i the stream id i, which makes results independent of how
// the paths are spread over worker threads.

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace windings {

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Exponential with rate 1.
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int next_ = 2;
};

// SplitMix64 finalizer; used to derive child seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed of a named sub-experiment, e.g. derive_seed(42, "bougerol").
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

}  // namespace windings
