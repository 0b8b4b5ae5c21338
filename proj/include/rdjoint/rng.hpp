#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rdjoint {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based stream: the output at position t of stream s under seed k
/// is a pure function of (k, s, t), so streams can be handed to any thread in
/// any order without changing results.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal via Box-Muller; the second variate of each pair is kept.
  double normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // 64-bit words left in buffer_
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Seed for sub-task `index` of a run with `master` seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace rdjoint
