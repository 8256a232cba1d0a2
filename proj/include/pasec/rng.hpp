#pragma once

#include <cstdint>

namespace pasec {

// Counter-style generator: the sequence is a pure function of (seed, stream),
// so per-drop streams are reproducible regardless of evaluation order.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_unit();  // [0, 1), 53-bit resolution

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace pasec
