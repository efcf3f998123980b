#pragma once

#include <cstdint>
#include <span>

#include "fdia/hash.hpp"

namespace fdia {

// Source of random bytes for key, nonce and challenge sampling.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t next_u64();
  // Uniform in [0, bound); bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform in [0, 1).
  double unit();
};

// Operating-system CSPRNG.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Seeded SHA-256 counter-mode generator. Identical seeds give identical streams.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(std::uint64_t seed);
  void fill(std::span<std::uint8_t> out) override;

 private:
  Digest256 key_{};
  std::uint64_t counter_ = 0;
  Digest256 block_{};
  std::size_t used_ = sizeof(Digest256);
};

}  // namespace fdia
