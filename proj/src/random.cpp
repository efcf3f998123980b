#include "fdia/random.hpp"

#include <openssl/rand.h>

#include <limits>
#include <stdexcept>

#include "fdia/bytes.hpp"

namespace fdia {

std::uint64_t RandomSource::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform: bound must be positive");
  // rejection sampling on the largest multiple of bound
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

double RandomSource::unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

DeterministicRandom::DeterministicRandom(std::uint64_t seed) {
  ByteWriter w;
  w.raw("fdia-drbg");
  w.u64(seed);
  key_ = sha256(w.bytes());
}

void DeterministicRandom::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size()) {
      ByteWriter w;
      w.raw(key_);
      w.u64(counter_++);
      block_ = sha256(w.bytes());
      used_ = 0;
    }
    b = block_[used_++];
  }
}

}  // namespace fdia
