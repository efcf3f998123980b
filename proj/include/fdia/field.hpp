#pragma once

// Fixed-width prime fields in Montgomery representation.
//
// A field is described by a traits type exposing
//   static constexpr std::size_t kLimbs;
//   static constexpr std::array<std::uint64_t, kLimbs> kModulus;   // little-endian limbs
// and every derived constant (R mod p, R^2, R^3, -p^-1 mod 2^64) is computed
// at compile time.

#include <gmp.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace fdia {

using u128 = unsigned __int128;

static_assert(sizeof(mp_limb_t) == sizeof(std::uint64_t), "64-bit GMP limbs required");

template <std::size_t N>
using Limbs = std::array<std::uint64_t, N>;

namespace limbs {

template <std::size_t N>
constexpr bool geq(const Limbs<N>& a, const Limbs<N>& b) {
  for (std::size_t i = N; i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return true;
}

// a -= b, returns borrow
template <std::size_t N>
constexpr std::uint64_t sub_in_place(Limbs<N>& a, const Limbs<N>& b) {
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < N; ++i) {
    u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    a[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1;
  }
  return borrow;
}

// a += b, returns carry
template <std::size_t N>
constexpr std::uint64_t add_in_place(Limbs<N>& a, const Limbs<N>& b) {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < N; ++i) {
    u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    a[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
  return carry;
}

template <std::size_t N>
constexpr bool is_zero(const Limbs<N>& a) {
  for (auto w : a) {
    if (w != 0) return false;
  }
  return true;
}

template <std::size_t N>
constexpr bool bit(const Limbs<N>& a, std::size_t i) {
  return i < 64 * N && ((a[i / 64] >> (i % 64)) & 1) != 0;
}

template <std::size_t N>
constexpr std::size_t bit_length(const Limbs<N>& a) {
  for (std::size_t i = N; i-- > 0;) {
    if (a[i] != 0) {
      std::size_t n = 64;
      while (((a[i] >> (n - 1)) & 1) == 0) --n;
      return i * 64 + n;
    }
  }
  return 0;
}

// (2a) mod p for a < p
template <std::size_t N>
constexpr Limbs<N> double_mod(Limbs<N> a, const Limbs<N>& p) {
  std::uint64_t top = a[N - 1] >> 63;
  for (std::size_t i = N; i-- > 1;) a[i] = (a[i] << 1) | (a[i - 1] >> 63);
  a[0] <<= 1;
  if (top != 0 || geq(a, p)) sub_in_place(a, p);
  return a;
}

// Big-endian bytes -> limbs. The input must fit in N limbs.
template <std::size_t N>
constexpr Limbs<N> from_be_bytes(std::span<const std::uint8_t> in) {
  Limbs<N> out{};
  std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pos = n - 1 - i;  // byte significance
    if (pos / 8 >= N) continue;
    out[pos / 8] |= static_cast<std::uint64_t>(in[i]) << (8 * (pos % 8));
  }
  return out;
}

template <std::size_t N>
void to_be_bytes(const Limbs<N>& a, std::span<std::uint8_t> out) {
  std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pos = n - 1 - i;
    out[i] = pos / 8 < N ? static_cast<std::uint8_t>(a[pos / 8] >> (8 * (pos % 8))) : 0;
  }
}

}  // namespace limbs

template <class Traits>
class MontgomeryField {
 public:
  static constexpr std::size_t kLimbs = Traits::kLimbs;
  using Repr = Limbs<kLimbs>;
  static constexpr Repr kModulus = Traits::kModulus;
  static constexpr std::size_t kBits = limbs::bit_length(kModulus);
  static constexpr std::size_t kBytes = (kBits + 7) / 8;

 private:
  static constexpr std::uint64_t compute_inv() {
    // Newton iteration for p^-1 mod 2^64, then negate.
    std::uint64_t x = 1;
    for (int i = 0; i < 7; ++i) x *= 2 - kModulus[0] * x;
    return ~x + 1;
  }
  static constexpr Repr pow2_mod(std::size_t e) {
    Repr one{};
    one[0] = 1;
    for (std::size_t i = 0; i < e; ++i) one = limbs::double_mod(one, kModulus);
    return one;
  }

 public:
  static constexpr std::uint64_t kInv = compute_inv();
  static constexpr Repr kR = pow2_mod(64 * kLimbs);
  static constexpr Repr kR2 = pow2_mod(128 * kLimbs);
  static constexpr Repr kR3 = pow2_mod(192 * kLimbs);

  constexpr MontgomeryField() = default;

  static constexpr MontgomeryField zero() { return MontgomeryField(); }
  static constexpr MontgomeryField one() { return from_mont(kR); }

  static MontgomeryField from_u64(std::uint64_t v) {
    Repr a{};
    a[0] = v;
    return from_int(a);
  }

  // Any integer < 2^(64N); reduced modulo p.
  static MontgomeryField from_int(const Repr& a) {
    MontgomeryField out;
    mul_raw(out.v_, a, kR2);
    return out;
  }

  // Integer of 2N limbs (hi:lo), reduced modulo p. Used for bias-free
  // mapping of hash output into the field.
  static MontgomeryField from_wide(const Repr& lo, const Repr& hi) {
    MontgomeryField a, b;
    mul_raw(a.v_, lo, kR2);
    mul_raw(b.v_, hi, kR3);
    return a + b;
  }

  static MontgomeryField from_wide_bytes(std::span<const std::uint8_t> in) {
    if (in.size() != 16 * kLimbs) throw std::invalid_argument("wide input has wrong length");
    Repr hi = limbs::from_be_bytes<kLimbs>(in.first(8 * kLimbs));
    Repr lo = limbs::from_be_bytes<kLimbs>(in.subspan(8 * kLimbs));
    return from_wide(lo, hi);
  }

  // Canonical big-endian decoding; returns false when the value is >= p.
  static bool from_bytes(std::span<const std::uint8_t> in, MontgomeryField& out) {
    if (in.size() != kBytes) return false;
    Repr a = limbs::from_be_bytes<kLimbs>(in);
    if (limbs::geq(a, kModulus)) return false;
    out = from_int(a);
    return true;
  }

  void to_bytes(std::span<std::uint8_t> out) const { limbs::to_be_bytes(to_int(), out); }

  Repr to_int() const {
    Repr one{};
    one[0] = 1;
    Repr out;
    mul_raw(out, v_, one);
    return out;
  }

  bool is_zero() const { return limbs::is_zero(v_); }
  bool is_one() const { return v_ == kR; }

  friend bool operator==(const MontgomeryField& a, const MontgomeryField& b) { return a.v_ == b.v_; }
  friend bool operator!=(const MontgomeryField& a, const MontgomeryField& b) { return !(a == b); }

  friend MontgomeryField operator+(MontgomeryField a, const MontgomeryField& b) {
    a += b;
    return a;
  }
  friend MontgomeryField operator-(MontgomeryField a, const MontgomeryField& b) {
    a -= b;
    return a;
  }
  friend MontgomeryField operator*(const MontgomeryField& a, const MontgomeryField& b) {
    MontgomeryField out;
    mul_raw(out.v_, a.v_, b.v_);
    return out;
  }
  MontgomeryField operator-() const {
    if (is_zero()) return *this;
    MontgomeryField out = from_mont(kModulus);
    limbs::sub_in_place(out.v_, v_);
    return out;
  }
  MontgomeryField& operator+=(const MontgomeryField& b) {
    mp_limb_t carry = mpn_add_n(v_.data(), v_.data(), b.v_.data(), kLimbs);
    if (carry != 0 || mpn_cmp(v_.data(), kModulus.data(), kLimbs) >= 0) {
      mpn_sub_n(v_.data(), v_.data(), kModulus.data(), kLimbs);
    }
    return *this;
  }
  MontgomeryField& operator-=(const MontgomeryField& b) {
    if (mpn_sub_n(v_.data(), v_.data(), b.v_.data(), kLimbs) != 0) {
      mpn_add_n(v_.data(), v_.data(), kModulus.data(), kLimbs);
    }
    return *this;
  }
  MontgomeryField& operator*=(const MontgomeryField& b) {
    mul_raw(v_, v_, b.v_);
    return *this;
  }

  MontgomeryField square() const {
    MontgomeryField out;
    mul_raw(out.v_, v_, v_);
    return out;
  }
  MontgomeryField dbl() const { return *this + *this; }

  template <std::size_t M>
  MontgomeryField pow(const Limbs<M>& e) const {
    MontgomeryField acc = one();
    for (std::size_t i = limbs::bit_length(e); i-- > 0;) {
      acc = acc.square();
      if (limbs::bit(e, i)) acc *= *this;
    }
    return acc;
  }

  // Fermat inversion; the inverse of zero is zero.
  MontgomeryField inverse() const {
    Repr e = kModulus;
    e[0] -= 2;  // p is odd and > 2
    return pow(e);
  }

  const Repr& mont_repr() const { return v_; }

 private:
  static constexpr MontgomeryField from_mont(const Repr& v) {
    MontgomeryField out;
    out.v_ = v;
    return out;
  }

  // Montgomery multiplication out = a * b * R^-1 mod p on GMP's mpn layer:
  // full product, then N single-limb reduction steps whose carry-outs are
  // collected and added in one pass. Requires b < p; a may be any N-limb integer.
  [[gnu::always_inline]] static void mul_raw(Repr& out, const Repr& a, const Repr& b) {
    mp_limb_t t[2 * kLimbs];
    if (&a == &b) {
      mpn_sqr(t, a.data(), kLimbs);
    } else {
      mpn_mul_n(t, a.data(), b.data(), kLimbs);
    }
    reduce(out, t);
  }

  [[gnu::always_inline]] static void reduce(Repr& out, mp_limb_t* t) {
    mp_limb_t carries[kLimbs];
    for (std::size_t i = 0; i < kLimbs; ++i) {
      mp_limb_t m = t[i] * kInv;
      carries[i] = mpn_addmul_1(t + i, kModulus.data(), kLimbs, m);
    }
    mp_limb_t hi = mpn_add_n(t + kLimbs, t + kLimbs, carries, kLimbs);
    if (hi != 0 || mpn_cmp(t + kLimbs, kModulus.data(), kLimbs) >= 0) {
      mpn_sub_n(out.data(), t + kLimbs, kModulus.data(), kLimbs);
    } else {
      std::copy(t + kLimbs, t + 2 * kLimbs, out.begin());
    }
  }

  Repr v_{};
};

}  // namespace fdia
