#pragma once

// Supersingular curve E: y^2 = x^3 + x over F_q, q = 3 (mod 4), 512-bit q.
// #E(F_q) = q + 1 = cofactor * r with r = 2^159 + 2^107 + 1 prime.
// The embedding degree is 2, F_q2 = F_q[i] / (i^2 + 1), and the symmetric
// pairing is the reduced Tate pairing composed with the distortion map
// (x, y) -> (-x, i*y).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "fdia/field.hpp"

namespace fdia::type_a {

struct FqTraits {
  static constexpr std::size_t kLimbs = 8;
  static constexpr Limbs<8> kModulus = {
      0xb935283499bda19fULL, 0xe59b28f820967086ULL, 0xfc16ee34d1b756feULL, 0x04a63cfb943495d8ULL,
      0x720707dd0d2802b0ULL, 0x03d0a2946fe69995ULL, 0xa10eb4d6565bf607ULL, 0x931283caa5e338a4ULL};
};

struct FrTraits {
  static constexpr std::size_t kLimbs = 3;
  static constexpr Limbs<3> kModulus = {0x0000000000000001ULL, 0x0000080000000000ULL,
                                        0x0000000080000000ULL};
};

using Fq = MontgomeryField<FqTraits>;
using Fr = MontgomeryField<FrTraits>;

// (q + 1) / r
inline constexpr Limbs<6> kCofactor = {0xb935283499bda1a0ULL, 0xf88e28f820967086ULL,
                                       0xfbb3e79b2875b230ULL, 0x46c97cf3c65240b9ULL,
                                       0x4bc65ee6f1a414f0ULL, 0x0000000126250795ULL};

// (q + 1) / 4, the square-root exponent for q = 3 (mod 4)
inline constexpr Limbs<8> kSqrtExponent = {
    0xae4d4a0d266f6868ULL, 0xb966ca3e08259c21ULL, 0x3f05bb8d346dd5bfULL, 0x01298f3ee50d2576ULL,
    0x5c81c1f7434a00acULL, 0xc0f428a51bf9a665ULL, 0x2843ad359596fd81ULL, 0x24c4a0f2a978ce29ULL};

bool sqrt(const Fq& a, Fq& out);
bool is_odd(const Fq& a);

struct Fq2 {
  Fq c0;
  Fq c1;

  static Fq2 one() { return {Fq::one(), Fq::zero()}; }

  bool is_one() const { return c0.is_one() && c1.is_zero(); }
  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  Fq2 conj() const { return {c0, -c1}; }
  Fq norm() const { return c0.square() + c1.square(); }
  Fq2 square() const;
  Fq2 inverse() const;

  template <std::size_t M>
  Fq2 pow(const Limbs<M>& e) const;

  friend bool operator==(const Fq2& a, const Fq2& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
  friend bool operator!=(const Fq2& a, const Fq2& b) { return !(a == b); }
  friend Fq2 operator*(const Fq2& a, const Fq2& b);
  Fq2& operator*=(const Fq2& b) { return *this = *this * b; }
};

struct Affine {
  Fq x;
  Fq y;
  bool infinity = true;
};

// Jacobian coordinates: (X, Y, Z) represents (X/Z^2, Y/Z^3); Z = 0 is the point at infinity.
struct Point {
  Fq x;
  Fq y;
  Fq z;

  static Point infinity() { return {Fq::one(), Fq::one(), Fq::zero()}; }
  static Point from_affine(const Affine& a);

  bool is_infinity() const { return z.is_zero(); }
  Affine to_affine() const;
  bool on_curve() const;

  Point dbl() const;
  Point neg() const { return {x, -y, z}; }
  friend Point operator+(const Point& a, const Point& b);
  friend bool operator==(const Point& a, const Point& b);
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

Point scalar_mul(const Point& p, std::span<const std::uint64_t> scalar);
Point clear_cofactor(const Point& p);
bool in_subgroup(const Point& p);

// Miller loop value f_{r,P}(phi(Q)) with vertical lines dropped.
Fq2 miller_loop(const Affine& p, const Affine& q);
Fq2 final_exponentiation(const Fq2& f);

// e(P, Q) for P, Q in the order-r subgroup.
Fq2 pairing(const Affine& p, const Affine& q);
// prod_j e(P_j, Q_j) sharing a single final exponentiation.
Fq2 pairing_product(std::span<const std::pair<Affine, Affine>> pairs);

template <std::size_t M>
Fq2 Fq2::pow(const Limbs<M>& e) const {
  // 4-bit fixed window
  Fq2 table[16];
  table[0] = one();
  for (int i = 1; i < 16; ++i) table[i] = table[i - 1] * *this;
  Fq2 acc = one();
  std::size_t bits = limbs::bit_length(e);
  std::size_t windows = (bits + 3) / 4;
  for (std::size_t w = windows; w-- > 0;) {
    for (int k = 0; k < 4; ++k) acc = acc.square();
    unsigned nib = 0;
    for (int k = 3; k >= 0; --k) nib = (nib << 1) | (limbs::bit(e, w * 4 + k) ? 1U : 0U);
    if (nib != 0) acc *= table[nib];
  }
  return acc;
}

}  // namespace fdia::type_a
