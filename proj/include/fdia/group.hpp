#pragma once

// Prime-order pairing group, hashing into the group, the PRF, and the
// encoding of raw files into field-element blocks.
//
// Groups are written multiplicatively: `a * b` is the group operation and
// `a.pow(x)` is exponentiation by a Scalar.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fdia/bytes.hpp"
#include "fdia/hash.hpp"
#include "fdia/random.hpp"
#include "fdia/type_a.hpp"

namespace fdia {

inline constexpr std::size_t kScalarBytes = type_a::Fr::kBytes;  // l_Z
inline constexpr std::size_t kG1Bytes = 1 + type_a::Fq::kBytes;  // l_G
inline constexpr std::size_t kGtBytes = 1 + type_a::Fq::kBytes;  // l_G'
inline constexpr std::size_t kH3Bytes = 32;
// Bytes per file block: strictly below the bit length of the group order.
inline constexpr std::size_t kBlockBytes = (type_a::Fr::kBits - 8) / 8;

// A point that fails decoding or the subgroup check.
class InvalidPoint : public FormatError {
 public:
  using FormatError::FormatError;
};

class Scalar {
 public:
  Scalar() = default;

  static Scalar from_u64(std::uint64_t v) { return Scalar(type_a::Fr::from_u64(v)); }
  static Scalar random(RandomSource& rng);
  static Scalar random_nonzero(RandomSource& rng);
  // Canonical fixed-width big-endian; throws FormatError when >= p.
  static Scalar from_bytes(ByteView in);
  // 2x-width big-endian input reduced modulo p.
  static Scalar from_wide_bytes(ByteView in) { return Scalar(type_a::Fr::from_wide_bytes(in)); }

  std::array<std::uint8_t, kScalarBytes> to_bytes() const;
  Limbs<type_a::Fr::kLimbs> to_int() const { return v_.to_int(); }
  bool is_zero() const { return v_.is_zero(); }
  Scalar inverse() const { return Scalar(v_.inverse()); }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(a.v_ + b.v_); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(a.v_ - b.v_); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(a.v_ * b.v_); }
  Scalar operator-() const { return Scalar(-v_); }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }

 private:
  explicit Scalar(const type_a::Fr& v) : v_(v) {}
  type_a::Fr v_;
};

class G1Element {
 public:
  G1Element() : p_(type_a::Point::infinity()) {}

  static G1Element identity() { return G1Element(); }
  // Throws InvalidPoint unless the encoding is canonical and in the subgroup.
  static G1Element decode(ByteView in);
  // Trusted constructor for points already known to lie in the subgroup.
  static G1Element from_point_unchecked(const type_a::Point& p) { return G1Element(p); }

  std::array<std::uint8_t, kG1Bytes> encode() const;
  bool is_identity() const { return p_.is_infinity(); }
  G1Element pow(const Scalar& e) const;
  G1Element inverse() const { return G1Element(p_.neg()); }
  type_a::Affine affine() const { return p_.to_affine(); }
  const type_a::Point& point() const { return p_; }

  friend bool operator==(const G1Element& a, const G1Element& b) { return a.p_ == b.p_; }
  friend bool operator!=(const G1Element& a, const G1Element& b) { return !(a == b); }
  friend G1Element operator*(const G1Element& a, const G1Element& b) { return G1Element(a.p_ + b.p_); }
  G1Element& operator*=(const G1Element& b) { return *this = *this * b; }

 private:
  explicit G1Element(const type_a::Point& p) : p_(p) {}
  type_a::Point p_;
};

class GtElement {
 public:
  GtElement() : v_(type_a::Fq2::one()) {}

  static GtElement one() { return GtElement(); }
  static GtElement decode(ByteView in);
  static GtElement from_fq2_unchecked(const type_a::Fq2& v) { return GtElement(v); }

  std::array<std::uint8_t, kGtBytes> encode() const;
  bool is_one() const { return v_.is_one(); }
  GtElement pow(const Scalar& e) const { return GtElement(v_.pow(e.to_int())); }
  // Elements of the order-r subgroup are unitary, so the inverse is the conjugate.
  GtElement inverse() const { return GtElement(v_.conj()); }
  const type_a::Fq2& value() const { return v_; }

  friend bool operator==(const GtElement& a, const GtElement& b) { return a.v_ == b.v_; }
  friend bool operator!=(const GtElement& a, const GtElement& b) { return !(a == b); }
  friend GtElement operator*(const GtElement& a, const GtElement& b) { return GtElement(a.v_ * b.v_); }
  GtElement& operator*=(const GtElement& b) { return *this = *this * b; }

 private:
  explicit GtElement(const type_a::Fq2& v) : v_(v) {}
  type_a::Fq2 v_;
};

enum class HashDomain { H1, H2, IdasSig, IdasMsg, Generator };

struct GroupContext {
  int security_level = 80;
  G1Element g;
  GtElement e_gg;  // pairing(g, g), cached

  // The single supported parameter set: Type A, |q| = 512, |p| = 160.
  static const GroupContext& type_a_80();
};

GtElement pairing(const G1Element& a, const G1Element& b);
// prod_j e(a_j, b_j) with one shared final exponentiation.
GtElement pairing_product(std::span<const std::pair<G1Element, G1Element>> pairs);

// Try-and-increment hash into the prime-order subgroup, domain-separated by label.
G1Element hash_to_g1(HashDomain domain, ByteView msg);
// The curve point hash_to_g1 would clear, before cofactor multiplication.
// clear_cofactor(hash_to_curve_raw(d, m)) == hash_to_g1(d, m) unless the
// candidate lies in the kernel of the cofactor map (probability about 1/p).
type_a::Point hash_to_curve_raw(HashDomain domain, ByteView msg);
// H3: SHA-256 over the canonical encoding.
Digest256 hash_gt_to_bytes(const GtElement& x);
// HMAC-SHA-512(key, index) reduced modulo p from 384 bits.
Scalar prf_eval(const Scalar& key, const Scalar& index);
inline Scalar prf_eval(const Scalar& key, std::uint32_t index) {
  return prf_eval(key, Scalar::from_u64(index));
}

std::size_t blocks_needed(std::size_t length);
// Splits data into exactly m blocks of kBlockBytes (last one zero-padded).
// Throws std::invalid_argument on empty data, m == 0, or data longer than m blocks.
std::vector<Scalar> encode_file_blocks(ByteView data, std::size_t m);
Bytes decode_file_blocks(std::span<const Scalar> blocks, std::size_t length);

namespace instrumentation {
// Number of G1Element::pow calls made by this process.
std::uint64_t g1_exponentiations();
}  // namespace instrumentation

}  // namespace fdia
