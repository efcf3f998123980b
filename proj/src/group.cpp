#include "fdia/group.hpp"

#include <atomic>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace fdia {

using type_a::Fq;
using type_a::Fq2;
using type_a::Fr;
using type_a::Point;

namespace {

std::atomic<std::uint64_t> g_g1_pow_count{0};

std::string_view domain_tag(HashDomain d) {
  switch (d) {
    case HashDomain::H1:
      return "FDIA-v1/H1";
    case HashDomain::H2:
      return "FDIA-v1/H2";
    case HashDomain::IdasSig:
      return "FDIA-v1/IDAS-sig";
    case HashDomain::IdasMsg:
      return "FDIA-v1/IDAS-msg";
    case HashDomain::Generator:
      return "FDIA-v1/generator";
  }
  throw std::logic_error("unknown hash domain");
}

}  // namespace

Scalar Scalar::random(RandomSource& rng) {
  std::array<std::uint8_t, 16 * Fr::kLimbs> buf{};
  rng.fill(buf);
  return from_wide_bytes(buf);
}

Scalar Scalar::random_nonzero(RandomSource& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

Scalar Scalar::from_bytes(ByteView in) {
  Fr v;
  if (!Fr::from_bytes(in, v)) throw FormatError("non-canonical scalar");
  return Scalar(v);
}

std::array<std::uint8_t, kScalarBytes> Scalar::to_bytes() const {
  std::array<std::uint8_t, kScalarBytes> out{};
  v_.to_bytes(out);
  return out;
}

G1Element G1Element::decode(ByteView in) {
  if (in.size() != kG1Bytes) throw InvalidPoint("G1 encoding has wrong length");
  std::uint8_t tag = in[0];
  auto body = in.subspan(1);
  if (tag == 0x00) {
    for (auto b : body) {
      if (b != 0) throw InvalidPoint("non-canonical identity encoding");
    }
    return identity();
  }
  if (tag != 0x02 && tag != 0x03) throw InvalidPoint("bad G1 prefix byte");
  Fq x;
  if (!Fq::from_bytes(body, x)) throw InvalidPoint("G1 x-coordinate out of range");
  Fq y;
  if (!type_a::sqrt(x.square() * x + x, y)) throw InvalidPoint("x is not on the curve");
  if (type_a::is_odd(y) != (tag == 0x03)) y = -y;
  if (y.is_zero() && tag == 0x03) throw InvalidPoint("non-canonical y parity");
  Point p{x, y, Fq::one()};
  if (!type_a::in_subgroup(p)) throw InvalidPoint("point not in the prime-order subgroup");
  return G1Element(p);
}

std::array<std::uint8_t, kG1Bytes> G1Element::encode() const {
  std::array<std::uint8_t, kG1Bytes> out{};
  if (is_identity()) return out;
  auto a = p_.to_affine();
  out[0] = type_a::is_odd(a.y) ? 0x03 : 0x02;
  a.x.to_bytes(std::span(out).subspan(1));
  return out;
}

G1Element G1Element::pow(const Scalar& e) const {
  g_g1_pow_count.fetch_add(1, std::memory_order_relaxed);
  auto k = e.to_int();
  return G1Element(type_a::scalar_mul(p_, k));
}

GtElement GtElement::decode(ByteView in) {
  if (in.size() != kGtBytes) throw InvalidPoint("Gt encoding has wrong length");
  std::uint8_t tag = in[0];
  if (tag != 0x02 && tag != 0x03) throw InvalidPoint("bad Gt prefix byte");
  Fq a;
  if (!Fq::from_bytes(in.subspan(1), a)) throw InvalidPoint("Gt coordinate out of range");
  // unitary: a^2 + b^2 = 1
  Fq b;
  if (!type_a::sqrt(Fq::one() - a.square(), b)) throw InvalidPoint("not a unitary element");
  if (type_a::is_odd(b) != (tag == 0x03)) b = -b;
  if (b.is_zero() && tag == 0x03) throw InvalidPoint("non-canonical Gt parity");
  Fq2 v{a, b};
  if (!v.pow(Fr::kModulus).is_one()) throw InvalidPoint("Gt element not in the order-r subgroup");
  return GtElement(v);
}

std::array<std::uint8_t, kGtBytes> GtElement::encode() const {
  std::array<std::uint8_t, kGtBytes> out{};
  out[0] = type_a::is_odd(v_.c1) ? 0x03 : 0x02;
  v_.c0.to_bytes(std::span(out).subspan(1));
  return out;
}

const GroupContext& GroupContext::type_a_80() {
  static const GroupContext ctx = [] {
    GroupContext c;
    c.security_level = 80;
    c.g = hash_to_g1(HashDomain::Generator, to_bytes("type-a/512/160"));
    c.e_gg = pairing(c.g, c.g);
    if (c.g.is_identity() || c.e_gg.is_one()) throw std::logic_error("degenerate generator");
    return c;
  }();
  return ctx;
}

GtElement pairing(const G1Element& a, const G1Element& b) {
  return GtElement::from_fq2_unchecked(type_a::pairing(a.affine(), b.affine()));
}

GtElement pairing_product(std::span<const std::pair<G1Element, G1Element>> pairs) {
  std::vector<std::pair<type_a::Affine, type_a::Affine>> affine;
  affine.reserve(pairs.size());
  for (const auto& [a, b] : pairs) affine.emplace_back(a.affine(), b.affine());
  return GtElement::from_fq2_unchecked(type_a::pairing_product(affine));
}

namespace {

Bytes domain_prefix(HashDomain domain) {
  ByteWriter w;
  w.raw(domain_tag(domain));
  w.u8(0);
  return std::move(w).bytes();
}

// Curve point for one counter value, or nothing when x^3 + x is a non-residue.
std::optional<Point> curve_candidate(ByteView prefix, std::uint32_t ctr, ByteView msg) {
  ByteWriter w;
  w.raw(prefix);
  w.u32(ctr);
  w.raw(msg);
  Bytes input = std::move(w).bytes();
  input.push_back(1);
  Digest512 d1 = sha512(input);
  input.back() = 2;
  Digest512 d2 = sha512(input);
  std::array<std::uint8_t, 128> wide{};
  std::copy(d1.begin(), d1.end(), wide.begin());
  std::copy(d2.begin(), d2.end(), wide.begin() + 64);
  Fq x = Fq::from_wide_bytes(wide);
  Fq y;
  if (!type_a::sqrt(x.square() * x + x, y)) return std::nullopt;
  if (type_a::is_odd(y) != ((d1[0] & 1) != 0)) y = -y;
  return Point{x, y, Fq::one()};
}

}  // namespace

G1Element hash_to_g1(HashDomain domain, ByteView msg) {
  Bytes prefix = domain_prefix(domain);
  for (std::uint32_t ctr = 0;; ++ctr) {
    auto c = curve_candidate(prefix, ctr, msg);
    if (!c) continue;
    Point p = type_a::clear_cofactor(*c);
    if (p.is_infinity()) continue;
    return G1Element::from_point_unchecked(p);
  }
}

type_a::Point hash_to_curve_raw(HashDomain domain, ByteView msg) {
  Bytes prefix = domain_prefix(domain);
  for (std::uint32_t ctr = 0;; ++ctr) {
    if (auto c = curve_candidate(prefix, ctr, msg)) return *c;
  }
}

Digest256 hash_gt_to_bytes(const GtElement& x) {
  ByteWriter w;
  w.raw("FDIA-v1/H3");
  w.u8(0);
  w.raw(x.encode());
  return sha256(w.bytes());
}

Scalar prf_eval(const Scalar& key, const Scalar& index) {
  auto k = key.to_bytes();
  auto i = index.to_bytes();
  Digest512 mac = hmac_sha512(k, i);
  return Scalar::from_wide_bytes(ByteView(mac).first(16 * Fr::kLimbs));
}

std::size_t blocks_needed(std::size_t length) { return (length + kBlockBytes - 1) / kBlockBytes; }

std::vector<Scalar> encode_file_blocks(ByteView data, std::size_t m) {
  if (data.empty()) throw std::invalid_argument("cannot encode an empty file");
  if (m == 0) throw std::invalid_argument("block count must be at least 1");
  if (blocks_needed(data.size()) > m) {
    throw std::invalid_argument("file does not fit in the requested number of blocks");
  }
  std::vector<Scalar> out;
  out.reserve(m);
  std::array<std::uint8_t, kScalarBytes> chunk{};
  for (std::size_t i = 0; i < m; ++i) {
    chunk.fill(0);
    std::size_t begin = i * kBlockBytes;
    // chunk occupies the low kBlockBytes bytes; the top byte stays zero
    for (std::size_t j = 0; j < kBlockBytes && begin + j < data.size(); ++j) {
      chunk[kScalarBytes - kBlockBytes + j] = data[begin + j];
    }
    out.push_back(Scalar::from_bytes(chunk));
  }
  return out;
}

Bytes decode_file_blocks(std::span<const Scalar> blocks, std::size_t length) {
  if (length > blocks.size() * kBlockBytes) throw std::invalid_argument("length exceeds block capacity");
  Bytes out;
  out.reserve(blocks.size() * kBlockBytes);
  for (const auto& b : blocks) {
    auto bytes = b.to_bytes();
    out.insert(out.end(), bytes.end() - kBlockBytes, bytes.end());
  }
  out.resize(length);
  return out;
}

namespace instrumentation {
std::uint64_t g1_exponentiations() { return g_g1_pow_count.load(std::memory_order_relaxed); }
}  // namespace instrumentation

}  // namespace fdia
