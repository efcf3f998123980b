#include <stdexcept>

#include "fdia/fdia.hpp"

namespace fdia {

namespace {

constexpr std::size_t kMaxId = 1U << 12;
constexpr std::uint32_t kMaxBlocks = 1U << 24;

void header(ByteWriter& w, std::string_view magic) {
  w.raw(magic);
  w.u8(kFormatVersion);
}

void expect_header(ByteReader& r, std::string_view magic) {
  r.expect(magic);
  if (r.u8() != kFormatVersion) throw FormatError(std::string(magic) + ": unsupported version");
}

Scalar read_scalar(ByteReader& r) { return Scalar::from_bytes(r.take(kScalarBytes)); }
G1Element read_g1(ByteReader& r) { return G1Element::decode(r.take(kG1Bytes)); }
idas::Signature read_sig(ByteReader& r) { return idas::Signature::decode(r.take(idas::kSignatureBytes)); }

Bytes read_id(ByteReader& r) {
  Bytes id = r.blob(kMaxId);
  if (id.empty()) throw FormatError("empty identity");
  return id;
}

void write_indices(ByteWriter& w, std::span<const std::uint32_t> indices) {
  w.u32(static_cast<std::uint32_t>(indices.size()));
  for (auto i : indices) w.u32(i);
}

std::vector<std::uint32_t> read_indices(ByteReader& r) {
  std::uint32_t n = r.u32();
  if (n > r.remaining() / 4) throw FormatError("index count exceeds input");
  std::vector<std::uint32_t> out(n);
  for (auto& i : out) i = r.u32();
  for (std::size_t j = 0; j < n; ++j) {
    if (out[j] == 0 || (j > 0 && out[j] <= out[j - 1])) throw FormatError("indices must be 1-based and ascending");
  }
  return out;
}

}  // namespace

Bytes SystemParams::encode() const {
  ByteWriter w;
  header(w, "FDPP");
  w.u8(static_cast<std::uint8_t>(ctx->security_level));
  w.raw(h.encode());
  w.blob(id_star);
  w.u32(m);
  w.raw(idas.pk_sign.encode());
  return std::move(w).bytes();
}

SystemParams SystemParams::decode(ByteView in) {
  ByteReader r(in);
  expect_header(r, "FDPP");
  if (r.u8() != 80) throw FormatError("parameters use an unsupported security level");
  SystemParams p;
  p.ctx = &GroupContext::type_a_80();
  p.h = read_g1(r);
  p.id_star = r.blob(kMaxId);
  p.m = r.u32();
  p.idas = {p.ctx, read_g1(r)};
  r.finish();
  if (p.h.is_identity() || p.m == 0) throw FormatError("degenerate system parameters");
  return p;
}

Bytes MasterKey::encode() const {
  ByteWriter w;
  header(w, "FDMK");
  w.raw(z.to_bytes());
  w.raw(idas.z_s.to_bytes());
  return std::move(w).bytes();
}

MasterKey MasterKey::decode(ByteView in) {
  ByteReader r(in);
  expect_header(r, "FDMK");
  MasterKey k;
  k.z = read_scalar(r);
  k.idas.z_s = read_scalar(r);
  r.finish();
  return k;
}

Bytes AvKey::encode() const {
  ByteWriter w;
  header(w, "FDAK");
  w.blob(id);
  w.raw(sign_key.sk.encode());
  w.raw(s.encode());
  return std::move(w).bytes();
}

AvKey AvKey::decode(ByteView in) {
  ByteReader r(in);
  expect_header(r, "FDAK");
  AvKey k;
  k.id = read_id(r);
  k.sign_key = {k.id, read_g1(r)};
  k.s = read_g1(r);
  r.finish();
  return k;
}

Bytes EsKey::encode() const {
  ByteWriter w;
  header(w, "FDEK");
  w.blob(id);
  w.raw(sign_key.sk.encode());
  return std::move(w).bytes();
}

EsKey EsKey::decode(ByteView in) {
  ByteReader r(in);
  expect_header(r, "FDEK");
  EsKey k;
  k.id = read_id(r);
  k.sign_key = {k.id, read_g1(r)};
  r.finish();
  return k;
}

Bytes TaggedFile::encode_tags() const {
  ByteWriter w;
  header(w, "FDIA");
  w.blob(name);
  w.u32(m());
  w.raw(h_prime.encode());
  w.raw(h_dprime.encode());
  w.raw(sigma_f.encode());
  for (const auto& t : tags) w.raw(t.encode());
  return std::move(w).bytes();
}

TaggedFile TaggedFile::decode_tags(ByteView tag_file, ByteView data) {
  ByteReader r(tag_file);
  expect_header(r, "FDIA");
  TaggedFile f;
  f.name = read_id(r);
  std::uint32_t m = r.u32();
  if (m == 0 || m > kMaxBlocks) throw FormatError("tag file has an invalid block count");
  f.h_prime = read_g1(r);
  f.h_dprime = read_g1(r);
  f.sigma_f = read_sig(r);
  if (r.remaining() != static_cast<std::size_t>(m) * kG1Bytes) throw FormatError("tag count does not match m");
  f.tags.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) f.tags.push_back(read_g1(r));
  try {
    f.blocks = encode_file_blocks(data, m);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("data file does not match the tag file: ") + e.what());
  }
  return f;
}

Bytes Challenge::encode() const {
  ByteWriter w;
  header(w, "FDCH");
  w.u64(nonce);
  w.raw(alpha.encode());
  w.raw(beta.encode());
  w.raw(gamma.encode());
  w.raw(k_prf.to_bytes());
  w.raw(sigma_k.encode());
  w.blob(challenger_id);
  w.blob(owner_id);
  write_indices(w, indices);
  return std::move(w).bytes();
}

Challenge Challenge::decode(ByteView in) {
  ByteReader r(in);
  expect_header(r, "FDCH");
  Challenge ch;
  ch.nonce = r.u64();
  ch.alpha = read_g1(r);
  ch.beta = GtElement::decode(r.take(kGtBytes));
  ch.gamma = read_g1(r);
  ch.k_prf = read_scalar(r);
  ch.sigma_k = read_sig(r);
  ch.challenger_id = read_id(r);
  ch.owner_id = read_id(r);
  ch.indices = read_indices(r);
  if (ch.indices.empty()) throw FormatError("challenge has no indices");
  r.finish();
  return ch;
}

Bytes ChallengeSecret::encode() const {
  ByteWriter w;
  header(w, "FDCS");
  w.u64(nonce);
  w.raw(lambda.to_bytes());
  return std::move(w).bytes();
}

ChallengeSecret ChallengeSecret::decode(ByteView in) {
  ByteReader r(in);
  expect_header(r, "FDCS");
  ChallengeSecret s;
  s.nonce = r.u64();
  s.lambda = read_scalar(r);
  r.finish();
  return s;
}

Bytes encode_cache(const ProofCache& cache) {
  ByteWriter w;
  header(w, "FDPC");
  w.u32(static_cast<std::uint32_t>(cache.size()));
  for (const auto& e : cache) {
    w.blob(e.challenger_id);
    w.raw(e.k_prf.to_bytes());
    w.raw(e.sigma_k.encode());
    w.u32(static_cast<std::uint32_t>(e.terms.size()));
    for (const auto& [i, t] : e.terms) {
      w.u32(i);
      w.raw(t.phi.encode());
      w.raw(t.mu.to_bytes());
    }
  }
  return std::move(w).bytes();
}

ProofCache decode_cache(ByteView in) {
  ByteReader r(in);
  expect_header(r, "FDPC");
  std::uint32_t n = r.u32();
  ProofCache cache;
  for (std::uint32_t j = 0; j < n; ++j) {
    ProofCacheEntry e;
    e.challenger_id = read_id(r);
    e.k_prf = read_scalar(r);
    e.sigma_k = read_sig(r);
    std::uint32_t count = r.u32();
    if (count > r.remaining() / (4 + kG1Bytes + kScalarBytes)) throw FormatError("cache entry count exceeds input");
    for (std::uint32_t c = 0; c < count; ++c) {
      std::uint32_t i = r.u32();
      G1Element phi = read_g1(r);
      Scalar mu = read_scalar(r);
      if (i == 0 || !e.terms.emplace(i, CachedTerm{phi, mu}).second) throw FormatError("bad cached index");
    }
    cache.push_back(std::move(e));
  }
  r.finish();
  return cache;
}

Bytes IntegrityProof::encode() const {
  ByteWriter w;
  w.raw(m_prime.encode());
  w.raw(h_prime.encode());
  w.raw(h_dprime.encode());
  w.raw(sigma_f.encode());
  w.u32(static_cast<std::uint32_t>(reused.size()));
  for (const auto& set : reused) {
    w.blob(set.challenger_id);
    w.raw(set.k_prf.to_bytes());
    w.raw(set.sigma_k.encode());
    write_indices(w, set.indices);
  }
  w.u64(nonce);
  return std::move(w).bytes();
}

IntegrityProof IntegrityProof::decode(ByteView in) {
  ByteReader r(in);
  IntegrityProof p;
  p.m_prime = GtElement::decode(r.take(kGtBytes));
  p.h_prime = read_g1(r);
  p.h_dprime = read_g1(r);
  p.sigma_f = read_sig(r);
  std::uint32_t n = r.u32();
  if (n > r.remaining() / (4 + kScalarBytes + idas::kSignatureBytes)) throw FormatError("reused set count exceeds input");
  for (std::uint32_t j = 0; j < n; ++j) {
    ReusedSet set;
    set.challenger_id = read_id(r);
    set.k_prf = read_scalar(r);
    set.sigma_k = read_sig(r);
    set.indices = read_indices(r);
    p.reused.push_back(std::move(set));
  }
  p.nonce = r.u64();
  r.finish();
  return p;
}

}  // namespace fdia
