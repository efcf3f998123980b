#include "fdia/idas.hpp"

#include <stdexcept>

namespace fdia::idas {

namespace {

G1Element hash_message(ByteView id, ByteView msg) {
  ByteWriter w;
  w.blob(id);
  w.raw(msg);
  return hash_to_g1(HashDomain::IdasMsg, w.bytes());
}

}  // namespace

Bytes Signature::encode() const {
  ByteWriter w;
  w.raw(u.encode());
  w.raw(v.encode());
  return std::move(w).bytes();
}

Signature Signature::decode(ByteView in) {
  if (in.size() != kSignatureBytes) throw FormatError("signature has wrong length");
  return {G1Element::decode(in.first(kG1Bytes)), G1Element::decode(in.subspan(kG1Bytes))};
}

Bytes AggregateSignature::encode() const {
  ByteWriter w;
  w.raw(v_agg.encode());
  w.u32(static_cast<std::uint32_t>(commitments.size()));
  for (const auto& c : commitments) w.raw(c.encode());
  return std::move(w).bytes();
}

AggregateSignature AggregateSignature::decode(ByteView in) {
  ByteReader r(in);
  AggregateSignature out;
  out.v_agg = G1Element::decode(r.take(kG1Bytes));
  std::uint32_t n = r.u32();
  if (n > r.remaining() / kG1Bytes) throw FormatError("commitment count exceeds input");
  out.commitments.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out.commitments.push_back(G1Element::decode(r.take(kG1Bytes)));
  r.finish();
  return out;
}

std::pair<Params, MasterKey> setup(const GroupContext& ctx, RandomSource& rng) {
  MasterKey msk{Scalar::random_nonzero(rng)};
  Params params{&ctx, ctx.g.pow(msk.z_s)};
  return {params, msk};
}

UserKey keygen(const Params& params, const MasterKey& msk, ByteView id) {
  (void)params;
  if (id.empty()) throw std::invalid_argument("identity must not be empty");
  return {Bytes(id.begin(), id.end()), hash_to_g1(HashDomain::IdasSig, id).pow(msk.z_s)};
}

Signature sign(const Params& params, const UserKey& key, ByteView msg, RandomSource& rng) {
  Scalar t = Scalar::random_nonzero(rng);
  G1Element u = params.ctx->g.pow(t);
  G1Element v = key.sk * hash_message(key.id, msg).pow(t);
  return {u, v};
}

AggregateSignature aggregate(std::span<const Signature> sigs) {
  if (sigs.empty()) throw std::invalid_argument("cannot aggregate an empty signature set");
  AggregateSignature out;
  out.commitments.reserve(sigs.size());
  for (const auto& s : sigs) {
    out.v_agg *= s.v;
    out.commitments.push_back(s.u);
  }
  return out;
}

bool verify(const Params& params, const AggregateSignature& agg, std::span<const Bytes> ids,
            std::span<const Bytes> msgs) {
  if (ids.size() != msgs.size() || ids.size() != agg.commitments.size() || ids.empty()) {
    throw std::invalid_argument("aggregate, identity and message counts differ");
  }
  // e(v_agg, g) * e(prod H_sig(id_j), pk)^-1 * prod e(H_msg_j, u_j)^-1 == 1
  G1Element id_product;
  for (const auto& id : ids) id_product *= hash_to_g1(HashDomain::IdasSig, id);

  std::vector<std::pair<G1Element, G1Element>> pairs;
  pairs.reserve(ids.size() + 2);
  pairs.emplace_back(agg.v_agg, params.ctx->g);
  pairs.emplace_back(id_product.inverse(), params.pk_sign);
  for (std::size_t j = 0; j < ids.size(); ++j) {
    pairs.emplace_back(hash_message(ids[j], msgs[j]).inverse(), agg.commitments[j]);
  }
  return pairing_product(pairs).is_one();
}

bool verify(const Params& params, const Signature& sig, ByteView id, ByteView msg) {
  AggregateSignature agg{sig.v, {sig.u}};
  Bytes ids[] = {Bytes(id.begin(), id.end())};
  Bytes msgs[] = {Bytes(msg.begin(), msg.end())};
  return verify(params, agg, ids, msgs);
}

bool key_is_valid(const Params& params, const UserKey& key) {
  return pairing(key.sk, params.ctx->g) == pairing(hash_to_g1(HashDomain::IdasSig, key.id), params.pk_sign);
}

}  // namespace fdia::idas
