#pragma once

// Identity-based aggregate signatures over the Type A group.
//
//   sk_id = H_sig(id)^{z_s}
//   sign:   u = g^t,  v = sk_id * H_msg(id || M)^t
//   agg:    v_agg = prod v_j, commitments = (u_1, ..., u_n)
//   verify: e(v_agg, g) = e(prod H_sig(id_j), pk) * prod e(H_msg(id_j || M_j), u_j)

#include <span>
#include <utility>
#include <vector>

#include "fdia/bytes.hpp"
#include "fdia/group.hpp"
#include "fdia/random.hpp"

namespace fdia::idas {

inline constexpr std::size_t kSignatureBytes = 2 * kG1Bytes;  // l_S

struct Params {
  const GroupContext* ctx = nullptr;
  G1Element pk_sign;
};

struct MasterKey {
  Scalar z_s;
};

struct UserKey {
  Bytes id;
  G1Element sk;
};

struct Signature {
  G1Element u;
  G1Element v;

  Bytes encode() const;
  static Signature decode(ByteView in);
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct AggregateSignature {
  G1Element v_agg;
  std::vector<G1Element> commitments;

  Bytes encode() const;
  static AggregateSignature decode(ByteView in);
};

std::pair<Params, MasterKey> setup(const GroupContext& ctx, RandomSource& rng);
UserKey keygen(const Params& params, const MasterKey& msk, ByteView id);
Signature sign(const Params& params, const UserKey& key, ByteView msg, RandomSource& rng);
AggregateSignature aggregate(std::span<const Signature> sigs);
// ids/msgs are consumed in the same order as the aggregated signatures.
bool verify(const Params& params, const AggregateSignature& agg, std::span<const Bytes> ids,
            std::span<const Bytes> msgs);
bool verify(const Params& params, const Signature& sig, ByteView id, ByteView msg);

// Defining equation of a user key: e(sk, g) = e(H_sig(id), pk_sign).
bool key_is_valid(const Params& params, const UserKey& key);

}  // namespace fdia::idas
