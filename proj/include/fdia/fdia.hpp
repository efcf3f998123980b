#pragma once

// The FDIA auditing protocol: key generation, tagging, challenges, proofs
// with a reusable proof cache, and the challenger-side proof check.
//
//   tags        t_i = s^{f_i} * H2(name || h'' || i)^r,   s = H1(id_AV)^z
//   challenge   alpha = g^l, gamma = H1(id_AV)^l, beta = e(H1(id_AV), h)^l
//   proof       m' = e(phi, alpha) * beta^{-mu}
//   check       H3(m') == H3(e(prod_i H2(name || h'' || i)^{c_i}, h'^l))

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdia/group.hpp"
#include "fdia/idas.hpp"
#include "fdia/kernels.hpp"

namespace fdia {

using kernels::Exec;

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kDefaultCacheCapacity = 64;

// Fixed-size parts of the wire formats.
inline constexpr std::size_t kChallengeGroupBytes = 3 * kG1Bytes + kScalarBytes + idas::kSignatureBytes;
inline constexpr std::size_t kProofGroupBytes = kGtBytes + 2 * kG1Bytes + idas::kSignatureBytes;
// magic, version, name length, m, h', h'', sigma_F
inline constexpr std::size_t kTagFileOverhead = 4 + 1 + 4 + 4 + 2 * kG1Bytes + idas::kSignatureBytes;

class UnsupportedLevel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class ChallengeRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MalformedProof : public FormatError {
 public:
  using FormatError::FormatError;
};
class SourceCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemParams {
  const GroupContext* ctx = nullptr;
  G1Element h;
  Bytes id_star;  // carried opaquely, never used by later algorithms
  std::uint32_t m = 0;
  idas::Params idas;

  Bytes encode() const;
  static SystemParams decode(ByteView in);
};

struct MasterKey {
  Scalar z;
  idas::MasterKey idas;

  Bytes encode() const;
  static MasterKey decode(ByteView in);
};

struct AvKey {
  Bytes id;
  idas::UserKey sign_key;
  G1Element s;

  Bytes encode() const;
  static AvKey decode(ByteView in);
};

struct EsKey {
  Bytes id;
  idas::UserKey sign_key;

  Bytes encode() const;
  static EsKey decode(ByteView in);
};

struct TaggedFile {
  Bytes name;
  std::vector<Scalar> blocks;
  std::vector<G1Element> tags;
  G1Element h_prime;   // g^r
  G1Element h_dprime;  // h^r
  idas::Signature sigma_f;

  std::uint32_t m() const { return static_cast<std::uint32_t>(tags.size()); }
  // Tag file: "FDIA", version, name, m, h', h'', sigma_F, m tags. Blocks travel separately.
  Bytes encode_tags() const;
  static TaggedFile decode_tags(ByteView tag_file, ByteView data);
  friend bool operator==(const TaggedFile&, const TaggedFile&) = default;
};

struct Challenge {
  std::uint64_t nonce = 0;
  G1Element alpha;
  GtElement beta;
  G1Element gamma;
  std::vector<std::uint32_t> indices;  // sorted, distinct, 1-based
  Scalar k_prf;
  idas::Signature sigma_k;
  Bytes challenger_id;
  Bytes owner_id;  // identity whose H1 value defines Lambda

  Bytes encode() const;
  static Challenge decode(ByteView in);
};

// The challenger's private half: lambda never leaves the challenger.
struct ChallengeSecret {
  std::uint64_t nonce = 0;
  Scalar lambda;

  Bytes encode() const;
  static ChallengeSecret decode(ByteView in);
};

struct IssuedChallenge {
  Challenge challenge;
  ChallengeSecret secret;
};

struct CachedTerm {
  G1Element phi;  // t_i^{PRF(k, i)}
  Scalar mu;      // PRF(k, i) * f_i
};

struct ProofCacheEntry {
  Scalar k_prf;
  idas::Signature sigma_k;
  Bytes challenger_id;
  std::map<std::uint32_t, CachedTerm> terms;  // keys form I^(j)

  std::vector<std::uint32_t> indices() const;
};

using ProofCache = std::vector<ProofCacheEntry>;

Bytes encode_cache(const ProofCache& cache);
ProofCache decode_cache(ByteView in);

// One reused set I'^(j) together with the key material the checker needs.
struct ReusedSet {
  Bytes challenger_id;
  Scalar k_prf;
  idas::Signature sigma_k;
  std::vector<std::uint32_t> indices;
};

struct IntegrityProof {
  GtElement m_prime;
  G1Element h_prime;
  G1Element h_dprime;
  idas::Signature sigma_f;
  std::vector<ReusedSet> reused;
  std::uint64_t nonce = 0;

  Bytes encode() const;
  static IntegrityProof decode(ByteView in);
};

struct ProofGenResult {
  IntegrityProof proof;
  ProofCacheEntry update;  // the fresh portion, for update_proof
  std::size_t fresh_count = 0;
};

enum class CheckStatus {
  accepted,
  nonce_mismatch,
  file_signature,      // sigma_F on h' || name_F
  commitment_binding,  // e(h', h) != e(h'', g)
  key_signatures,      // aggregate over the reused sets' sigma_k
  integrity_equation,  // H3(m') mismatch
};

std::string to_string(CheckStatus s);

std::pair<SystemParams, MasterKey> setup(int security_level, std::uint32_t m, RandomSource& rng);
AvKey av_keygen(const SystemParams& params, const MasterKey& msk, ByteView id);
EsKey es_keygen(const SystemParams& params, const MasterKey& msk, ByteView id);

// m is max(params.m, blocks needed for the data).
TaggedFile tag_gen(const SystemParams& params, const AvKey& av, ByteView name, ByteView data,
                   RandomSource& rng, Exec exec = Exec::parallel);
// Full per-tag verification: sigma_F, the h'/h'' binding and every tag equation.
bool verify_tagged_file(const SystemParams& params, const TaggedFile& file, ByteView av_id);

// Uniform k-subset of [1, m] without replacement, sorted (Floyd's algorithm).
std::vector<std::uint32_t> sample_indices(std::uint32_t m, std::uint32_t k, RandomSource& rng);

IssuedChallenge challenge_gen(const SystemParams& params, const EsKey& auditor, ByteView owner_id,
                              std::uint32_t m, std::uint32_t k, RandomSource& rng);
// Same, with a caller-chosen index set and PRF key.
IssuedChallenge challenge_gen(const SystemParams& params, const EsKey& auditor, ByteView owner_id,
                              std::vector<std::uint32_t> indices, const Scalar& k_prf, RandomSource& rng);
bool verify_challenge(const SystemParams& params, const Challenge& ch);

ProofGenResult proof_gen(const SystemParams& params, const Challenge& ch, const TaggedFile& file,
                         const ProofCache& cache, Exec exec = Exec::parallel);
ProofCache update_proof(ProofCache cache, ProofCacheEntry update,
                        std::size_t capacity = kDefaultCacheCapacity);

// Throws MalformedProof when the reused sets are not disjoint, sorted subsets of I.
CheckStatus proof_check(const SystemParams& params, const Challenge& ch, const ChallengeSecret& secret,
                        const IntegrityProof& proof, ByteView name, ByteView av_id,
                        Exec exec = Exec::parallel);

// Audits the source with a full-coverage challenge and returns a copy for
// re-installation. Throws SourceCorrupt if the source fails.
TaggedFile repair(const SystemParams& params, ByteView name, const TaggedFile& source,
                  const EsKey& auditor, ByteView av_id, RandomSource& rng);

}  // namespace fdia
