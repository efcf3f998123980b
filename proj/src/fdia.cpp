#include "fdia/fdia.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace fdia {

namespace {

Bytes h2_prefix(ByteView name, const G1Element& h_dprime) {
  ByteWriter w;
  w.blob(name);
  w.raw(h_dprime.encode());
  return std::move(w).bytes();
}

Bytes file_signature_message(const G1Element& h_prime, ByteView name) {
  ByteWriter w;
  w.raw(h_prime.encode());
  w.raw(name);
  return std::move(w).bytes();
}

Bytes key_message(const Scalar& k) {
  auto b = k.to_bytes();
  return Bytes(b.begin(), b.end());
}

bool strictly_ascending(std::span<const std::uint32_t> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::accepted: return "accepted";
    case CheckStatus::nonce_mismatch: return "nonce mismatch";
    case CheckStatus::file_signature: return "file signature invalid";
    case CheckStatus::commitment_binding: return "h'/h'' binding failed";
    case CheckStatus::key_signatures: return "PRF key signatures invalid";
    case CheckStatus::integrity_equation: return "integrity equation failed";
  }
  return "unknown";
}

std::vector<std::uint32_t> ProofCacheEntry::indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(terms.size());
  for (const auto& [i, t] : terms) out.push_back(i);
  return out;
}

std::pair<SystemParams, MasterKey> setup(int security_level, std::uint32_t m, RandomSource& rng) {
  if (security_level != 80) {
    throw UnsupportedLevel("unsupported security level " + std::to_string(security_level) +
                           " (only 80 is available)");
  }
  if (m == 0) throw std::invalid_argument("block count m must be at least 1");
  const GroupContext& ctx = GroupContext::type_a_80();
  auto [idas_params, idas_msk] = idas::setup(ctx, rng);
  MasterKey msk{Scalar::random_nonzero(rng), idas_msk};
  SystemParams params;
  params.ctx = &ctx;
  params.h = ctx.g.pow(msk.z);
  params.id_star.resize(16);
  rng.fill(params.id_star);
  params.m = m;
  params.idas = idas_params;
  return {params, msk};
}

AvKey av_keygen(const SystemParams& params, const MasterKey& msk, ByteView id) {
  if (id.empty()) throw std::invalid_argument("AV identity must not be empty");
  AvKey key;
  key.id.assign(id.begin(), id.end());
  key.sign_key = idas::keygen(params.idas, msk.idas, id);
  key.s = hash_to_g1(HashDomain::H1, id).pow(msk.z);
  return key;
}

EsKey es_keygen(const SystemParams& params, const MasterKey& msk, ByteView id) {
  return {Bytes(id.begin(), id.end()), idas::keygen(params.idas, msk.idas, id)};
}

TaggedFile tag_gen(const SystemParams& params, const AvKey& av, ByteView name, ByteView data,
                   RandomSource& rng, Exec exec) {
  if (name.empty()) throw std::invalid_argument("file name must not be empty");
  std::size_t m = std::max<std::size_t>(params.m, blocks_needed(data.size()));
  TaggedFile f;
  f.name.assign(name.begin(), name.end());
  f.blocks = encode_file_blocks(data, m);
  Scalar r = Scalar::random_nonzero(rng);
  f.h_prime = params.ctx->g.pow(r);
  f.h_dprime = params.h.pow(r);
  f.tags = kernels::tag_blocks(av.s, r, h2_prefix(name, f.h_dprime), f.blocks, exec);
  f.sigma_f = idas::sign(params.idas, av.sign_key, file_signature_message(f.h_prime, name), rng);
  return f;
}

bool verify_tagged_file(const SystemParams& params, const TaggedFile& file, ByteView av_id) {
  const G1Element& g = params.ctx->g;
  if (file.tags.size() != file.blocks.size() || file.tags.empty()) return false;
  if (!idas::verify(params.idas, file.sigma_f, av_id, file_signature_message(file.h_prime, file.name))) {
    return false;
  }
  std::pair<G1Element, G1Element> binding[] = {{file.h_prime, params.h}, {file.h_dprime.inverse(), g}};
  if (!pairing_product(binding).is_one()) return false;
  GtElement lambda_base = pairing(hash_to_g1(HashDomain::H1, av_id), params.h);
  Bytes prefix = h2_prefix(file.name, file.h_dprime);
  for (std::uint32_t i = 1; i <= file.m(); ++i) {
    G1Element h2 = hash_to_g1(HashDomain::H2, kernels::h2_input(prefix, i));
    std::pair<G1Element, G1Element> pairs[] = {{file.tags[i - 1], g}, {h2.inverse(), file.h_prime}};
    if (pairing_product(pairs) != lambda_base.pow(file.blocks[i - 1])) return false;
  }
  return true;
}

std::vector<std::uint32_t> sample_indices(std::uint32_t m, std::uint32_t k, RandomSource& rng) {
  if (k < 1 || k > m) throw std::out_of_range("subset size k must lie in [1, m]");
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k);
  for (std::uint32_t j = m - k + 1; j <= m; ++j) {
    auto t = static_cast<std::uint32_t>(1 + rng.uniform(j));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

IssuedChallenge challenge_gen(const SystemParams& params, const EsKey& auditor, ByteView owner_id,
                              std::uint32_t m, std::uint32_t k, RandomSource& rng) {
  auto indices = sample_indices(m, k, rng);
  return challenge_gen(params, auditor, owner_id, std::move(indices), Scalar::random(rng), rng);
}

IssuedChallenge challenge_gen(const SystemParams& params, const EsKey& auditor, ByteView owner_id,
                              std::vector<std::uint32_t> indices, const Scalar& k_prf, RandomSource& rng) {
  if (indices.empty() || !strictly_ascending(indices)) {
    throw std::invalid_argument("challenge indices must be non-empty, sorted, distinct and 1-based");
  }
  IssuedChallenge out;
  Challenge& ch = out.challenge;
  ch.nonce = rng.next_u64();
  Scalar lambda = Scalar::random_nonzero(rng);
  G1Element h1 = hash_to_g1(HashDomain::H1, owner_id);
  ch.alpha = params.ctx->g.pow(lambda);
  ch.gamma = h1.pow(lambda);
  ch.beta = pairing(h1, params.h).pow(lambda);
  ch.indices = std::move(indices);
  ch.k_prf = k_prf;
  ch.sigma_k = idas::sign(params.idas, auditor.sign_key, key_message(k_prf), rng);
  ch.challenger_id = auditor.id;
  ch.owner_id.assign(owner_id.begin(), owner_id.end());
  out.secret = {ch.nonce, lambda};
  return out;
}

bool verify_challenge(const SystemParams& params, const Challenge& ch) {
  if (ch.indices.empty() || !strictly_ascending(ch.indices)) return false;
  if (ch.alpha.is_identity() || ch.gamma.is_identity() || ch.challenger_id.empty()) return false;
  const G1Element& g = params.ctx->g;
  G1Element h1 = hash_to_g1(HashDomain::H1, ch.owner_id);
  // e(g, gamma) == e(alpha, H1(id))
  std::pair<G1Element, G1Element> dlog[] = {{g, ch.gamma}, {ch.alpha.inverse(), h1}};
  if (!pairing_product(dlog).is_one()) return false;
  if (ch.beta != pairing(ch.gamma, params.h)) return false;
  return idas::verify(params.idas, ch.sigma_k, ch.challenger_id, key_message(ch.k_prf));
}

ProofGenResult proof_gen(const SystemParams& params, const Challenge& ch, const TaggedFile& file,
                         const ProofCache& cache, Exec exec) {
  if (!verify_challenge(params, ch)) throw ChallengeRejected("challenge failed its consistency checks");
  if (ch.indices.back() > file.m()) throw std::out_of_range("challenged index exceeds the file's block count");

  // First-match-wins: each challenged index goes to the lowest cache entry holding it.
  std::vector<std::vector<std::uint32_t>> assigned(cache.size());
  std::vector<std::uint32_t> fresh;
  Scalar mu;
  G1Element phi;
  for (auto i : ch.indices) {
    bool hit = false;
    for (std::size_t j = 0; j < cache.size() && !hit; ++j) {
      auto it = cache[j].terms.find(i);
      if (it == cache[j].terms.end()) continue;
      assigned[j].push_back(i);
      mu += it->second.mu;
      phi *= it->second.phi;
      hit = true;
    }
    if (!hit) fresh.push_back(i);
  }

  ProofGenResult out;
  for (std::size_t j = 0; j < cache.size(); ++j) {
    if (assigned[j].empty()) continue;
    out.proof.reused.push_back({cache[j].challenger_id, cache[j].k_prf, cache[j].sigma_k, std::move(assigned[j])});
  }

  auto terms = kernels::fresh_terms(file.tags, file.blocks, fresh, ch.k_prf, exec);
  out.update.k_prf = ch.k_prf;
  out.update.sigma_k = ch.sigma_k;
  out.update.challenger_id = ch.challenger_id;
  for (const auto& t : terms) {
    mu += t.mu;
    phi *= t.phi;
    out.update.terms.emplace(t.index, CachedTerm{t.phi, t.mu});
  }
  out.fresh_count = terms.size();

  out.proof.m_prime = pairing(phi, ch.alpha) * ch.beta.pow(-mu);
  out.proof.h_prime = file.h_prime;
  out.proof.h_dprime = file.h_dprime;
  out.proof.sigma_f = file.sigma_f;
  out.proof.nonce = ch.nonce;
  return out;
}

ProofCache update_proof(ProofCache cache, ProofCacheEntry update, std::size_t capacity) {
  if (update.terms.empty()) return cache;
  if (capacity == 0) return {};
  while (cache.size() >= capacity) {
    auto victim = std::min_element(cache.begin(), cache.end(), [](const auto& a, const auto& b) {
      return a.terms.size() < b.terms.size();
    });
    cache.erase(victim);
  }
  cache.push_back(std::move(update));
  return cache;
}

CheckStatus proof_check(const SystemParams& params, const Challenge& ch, const ChallengeSecret& secret,
                        const IntegrityProof& proof, ByteView name, ByteView av_id, Exec exec) {
  const std::set<std::uint32_t> challenged(ch.indices.begin(), ch.indices.end());
  std::set<std::uint32_t> covered;
  for (const auto& set : proof.reused) {
    if (set.indices.empty() || !strictly_ascending(set.indices)) {
      throw MalformedProof("reused index set is empty or not strictly ascending");
    }
    if (set.challenger_id.empty()) throw MalformedProof("reused set has an empty challenger identity");
    for (auto i : set.indices) {
      if (!challenged.contains(i)) throw MalformedProof("reused index outside the challenge");
      if (!covered.insert(i).second) throw MalformedProof("reused index sets overlap");
    }
  }

  if (proof.nonce != ch.nonce || secret.nonce != ch.nonce) return CheckStatus::nonce_mismatch;

  if (proof.h_prime.is_identity() ||
      !idas::verify(params.idas, proof.sigma_f, av_id, file_signature_message(proof.h_prime, name))) {
    return CheckStatus::file_signature;
  }

  std::pair<G1Element, G1Element> binding[] = {{proof.h_prime, params.h}, {proof.h_dprime.inverse(), params.ctx->g}};
  if (!pairing_product(binding).is_one()) return CheckStatus::commitment_binding;

  if (!proof.reused.empty()) {
    std::vector<idas::Signature> sigs;
    std::vector<Bytes> ids;
    std::vector<Bytes> keys;
    for (const auto& set : proof.reused) {
      sigs.push_back(set.sigma_k);
      ids.push_back(set.challenger_id);
      keys.push_back(key_message(set.k_prf));
    }
    if (!idas::verify(params.idas, idas::aggregate(sigs), ids, keys)) return CheckStatus::key_signatures;
  }

  std::vector<std::pair<std::uint32_t, Scalar>> terms;
  terms.reserve(ch.indices.size());
  for (const auto& set : proof.reused) {
    for (auto i : set.indices) terms.emplace_back(i, prf_eval(set.k_prf, i));
  }
  for (auto i : ch.indices) {
    if (!covered.contains(i)) terms.emplace_back(i, prf_eval(ch.k_prf, i));
  }
  G1Element x = kernels::hashed_term_product(h2_prefix(name, proof.h_dprime), terms, exec);
  GtElement expected = pairing(x, proof.h_prime.pow(secret.lambda));
  if (hash_gt_to_bytes(proof.m_prime) != hash_gt_to_bytes(expected)) return CheckStatus::integrity_equation;
  return CheckStatus::accepted;
}

TaggedFile repair(const SystemParams& params, ByteView name, const TaggedFile& source, const EsKey& auditor,
                  ByteView av_id, RandomSource& rng) {
  if (!std::equal(name.begin(), name.end(), source.name.begin(), source.name.end())) {
    throw std::invalid_argument("repair source holds a different file");
  }
  auto issued = challenge_gen(params, auditor, av_id, source.m(), source.m(), rng);
  auto result = proof_gen(params, issued.challenge, source, {});
  auto status = proof_check(params, issued.challenge, issued.secret, result.proof, name, av_id);
  if (status != CheckStatus::accepted) throw SourceCorrupt("repair source failed its audit: " + to_string(status));
  return source;
}

}  // namespace fdia
