#include "fdia/fdia.hpp"

#include <set>

#include "doctest.h"
#include "protocol_fixture.hpp"

using namespace fdia;
using fdia::testing::World;

namespace {

std::vector<std::uint32_t> iota(std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint32_t> v;
  for (std::uint32_t i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

template <class T>
Bytes enc(const T& x) {
  return Bytes(x.begin(), x.end());
}

void flip_block(TaggedFile& f, std::uint32_t i, RandomSource& rng) {
  auto b = f.blocks[i - 1].to_bytes();
  b[kScalarBytes - 1 - rng.uniform(kBlockBytes)] ^= static_cast<std::uint8_t>(1 + rng.uniform(255));
  f.blocks[i - 1] = Scalar::from_bytes(b);
}

}  // namespace

TEST_CASE("setup") {
  DeterministicRandom rng(1);
  auto [params, msk] = setup(80, 16, rng);
  const auto& ctx = *params.ctx;
  CHECK(pairing(params.h, ctx.g) == ctx.e_gg.pow(msk.z));
  CHECK_FALSE(params.h.is_identity());

  auto back = SystemParams::decode(params.encode());
  CHECK(back.h == params.h);
  CHECK(back.m == 16);
  CHECK(back.id_star == params.id_star);
  CHECK(back.idas.pk_sign == params.idas.pk_sign);
  auto mk = MasterKey::decode(msk.encode());
  CHECK(mk.z == msk.z);
  CHECK(mk.idas.z_s == msk.idas.z_s);

  CHECK_THROWS_AS(setup(128, 16, rng), UnsupportedLevel);
  CHECK_THROWS_AS(setup(80, 0, rng), std::invalid_argument);

  std::set<Bytes> zs;
  for (int i = 0; i < 100; ++i) zs.insert(enc(setup(80, 4, rng).second.z.to_bytes()));
  CHECK(zs.size() == 100);
}

TEST_CASE("key generation") {
  World w(2);
  SUBCASE("AV key") {
    CHECK(pairing(w.av.s, w.params.ctx->g) == pairing(hash_to_g1(HashDomain::H1, w.av.id), w.params.h));
    CHECK(av_keygen(w.params, w.msk, w.av.id).s == w.av.s);
    CHECK_THROWS_AS(av_keygen(w.params, w.msk, {}), std::invalid_argument);
    std::set<Bytes> seen;
    for (int i = 0; i < 100; ++i) seen.insert(enc(av_keygen(w.params, w.msk, to_bytes("av" + std::to_string(i))).s.encode()));
    CHECK(seen.size() == 100);
    auto back = AvKey::decode(w.av.encode());
    CHECK(back.id == w.av.id);
    CHECK(back.s == w.av.s);
    CHECK(back.sign_key.sk == w.av.sign_key.sk);
  }
  SUBCASE("ES key") {
    const auto& k = w.es[0];
    Bytes probe = to_bytes("probe");
    CHECK(idas::verify(w.params.idas, idas::sign(w.params.idas, k.sign_key, probe, w.rng), k.id, probe));
    CHECK_THROWS_AS(es_keygen(w.params, w.msk, {}), std::invalid_argument);
    std::set<Bytes> seen;
    for (int i = 0; i < 100; ++i) {
      seen.insert(enc(es_keygen(w.params, w.msk, to_bytes("edge" + std::to_string(i))).sign_key.sk.encode()));
    }
    CHECK(seen.size() == 100);
    auto back = EsKey::decode(k.encode());
    CHECK(back.id == k.id);
    CHECK(back.sign_key.sk == k.sign_key.sk);
  }
}

TEST_CASE("tag_gen") {
  World w(3, 4);
  SUBCASE("m = 4 file") {
    auto f = tag_gen(w.params, w.av, to_bytes("four"), w.random_data(4), w.rng);
    CHECK(f.tags.size() == 4);
    CHECK(f.blocks.size() == 4);
    CHECK(verify_tagged_file(w.params, f, w.av.id));
    CHECK(pairing(f.h_prime, w.params.h) == pairing(f.h_dprime, w.params.ctx->g));
    CHECK_FALSE(verify_tagged_file(w.params, f, to_bytes("someone-else")));
  }
  SUBCASE("zero file: the s term vanishes") {
    Bytes zeros(4 * kBlockBytes, 0);
    auto f = tag_gen(w.params, w.av, to_bytes("zeros"), zeros, w.rng);
    ByteWriter prefix;
    prefix.blob(f.name);
    prefix.raw(f.h_dprime.encode());
    for (std::uint32_t i = 1; i <= 4; ++i) {
      G1Element h2 = hash_to_g1(HashDomain::H2, kernels::h2_input(prefix.bytes(), i));
      // t_i = H2(...)^r  <=>  e(t_i, g) = e(H2(...), h')
      CHECK(pairing(f.tags[i - 1], w.params.ctx->g) == pairing(h2, f.h_prime));
    }
  }
  SUBCASE("random file: honest round accepts") {
    auto f = w.random_file(4);
    auto ic = w.challenge(f, 2);
    auto r = proof_gen(w.params, ic.challenge, f, {});
    CHECK(w.check(ic, r.proof, f) == CheckStatus::accepted);
  }
  SUBCASE("the block count grows with the file") {
    auto f = tag_gen(w.params, w.av, to_bytes("big"), Bytes(10 * kBlockBytes + 1, 7), w.rng);
    CHECK(f.m() == 11);
    CHECK(verify_tagged_file(w.params, f, w.av.id));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(tag_gen(w.params, w.av, to_bytes("x"), {}, w.rng), std::invalid_argument);
    CHECK_THROWS_AS(tag_gen(w.params, w.av, {}, to_bytes("data"), w.rng), std::invalid_argument);
  }
  SUBCASE("tag file round trip") {
    Bytes data = w.random_data(4);
    auto f = tag_gen(w.params, w.av, to_bytes("rt"), data, w.rng);
    Bytes tags = f.encode_tags();
    CHECK(tags.size() == 4 * kG1Bytes + kTagFileOverhead + 2);
    CHECK(TaggedFile::decode_tags(tags, data) == f);
    Bytes bad = tags;
    bad[0] = 'X';
    CHECK_THROWS_AS(TaggedFile::decode_tags(bad, data), FormatError);
    CHECK_THROWS_AS(TaggedFile::decode_tags(ByteView(tags).first(tags.size() - 1), data), FormatError);
    CHECK_THROWS_AS(TaggedFile::decode_tags(tags, Bytes(5 * kBlockBytes, 1)), FormatError);
  }
}

TEST_CASE("sample_indices is a uniform k-subset") {
  DeterministicRandom rng(4);
  CHECK(sample_indices(7, 7, rng) == iota(1, 7));
  CHECK_THROWS_AS(sample_indices(7, 0, rng), std::out_of_range);
  CHECK_THROWS_AS(sample_indices(7, 8, rng), std::out_of_range);
  // Each of the C(5,2) = 10 subsets should appear with frequency 1/10.
  std::map<std::vector<std::uint32_t>, int> counts;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto s = sample_indices(5, 2, rng);
    REQUIRE(s.size() == 2);
    REQUIRE(s[0] < s[1]);
    ++counts[s];
  }
  CHECK(counts.size() == 10);
  double chi2 = 0;
  for (const auto& [s, c] : counts) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
  CHECK(chi2 < 27.9);  // chi-square, 9 degrees of freedom, p = 0.001
}

TEST_CASE("challenge_gen and verify_challenge") {
  World w(5, 8);
  auto f = w.random_file(8);
  auto ic = w.challenge(f, 8);
  const Challenge& ch = ic.challenge;
  CHECK(ch.indices == iota(1, 8));
  CHECK(verify_challenge(w.params, ch));
  CHECK(pairing(w.params.ctx->g, ch.gamma) == pairing(ch.alpha, hash_to_g1(HashDomain::H1, w.av.id)));
  CHECK(ch.beta == pairing(ch.gamma, w.params.h));
  CHECK(ch.alpha == w.params.ctx->g.pow(ic.secret.lambda));
  CHECK_THROWS_AS(w.challenge(f, 0), std::out_of_range);
  CHECK_THROWS_AS(w.challenge(f, 9), std::out_of_range);

  SUBCASE("tampering is detected") {
    Challenge bad = ch;
    bad.beta = ch.beta * ch.beta;
    CHECK_FALSE(verify_challenge(w.params, bad));
    bad = ch;
    bad.sigma_k = w.challenge(f, 3).challenge.sigma_k;
    CHECK_FALSE(verify_challenge(w.params, bad));
    bad = ch;
    bad.k_prf = bad.k_prf + Scalar::from_u64(1);
    CHECK_FALSE(verify_challenge(w.params, bad));
    bad = ch;
    bad.gamma = bad.gamma * w.params.ctx->g;
    CHECK_FALSE(verify_challenge(w.params, bad));
    bad = ch;
    bad.alpha = bad.alpha * w.params.ctx->g;
    CHECK_FALSE(verify_challenge(w.params, bad));
    bad = ch;
    bad.challenger_id = w.es[1].id;
    CHECK_FALSE(verify_challenge(w.params, bad));
    bad = ch;
    bad.indices = {2, 1};
    CHECK_FALSE(verify_challenge(w.params, bad));
  }
  SUBCASE("codec") {
    Bytes e1 = ch.encode();
    auto back = Challenge::decode(e1);
    CHECK(back.encode() == e1);
    CHECK(verify_challenge(w.params, back));
    auto small = w.challenge(f, 2).challenge.encode();
    CHECK(e1.size() - small.size() == 6 * 4);
    auto s = ChallengeSecret::decode(ic.secret.encode());
    CHECK(s.lambda == ic.secret.lambda);
    CHECK(s.nonce == ch.nonce);
    CHECK_THROWS_AS(Challenge::decode(ByteView(e1).first(e1.size() - 1)), FormatError);
  }
}

TEST_CASE("proof_gen") {
  World w(6, 16);
  auto f = w.random_file(16);

  SUBCASE("empty cache: m' matches the closed form") {
    auto ic = w.challenge(f, 6);
    auto r = proof_gen(w.params, ic.challenge, f, {});
    CHECK(r.fresh_count == 6);
    CHECK(r.proof.reused.empty());
    CHECK(r.update.indices() == ic.challenge.indices);
    CHECK(r.proof.m_prime == fdia::testing::closed_form(ic.challenge, ic.secret, f, {}));
    for (const auto& [i, t] : r.update.terms) {
      CHECK(t.phi == f.tags[i - 1].pow(prf_eval(ic.challenge.k_prf, i)));
      CHECK(t.mu == prf_eval(ic.challenge.k_prf, i) * f.blocks[i - 1]);
    }
  }
  SUBCASE("full overlap: nothing fresh") {
    auto I = iota(3, 10);
    auto cache = w.cache_covering(f, I);
    auto ic = w.challenge_on(I, Scalar::random(w.rng));
    auto before = instrumentation::g1_exponentiations();
    auto r = proof_gen(w.params, ic.challenge, f, cache);
    CHECK(instrumentation::g1_exponentiations() == before);
    CHECK(r.fresh_count == 0);
    CHECK(r.update.terms.empty());
    REQUIRE(r.proof.reused.size() == 1);
    CHECK(r.proof.reused[0].indices == I);
    CHECK(w.check(ic, r.proof, f) == CheckStatus::accepted);
  }
  SUBCASE("half overlap halves the fresh exponentiations") {
    auto I = iota(1, 12);
    auto cache = w.cache_covering(f, fdia::testing::random_subset(I, 6, w.rng));
    auto ic = w.challenge_on(I, Scalar::random(w.rng));
    auto before = instrumentation::g1_exponentiations();
    auto r = proof_gen(w.params, ic.challenge, f, cache);
    CHECK(instrumentation::g1_exponentiations() - before == 6);
    CHECK(r.fresh_count == 6);
    CHECK(w.check(ic, r.proof, f) == CheckStatus::accepted);
  }
  SUBCASE("overlapping cache entries: first match wins") {
    auto cache = w.cache_covering(f, iota(1, 8), 1);
    cache = w.cache_covering(f, iota(5, 12), 2, cache);
    REQUIRE(cache.size() == 2);
    auto ic = w.challenge_on(iota(1, 14), Scalar::random(w.rng));
    auto r = proof_gen(w.params, ic.challenge, f, cache);
    REQUIRE(r.proof.reused.size() == 2);
    CHECK(r.proof.reused[0].indices == iota(1, 8));
    CHECK(r.proof.reused[1].indices == iota(9, 12));
    CHECK(r.fresh_count == 2);
    CHECK(w.check(ic, r.proof, f) == CheckStatus::accepted);
  }
  SUBCASE("errors") {
    auto ic = w.challenge(f, 3);
    Challenge bad = ic.challenge;
    bad.beta = bad.beta * bad.beta;
    CHECK_THROWS_AS(proof_gen(w.params, bad, f, {}), ChallengeRejected);
    auto wide = w.challenge_on({1, 17}, Scalar::random(w.rng));
    CHECK_THROWS_AS(proof_gen(w.params, wide.challenge, f, {}), std::out_of_range);
  }
  SUBCASE("serial and parallel execution give the same proof") {
    auto ic = w.challenge(f, 7);
    auto a = proof_gen(w.params, ic.challenge, f, {}, Exec::serial);
    auto b = proof_gen(w.params, ic.challenge, f, {}, Exec::parallel);
    CHECK(a.proof.encode() == b.proof.encode());
    CHECK(proof_check(w.params, ic.challenge, ic.secret, a.proof, f.name, w.av.id, Exec::serial) ==
          CheckStatus::accepted);
  }
}

TEST_CASE("update_proof") {
  World w(7, 16);
  auto f = w.random_file(16);
  auto ic = w.challenge(f, 5);
  auto r = proof_gen(w.params, ic.challenge, f, {});

  auto cache = update_proof({}, r.update);
  CHECK(cache.size() == 1);
  CHECK(update_proof(cache, ProofCacheEntry{}).size() == 1);

  // The same challenge again reuses every index.
  auto again = proof_gen(w.params, ic.challenge, f, cache);
  CHECK(again.fresh_count == 0);
  CHECK(w.check(ic, again.proof, f) == CheckStatus::accepted);

  SUBCASE("capacity evicts the smallest entry and keeps the rest untouched") {
    ProofCache c;
    for (std::uint32_t n : {3u, 1u, 2u}) {
      ProofCacheEntry e = r.update;
      while (e.terms.size() > n) e.terms.erase(e.terms.begin());
      c = update_proof(c, e, 3);
    }
    REQUIRE(c.size() == 3);
    ProofCacheEntry big = r.update;
    c = update_proof(c, big, 3);
    REQUIRE(c.size() == 3);
    CHECK(c[0].terms.size() == 3);
    CHECK(c[1].terms.size() == 2);
    CHECK(c[2].terms.size() == 5);
    CHECK(update_proof(c, big, 0).empty());
  }
  SUBCASE("codec") {
    auto back = decode_cache(encode_cache(cache));
    REQUIRE(back.size() == 1);
    CHECK(back[0].indices() == cache[0].indices());
    CHECK(back[0].k_prf == cache[0].k_prf);
    CHECK(encode_cache(back) == encode_cache(cache));
  }
}

TEST_CASE("proof_check") {
  World w(8, 16);
  auto f = w.random_file(16);
  auto ic = w.challenge(f, 6);
  auto r = proof_gen(w.params, ic.challenge, f, {});
  CHECK(w.check(ic, r.proof, f) == CheckStatus::accepted);

  SUBCASE("a flipped challenged block is caught") {
    TaggedFile bad = f;
    flip_block(bad, ic.challenge.indices[2], w.rng);
    auto p = proof_gen(w.params, ic.challenge, bad, {}).proof;
    CHECK(w.check(ic, p, f) == CheckStatus::integrity_equation);
  }
  SUBCASE("sigma_F for a different name is rejected") {
    auto other = tag_gen(w.params, w.av, to_bytes("other"), w.random_data(16), w.rng);
    IntegrityProof p = r.proof;
    p.sigma_f = other.sigma_f;
    CHECK(w.check(ic, p, f) == CheckStatus::file_signature);
    // sigma_F covers h', so swapping h' alone fails at the signature
    p = r.proof;
    p.h_prime = other.h_prime;
    CHECK(w.check(ic, p, f) == CheckStatus::file_signature);
  }
  SUBCASE("h'' substitution breaks the binding") {
    IntegrityProof p = r.proof;
    p.h_dprime = p.h_dprime * w.params.ctx->g;
    CHECK(w.check(ic, p, f) == CheckStatus::commitment_binding);
  }
  SUBCASE("m' and nonce") {
    IntegrityProof p = r.proof;
    p.m_prime = p.m_prime * w.params.ctx->e_gg;
    CHECK(w.check(ic, p, f) == CheckStatus::integrity_equation);
    p = r.proof;
    p.nonce ^= 1;
    CHECK(w.check(ic, p, f) == CheckStatus::nonce_mismatch);
  }
  SUBCASE("reused sets") {
    auto cache = w.cache_covering(f, {ic.challenge.indices[0], ic.challenge.indices[1]});
    auto p = proof_gen(w.params, ic.challenge, f, cache).proof;
    REQUIRE(p.reused.size() == 1);
    CHECK(w.check(ic, p, f) == CheckStatus::accepted);

    IntegrityProof bad = p;
    bad.reused[0].sigma_k = ic.challenge.sigma_k;
    CHECK(w.check(ic, bad, f) == CheckStatus::key_signatures);
    bad = p;
    bad.reused[0].k_prf = ic.challenge.k_prf;
    CHECK(w.check(ic, bad, f) != CheckStatus::accepted);
    bad = p;
    bad.reused.push_back(p.reused[0]);
    CHECK_THROWS_AS(w.check(ic, bad, f), MalformedProof);
    bad = p;
    bad.reused[0].indices = {17};
    CHECK_THROWS_AS(w.check(ic, bad, f), MalformedProof);
  }
  SUBCASE("codec") {
    auto cache = w.cache_covering(f, {ic.challenge.indices[0]});
    auto p = proof_gen(w.params, ic.challenge, f, cache).proof;
    Bytes e = p.encode();
    auto back = IntegrityProof::decode(e);
    CHECK(back.encode() == e);
    CHECK(w.check(ic, back, f) == CheckStatus::accepted);
    CHECK_THROWS_AS(IntegrityProof::decode(ByteView(e).first(e.size() - 1)), FormatError);
  }
}

TEST_CASE("repair") {
  World w(9, 8);
  auto f = w.random_file(8);
  const auto& auditor = w.es[0];

  SUBCASE("repair from a healthy source restores auditability") {
    TaggedFile corrupt = f;
    flip_block(corrupt, 3, w.rng);
    auto ic = w.challenge(corrupt, 8);
    CHECK(w.check(ic, proof_gen(w.params, ic.challenge, corrupt, {}).proof, f) != CheckStatus::accepted);
    TaggedFile fixed = repair(w.params, f.name, f, auditor, w.av.id, w.rng);
    auto ic2 = w.challenge(fixed, 8);
    CHECK(w.check(ic2, proof_gen(w.params, ic2.challenge, fixed, {}).proof, f) == CheckStatus::accepted);
  }
  SUBCASE("a corrupt source is refused") {
    TaggedFile corrupt = f;
    flip_block(corrupt, 8, w.rng);
    CHECK_THROWS_AS(repair(w.params, f.name, corrupt, auditor, w.av.id, w.rng), SourceCorrupt);
  }
  SUBCASE("repairing an intact file is the identity") {
    TaggedFile same = repair(w.params, f.name, f, auditor, w.av.id, w.rng);
    CHECK(same.encode_tags() == f.encode_tags());
    CHECK(same == f);
  }
}

TEST_CASE("completeness across overlap fractions") {
  World w(10, 16);
  for (int trial = 0; trial < 3; ++trial) {
    auto f = w.random_file(16);
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      auto I = sample_indices(16, 8, w.rng);
      auto cached = fdia::testing::random_subset(I, static_cast<std::size_t>(s * 8), w.rng);
      auto cache = w.cache_covering(f, cached);
      auto ic = w.challenge_on(I, Scalar::random(w.rng));
      auto r = proof_gen(w.params, ic.challenge, f, cache);
      CHECK(r.fresh_count == 8 - cached.size());
      REQUIRE(w.check(ic, r.proof, f) == CheckStatus::accepted);
    }
  }
}

TEST_CASE("soundness smoke: single-element tampering always rejects") {
  World w(11, 8);
  auto f = w.random_file(8);
  int rejected = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    auto ic = w.challenge(f, 1 + static_cast<std::uint32_t>(w.rng.uniform(8)));
    const auto& I = ic.challenge.indices;
    std::uint32_t i = I[w.rng.uniform(I.size())];
    TaggedFile bad = f;
    IntegrityProof p;
    switch (trial % 5) {
      case 0:
        flip_block(bad, i, w.rng);
        p = proof_gen(w.params, ic.challenge, bad, {}).proof;
        break;
      case 1:
        bad.tags[i - 1] = bad.tags[i - 1] * w.params.ctx->g;
        p = proof_gen(w.params, ic.challenge, bad, {}).proof;
        break;
      case 2:
        p = proof_gen(w.params, ic.challenge, f, {}).proof;
        p.h_prime = p.h_prime * w.params.ctx->g;
        break;
      case 3:
        p = proof_gen(w.params, ic.challenge, f, {}).proof;
        p.h_dprime = p.h_dprime * w.params.ctx->g;
        break;
      default:
        p = proof_gen(w.params, ic.challenge, f, {}).proof;
        p.sigma_f.v = p.sigma_f.v * w.params.ctx->g;
        break;
    }
    if (w.check(ic, p, f) != CheckStatus::accepted) ++rejected;
  }
  CHECK(rejected == trials);
}

TEST_CASE("cache equivalence") {
  World w(12, 16);
  for (int trial = 0; trial < 6; ++trial) {
    auto f = w.random_file(16);
    auto I = sample_indices(16, 1 + static_cast<std::uint32_t>(w.rng.uniform(16)), w.rng);
    Scalar k = Scalar::random(w.rng);
    auto ic = w.challenge_on(I, k);
    // Split I into up to three parts, each cached by an earlier challenge under the same key.
    ProofCache cache;
    std::vector<std::uint32_t> rest = I;
    for (int part = 0; part < 3 && !rest.empty(); ++part) {
      auto piece = fdia::testing::random_subset(rest, 1 + w.rng.uniform(rest.size()), w.rng);
      auto earlier = w.challenge_on(piece, k, 1 + part % 2);
      cache = update_proof(cache, proof_gen(w.params, earlier.challenge, f, cache).update);
      std::vector<std::uint32_t> left;
      std::set_difference(rest.begin(), rest.end(), piece.begin(), piece.end(), std::back_inserter(left));
      rest = left;
    }
    auto with = proof_gen(w.params, ic.challenge, f, cache).proof.m_prime;
    auto without = proof_gen(w.params, ic.challenge, f, {}).proof.m_prime;
    CHECK(with == without);
  }
}

TEST_CASE("payload sizes do not depend on |I|") {
  World w(13, 32);
  auto f = w.random_file(32);
  for (std::uint32_t k : {1u, 8u, 32u}) {
    auto ic = w.challenge(f, k);
    CHECK(ic.challenge.encode().size() - 4 * k ==
          5 + 8 + kChallengeGroupBytes + 8 + ic.challenge.challenger_id.size() + ic.challenge.owner_id.size() + 4);
    auto p = proof_gen(w.params, ic.challenge, f, {}).proof;
    CHECK(p.encode().size() == kProofGroupBytes + 4 + 8);
  }
  CHECK(kChallengeGroupBytes == 345);
  CHECK(kProofGroupBytes == 325);
  CHECK(f.encode_tags().size() == 32 * kG1Bytes + kTagFileOverhead + f.name.size());
}
