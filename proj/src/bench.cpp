#include "fdia/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fdia::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t median(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Bytes random_data(std::uint32_t m, RandomSource& rng) {
  Bytes d(static_cast<std::size_t>(m) * kBlockBytes);
  rng.fill(d);
  return d;
}

std::string format_overlap(double s) {
  std::ostringstream o;
  o << std::setprecision(6) << s;
  return o.str();
}

}  // namespace

void BenchPlan::validate() const {
  if (reps < 30) throw std::invalid_argument("reps must be at least 30");
  if (tag_m.empty() || i_sizes.empty() || overlaps.empty()) throw std::invalid_argument("empty parameter grid");
  for (double s : overlaps) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("overlap outside [0, 1]");
  }
  for (auto m : tag_m) {
    if (m == 0) throw std::invalid_argument("tag_m entries must be positive");
  }
  for (auto i : i_sizes) {
    if (i == 0) throw std::invalid_argument("I_size entries must be positive");
  }
  if (overlap_i_size == 0) throw std::invalid_argument("overlap_i_size must be positive");
}

std::vector<std::int64_t> interleaved_medians(const std::vector<std::function<void()>>& jobs,
                                              std::uint32_t reps, std::uint32_t warmup) {
  std::vector<std::vector<std::int64_t>> times(jobs.size());
  for (std::uint32_t rep = 0; rep < warmup + reps; ++rep) {
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      auto t0 = Clock::now();
      jobs[j]();
      auto dt = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
      if (rep >= warmup) times[j].push_back(dt);
    }
  }
  std::vector<std::int64_t> out;
  for (auto& t : times) out.push_back(median(std::move(t)));
  return out;
}

ProofCache overlap_cache(const SystemParams& params, const TaggedFile& file, const Challenge& ch,
                         double overlap, const EsKey& auditor, ByteView owner_id, RandomSource& rng) {
  auto count = static_cast<std::size_t>(std::floor(overlap * static_cast<double>(ch.indices.size())));
  if (count == 0) return {};
  std::vector<std::uint32_t> picked;
  for (auto pos : sample_indices(static_cast<std::uint32_t>(ch.indices.size()), static_cast<std::uint32_t>(count), rng)) {
    picked.push_back(ch.indices[pos - 1]);
  }
  auto prior = challenge_gen(params, auditor, owner_id, std::move(picked), ch.k_prf, rng);
  auto result = proof_gen(params, prior.challenge, file, {}, Exec::serial);
  return update_proof({}, std::move(result.update));
}

std::vector<BenchRecord> bench_suite(const BenchPlan& plan) {
  plan.validate();
  DeterministicRandom rng(plan.seed);
  auto [params, msk] = setup(80, 1, rng);
  AvKey av = av_keygen(params, msk, to_bytes("av-bench"));
  EsKey es = es_keygen(params, msk, to_bytes("es-bench"));
  std::vector<BenchRecord> out;

  // tag_gen vs m
  {
    std::vector<Bytes> data;
    std::vector<std::function<void()>> jobs;
    std::vector<std::uint64_t> sizes;
    for (auto m : plan.tag_m) data.push_back(random_data(m, rng));
    for (std::size_t j = 0; j < plan.tag_m.size(); ++j) {
      SystemParams p = params;
      p.m = plan.tag_m[j];
      sizes.push_back(tag_gen(p, av, to_bytes("bench"), data[j], rng, Exec::serial).encode_tags().size());
      jobs.push_back([&, p, j] { tag_gen(p, av, to_bytes("bench"), data[j], rng, Exec::serial); });
    }
    auto med = interleaved_medians(jobs, plan.reps, plan.warmup);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      out.push_back({"tag_gen", plan.tag_m[j], 0, 0.0, 1, med[j], sizes[j]});
    }
  }

  std::uint32_t file_m = std::max(*std::max_element(plan.i_sizes.begin(), plan.i_sizes.end()), plan.overlap_i_size);
  SystemParams fp = params;
  fp.m = file_m;
  TaggedFile file = tag_gen(fp, av, to_bytes("bench-file"), random_data(file_m, rng), rng);

  // challenge_gen and proof_check vs |I|
  {
    std::vector<IssuedChallenge> issued;
    std::vector<IntegrityProof> proofs;
    for (auto i : plan.i_sizes) {
      issued.push_back(challenge_gen(params, es, av.id, file_m, i, rng));
      proofs.push_back(proof_gen(params, issued.back().challenge, file, {}, Exec::serial).proof);
    }
    std::vector<std::function<void()>> gen_jobs, check_jobs;
    for (std::size_t j = 0; j < plan.i_sizes.size(); ++j) {
      gen_jobs.push_back([&, j] { challenge_gen(params, es, av.id, file_m, plan.i_sizes[j], rng); });
      check_jobs.push_back([&, j] {
        proof_check(params, issued[j].challenge, issued[j].secret, proofs[j], file.name, av.id, Exec::serial);
      });
    }
    auto gen = interleaved_medians(gen_jobs, plan.reps, plan.warmup);
    auto check = interleaved_medians(check_jobs, plan.reps, plan.warmup);
    for (std::size_t j = 0; j < plan.i_sizes.size(); ++j) {
      out.push_back({"challenge_gen", file_m, plan.i_sizes[j], 0.0, 1, gen[j], issued[j].challenge.encode().size()});
    }
    for (std::size_t j = 0; j < plan.i_sizes.size(); ++j) {
      out.push_back({"proof_check", file_m, plan.i_sizes[j], 0.0, 1, check[j], proofs[j].encode().size()});
    }
  }

  // proof_gen vs overlap on one challenge
  {
    auto ch = challenge_gen(params, es, av.id, file_m, plan.overlap_i_size, rng).challenge;
    std::vector<ProofCache> caches;
    std::vector<std::uint64_t> sizes;
    for (double s : plan.overlaps) {
      caches.push_back(overlap_cache(params, file, ch, s, es, av.id, rng));
      sizes.push_back(proof_gen(params, ch, file, caches.back(), Exec::serial).proof.encode().size());
    }
    std::vector<std::function<void()>> jobs;
    for (std::size_t j = 0; j < caches.size(); ++j) {
      jobs.push_back([&, j] { proof_gen(params, ch, file, caches[j], Exec::serial); });
    }
    auto med = interleaved_medians(jobs, plan.reps, plan.warmup);
    for (std::size_t j = 0; j < caches.size(); ++j) {
      out.push_back({"proof_gen", file_m, plan.overlap_i_size, plan.overlaps[j], 1, med[j], sizes[j]});
    }
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << r.operation << "," << r.m << "," << r.i_size << "," << format_overlap(r.overlap) << "," << r.n << ","
        << r.median_ns << "," << r.payload_bytes << "\n";
  }
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw FormatError("CSV header mismatch");
  std::vector<BenchRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw FormatError("CSV row has " + std::to_string(f.size()) + " fields: " + line);
    try {
      std::size_t used = 0;
      auto whole = [&](const std::string& s, auto parse) {
        auto v = parse(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      BenchRecord r;
      r.operation = f[0];
      r.m = static_cast<std::uint32_t>(whole(f[1], [](const std::string& s, std::size_t* u) { return std::stoul(s, u); }));
      r.i_size = static_cast<std::uint32_t>(whole(f[2], [](const std::string& s, std::size_t* u) { return std::stoul(s, u); }));
      r.overlap = whole(f[3], [](const std::string& s, std::size_t* u) { return std::stod(s, u); });
      r.n = static_cast<std::uint32_t>(whole(f[4], [](const std::string& s, std::size_t* u) { return std::stoul(s, u); }));
      r.median_ns = whole(f[5], [](const std::string& s, std::size_t* u) { return std::stoll(s, u); });
      r.payload_bytes = whole(f[6], [](const std::string& s, std::size_t* u) { return std::stoull(s, u); });
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw FormatError("malformed CSV row: " + line);
    }
  }
  return out;
}

std::uint64_t tag_group_payload(std::uint32_t m) {
  return static_cast<std::uint64_t>(m) * kG1Bytes + 2 * kG1Bytes + idas::kSignatureBytes;
}

std::uint64_t predicted_tag_file_bytes(std::uint32_t m, std::size_t name_len) {
  return static_cast<std::uint64_t>(m) * kG1Bytes + kTagFileOverhead + name_len;
}

std::uint64_t predicted_challenge_bytes(std::size_t i_size, std::size_t challenger_len, std::size_t owner_len) {
  // magic + version, nonce, group payload, two id blobs, index list
  return 5 + 8 + kChallengeGroupBytes + (4 + challenger_len) + (4 + owner_len) + 4 + 4 * i_size;
}

std::uint64_t predicted_proof_bytes(const IntegrityProof& proof) {
  std::uint64_t n = kProofGroupBytes + 4 + 8;
  for (const auto& set : proof.reused) {
    n += 4 + set.challenger_id.size() + kScalarBytes + idas::kSignatureBytes + 4 + 4 * set.indices.size();
  }
  return n;
}

std::vector<SizeRow> size_report(const std::vector<std::uint32_t>& ms, const std::vector<std::uint32_t>& i_sizes,
                                 std::uint64_t seed) {
  DeterministicRandom rng(seed);
  auto [params, msk] = setup(80, 1, rng);
  AvKey av = av_keygen(params, msk, to_bytes("av-size"));
  EsKey es = es_keygen(params, msk, to_bytes("es-size"));
  const Bytes name = to_bytes("size-report");
  std::vector<SizeRow> rows;
  for (auto m : ms) {
    SystemParams p = params;
    p.m = m;
    auto f = tag_gen(p, av, name, random_data(m, rng), rng);
    rows.push_back({"tag_file", m, 0, f.encode_tags().size(), predicted_tag_file_bytes(m, name.size()), tag_group_payload(m)});
  }
  std::uint32_t file_m = std::max(1u, i_sizes.empty() ? 1u : *std::max_element(i_sizes.begin(), i_sizes.end()));
  SystemParams p = params;
  p.m = file_m;
  auto file = tag_gen(p, av, name, random_data(file_m, rng), rng);
  for (auto i : i_sizes) {
    auto ic = challenge_gen(params, es, av.id, file_m, i, rng);
    rows.push_back({"challenge", file_m, i, ic.challenge.encode().size(),
                    predicted_challenge_bytes(i, es.id.size(), av.id.size()), kChallengeGroupBytes});
    auto proof = proof_gen(params, ic.challenge, file, {}).proof;
    rows.push_back({"proof", file_m, i, proof.encode().size(), predicted_proof_bytes(proof), kProofGroupBytes});
  }
  return rows;
}

void write_size_report(std::ostream& out, const std::vector<SizeRow>& rows) {
  out << "artifact,m,I_size,measured_bytes,predicted_bytes,group_payload_bytes,match\n";
  for (const auto& r : rows) {
    out << r.artifact << "," << r.m << "," << r.i_size << "," << r.measured << "," << r.predicted << ","
        << r.group_payload << "," << (r.matches() ? "yes" : "DEVIATION") << "\n";
  }
}

}  // namespace fdia::bench
