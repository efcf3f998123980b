#pragma once

// Benchmark harness and artifact size report. Timings are medians over
// interleaved repetitions; nothing here asserts absolute times.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdia/fdia.hpp"

namespace fdia::bench {

struct BenchRecord {
  std::string operation;
  std::uint32_t m = 0;
  std::uint32_t i_size = 0;
  double overlap = 0.0;
  std::uint32_t n = 1;  // files involved
  std::int64_t median_ns = 0;
  std::uint64_t payload_bytes = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchPlan {
  std::vector<std::uint32_t> tag_m = {16, 32, 64};
  std::vector<std::uint32_t> i_sizes = {200, 400, 600, 800};
  std::vector<double> overlaps = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::uint32_t overlap_i_size = 400;
  std::uint32_t reps = 30;
  std::uint32_t warmup = 2;
  std::uint64_t seed = 1;

  void validate() const;  // reps >= 30, non-empty grids, overlaps in [0, 1]
};

// Runs every job round-robin `warmup + reps` times and returns the median of
// the last `reps` wall times per job, in nanoseconds.
std::vector<std::int64_t> interleaved_medians(const std::vector<std::function<void()>>& jobs,
                                              std::uint32_t reps, std::uint32_t warmup);

// A proof cache over floor(s * |I|) of the challenge's indices, built with the
// challenge's own PRF key so the reused terms match a fresh computation.
ProofCache overlap_cache(const SystemParams& params, const TaggedFile& file, const Challenge& ch,
                         double overlap, const EsKey& auditor, ByteView owner_id, RandomSource& rng);

std::vector<BenchRecord> bench_suite(const BenchPlan& plan);

inline constexpr const char* kCsvHeader = "operation,m,I_size,overlap,N,median_ns,payload_bytes";
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
// Throws FormatError on a wrong header or malformed row.
std::vector<BenchRecord> parse_csv(std::string_view text);

struct SizeRow {
  std::string artifact;  // tag_file, challenge, proof
  std::uint32_t m = 0;
  std::uint32_t i_size = 0;
  std::uint64_t measured = 0;
  std::uint64_t predicted = 0;
  std::uint64_t group_payload = 0;  // group elements, scalars and signatures only
  bool matches() const { return measured == predicted; }
};

// Closed forms for the serialized artifacts.
std::uint64_t predicted_tag_file_bytes(std::uint32_t m, std::size_t name_len);
std::uint64_t predicted_challenge_bytes(std::size_t i_size, std::size_t challenger_len, std::size_t owner_len);
std::uint64_t predicted_proof_bytes(const IntegrityProof& proof);
// Group-element payload of a tag file: m tags, h', h'', sigma_F.
std::uint64_t tag_group_payload(std::uint32_t m);

// Serializes real artifacts for each m and |I| and compares them to the closed forms.
std::vector<SizeRow> size_report(const std::vector<std::uint32_t>& ms, const std::vector<std::uint32_t>& i_sizes,
                                 std::uint64_t seed);
void write_size_report(std::ostream& out, const std::vector<SizeRow>& rows);

}  // namespace fdia::bench
