#pragma once

// Seeded, round-based simulation of one AV and N edge servers that cache
// replicas and audit each other. Every message crosses the real wire codecs.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fdia/fdia.hpp"
#include "fdia/game.hpp"

namespace fdia::sim {

enum class AuditMode { periodic, random, on_request };

std::string_view name(AuditMode m);
AuditMode parse_mode(std::string_view s);

struct SimConfig {
  std::uint64_t seed = 1;
  std::uint32_t es_count = 4;
  std::uint32_t files = 2;
  // File sizes are drawn uniformly in whole blocks; each file's m is its block count.
  std::uint32_t file_blocks_min = 8;
  std::uint32_t file_blocks_max = 16;
  AuditMode mode = AuditMode::random;
  std::uint32_t period = 1;  // periodic: audit every `period` rounds
  double rate = 1.0;         // random: per-ES audit probability; on_request: per-round request probability
  std::uint32_t challenge_k = 4;
  double corruption_rate = 0.0;           // per corruptible ES per round
  std::vector<std::uint32_t> corruptible;  // ES indices; empty means all
  std::uint32_t rounds = 10;
  bool use_proof_cache = false;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  // key=value lines with the field names above; "mode" takes periodic|random|on_request.
  static SimConfig parse(std::string_view text);
};

struct AuditEvent {
  std::uint32_t round = 0;
  std::string auditor;
  std::string audited;
  std::string file;
  bool verdict = false;
  bool detected_corruption = false;
  bool repair_triggered = false;

  // "round=3 auditor=es-0 audited=es-2 file=file-1 verdict=1 detected=0 repair=0"
  std::string line() const;
};

struct SimSummary {
  std::uint64_t audits = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t corruptions = 0;    // injections
  std::uint64_t detections = 0;     // rejections of corrupted replicas
  std::uint64_t false_accepts = 0;  // corrupted replica passed (sampling miss)
  std::uint64_t false_rejects = 0;  // intact replica failed
  std::uint64_t repairs = 0;
  std::uint64_t repair_failures = 0;  // no healthy source found
  std::vector<std::uint32_t> detection_latency;  // rounds from first corruption to detection

  void write(std::ostream& out) const;  // key=value block
};

struct SimResult {
  std::vector<AuditEvent> events;
  SimSummary summary;
};

class Simulation {
 public:
  explicit Simulation(SimConfig config);

  // One scheduled round: corruption injection, audits, repairs.
  void step();
  SimResult run();

  // Alters stored block bytes; the result always differs from the original.
  // Throws std::out_of_range for an unknown file or index.
  void inject_corruption(std::size_t es, const std::string& file, std::uint32_t block);
  // One audit of `audited`'s replica by `auditor`. An empty index list means
  // a random challenge of size challenge_k.
  AuditEvent audit(std::size_t auditor, std::size_t audited, const std::string& file,
                   std::vector<std::uint32_t> indices = {}, bool allow_repair = true);

  bool is_corrupted(std::size_t es, const std::string& file) const;
  std::uint32_t blocks(const std::string& file) const;
  std::vector<std::string> file_names() const;
  std::size_t es_count() const { return nodes_.size(); }
  const std::vector<AuditEvent>& events() const { return events_; }
  const SimSummary& summary() const { return summary_; }
  std::uint32_t round() const { return round_; }

 private:
  struct Replica {
    Bytes tag_file;
    Bytes data;
  };
  struct Node {
    EsKey key;
    std::map<std::string, Replica> store;
    std::map<std::string, ProofCache> caches;
    std::set<std::string> pending_repair;
  };

  std::vector<std::pair<std::size_t, std::size_t>> schedule();
  bool try_repair(std::size_t auditor, std::size_t target, const std::string& file);

  SimConfig cfg_;
  DeterministicRandom rng_;
  SystemParams params_;
  MasterKey msk_;
  AvKey av_;
  std::vector<Node> nodes_;
  std::map<std::string, Bytes> originals_;  // the AV's copy of each file
  std::map<std::pair<std::size_t, std::string>, std::uint32_t> corrupted_since_;
  std::vector<AuditEvent> events_;
  SimSummary summary_;
  std::uint32_t round_ = 0;
};

SimResult run_simulation(const SimConfig& config);
void write_events(std::ostream& out, const std::vector<AuditEvent>& events);

// Probability that a uniform k-subset of [1, m] hits at least one of
// `corrupted` blocks: 1 - C(m - corrupted, k) / C(m, k).
// Throws std::domain_error outside 1 <= k <= m, corrupted <= m.
game::Rational detection_probability_exact(std::uint64_t m, std::uint64_t k, std::uint64_t corrupted);
double detection_probability(std::uint64_t m, std::uint64_t k, std::uint64_t corrupted);

}  // namespace fdia::sim
