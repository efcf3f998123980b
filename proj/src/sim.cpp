#include "fdia/sim.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fdia::sim {

namespace {

std::string es_name(std::size_t i) { return "es-" + std::to_string(i); }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw std::invalid_argument(key + ": not a number: '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument(key + ": expected true/false, got '" + v + "'");
}

}  // namespace

std::string_view name(AuditMode m) {
  switch (m) {
    case AuditMode::periodic: return "periodic";
    case AuditMode::random: return "random";
    case AuditMode::on_request: return "on_request";
  }
  return "?";
}

AuditMode parse_mode(std::string_view s) {
  if (s == "periodic") return AuditMode::periodic;
  if (s == "random") return AuditMode::random;
  if (s == "on_request" || s == "on-request") return AuditMode::on_request;
  throw std::invalid_argument("mode: expected periodic, random or on_request, got '" + std::string(s) + "'");
}

void SimConfig::validate() const {
  if (es_count < 2) throw std::invalid_argument("es_count must be at least 2");
  if (files < 1) throw std::invalid_argument("files must be at least 1");
  if (file_blocks_min < 1 || file_blocks_min > file_blocks_max) {
    throw std::invalid_argument("file_blocks_min must lie in [1, file_blocks_max]");
  }
  if (challenge_k < 1 || challenge_k > file_blocks_min) {
    throw std::invalid_argument("k must lie in [1, file_blocks_min]");
  }
  if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0)) throw std::invalid_argument("corruption_rate must lie in [0, 1]");
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("rate must lie in [0, 1]");
  if (period < 1) throw std::invalid_argument("period must be at least 1");
  for (auto c : corruptible) {
    if (c >= es_count) throw std::invalid_argument("corruptible: ES index " + std::to_string(c) + " out of range");
  }
}

SimConfig SimConfig::parse(std::string_view text) {
  SimConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + line + "'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string v = trim(std::string_view(line).substr(eq + 1));
    if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "es_count") c.es_count = parse_number<std::uint32_t>(key, v);
    else if (key == "files") c.files = parse_number<std::uint32_t>(key, v);
    else if (key == "file_blocks_min") c.file_blocks_min = parse_number<std::uint32_t>(key, v);
    else if (key == "file_blocks_max") c.file_blocks_max = parse_number<std::uint32_t>(key, v);
    else if (key == "mode") c.mode = parse_mode(v);
    else if (key == "period") c.period = parse_number<std::uint32_t>(key, v);
    else if (key == "rate") c.rate = parse_number<double>(key, v);
    else if (key == "k") c.challenge_k = parse_number<std::uint32_t>(key, v);
    else if (key == "corruption_rate") c.corruption_rate = parse_number<double>(key, v);
    else if (key == "rounds") c.rounds = parse_number<std::uint32_t>(key, v);
    else if (key == "use_proof_cache") c.use_proof_cache = parse_bool(key, v);
    else if (key == "corruptible") {
      c.corruptible.clear();
      std::istringstream list(v);
      std::string item;
      while (std::getline(list, item, ',')) {
        item = trim(item);
        if (!item.empty()) c.corruptible.push_back(parse_number<std::uint32_t>(key, item));
      }
    } else {
      throw std::invalid_argument("unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

std::string AuditEvent::line() const {
  std::ostringstream o;
  o << "round=" << round << " auditor=" << auditor << " audited=" << audited << " file=" << file
    << " verdict=" << (verdict ? 1 : 0) << " detected=" << (detected_corruption ? 1 : 0)
    << " repair=" << (repair_triggered ? 1 : 0);
  return o.str();
}

void SimSummary::write(std::ostream& out) const {
  out << "audits=" << audits << "\n"
      << "accepted=" << accepted << "\n"
      << "rejected=" << rejected << "\n"
      << "corruptions=" << corruptions << "\n"
      << "detections=" << detections << "\n"
      << "false_accepts=" << false_accepts << "\n"
      << "false_rejects=" << false_rejects << "\n"
      << "repairs=" << repairs << "\n"
      << "repair_failures=" << repair_failures << "\n";
  std::vector<std::uint32_t> lat = detection_latency;
  std::sort(lat.begin(), lat.end());
  out << "latency_count=" << lat.size() << "\n";
  if (!lat.empty()) {
    std::uint64_t sum = 0;
    for (auto l : lat) sum += l;
    out << "latency_min=" << lat.front() << "\n"
        << "latency_median=" << lat[(lat.size() - 1) / 2] << "\n"
        << "latency_max=" << lat.back() << "\n"
        << "latency_total=" << sum << "\n";
  }
}

Simulation::Simulation(SimConfig config) : cfg_(std::move(config)), rng_(cfg_.seed) {
  cfg_.validate();
  std::tie(params_, msk_) = setup(80, cfg_.file_blocks_min, rng_);
  av_ = av_keygen(params_, msk_, to_bytes("av"));
  nodes_.resize(cfg_.es_count);
  for (std::size_t i = 0; i < nodes_.size(); ++i) nodes_[i].key = es_keygen(params_, msk_, to_bytes(es_name(i)));

  for (std::uint32_t f = 0; f < cfg_.files; ++f) {
    std::string fname = "file-" + std::to_string(f);
    auto m = static_cast<std::uint32_t>(cfg_.file_blocks_min +
                                        rng_.uniform(cfg_.file_blocks_max - cfg_.file_blocks_min + 1));
    Bytes data(static_cast<std::size_t>(m) * kBlockBytes);
    rng_.fill(data);
    SystemParams p = params_;
    p.m = m;
    TaggedFile tagged = tag_gen(p, av_, to_bytes(fname), data, rng_);
    Bytes tag_file = tagged.encode_tags();
    for (auto& n : nodes_) n.store[fname] = {tag_file, data};
    originals_[fname] = std::move(data);
  }
}

std::vector<std::string> Simulation::file_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : originals_) out.push_back(k);
  return out;
}

std::uint32_t Simulation::blocks(const std::string& file) const {
  auto it = originals_.find(file);
  if (it == originals_.end()) throw std::out_of_range("unknown file " + file);
  return static_cast<std::uint32_t>(it->second.size() / kBlockBytes);
}

bool Simulation::is_corrupted(std::size_t es, const std::string& file) const {
  return nodes_.at(es).store.at(file).data != originals_.at(file);
}

void Simulation::inject_corruption(std::size_t es, const std::string& file, std::uint32_t block) {
  if (es >= nodes_.size()) throw std::out_of_range("unknown ES index");
  auto it = nodes_[es].store.find(file);
  if (it == nodes_[es].store.end()) throw std::out_of_range("ES " + es_name(es) + " holds no file " + file);
  std::uint32_t m = blocks(file);
  if (block < 1 || block > m) throw std::out_of_range("block index outside [1, m]");
  Bytes& data = it->second.data;
  const Bytes& original = originals_.at(file);
  std::size_t base = static_cast<std::size_t>(block - 1) * kBlockBytes;
  auto block_equal = [&] { return std::equal(data.begin() + base, data.begin() + base + kBlockBytes, original.begin() + base); };
  do {
    data[base + rng_.uniform(kBlockBytes)] ^= static_cast<std::uint8_t>(1 + rng_.uniform(255));
  } while (block_equal());
  ++summary_.corruptions;
  corrupted_since_.try_emplace({es, file}, round_);
}

AuditEvent Simulation::audit(std::size_t auditor, std::size_t audited, const std::string& file,
                             std::vector<std::uint32_t> indices, bool allow_repair) {
  Node& ar = nodes_.at(auditor);
  Node& ag = nodes_.at(audited);
  AuditEvent ev;
  ev.round = round_;
  ev.auditor = es_name(auditor);
  ev.audited = es_name(audited);
  ev.file = file;

  std::uint32_t m = blocks(file);
  IssuedChallenge issued =
      indices.empty() ? challenge_gen(params_, ar.key, av_.id, m, cfg_.challenge_k, rng_)
                      : challenge_gen(params_, ar.key, av_.id, std::move(indices), Scalar::random(rng_), rng_);
  Bytes challenge_wire = issued.challenge.encode();

  Bytes proof_wire;
  try {
    Challenge received = Challenge::decode(challenge_wire);
    const Replica& rep = ag.store.at(file);
    TaggedFile local = TaggedFile::decode_tags(rep.tag_file, rep.data);
    ProofCache& cache = ag.caches[file];
    auto result = proof_gen(params_, received, local, cfg_.use_proof_cache ? cache : ProofCache{});
    if (cfg_.use_proof_cache) cache = update_proof(std::move(cache), std::move(result.update));
    proof_wire = result.proof.encode();
  } catch (const std::exception&) {
    proof_wire.clear();  // no answer
  }

  try {
    if (!proof_wire.empty()) {
      IntegrityProof proof = IntegrityProof::decode(proof_wire);
      ev.verdict = proof_check(params_, issued.challenge, issued.secret, proof, to_bytes(file), av_.id) ==
                   CheckStatus::accepted;
    }
  } catch (const FormatError&) {
    ev.verdict = false;
  }

  bool corrupted = is_corrupted(audited, file);
  ++summary_.audits;
  ev.verdict ? ++summary_.accepted : ++summary_.rejected;
  if (corrupted && ev.verdict) ++summary_.false_accepts;
  if (!corrupted && !ev.verdict) ++summary_.false_rejects;
  if (corrupted && !ev.verdict) {
    ev.detected_corruption = true;
    ++summary_.detections;
    auto since = corrupted_since_.find({audited, file});
    if (since != corrupted_since_.end()) summary_.detection_latency.push_back(round_ - since->second);
  }
  if (!ev.verdict) {
    ag.pending_repair.insert(file);
    if (allow_repair) {
      ev.repair_triggered = try_repair(auditor, audited, file);
      ev.repair_triggered ? ++summary_.repairs : ++summary_.repair_failures;
    }
  }
  events_.push_back(ev);
  return ev;
}

bool Simulation::try_repair(std::size_t auditor, std::size_t target, const std::string& file) {
  for (std::size_t src = 0; src < nodes_.size(); ++src) {
    if (src == target) continue;
    const Replica& rep = nodes_[src].store.at(file);
    try {
      TaggedFile source = TaggedFile::decode_tags(rep.tag_file, rep.data);
      repair(params_, to_bytes(file), source, nodes_[auditor].key, av_.id, rng_);
    } catch (const SourceCorrupt&) {
      continue;
    } catch (const FormatError&) {
      continue;
    }
    Node& t = nodes_[target];
    t.store[file] = rep;
    t.caches.erase(file);  // cached terms describe the replaced bytes
    t.pending_repair.erase(file);
    corrupted_since_.erase({target, file});
    return true;
  }
  return false;
}

std::vector<std::pair<std::size_t, std::size_t>> Simulation::schedule() {
  const std::size_t n = nodes_.size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  switch (cfg_.mode) {
    case AuditMode::periodic:
      if (round_ % cfg_.period == 0) {
        // ring rotation: the offset cycles through 1..n-1
        std::size_t shift = 1 + (round_ / cfg_.period - 1) % (n - 1);
        for (std::size_t i = 0; i < n; ++i) out.emplace_back(i, (i + shift) % n);
      }
      break;
    case AuditMode::random:
      for (std::size_t i = 0; i < n; ++i) {
        if (rng_.unit() >= cfg_.rate) continue;
        std::size_t other = rng_.uniform(n - 1);
        out.emplace_back(i, other >= i ? other + 1 : other);
      }
      break;
    case AuditMode::on_request:
      if (rng_.unit() < cfg_.rate) {
        std::size_t target = rng_.uniform(n);
        std::size_t auditor = rng_.uniform(n - 1);
        out.emplace_back(auditor >= target ? auditor + 1 : auditor, target);
      }
      break;
  }
  return out;
}

void Simulation::step() {
  ++round_;
  auto files = file_names();
  std::vector<std::uint32_t> targets = cfg_.corruptible;
  if (targets.empty()) {
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) targets.push_back(i);
  }
  for (auto es : targets) {
    if (cfg_.corruption_rate <= 0.0 || rng_.unit() >= cfg_.corruption_rate) continue;
    const std::string& f = files[rng_.uniform(files.size())];
    inject_corruption(es, f, static_cast<std::uint32_t>(1 + rng_.uniform(blocks(f))));
  }
  for (auto [auditor, audited] : schedule()) {
    const std::string& f = files[rng_.uniform(files.size())];
    audit(auditor, audited, f);
  }
}

SimResult Simulation::run() {
  while (round_ < cfg_.rounds) step();
  return {events_, summary_};
}

SimResult run_simulation(const SimConfig& config) { return Simulation(config).run(); }

void write_events(std::ostream& out, const std::vector<AuditEvent>& events) {
  for (const auto& e : events) out << e.line() << "\n";
}

game::Rational detection_probability_exact(std::uint64_t m, std::uint64_t k, std::uint64_t corrupted) {
  if (k < 1 || k > m) throw std::domain_error("k must lie in [1, m]");
  if (corrupted > m) throw std::domain_error("corrupted blocks exceed m");
  // C(m - c, k) / C(m, k) = prod_{i<k} (m - c - i) / (m - i)
  game::Rational miss = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (m - i <= corrupted) {
      miss = 0;
      break;
    }
    miss *= game::Rational(boost::multiprecision::cpp_int(m - corrupted - i), boost::multiprecision::cpp_int(m - i));
  }
  return 1 - miss;
}

double detection_probability(std::uint64_t m, std::uint64_t k, std::uint64_t corrupted) {
  return static_cast<double>(detection_probability_exact(m, k, corrupted));
}

}  // namespace fdia::sim
