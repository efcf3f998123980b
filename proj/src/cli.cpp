#include "fdia/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>

#include "fdia/bench.hpp"
#include "fdia/fdia.hpp"
#include "fdia/game.hpp"
#include "fdia/sim.hpp"

namespace fdia::cli {

namespace {

// Bad paths, bad flag values: exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// The artifact checked out as invalid: exit 1.
class Rejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Bytes read_file(const std::string& path, const std::string& flag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(flag + ": cannot read '" + path + "'");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text(const std::string& path, const std::string& flag) {
  Bytes b = read_file(path, flag);
  return std::string(b.begin(), b.end());
}

void write_file(const std::string& path, ByteView data, const std::string& flag) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError(flag + ": cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw UsageError(flag + ": write failed for '" + path + "'");
}

void write_text(const std::string& path, const std::string& text, const std::string& flag) {
  write_file(path, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), flag);
}

struct Seed {
  std::optional<std::uint64_t> flag;

  std::optional<std::uint64_t> resolve() const {
    if (flag) return flag;
    const char* env = std::getenv("FDIA_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::logic_error&) {
    }
    throw UsageError("FDIA_SEED: not an unsigned integer: '" + std::string(env) + "'");
  }

  std::unique_ptr<RandomSource> rng() const {
    if (auto s = resolve()) return std::make_unique<DeterministicRandom>(*s);
    return std::make_unique<SystemRandom>();
  }
};

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralized integrity auditing for edge replicas", "fdia"};
  app.require_subcommand(1);
  app.fallthrough();
  Seed seed;
  app.add_option("--seed", seed.flag, "deterministic seed (overrides FDIA_SEED)");

  std::function<int()> action;

  // setup
  auto* setup_cmd = app.add_subcommand("setup", "generate system parameters and the master key");
  int level = 80;
  std::uint32_t setup_m = 0;
  std::string params_out, master_out;
  setup_cmd->add_option("--level", level, "security level in bits")->capture_default_str();
  setup_cmd->add_option("--m", setup_m, "default block count")->required();
  setup_cmd->add_option("--params-out", params_out)->required();
  setup_cmd->add_option("--master-out", master_out)->required();
  setup_cmd->callback([&] {
    action = [&] {
      auto rng = seed.rng();
      std::pair<SystemParams, MasterKey> pm;
      try {
        pm = setup(level, setup_m, *rng);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(level != 80 ? "--level: " : "--m: ") + e.what());
      }
      write_file(params_out, pm.first.encode(), "--params-out");
      write_file(master_out, pm.second.encode(), "--master-out");
      return kOk;
    };
  });

  // keygen-av / keygen-es
  std::string params_in, master_in, key_id, key_out;
  for (auto* kind : {"keygen-av", "keygen-es"}) {
    auto* cmd = app.add_subcommand(kind, std::string("derive ") + (kind[7] == 'a' ? "the AV" : "an ES") + " key");
    cmd->add_option("--params", params_in)->required();
    cmd->add_option("--master", master_in)->required();
    cmd->add_option("--id", key_id)->required();
    cmd->add_option("--out", key_out)->required();
    bool is_av = kind[7] == 'a';
    cmd->callback([&, is_av] {
      action = [&, is_av] {
        auto params = SystemParams::decode(read_file(params_in, "--params"));
        auto msk = MasterKey::decode(read_file(master_in, "--master"));
        if (key_id.empty()) throw UsageError("--id: must not be empty");
        Bytes enc = is_av ? av_keygen(params, msk, to_bytes(key_id)).encode()
                          : es_keygen(params, msk, to_bytes(key_id)).encode();
        write_file(key_out, enc, "--out");
        return kOk;
      };
    });
  }

  // tag
  auto* tag_cmd = app.add_subcommand("tag", "tag a file for outsourcing");
  std::string av_key_in, data_in, file_name, tags_out;
  tag_cmd->add_option("--params", params_in)->required();
  tag_cmd->add_option("--av-key", av_key_in)->required();
  tag_cmd->add_option("--in", data_in, "file contents")->required();
  tag_cmd->add_option("--name", file_name, "file name (default: basename of --in)");
  tag_cmd->add_option("--out", tags_out, "tag file")->required();
  tag_cmd->callback([&] {
    action = [&] {
      auto rng = seed.rng();
      auto params = SystemParams::decode(read_file(params_in, "--params"));
      auto av = AvKey::decode(read_file(av_key_in, "--av-key"));
      Bytes data = read_file(data_in, "--in");
      std::string name = file_name.empty() ? std::filesystem::path(data_in).filename().string() : file_name;
      auto tagged = tag_gen(params, av, to_bytes(name), data, *rng);
      write_file(tags_out, tagged.encode_tags(), "--out");
      out << "m=" << tagged.m() << " tag_bytes=" << tagged.encode_tags().size() << "\n";
      return kOk;
    };
  });

  // challenge
  auto* ch_cmd = app.add_subcommand("challenge", "issue a challenge as an auditing ES");
  std::string es_key_in, owner, ch_out, secret_out;
  std::uint32_t ch_m = 0, ch_k = 0;
  ch_cmd->add_option("--params", params_in)->required();
  ch_cmd->add_option("--es-key", es_key_in)->required();
  ch_cmd->add_option("--owner", owner, "AV identity")->required();
  ch_cmd->add_option("--m", ch_m, "block count of the audited file")->required();
  ch_cmd->add_option("--k", ch_k, "number of challenged blocks")->required();
  ch_cmd->add_option("--out", ch_out)->required();
  ch_cmd->add_option("--secret-out", secret_out)->required();
  ch_cmd->callback([&] {
    action = [&] {
      auto rng = seed.rng();
      auto params = SystemParams::decode(read_file(params_in, "--params"));
      auto es = EsKey::decode(read_file(es_key_in, "--es-key"));
      if (ch_k < 1 || ch_k > ch_m) throw UsageError("--k: must lie in [1, --m]");
      auto issued = challenge_gen(params, es, to_bytes(owner), ch_m, ch_k, *rng);
      write_file(ch_out, issued.challenge.encode(), "--out");
      write_file(secret_out, issued.secret.encode(), "--secret-out");
      return kOk;
    };
  });

  // prove
  auto* prove_cmd = app.add_subcommand("prove", "answer a challenge as the audited ES");
  std::string ch_in, tags_in, proof_out, cache_path;
  std::size_t capacity = kDefaultCacheCapacity;
  prove_cmd->add_option("--params", params_in)->required();
  prove_cmd->add_option("--challenge", ch_in)->required();
  prove_cmd->add_option("--tags", tags_in)->required();
  prove_cmd->add_option("--data", data_in)->required();
  prove_cmd->add_option("--out", proof_out)->required();
  prove_cmd->add_option("--cache", cache_path, "proof cache, read if present and rewritten");
  prove_cmd->add_option("--cache-capacity", capacity)->capture_default_str();
  prove_cmd->callback([&] {
    action = [&] {
      auto params = SystemParams::decode(read_file(params_in, "--params"));
      auto ch = Challenge::decode(read_file(ch_in, "--challenge"));
      auto file = TaggedFile::decode_tags(read_file(tags_in, "--tags"), read_file(data_in, "--data"));
      ProofCache cache;
      if (!cache_path.empty() && std::filesystem::exists(cache_path)) cache = decode_cache(read_file(cache_path, "--cache"));
      ProofGenResult result;
      try {
        result = proof_gen(params, ch, file, cache);
      } catch (const ChallengeRejected& e) {
        throw Rejected(std::string("challenge rejected: ") + e.what());
      } catch (const std::out_of_range& e) {
        throw Rejected(std::string("challenge does not fit the file: ") + e.what());
      }
      write_file(proof_out, result.proof.encode(), "--out");
      if (!cache_path.empty()) {
        write_file(cache_path, encode_cache(update_proof(std::move(cache), std::move(result.update), capacity)), "--cache");
      }
      out << "fresh=" << result.fresh_count << " reused_sets=" << result.proof.reused.size() << "\n";
      return kOk;
    };
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a tagged file, or a proof when --proof is given");
  std::string av_id, secret_in, proof_in;
  verify_cmd->add_option("--params", params_in)->required();
  verify_cmd->add_option("--av-id", av_id)->required();
  verify_cmd->add_option("--tags", tags_in);
  verify_cmd->add_option("--data", data_in);
  auto* proof_opt = verify_cmd->add_option("--proof", proof_in);
  verify_cmd->add_option("--challenge", ch_in)->needs(proof_opt);
  verify_cmd->add_option("--secret", secret_in)->needs(proof_opt);
  verify_cmd->add_option("--name", file_name)->needs(proof_opt);
  verify_cmd->callback([&] {
    action = [&] {
      auto params = SystemParams::decode(read_file(params_in, "--params"));
      if (!proof_in.empty()) {
        if (ch_in.empty()) throw UsageError("--challenge: required with --proof");
        if (secret_in.empty()) throw UsageError("--secret: required with --proof");
        if (file_name.empty()) throw UsageError("--name: required with --proof");
        auto ch = Challenge::decode(read_file(ch_in, "--challenge"));
        auto secret = ChallengeSecret::decode(read_file(secret_in, "--secret"));
        auto proof = IntegrityProof::decode(read_file(proof_in, "--proof"));
        auto status = proof_check(params, ch, secret, proof, to_bytes(file_name), to_bytes(av_id));
        out << "verdict=" << (status == CheckStatus::accepted ? 1 : 0) << " status=" << to_string(status) << "\n";
        return status == CheckStatus::accepted ? kOk : kVerificationFailed;
      }
      if (tags_in.empty()) throw UsageError("--tags: required without --proof");
      if (data_in.empty()) throw UsageError("--data: required without --proof");
      auto file = TaggedFile::decode_tags(read_file(tags_in, "--tags"), read_file(data_in, "--data"));
      bool ok = verify_tagged_file(params, file, to_bytes(av_id));
      out << "verdict=" << (ok ? 1 : 0) << "\n";
      return ok ? kOk : kVerificationFailed;
    };
  });

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run the edge-server simulation");
  std::string sim_config, events_out, summary_out;
  std::vector<std::string> overrides;
  sim_cmd->add_option("--config", sim_config, "key=value configuration file");
  sim_cmd->add_option("--set", overrides, "extra key=value lines, applied after --config");
  sim_cmd->add_option("--events-out", events_out, "event log (default: stdout)");
  sim_cmd->add_option("--summary-out", summary_out, "summary (default: stdout)");
  sim_cmd->callback([&] {
    action = [&] {
      std::string text = sim_config.empty() ? std::string() : read_text(sim_config, "--config");
      for (const auto& o : overrides) text += "\n" + o;
      sim::SimConfig cfg;
      try {
        cfg = sim::SimConfig::parse(text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(overrides.empty() ? "--config: " : "--config/--set: ") + e.what());
      }
      if (auto s = seed.resolve()) cfg.seed = *s;
      auto result = sim::run_simulation(cfg);
      std::ostringstream ev, sum;
      sim::write_events(ev, result.events);
      result.summary.write(sum);
      if (events_out.empty()) out << ev.str();
      else write_text(events_out, ev.str(), "--events-out");
      if (summary_out.empty()) out << sum.str();
      else write_text(summary_out, sum.str(), "--summary-out");
      return kOk;
    };
  });

  // game-solve
  auto* game_cmd = app.add_subcommand("game-solve", "solve the auditing game for a payoff configuration");
  std::string game_config, rows_out;
  game_cmd->add_option("--config", game_config, "payoff key=value file")->required();
  game_cmd->add_option("--rows-out", rows_out, "per-profile CSV");
  game_cmd->callback([&] {
    action = [&] {
      game::GameSpec spec;
      try {
        spec = game::GameSpec::parse(read_text(game_config, "--config"));
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--config: ") + e.what());
      }
      game::write_report(out, spec, game::validate_incentive(spec));
      if (!rows_out.empty()) {
        std::ostringstream rows;
        game::write_profile_rows(rows, spec);
        write_text(rows_out, rows.str(), "--rows-out");
      }
      return kOk;
    };
  });

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "timing suite (CSV) and artifact size report");
  bench::BenchPlan plan;
  std::string csv_out, sizes_out;
  bool quick = false;
  bench_cmd->add_option("--out", csv_out, "CSV output (default: stdout)");
  bench_cmd->add_option("--sizes-out", sizes_out, "size report CSV");
  bench_cmd->add_option("--reps", plan.reps)->capture_default_str();
  bench_cmd->add_option("--warmup", plan.warmup)->capture_default_str();
  bench_cmd->add_option("--tag-m", plan.tag_m)->delimiter(',');
  bench_cmd->add_option("--i-sizes", plan.i_sizes)->delimiter(',');
  bench_cmd->add_option("--overlaps", plan.overlaps)->delimiter(',');
  bench_cmd->add_option("--overlap-i-size", plan.overlap_i_size)->capture_default_str();
  bench_cmd->add_flag("--quick", quick, "small grid for smoke runs");
  bench_cmd->callback([&] {
    action = [&] {
      if (quick) {
        plan.tag_m = {4, 8};
        plan.i_sizes = {2, 4, 6, 8};
        plan.overlaps = {0.0, 1.0};
        plan.overlap_i_size = 8;
      }
      if (auto s = seed.resolve()) plan.seed = *s;
      try {
        plan.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bench plan: ") + e.what());
      }
      auto records = bench::bench_suite(plan);
      std::ostringstream csv;
      bench::write_csv(csv, records);
      if (csv_out.empty()) out << csv.str();
      else write_text(csv_out, csv.str(), "--out");
      if (!sizes_out.empty()) {
        std::ostringstream sizes;
        bench::write_size_report(sizes, bench::size_report(plan.tag_m, plan.i_sizes, plan.seed));
        write_text(sizes_out, sizes.str(), "--sizes-out");
      }
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e, out, err);
      return kOk;
    }
    err << "fdia: " << e.what() << "\n";
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "fdia: " << e.what() << "\n";
    return kUsage;
  } catch (const Rejected& e) {
    err << "fdia: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const FormatError& e) {
    err << "fdia: malformed artifact: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::invalid_argument& e) {
    err << "fdia: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "fdia: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace fdia::cli
