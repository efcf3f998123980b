#include "fdia/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "fdia/bench.hpp"

namespace fs = std::filesystem;
using namespace fdia;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fdia-cli-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fdia");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Bytes slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const std::string& p, const Bytes& b) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

// setup, both keys and a tagged 300-byte file in `d`.
void provision(const TempDir& d) {
  REQUIRE(run({"--seed", "11", "setup", "--m", "4", "--params-out", d / "p", "--master-out", d / "mk"}).code == 0);
  REQUIRE(run({"keygen-av", "--params", d / "p", "--master", d / "mk", "--id", "av", "--out", d / "av"}).code == 0);
  REQUIRE(run({"keygen-es", "--params", d / "p", "--master", d / "mk", "--id", "es-0", "--out", d / "es"}).code == 0);
  Bytes data(300);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<std::uint8_t>(i * 7);
  spit(d / "data", data);
  REQUIRE(run({"--seed", "12", "tag", "--params", d / "p", "--av-key", d / "av", "--in", d / "data", "--out", d / "tags"}).code == 0);
}

}  // namespace

TEST_CASE("tag then verify through files on disk") {
  TempDir d;
  provision(d);
  auto r = run({"verify", "--params", d / "p", "--av-id", "av", "--tags", d / "tags", "--data", d / "data"});
  CHECK(r.code == 0);
  CHECK(r.out == "verdict=1\n");

  // wrong AV identity
  CHECK(run({"verify", "--params", d / "p", "--av-id", "mallory", "--tags", d / "tags", "--data", d / "data"}).code == 1);
}

TEST_CASE("corrupted tag files exit 1") {
  TempDir d;
  provision(d);
  Bytes tags = slurp(d / "tags");
  const std::size_t first_tag = tags.size() - 16 * kG1Bytes;  // 300 bytes -> 16 blocks

  // well-formed but wrong: two tags swapped
  Bytes swapped = tags;
  std::swap_ranges(swapped.begin() + first_tag, swapped.begin() + first_tag + kG1Bytes,
                   swapped.begin() + first_tag + kG1Bytes);
  spit(d / "swapped", swapped);
  auto r = run({"verify", "--params", d / "p", "--av-id", "av", "--tags", d / "swapped", "--data", d / "data"});
  CHECK(r.code == 1);
  CHECK(r.out == "verdict=0\n");

  // undecodable bytes
  Bytes flipped = tags;
  flipped[first_tag + 10] ^= 0x40;
  spit(d / "flipped", flipped);
  CHECK(run({"verify", "--params", d / "p", "--av-id", "av", "--tags", d / "flipped", "--data", d / "data"}).code == 1);

  // truncated
  spit(d / "short", Bytes(tags.begin(), tags.end() - 3));
  CHECK(run({"verify", "--params", d / "p", "--av-id", "av", "--tags", d / "short", "--data", d / "data"}).code == 1);

  // data altered after tagging
  Bytes data = slurp(d / "data");
  data[40] ^= 1;
  spit(d / "data2", data);
  CHECK(run({"verify", "--params", d / "p", "--av-id", "av", "--tags", d / "tags", "--data", d / "data2"}).code == 1);
}

TEST_CASE("challenge, prove and verify with a cache file") {
  TempDir d;
  provision(d);
  REQUIRE(run({"challenge", "--params", d / "p", "--es-key", d / "es", "--owner", "av", "--m", "16", "--k", "6", "--out",
               d / "ch", "--secret-out", d / "sec"})
              .code == 0);
  for (int round = 0; round < 2; ++round) {
    auto p = run({"prove", "--params", d / "p", "--challenge", d / "ch", "--tags", d / "tags", "--data", d / "data",
                  "--out", d / "proof", "--cache", d / "cache"});
    REQUIRE(p.code == 0);
    CHECK(p.out == (round == 0 ? "fresh=6 reused_sets=0\n" : "fresh=0 reused_sets=1\n"));
    auto v = run({"verify", "--params", d / "p", "--av-id", "av", "--proof", d / "proof", "--challenge", d / "ch",
                  "--secret", d / "sec", "--name", "data"});
    CHECK(v.code == 0);
    CHECK(v.out == "verdict=1 status=accepted\n");
  }
  auto wrong = run({"verify", "--params", d / "p", "--av-id", "av", "--proof", d / "proof", "--challenge", d / "ch",
                    "--secret", d / "sec", "--name", "other"});
  CHECK(wrong.code == 1);
  CHECK(wrong.out.find("verdict=0") == 0);

  Bytes proof = slurp(d / "proof");
  proof.resize(proof.size() - 1);
  spit(d / "proof", proof);
  CHECK(run({"verify", "--params", d / "p", "--av-id", "av", "--proof", d / "proof", "--challenge", d / "ch",
             "--secret", d / "sec", "--name", "data"})
            .code == 1);
}

TEST_CASE("usage errors exit 2 and name the flag") {
  TempDir d;
  provision(d);
  auto r = run({"verify", "--params", d / "p", "--av-id", "av", "--tags", d / "tags", "--data", d / "data", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--bogus") != std::string::npos);

  r = run({"challenge", "--params", d / "p", "--es-key", d / "es", "--owner", "av", "--m", "16", "--out", d / "ch",
           "--secret-out", d / "sec"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--k") != std::string::npos);

  r = run({"challenge", "--params", d / "p", "--es-key", d / "es", "--owner", "av", "--m", "16", "--k", "17", "--out",
           d / "ch", "--secret-out", d / "sec"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--k") != std::string::npos);

  r = run({"verify", "--params", d / "nowhere", "--av-id", "av", "--tags", d / "tags", "--data", d / "data"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--params") != std::string::npos);

  r = run({"setup", "--level", "128", "--m", "4", "--params-out", d / "x", "--master-out", d / "y"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--level") != std::string::npos);

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"simulate", "--set", "colour=red"}).code == 2);
  CHECK(run({"bench", "--reps", "5"}).code == 2);
}

TEST_CASE("seed from the environment, overridden by --seed") {
  TempDir d;
  auto setup_bytes = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = extra;
    for (const auto& a : {"setup", "--m", "4", "--params-out", "", "--master-out", ""}) args.emplace_back(a);
    args[args.size() - 3] = d / "p";
    args[args.size() - 1] = d / "mk";
    REQUIRE(run(args).code == 0);
    return slurp(d / "p");
  };
  ::setenv("FDIA_SEED", "5", 1);
  Bytes env1 = setup_bytes({});
  Bytes env2 = setup_bytes({});
  Bytes flag = setup_bytes({"--seed", "6"});
  Bytes flag_only = [&] {
    ::unsetenv("FDIA_SEED");
    return setup_bytes({"--seed", "6"});
  }();
  CHECK(env1 == env2);
  CHECK(env1 != flag);
  CHECK(flag == flag_only);

  ::setenv("FDIA_SEED", "banana", 1);
  auto r = run({"setup", "--m", "4", "--params-out", d / "p", "--master-out", d / "mk"});
  CHECK(r.code == 2);
  CHECK(r.err.find("FDIA_SEED") != std::string::npos);
  ::unsetenv("FDIA_SEED");
}

TEST_CASE("simulate and game-solve write their formats") {
  TempDir d;
  std::ofstream(d / "sim.cfg") << "es_count=3\nfiles=1\nfile_blocks_min=4\nfile_blocks_max=4\nk=2\nrounds=2\nmode=periodic\n";
  auto a = run({"--seed", "3", "simulate", "--config", d / "sim.cfg", "--summary-out", d / "sum"});
  auto b = run({"--seed", "3", "simulate", "--config", d / "sim.cfg", "--summary-out", d / "sum"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("round=1 auditor=es-0 audited=es-1 file=file-0 verdict=1", 0) == 0);
  Bytes sum = slurp(d / "sum");
  CHECK(std::string(sum.begin(), sum.end()).find("audits=6\n") != std::string::npos);

  std::ofstream(d / "g.cfg") << "R_A=2\nP_N=1\nR_H=1\nP_forge=3\nP_Na=1\nU_Py=1\nU_Pn=1\n";
  auto g = run({"game-solve", "--config", d / "g.cfg", "--rows-out", d / "rows.csv"});
  CHECK(g.code == 0);
  CHECK(g.out.find("(A, H, 2P) is a Nash equilibrium and the unique one") != std::string::npos);
  Bytes rows = slurp(d / "rows.csv");
  CHECK(std::string(rows.begin(), rows.end()).rfind("s_Ar,s_Ag,s_AV,u_Ar,u_Ag,u_AV,is_ne\n", 0) == 0);
}

TEST_CASE("bench CSV round trip") {
  TempDir d;
  auto r = run({"--seed", "4", "bench", "--tag-m", "2", "--i-sizes", "1,3", "--overlaps", "0,1", "--overlap-i-size", "3",
                "--out", d / "b.csv", "--sizes-out", d / "s.csv"});
  REQUIRE(r.code == 0);
  Bytes csv = slurp(d / "b.csv");
  auto records = bench::parse_csv(std::string(csv.begin(), csv.end()));
  REQUIRE(records.size() == 1 + 2 + 2 + 2);
  std::ostringstream again;
  bench::write_csv(again, records);
  CHECK(again.str() == std::string(csv.begin(), csv.end()));
  for (const auto& rec : records) CHECK(rec.median_ns > 0);
  CHECK(records.back().operation == "proof_gen");
  CHECK(records.back().overlap == 1.0);

  CHECK_THROWS_AS(bench::parse_csv("operation,m\n"), FormatError);
  CHECK_THROWS_AS(bench::parse_csv(std::string(bench::kCsvHeader) + "\nx,1,2,0,1,5\n"), FormatError);
  CHECK_THROWS_AS(bench::parse_csv(std::string(bench::kCsvHeader) + "\nx,1,2,0,1,5,z\n"), FormatError);

  Bytes sizes = slurp(d / "s.csv");
  CHECK(std::string(sizes.begin(), sizes.end()).find("DEVIATION") == std::string::npos);
}

TEST_CASE("size report closed forms") {
  auto rows = bench::size_report({64, 128}, {200, 800}, 9);
  std::map<std::pair<std::string, std::uint32_t>, bench::SizeRow> by;
  for (const auto& r : rows) {
    CHECK(r.matches());
    by[{r.artifact, r.artifact == "tag_file" ? r.m : r.i_size}] = r;
  }
  // m = 64 tag file: 64 l_G plus the fixed overhead and the name
  CHECK(by[{"tag_file", 64}].measured == 64 * kG1Bytes + kTagFileOverhead + std::string("size-report").size());
  // doubling m doubles the tag payload once the constants are removed
  auto fixed = kTagFileOverhead + std::string("size-report").size();
  CHECK(by[{"tag_file", 128}].measured - fixed == 2 * (by[{"tag_file", 64}].measured - fixed));
  // challenge bytes differ only by the index list
  CHECK(by[{"challenge", 800}].measured - 4 * 800 == by[{"challenge", 200}].measured - 4 * 200);
  CHECK(by[{"challenge", 200}].group_payload == by[{"challenge", 800}].group_payload);
  CHECK(by[{"proof", 200}].measured == by[{"proof", 800}].measured);
}
