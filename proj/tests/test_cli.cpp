#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "doctest.h"
#include "lchzk/cli.hpp"
#include "lchzk/encoding.hpp"
#include "lchzk/protocol.hpp"
#include "lchzk/steane.hpp"

using namespace lchzk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lchzk-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const char* kCircuit =
    R"({"qubits": 2, "witness": 2, "output": 0, "gates": [["LambdaP", 0, 1], ["LambdaP", 1, 0]]})";

std::string make_instance(const TempDir& dir) {
  spit(dir.file("circuit.json"), kCircuit);
  std::string inst = dir.file("instance.json");
  REQUIRE(run_cli({"compile", dir.file("circuit.json"), "--p", "10", "--out", inst}) == 0);
  return inst;
}

}  // namespace

TEST_CASE("compile emits a loadable instance") {
  TempDir dir;
  std::string inst_path = make_instance(dir);
  nlohmann::json j = nlohmann::json::parse(slurp(inst_path));
  CHECK(j.at("k").get<int>() == 5);
  CHECK(j.at("terms").size() == 12);
  CHECK(j.contains("metadata"));
}

TEST_CASE("compile rejects malformed circuits") {
  TempDir dir;
  spit(dir.file("bad.json"), R"({"qubits": 2, "witness": 2, "output": 0, "gates": [["Toffoli", 0, 1]]})");
  CHECK(run_cli({"compile", dir.file("bad.json"), "--out", dir.file("x.json")}) == 2);
  CHECK(run_cli({"compile", dir.file("missing.json"), "--out", dir.file("x.json")}) == 2);
  spit(dir.file("garbage.json"), "not json at all {{{");
  CHECK(run_cli({"compile", dir.file("garbage.json"), "--out", dir.file("x.json")}) == 2);
  CHECK(run_cli({"bogus-subcommand"}) == 2);
}

TEST_CASE("run is deterministic per seed and reports verdicts in exit codes") {
  TempDir dir;
  std::string inst = make_instance(dir);
  spit(dir.file("witness.json"),
       std::string(R"({"circuit": )") + kCircuit + R"(, "witness": "11"})");

  std::string t1 = dir.file("t1.jsonl"), t2 = dir.file("t2.jsonl");
  CHECK(run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--seed", "11",
                 "--out", t1}) == 0);
  CHECK(run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--seed", "11",
                 "--out", t2}) == 0);
  CHECK(slurp(t1) == slurp(t2));
  CHECK_FALSE(slurp(t1).empty());

  // different seed, different transcript bytes (coin flips differ)
  std::string t3 = dir.file("t3.jsonl");
  CHECK(run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--seed", "12",
                 "--out", t3}) == 0);
  CHECK(slurp(t1) != slurp(t3));

  // heavy-mask adversary springs traps: reject exit code
  int code = run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--seed",
                      "5", "--adversary", "xor:weight:21", "--out", dir.file("t4.jsonl")});
  CHECK(code == 1);
  Transcript t = Transcript::from_jsonl(slurp(dir.file("t4.jsonl")));
  CHECK(t.aborted());
  CHECK(transcript_order_valid(t));
}

TEST_CASE("exact mode reports the acceptance probability") {
  TempDir dir;
  std::string inst = make_instance(dir);
  spit(dir.file("witness.json"),
       std::string(R"({"circuit": )") + kCircuit + R"(, "witness": "11"})");
  std::string out = dir.file("exact.jsonl");
  CHECK(run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--exact",
                 "--out", out}) == 0);
  std::istringstream lines(slurp(out));
  std::string line;
  REQUIRE(std::getline(lines, line));
  nlohmann::json first = nlohmann::json::parse(line);
  CHECK(first.at("kind") == "exact-acceptance");
  CHECK(first.at("payload").at("accept_probability").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("key material stays out of outputs unless exported") {
  TempDir dir;
  std::string inst = make_instance(dir);
  spit(dir.file("witness.json"),
       std::string(R"({"circuit": )") + kCircuit + R"(, "witness": "11"})");

  std::string out = dir.file("t.jsonl");
  CHECK(run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--seed", "21",
                 "--out", out}) == 0);
  std::string transcript = slurp(out);

  // reconstruct the key the run must have used (same draw order, same seed)
  Rng replay(21);
  EncodingKey key = sample_key(5, 49, replay);
  CHECK_FALSE(transcript.find(key.trap_string()) != std::string::npos);
  CHECK_FALSE(transcript.find(bitstring_str(key.pad_x)) != std::string::npos);
  CHECK_FALSE(transcript.find(bitstring_str(key.pad_z)) != std::string::npos);
  CHECK(fs::exists(out + ".key.json") == false);

  // with the flag, the key file appears and matches the replayed key
  std::string out2 = dir.file("t-export.jsonl");
  CHECK(run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--seed", "21",
                 "--out", out2, "--export-secrets"}) == 0);
  REQUIRE(fs::exists(out2 + ".key.json"));
  EncodingKey exported = EncodingKey::from_json(nlohmann::json::parse(slurp(out2 + ".key.json")));
  CHECK(exported.trap_string() == key.trap_string());
  CHECK(exported.pad_x == key.pad_x);
  CHECK(exported.perm == key.perm);
}

TEST_CASE("attack subcommand writes a bound-bearing report") {
  TempDir dir;
  std::string inst = make_instance(dir);
  std::string out = dir.file("attack.json");
  CHECK(run_cli({"attack", inst, "--term", "1", "--mask", "weight:3", "--samples", "3000",
                 "--seed", "5", "--t-level", "1", "--out", out}) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK_FALSE(j.at("bound").is_null());
  CHECK(j.at("q_hat").get<double>() <=
        j.at("bound").get<double>() + 3.0 * j.at("ci95").get<double>() / 1.96 + 1e-9);

  // saturating mask weight below the distance: no bound recorded
  std::string out2 = dir.file("attack2.json");
  CHECK(run_cli({"attack", inst, "--term", "1", "--mask", "weight:1", "--samples", "500", "--seed",
                 "5", "--t-level", "1", "--out", out2}) == 0);
  CHECK(nlohmann::json::parse(slurp(out2)).at("bound").is_null());
}

TEST_CASE("analyze compares live runs and transcript files") {
  TempDir dir;
  std::string inst = make_instance(dir);
  spit(dir.file("witness.json"),
       std::string(R"({"circuit": )") + kCircuit + R"(, "witness": "11"})");
  std::string out = dir.file("analysis.json");
  CHECK(run_cli({"analyze", inst, "--witness", "history:" + dir.file("witness.json"),
                 "--adversary", "honest", "--samples", "800", "--seed", "4", "--out", out}) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("samples").get<long>() == 800);
  CHECK(j.at("tv").get<double>() >= 0.0);
  CHECK(j.at("tv").get<double>() <= 1.0);

  // file-based comparison: a transcript stream against itself has tv 0
  std::string t1 = dir.file("r1.jsonl");
  std::string stream;
  for (int i = 0; i < 5; ++i) {
    std::string part = dir.file("part.jsonl");
    CHECK(run_cli({"run", inst, "--witness", "history:" + dir.file("witness.json"), "--seed",
                   std::to_string(100 + i), "--out", part}) == 0);
    stream += slurp(part);
  }
  spit(t1, stream);
  std::string out2 = dir.file("analysis2.json");
  CHECK(run_cli({"analyze", "--real", t1, "--simulated", t1, "--out", out2}) == 0);
  CHECK(nlohmann::json::parse(slurp(out2)).at("tv").get<double>() == 0.0);
}

TEST_CASE("selftest accepts a scaled-down budget") {
  CHECK(run_cli({"selftest", "--sample-scale", "0.1", "--seed", "12345"}) == 0);
}
