#include "lchzk/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "lchzk/analysis.hpp"
#include "lchzk/lch.hpp"
#include "lchzk/protocol.hpp"
#include "lchzk/sampler.hpp"
#include "lchzk/selftest.hpp"
#include "lchzk/steane.hpp"

namespace lchzk {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Witness specs: "mixed", "basis:<bits>", "history:<circuit.json>", or a
// path to a state file {"n":..., "re":[...], "im":[...]}.
WitnessSpec parse_witness(const std::string& spec, int n_qubits) {
  if (spec == "mixed") return WitnessSpec::maximally_mixed(n_qubits);
  if (spec.rfind("basis:", 0) == 0) {
    BitString bits = bitstring_from(spec.substr(6));
    return WitnessSpec::from_state(DenseState::basis(static_cast<int>(bits.size()), bits));
  }
  if (spec.rfind("history:", 0) == 0) {
    nlohmann::json j = load_json(spec.substr(8));
    VerificationCircuit v = VerificationCircuit::from_json(j.at("circuit"));
    DenseState w(v.witness_qubits);
    if (j.contains("witness")) {
      BitString bits = bitstring_from(j.at("witness").get<std::string>());
      w = DenseState::basis(v.witness_qubits, bits);
    }
    return WitnessSpec::from_state(history_state(v, w));
  }
  nlohmann::json j = load_json(spec);
  int n = j.at("n").get<int>();
  auto re = j.at("re").get<std::vector<double>>();
  auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size() || re.size() != (size_t{1} << n))
    throw std::runtime_error("state file has the wrong amplitude count");
  DenseState s(n);
  for (size_t i = 0; i < re.size(); ++i) s.amplitudes()[i] = cx{re[i], im[i]};
  if (std::abs(s.norm() - 1.0) > 1e-6) throw std::runtime_error("state file is not normalized");
  return WitnessSpec::from_state(s);
}

int cmd_compile(const std::string& circuit_path, int p, const std::string& out_path) {
  VerificationCircuit v = VerificationCircuit::from_json(load_json(circuit_path));
  LchInstance inst = compile(v, p);
  write_text(out_path, inst.to_json().dump(2) + "\n");
  std::cout << "instance: " << inst.m() << " terms on " << inst.n << " qubits (p=" << inst.p
            << ", q=" << inst.q << ")\n";
  if (inst.measured_ground_energy)
    std::cout << "measured ground energy: " << *inst.measured_ground_energy << "\n";
  else
    std::cout << "measured ground energy: skipped (instance above the dense cap)\n";
  return 0;
}

int cmd_run(const std::string& instance_path, const std::string& witness_spec,
            const std::string& adversary_spec, uint64_t seed, int t_level,
            const std::string& backend, bool exact, bool verifier_picks_r,
            const std::string& out_path, const std::string& secrets_path) {
  LchInstance inst = LchInstance::from_json(load_json(instance_path));
  WitnessSpec witness = parse_witness(witness_spec, inst.n);

  if (exact) {
    if (witness.kind != WitnessSpec::Kind::State)
      throw std::runtime_error("exact mode needs an explicit witness state");
    double accept = exact_acceptance_probability(inst, witness.state, t_level);
    double threshold = 1.0 - std::pow(2.0, -inst.p);
    nlohmann::json line{{"role", "verifier"},
                        {"kind", "exact-acceptance"},
                        {"payload", {{"accept_probability", accept}, {"threshold", threshold}}}};
    nlohmann::json verdict{{"role", "verifier"},
                           {"kind", "verdict"},
                           {"payload", {{"verdict", accept >= threshold ? "accept" : "reject"}}}};
    write_text(out_path, line.dump() + "\n" + verdict.dump() + "\n");
    std::cout << "exact acceptance probability: " << accept << "\n";
    return accept >= threshold ? 0 : 1;
  }

  ProtocolOptions options;
  options.t_level = t_level;
  options.backend = commitment_backend_from(backend);
  options.verifier_picks_r = verifier_picks_r;
  Rng rng(seed);

  // A run needs the key visible for the optional secrets export, so the
  // protocol is replayed with a recording wrapper: sample the key exactly as
  // run_protocol does by reusing the same seed stream.
  Transcript t = run_protocol(inst, witness, AdversaryConfig::parse(adversary_spec), options, rng);
  write_text(out_path, t.to_jsonl());
  if (!secrets_path.empty()) {
    // replay the deterministic key sampling for export
    Rng replay(seed);
    DenseState logical = witness.resolve(replay);
    EncodingKey key = sample_key(inst.n, SteaneCode(t_level).N(), replay);
    write_text(secrets_path, key.to_json().dump(2) + "\n");
    (void)logical;
  }
  std::cout << "verdict: " << (t.accepted() ? "accept" : "reject")
            << (t.aborted() ? " (prover abort)" : "") << "\n";
  return t.accepted() ? 0 : 1;
}

int cmd_attack(const std::string& instance_path, int term_index, const std::string& witness_spec,
               const std::string& mask_spec, long samples, uint64_t seed, int t_level,
               bool parallel, const std::string& out_path) {
  LchInstance inst = LchInstance::from_json(load_json(instance_path));
  if (term_index < 1 || term_index > inst.m()) throw std::runtime_error("term index out of range");
  const LchTerm& term = inst.terms[term_index - 1];

  DenseState logical(inst.n);
  if (witness_spec == "rho-r") {
    logical = prepare_rho_r(inst, term_index - 1);
  } else {
    WitnessSpec w = parse_witness(witness_spec, inst.n);
    if (w.kind != WitnessSpec::Kind::State)
      throw std::runtime_error("attack experiments need an explicit witness state");
    logical = w.state;
  }

  AttackReport report =
      run_xor_attack_experiment(logical, term, t_level, mask_spec, samples, seed, parallel);
  nlohmann::json j = report.to_json();
  j["term"] = term_index;
  write_text(out_path, j.dump(2) + "\n");
  std::cout << "q_hat " << report.q_hat << " +- " << report.ci95;
  if (report.bound) std::cout << " (bound " << *report.bound << ")";
  std::cout << "\n";
  return 0;
}

int cmd_analyze(const std::string& instance_path, const std::string& witness_spec,
                const std::string& adversary_spec, long samples, uint64_t seed, int t_level,
                bool parallel, const std::string& real_path, const std::string& sim_path,
                const std::string& out_path) {
  if (!real_path.empty() || !sim_path.empty()) {
    if (real_path.empty() || sim_path.empty())
      throw std::runtime_error("transcript comparison needs both --real and --simulated");
    auto load_features = [](const std::string& path) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open " + path);
      std::map<std::string, long> hist;
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      // split at verdict lines: one transcript per verdict
      Transcript current;
      std::istringstream lines(text);
      std::string line;
      long count = 0;
      while (std::getline(lines, line)) {
        if (line.empty()) continue;
        Transcript one = Transcript::from_jsonl(line);
        current.messages.push_back(one.messages.at(0));
        if (current.messages.back().kind == MessageKind::Verdict) {
          ++hist[current.feature()];
          current.messages.clear();
          ++count;
        }
      }
      return std::pair<std::map<std::string, long>, long>{hist, count};
    };
    auto [real_hist, real_count] = load_features(real_path);
    auto [sim_hist, sim_count] = load_features(sim_path);
    if (real_count != sim_count || real_count == 0)
      throw std::runtime_error("transcript files must hold the same nonzero run count");
    DistributionReport report;
    report.real_hist = real_hist;
    report.sim_hist = sim_hist;
    report.samples = real_count;
    report.tv = total_variation(real_hist, sim_hist, real_count);
    write_text(out_path, report.to_json().dump(2) + "\n");
    std::cout << "tv " << report.tv << " over " << real_count << " transcripts\n";
    return 0;
  }

  LchInstance inst = LchInstance::from_json(load_json(instance_path));
  WitnessSpec witness = parse_witness(witness_spec, inst.n);
  DistributionReport report = compare_real_vs_simulated(
      inst, witness, AdversaryConfig::parse(adversary_spec), t_level, samples, seed, parallel);
  write_text(out_path, report.to_json().dump(2) + "\n");
  std::cout << "tv " << report.tv << " over " << samples << " runs per side\n";
  return 0;
}

int cmd_selftest(uint64_t seed, double scale, bool parallel) {
  SelftestOptions opt;
  opt.seed = seed;
  opt.sample_scale = scale;
  opt.parallel = parallel;
  auto results = run_acceptance_criteria(opt);
  bool all = true;
  for (const auto& r : results) {
    std::cout << "criterion " << r.index << " [" << (r.pass ? "pass" : "FAIL") << "] " << r.name
              << " — " << r.detail << "\n";
    all &= r.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"zero-knowledge proof system for the local Clifford-Hamiltonian problem"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  int t_level = 2;
  long samples = 10000;
  bool serial = false;

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "turn a verification circuit into an instance");
  std::string circuit_path, out_path = "instance.json";
  int p = 10;
  compile_cmd->add_option("circuit", circuit_path, "verification circuit JSON")->required();
  compile_cmd->add_option("--p", p, "completeness exponent (accept bound 2^-p)");
  compile_cmd->add_option("--out", out_path, "output instance path");

  // run
  auto* run_cmd = app.add_subcommand("run", "run one protocol session");
  std::string instance_path, witness_spec = "mixed", adversary_spec = "honest";
  std::string backend = "hash", transcript_path = "transcript.jsonl", secrets_path;
  bool exact = false, verifier_picks_r = false, export_secrets = false;
  run_cmd->add_option("instance", instance_path, "instance JSON")->required();
  run_cmd->add_option("--witness", witness_spec,
                      "mixed | basis:<bits> | history:<file> | <state file>");
  run_cmd->add_option("--adversary", adversary_spec, "honest | xor:<mask-spec> | wrong-term:<j>");
  run_cmd->add_option("--seed", seed, "64-bit seed");
  run_cmd->add_option("--t-level", t_level, "concatenation level (1 toy, 2 default)")
      ->check(CLI::Range(1, 2));
  run_cmd->add_option("--backend", backend, "hash | transparent");
  run_cmd->add_option("--out", transcript_path, "transcript output (JSON lines)");
  run_cmd->add_flag("--exact", exact, "closed-form acceptance instead of sampling");
  run_cmd->add_flag("--verifier-picks-r", verifier_picks_r, "skip the coin flip");
  run_cmd->add_flag("--export-secrets", export_secrets, "also write the encoding key");
  run_cmd->add_option("--secrets-out", secrets_path, "key output path (with --export-secrets)");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "XOR-mask attack statistics on one term");
  std::string attack_instance, attack_witness = "rho-r", mask_spec = "weight:1";
  std::string report_path = "attack.json";
  int term_index = 1;
  attack_cmd->add_option("instance", attack_instance, "instance JSON")->required();
  attack_cmd->add_option("--term", term_index, "1-based term index");
  attack_cmd->add_option("--witness", attack_witness, "rho-r | basis:<bits> | <state file>");
  attack_cmd->add_option("--mask", mask_spec, "zero | mask:<bits> | weight:<w>");
  attack_cmd->add_option("--samples", samples, "sample count");
  attack_cmd->add_option("--seed", seed, "64-bit seed");
  attack_cmd->add_option("--t-level", t_level, "concatenation level")->check(CLI::Range(1, 2));
  attack_cmd->add_option("--out", report_path, "report output path");
  attack_cmd->add_flag("--serial", serial, "disable worker parallelism");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "real-vs-simulated transcript comparison");
  std::string analyze_instance, analyze_witness = "mixed", analyze_adversary = "honest";
  std::string real_path, sim_path, analyze_out = "analysis.json";
  analyze_cmd->add_option("instance", analyze_instance, "instance JSON");
  analyze_cmd->add_option("--witness", analyze_witness, "witness spec (see run)");
  analyze_cmd->add_option("--adversary", analyze_adversary, "adversary spec (see run)");
  analyze_cmd->add_option("--samples", samples, "runs per side");
  analyze_cmd->add_option("--seed", seed, "64-bit seed");
  analyze_cmd->add_option("--t-level", t_level, "concatenation level")->check(CLI::Range(1, 2));
  analyze_cmd->add_option("--real", real_path, "existing transcript file (skip live runs)");
  analyze_cmd->add_option("--simulated", sim_path, "existing simulated transcript file");
  analyze_cmd->add_option("--out", analyze_out, "report output path");
  analyze_cmd->add_flag("--serial", serial, "disable worker parallelism");

  // selftest
  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance criteria");
  double scale = 1.0;
  selftest_cmd->add_option("--seed", seed, "64-bit seed");
  selftest_cmd->add_option("--sample-scale", scale, "Monte Carlo budget multiplier");
  selftest_cmd->add_flag("--serial", serial, "disable worker parallelism");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*compile_cmd) return cmd_compile(circuit_path, p, out_path);
    if (*run_cmd)
      return cmd_run(instance_path, witness_spec, adversary_spec, seed, t_level, backend, exact,
                     verifier_picks_r, transcript_path,
                     export_secrets ? (secrets_path.empty() ? transcript_path + ".key.json"
                                                            : secrets_path)
                                    : std::string());
    if (*attack_cmd)
      return cmd_attack(attack_instance, term_index, attack_witness, mask_spec, samples, seed,
                        t_level, !serial, report_path);
    if (*analyze_cmd)
      return cmd_analyze(analyze_instance, analyze_witness, analyze_adversary, samples, seed,
                         t_level, !serial, real_path, sim_path, analyze_out);
    if (*selftest_cmd) return cmd_selftest(seed, scale, !serial);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string what = e.what();
    if (what.rfind("cannot open", 0) == 0) return 2;
    return 3;
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace lchzk
