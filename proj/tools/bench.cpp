// Microbenchmarks comparing the optimized kernels against their reference
// implementations:
//   - packed tableau simulation vs dense state vectors on Steane encodings
//   - symbolic challenge sampling vs physical tableau measurement
//   - XOR-attack Monte Carlo, serial loop vs OpenMP worker pool
// Results of the parallel and serial paths are asserted identical (workers
// derive per-sample seeds, so thread count never changes the output).

#include <chrono>
#include <cstdio>
#include <string>

#include "lchzk/encoding.hpp"
#include "lchzk/parallel.hpp"
#include "lchzk/sampler.hpp"
#include "lchzk/steane.hpp"
#include "lchzk/tableau.hpp"

#if defined(LCHZK_HAVE_OPENMP)
#include <omp.h>
#endif

using namespace lchzk;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
double timed(const char* label, long iterations, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  fn();
  double elapsed = seconds_since(start);
  std::printf("%-44s %8.3f s   (%.1f /s)\n", label, elapsed, iterations / elapsed);
  return elapsed;
}

void bench_encoding_backends() {
  std::printf("-- encode + full measurement, one qubit at level 1 (14 physical qubits)\n");
  const long iters = 2000;
  Rng key_rng(7);
  EncodingKey key = sample_key(1, 7, key_rng);

  timed("packed tableau", iters, [&] {
    Rng rng(1);
    for (long i = 0; i < iters; ++i) {
      StabilizerState logical(1);
      StabilizerState enc = encode_physical(logical, key, 1);
      enc.measure_all(rng);
    }
  });

  timed("dense state vector (reference)", iters, [&] {
    Rng rng(1);
    SteaneCode code(1);
    for (long i = 0; i < iters; ++i) {
      DenseState block = DenseState(1).tensor(DenseState(6));
      block.apply_circuit(code.encoder_circuit());
      DenseState traps(7);
      auto& amp = traps.amplitudes();
      for (uint64_t idx = 0; idx < amp.size(); ++idx) {
        cx v{1.0, 0.0};
        for (int q = 0; q < 7; ++q) v *= trap_amplitudes(key.traps[q])[(idx >> (6 - q)) & 1];
        amp[idx] = v;
      }
      DenseState full = block.tensor(traps);
      std::vector<int> mapping(14);
      for (long w = 0; w < 14; ++w) mapping[w] = key.perm[w];
      full.permute_qubits(mapping);
      for (long q = 0; q < 14; ++q)
        if (key.pad_z[q]) full.apply_z(static_cast<int>(q));
      for (long q = 0; q < 14; ++q)
        if (key.pad_x[q]) full.apply_x(static_cast<int>(q));
      full.sample_measurement(rng);
    }
  });

  std::printf("-- challenge sampling at level 2 (98 physical qubits per block)\n");
  const long level2 = 2000;
  Rng rng2(9);
  EncodingKey key2 = sample_key(1, 49, rng2);
  DenseState witness = DenseState::basis(1, bitstring_from("1"));
  EncodedWitness enc = encode_symbolic(witness, key2, 2);
  LchTerm term;
  term.clifford = CliffordCircuit(1);
  term.clifford.h(0);
  term.support = {0};
  timed("symbolic challenge sampler", level2, [&] {
    Rng rng(2);
    for (long i = 0; i < level2; ++i) challenge_outcome(enc, term, rng);
  });
  timed("physical tableau (reference)", level2 / 10, [&] {
    Rng rng(2);
    StabilizerState logical(1);
    logical.apply_x(0);
    for (long i = 0; i < level2 / 10; ++i) {
      StabilizerState phys = encode_physical(logical, key2, 2);
      for (long j = 0; j < 98; ++j)
        phys.apply_circuit(term.clifford.remapped(98, {static_cast<int>(j)}));
      phys.measure_all(rng);
    }
  });
}

void bench_attack_loop() {
  std::printf("-- XOR-attack Monte Carlo, 20000 samples at level 1\n");
  DenseState witness = DenseState::basis(1, bitstring_from("1"));
  LchTerm term;
  term.clifford = CliffordCircuit(1);
  term.support = {0};
  const long samples = 20000;

  AttackReport serial_report, parallel_report;
  double ts = timed("serial reference loop", samples, [&] {
    serial_report = run_xor_attack_experiment(witness, term, 1, "weight:3", samples, 42, false);
  });
  double tp = timed("OpenMP worker pool", samples, [&] {
    parallel_report = run_xor_attack_experiment(witness, term, 1, "weight:3", samples, 42, true);
  });
  if (serial_report.q_hat != parallel_report.q_hat) {
    std::printf("MISMATCH between serial and parallel results!\n");
    std::exit(1);
  }
  std::printf("identical results, speedup %.2fx", ts / tp);
#if defined(LCHZK_HAVE_OPENMP)
  std::printf(" on %d threads", omp_get_max_threads());
#endif
  std::printf("\n");
}

}  // namespace

int main() {
  bench_encoding_backends();
  bench_attack_loop();
  return 0;
}
