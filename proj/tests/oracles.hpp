#pragma once

// Test-only oracles: brute-force constructions kept independent of the
// library code paths they check.

#include <Eigen/Dense>
#include <map>
#include <set>
#include <string>

#include "lchzk/dense.hpp"
#include "lchzk/lch.hpp"
#include "lchzk/pauli.hpp"

namespace lchzk::oracles {

// Dense conjugation oracle: U M(p) U^dagger as an explicit matrix.
inline Eigen::MatrixXcd conjugate_dense(const CliffordCircuit& c, const PauliString& p) {
  Eigen::MatrixXcd u = dense_unitary(c);
  return u * dense_pauli(p) * u.adjoint();
}

inline bool matrices_close(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol = 1e-12) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

// All single-qubit Clifford tableaus, enumerated by closing {H, P} words.
inline std::set<std::string> all_single_qubit_tableaus() {
  std::set<std::string> seen;
  std::vector<CliffordCircuit> frontier{CliffordCircuit(1)};
  seen.insert(CliffordTableau::from_circuit(frontier[0]).key());
  while (!frontier.empty()) {
    std::vector<CliffordCircuit> next;
    for (const CliffordCircuit& c : frontier) {
      for (int g = 0; g < 2; ++g) {
        CliffordCircuit ext = c;
        if (g == 0)
          ext.h(0);
        else
          ext.p(0);
        std::string key = CliffordTableau::from_circuit(ext).key();
        if (seen.insert(key).second) next.push_back(ext);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

// Independent construction of the clock-register Hamiltonian from the
// operator formula: diagonal pattern terms plus
//   |10><10|_{t-1,t+1} (x) (1/2)[I (x) I - |1><0|_t (x) U_t - |0><1|_t (x) U_t^dagger],
// with the boundary step guarded by |0><0| on clock qubit 2.
inline Eigen::MatrixXcd clock_hamiltonian_oracle(const VerificationCircuit& v) {
  const int T = v.T();
  const int n_data = v.n_qubits;
  const int n = n_data + T + 1;
  auto clock = [&](int ell) { return n_data + ell - 1; };
  const Eigen::MatrixXcd one = pauli_matrix('I') - pauli_matrix('Z');      // 2|1><1|
  const Eigen::MatrixXcd zero = pauli_matrix('I') + pauli_matrix('Z');     // 2|0><0|
  const Eigen::MatrixXcd ket1bra1 = 0.5 * one;
  const Eigen::MatrixXcd ket0bra0 = 0.5 * zero;
  Eigen::MatrixXcd flip10 = Eigen::MatrixXcd::Zero(2, 2);  // |1><0|
  flip10(1, 0) = 1.0;

  const uint64_t dim = uint64_t{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

  for (int a = v.witness_qubits; a < n_data; ++a)
    h += embed_operator(kron(ket1bra1, ket0bra0), {a, clock(1)}, n);
  if (T >= 1)
    h += embed_operator(kron(ket0bra0, ket1bra1), {v.output_qubit, clock(T)}, n);
  else
    h += embed_operator(kron(ket0bra0, ket0bra0), {v.output_qubit, clock(1)}, n);
  for (int ell = 1; ell <= T; ++ell)
    h += embed_operator(kron(ket0bra0, ket1bra1), {clock(ell), clock(ell + 1)}, n);
  h += embed_operator(ket1bra1, {clock(T + 1)}, n);

  for (int t = 1; t <= T; ++t) {
    const auto& g = v.gates[t - 1];
    Eigen::MatrixXcd ugate =
        g.kind == VerificationGate::Kind::LambdaP ? lambda_p_matrix() : hh_matrix();
    Eigen::MatrixXcd inner = 0.5 * (Eigen::MatrixXcd::Identity(8, 8) - kron(flip10, ugate) -
                                    kron(flip10.adjoint(), ugate.adjoint()));
    if (t >= 2) {
      Eigen::MatrixXcd window = kron(ket1bra1, ket0bra0);  // |10><10| on (t-1, t+1)
      h += embed_operator(kron(window, inner), {clock(t - 1), clock(t + 1), clock(t), g.q0, g.q1}, n);
    } else {
      h += embed_operator(kron(ket0bra0, inner), {clock(2), clock(1), g.q0, g.q1}, n);
    }
  }
  return h;
}

// 99th-percentile chi-square critical values for the degrees of freedom the
// tests use, with a Wilson-Hilferty fallback.
inline double chi2_critical_99(int df) {
  switch (df) {
    case 1: return 6.635;
    case 2: return 9.210;
    case 3: return 11.345;
    case 7: return 18.475;
    case 15: return 30.578;
    case 23: return 41.638;
    case 63: return 92.010;
    default: {
      double z = 2.326347874;  // 99th percentile normal quantile
      double a = 2.0 / (9.0 * df);
      double c = 1.0 - a + z * std::sqrt(a);
      return df * c * c * c;
    }
  }
}

inline double chi2_statistic(const std::map<std::string, long>& counts,
                             const std::map<std::string, double>& expected_probs, long total) {
  double stat = 0.0;
  for (const auto& [key, p] : expected_probs) {
    double expect = p * total;
    auto it = counts.find(key);
    double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    stat += (observed - expect) * (observed - expect) / expect;
  }
  return stat;
}

}  // namespace lchzk::oracles
