#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "lchzk/bits.hpp"
#include "lchzk/pauli.hpp"
#include "lchzk/rng.hpp"

namespace lchzk {

using cx = std::complex<double>;

// Qubit/bit convention used throughout: basis index of |b_0 b_1 ... b_{n-1}>
// is sum_q b_q << (n-1-q), so qubit 0 is the leftmost printed bit and the
// most significant index bit.

// Brute-force state vector on up to `cap` qubits (default 20).  This is the
// slow reference everything else is checked against; it also carries the
// non-Clifford controlled-P gate that the tableau simulator cannot.
class DenseState {
 public:
  static constexpr int kDefaultCap = 20;

  explicit DenseState(int n, int cap = kDefaultCap);
  static DenseState basis(int n, const BitString& bits, int cap = kDefaultCap);

  int n() const { return n_; }
  const std::vector<cx>& amplitudes() const { return amp_; }
  std::vector<cx>& amplitudes() { return amp_; }
  cx amplitude(uint64_t index) const { return amp_[index]; }

  void apply_h(int q);
  void apply_p(int q);
  void apply_x(int q);
  void apply_z(int q);
  void apply_cnot(int control, int target);
  void apply_controlled_p(int control, int target);
  void apply_gate(const Gate& g);
  void apply_circuit(const CliffordCircuit& c);
  // Apply a k-qubit unitary to the listed qubits (row/col convention as above).
  void apply_unitary(const Eigen::MatrixXcd& u, const std::vector<int>& qubits);

  double norm() const;
  // Born probabilities for a full standard-basis measurement (size 2^n).
  std::vector<double> z_probabilities() const;
  BitString sample_measurement(Rng& rng) const;

  Eigen::MatrixXcd density() const;
  // Reduced density operator on `keep` (row order = listed order).
  Eigen::MatrixXcd reduced_density(const std::vector<int>& keep) const;

  DenseState tensor(const DenseState& other) const;
  // Relabel qubits: new position mapping[q] holds old qubit q.
  void permute_qubits(const std::vector<int>& mapping);

 private:
  int n_;
  std::vector<cx> amp_;
};

// --- small dense operator helpers (Eigen backed) --------------------------

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
Eigen::MatrixXcd pauli_matrix(char kind);  // 'I','X','Y','Z'
Eigen::MatrixXcd dense_pauli(const PauliString& p);
// Full 2^n unitary of a Clifford circuit.
Eigen::MatrixXcd dense_unitary(const CliffordCircuit& c, int cap = 12);
// Gate matrices for the verification gate set.
Eigen::MatrixXcd lambda_p_matrix();  // controlled-P on 2 qubits
Eigen::MatrixXcd hh_matrix();        // H tensor H

// Embed a 2^k x 2^k operator acting on `support` into n qubits.
Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& local, const std::vector<int>& support, int n);
// Partial trace keeping the listed qubits (row order = listed order).
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, int n, const std::vector<int>& keep);

double min_eigenvalue(const Eigen::MatrixXcd& hermitian);
bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12);
bool is_projection(const Eigen::MatrixXcd& m, double tol = 1e-12);
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double real_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);  // Re tr(a† b)

}  // namespace lchzk
