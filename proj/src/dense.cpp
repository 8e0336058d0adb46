#include "lchzk/dense.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace lchzk {

namespace {
constexpr cx kI{0.0, 1.0};

inline int bit_of(uint64_t index, int q, int n) { return static_cast<int>((index >> (n - 1 - q)) & 1); }
}  // namespace

DenseState::DenseState(int n, int cap) : n_(n) {
  if (n < 0 || n > cap) throw std::invalid_argument("dense state exceeds qubit cap");
  amp_.assign(uint64_t{1} << n, cx{0.0, 0.0});
  amp_[0] = 1.0;
}

DenseState DenseState::basis(int n, const BitString& bits, int cap) {
  if (static_cast<int>(bits.size()) != n) throw std::invalid_argument("basis string length mismatch");
  DenseState s(n, cap);
  s.amp_[0] = 0.0;
  s.amp_[bitstring_value(bits)] = 1.0;
  return s;
}

void DenseState::apply_h(int q) {
  const uint64_t stride = uint64_t{1} << (n_ - 1 - q);
  const double inv = 1.0 / std::sqrt(2.0);
  for (uint64_t base = 0; base < amp_.size(); base += 2 * stride) {
    for (uint64_t i = base; i < base + stride; ++i) {
      cx a = amp_[i], b = amp_[i + stride];
      amp_[i] = (a + b) * inv;
      amp_[i + stride] = (a - b) * inv;
    }
  }
}

void DenseState::apply_p(int q) {
  for (uint64_t i = 0; i < amp_.size(); ++i)
    if (bit_of(i, q, n_)) amp_[i] *= kI;
}

void DenseState::apply_x(int q) {
  const uint64_t stride = uint64_t{1} << (n_ - 1 - q);
  for (uint64_t base = 0; base < amp_.size(); base += 2 * stride)
    for (uint64_t i = base; i < base + stride; ++i) std::swap(amp_[i], amp_[i + stride]);
}

void DenseState::apply_z(int q) {
  for (uint64_t i = 0; i < amp_.size(); ++i)
    if (bit_of(i, q, n_)) amp_[i] = -amp_[i];
}

void DenseState::apply_cnot(int control, int target) {
  const uint64_t tmask = uint64_t{1} << (n_ - 1 - target);
  for (uint64_t i = 0; i < amp_.size(); ++i)
    if (bit_of(i, control, n_) && !(i & tmask)) std::swap(amp_[i], amp_[i | tmask]);
}

void DenseState::apply_controlled_p(int control, int target) {
  for (uint64_t i = 0; i < amp_.size(); ++i)
    if (bit_of(i, control, n_) && bit_of(i, target, n_)) amp_[i] *= kI;
}

void DenseState::apply_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: apply_h(g.q0); break;
    case GateKind::P: apply_p(g.q0); break;
    case GateKind::CNOT: apply_cnot(g.q0, g.q1); break;
    case GateKind::X: apply_x(g.q0); break;
    case GateKind::Z: apply_z(g.q0); break;
  }
}

void DenseState::apply_circuit(const CliffordCircuit& c) {
  if (c.n != n_) throw std::invalid_argument("circuit width mismatch");
  for (const Gate& g : c.gates) apply_gate(g);
}

void DenseState::apply_unitary(const Eigen::MatrixXcd& u, const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  const uint64_t dim = uint64_t{1} << k;
  if (u.rows() != static_cast<Eigen::Index>(dim) || u.cols() != static_cast<Eigen::Index>(dim))
    throw std::invalid_argument("unitary dimension mismatch");
  std::vector<uint64_t> masks(k);
  for (int j = 0; j < k; ++j) masks[j] = uint64_t{1} << (n_ - 1 - qubits[j]);

  std::vector<cx> scratch(dim);
  std::vector<uint64_t> addr(dim);
  // Iterate over configurations of the untouched qubits.
  uint64_t touched = 0;
  for (auto m : masks) touched |= m;
  for (uint64_t rest = 0; rest < amp_.size(); ++rest) {
    if (rest & touched) continue;
    for (uint64_t sub = 0; sub < dim; ++sub) {
      uint64_t idx = rest;
      for (int j = 0; j < k; ++j)
        if ((sub >> (k - 1 - j)) & 1) idx |= masks[j];
      addr[sub] = idx;
    }
    for (uint64_t row = 0; row < dim; ++row) {
      cx acc{0.0, 0.0};
      for (uint64_t col = 0; col < dim; ++col) acc += u(row, col) * amp_[addr[col]];
      scratch[row] = acc;
    }
    for (uint64_t row = 0; row < dim; ++row) amp_[addr[row]] = scratch[row];
  }
}

double DenseState::norm() const {
  double s = 0.0;
  for (const cx& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

std::vector<double> DenseState::z_probabilities() const {
  std::vector<double> p(amp_.size());
  for (size_t i = 0; i < amp_.size(); ++i) p[i] = std::norm(amp_[i]);
  return p;
}

BitString DenseState::sample_measurement(Rng& rng) const {
  double r = rng.real01();
  double acc = 0.0;
  uint64_t pick = amp_.size() - 1;
  for (uint64_t i = 0; i < amp_.size(); ++i) {
    acc += std::norm(amp_[i]);
    if (r < acc) {
      pick = i;
      break;
    }
  }
  return bitstring_of_value(pick, n_);
}

Eigen::MatrixXcd DenseState::density() const {
  Eigen::Map<const Eigen::VectorXcd> v(amp_.data(), static_cast<Eigen::Index>(amp_.size()));
  return v * v.adjoint();
}

Eigen::MatrixXcd DenseState::reduced_density(const std::vector<int>& keep) const {
  const int k = static_cast<int>(keep.size());
  const uint64_t dim = uint64_t{1} << k;
  std::vector<uint64_t> masks(k);
  uint64_t touched = 0;
  for (int j = 0; j < k; ++j) {
    masks[j] = uint64_t{1} << (n_ - 1 - keep[j]);
    touched |= masks[j];
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<cx> col(dim);
  for (uint64_t rest = 0; rest < amp_.size(); ++rest) {
    if (rest & touched) continue;
    for (uint64_t sub = 0; sub < dim; ++sub) {
      uint64_t idx = rest;
      for (int j = 0; j < k; ++j)
        if ((sub >> (k - 1 - j)) & 1) idx |= masks[j];
      col[sub] = amp_[idx];
    }
    for (uint64_t a = 0; a < dim; ++a)
      for (uint64_t b = 0; b < dim; ++b) rho(a, b) += col[a] * std::conj(col[b]);
  }
  return rho;
}

DenseState DenseState::tensor(const DenseState& other) const {
  DenseState out(n_ + other.n_, DenseState::kDefaultCap);
  for (uint64_t i = 0; i < amp_.size(); ++i)
    for (uint64_t j = 0; j < other.amp_.size(); ++j)
      out.amp_[(i << other.n_) | j] = amp_[i] * other.amp_[j];
  return out;
}

void DenseState::permute_qubits(const std::vector<int>& mapping) {
  if (static_cast<int>(mapping.size()) != n_) throw std::invalid_argument("qubit mapping size mismatch");
  std::vector<cx> out(amp_.size());
  for (uint64_t i = 0; i < amp_.size(); ++i) {
    uint64_t j = 0;
    for (int q = 0; q < n_; ++q)
      if (bit_of(i, q, n_)) j |= uint64_t{1} << (n_ - 1 - mapping[q]);
    out[j] = amp_[i];
  }
  amp_ = std::move(out);
}

// --- operator helpers ------------------------------------------------------

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd pauli_matrix(char kind) {
  Eigen::MatrixXcd m(2, 2);
  switch (kind) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -kI, kI, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli kind");
  }
  return m;
}

Eigen::MatrixXcd dense_pauli(const PauliString& p) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < p.n; ++q) {
    bool xb = p.x_bit(q), zb = p.z_bit(q);
    Eigen::MatrixXcd factor;
    if (xb && zb)
      factor = pauli_matrix('X') * pauli_matrix('Z');  // XZ, the stored i lives in phase
    else if (xb)
      factor = pauli_matrix('X');
    else if (zb)
      factor = pauli_matrix('Z');
    else
      factor = pauli_matrix('I');
    out = kron(out, factor);
  }
  cx ph{1.0, 0.0};
  for (int i = 0; i < (p.phase & 3); ++i) ph *= kI;
  return ph * out;
}

Eigen::MatrixXcd dense_unitary(const CliffordCircuit& c, int cap) {
  if (c.n > cap) throw std::invalid_argument("dense unitary exceeds qubit cap");
  const uint64_t dim = uint64_t{1} << c.n;
  Eigen::MatrixXcd u(dim, dim);
  for (uint64_t col = 0; col < dim; ++col) {
    DenseState s = DenseState::basis(c.n, bitstring_of_value(col, c.n));
    s.apply_circuit(c);
    for (uint64_t row = 0; row < dim; ++row) u(row, col) = s.amplitude(row);
  }
  return u;
}

Eigen::MatrixXcd lambda_p_matrix() {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(4, 4);
  u(3, 3) = kI;
  return u;
}

Eigen::MatrixXcd hh_matrix() {
  Eigen::MatrixXcd h(2, 2);
  double inv = 1.0 / std::sqrt(2.0);
  h << inv, inv, inv, -inv;
  return kron(h, h);
}

Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& local, const std::vector<int>& support, int n) {
  const int k = static_cast<int>(support.size());
  const uint64_t ldim = uint64_t{1} << k;
  if (local.rows() != static_cast<Eigen::Index>(ldim)) throw std::invalid_argument("local operator dimension mismatch");
  const uint64_t dim = uint64_t{1} << n;
  std::vector<uint64_t> masks(k);
  uint64_t touched = 0;
  for (int j = 0; j < k; ++j) {
    masks[j] = uint64_t{1} << (n - 1 - support[j]);
    touched |= masks[j];
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (uint64_t rest = 0; rest < dim; ++rest) {
    if (rest & touched) continue;
    for (uint64_t a = 0; a < ldim; ++a) {
      uint64_t ra = rest;
      for (int j = 0; j < k; ++j)
        if ((a >> (k - 1 - j)) & 1) ra |= masks[j];
      for (uint64_t b = 0; b < ldim; ++b) {
        uint64_t rb = rest;
        for (int j = 0; j < k; ++j)
          if ((b >> (k - 1 - j)) & 1) rb |= masks[j];
        out(ra, rb) += local(a, b);
      }
    }
  }
  return out;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, int n, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  const uint64_t kdim = uint64_t{1} << k;
  std::vector<uint64_t> masks(k);
  uint64_t touched = 0;
  for (int j = 0; j < k; ++j) {
    masks[j] = uint64_t{1} << (n - 1 - keep[j]);
    touched |= masks[j];
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kdim, kdim);
  const uint64_t dim = uint64_t{1} << n;
  for (uint64_t rest = 0; rest < dim; ++rest) {
    if (rest & touched) continue;
    for (uint64_t a = 0; a < kdim; ++a) {
      uint64_t ra = rest;
      for (int j = 0; j < k; ++j)
        if ((a >> (k - 1 - j)) & 1) ra |= masks[j];
      for (uint64_t b = 0; b < kdim; ++b) {
        uint64_t rb = rest;
        for (int j = 0; j < k; ++j)
          if ((b >> (k - 1 - j)) & 1) rb |= masks[j];
        out(a, b) += rho(ra, rb);
      }
    }
  }
  return out;
}

double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_projection(const Eigen::MatrixXcd& m, double tol) {
  return is_hermitian(m, tol) && (m * m - m).cwiseAbs().maxCoeff() <= tol;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd d = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(d, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double real_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace lchzk
