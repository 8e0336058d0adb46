#include "lchzk/pauli.hpp"

#include <bit>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace lchzk {

namespace {

int words_for(int n) { return (n + 63) / 64; }

}  // namespace

PauliString PauliString::identity(int n) {
  PauliString p;
  p.n = n;
  p.x.assign(words_for(n), 0);
  p.z.assign(words_for(n), 0);
  p.phase = 0;
  return p;
}

PauliString PauliString::single(int n, int qubit, char kind) {
  if (qubit < 0 || qubit >= n) throw std::out_of_range("pauli qubit index");
  PauliString p = identity(n);
  switch (kind) {
    case 'X': p.set_x(qubit, true); break;
    case 'Z': p.set_z(qubit, true); break;
    case 'Y':
      p.set_x(qubit, true);
      p.set_z(qubit, true);
      p.phase = 1;
      break;
    default: throw std::invalid_argument("pauli kind must be X, Y or Z");
  }
  return p;
}

void PauliString::set_x(int q, bool v) {
  uint64_t m = uint64_t{1} << (q & 63);
  if (v)
    x[q >> 6] |= m;
  else
    x[q >> 6] &= ~m;
}

void PauliString::set_z(int q, bool v) {
  uint64_t m = uint64_t{1} << (q & 63);
  if (v)
    z[q >> 6] |= m;
  else
    z[q >> 6] &= ~m;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (n != other.n) throw std::invalid_argument("pauli length mismatch");
  int acc = 0;
  for (size_t w = 0; w < x.size(); ++w) {
    acc ^= std::popcount(x[w] & other.z[w]) & 1;
    acc ^= std::popcount(z[w] & other.x[w]) & 1;
  }
  return acc == 0;
}

bool PauliString::is_identity_up_to_phase() const {
  for (size_t w = 0; w < x.size(); ++w)
    if (x[w] | z[w]) return false;
  return true;
}

bool PauliString::operator==(const PauliString& other) const {
  return n == other.n && phase == other.phase && x == other.x && z == other.z;
}

std::string PauliString::str() const {
  // Count Y positions so their internal i factors can be shown against a
  // plain XZ/Y letter alphabet.
  int ph = phase;
  std::string body;
  body.reserve(n);
  for (int q = 0; q < n; ++q) {
    bool xb = x_bit(q), zb = z_bit(q);
    if (xb && zb) {
      body.push_back('Y');
      ph = (ph + 3) & 3;  // Y = i XZ, letter absorbs one i
    } else if (xb) {
      body.push_back('X');
    } else if (zb) {
      body.push_back('Z');
    } else {
      body.push_back('I');
    }
  }
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  return std::string(prefix[ph]) + body;
}

PauliString pauli_multiply(const PauliString& p, const PauliString& q) {
  if (p.n != q.n) throw std::invalid_argument("pauli length mismatch");
  PauliString r = PauliString::identity(p.n);
  int extra = 0;
  for (size_t w = 0; w < p.x.size(); ++w) {
    // Reorder per qubit: Z^pz X^qx = (-1)^(pz&qx) X^qx Z^pz.
    extra += 2 * std::popcount(p.z[w] & q.x[w]);
    r.x[w] = p.x[w] ^ q.x[w];
    r.z[w] = p.z[w] ^ q.z[w];
  }
  r.phase = (p.phase + q.phase + extra) & 3;
  return r;
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::P: return "P";
    case GateKind::CNOT: return "CNOT";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
  }
  return "?";
}

CliffordCircuit& CliffordCircuit::h(int q) {
  gates.push_back({GateKind::H, q, -1});
  return *this;
}
CliffordCircuit& CliffordCircuit::p(int q) {
  gates.push_back({GateKind::P, q, -1});
  return *this;
}
CliffordCircuit& CliffordCircuit::cnot(int control, int target) {
  gates.push_back({GateKind::CNOT, control, target});
  return *this;
}
CliffordCircuit& CliffordCircuit::x(int q) {
  gates.push_back({GateKind::X, q, -1});
  return *this;
}
CliffordCircuit& CliffordCircuit::z(int q) {
  gates.push_back({GateKind::Z, q, -1});
  return *this;
}
CliffordCircuit& CliffordCircuit::cz(int a, int b) {
  h(b);
  cnot(a, b);
  h(b);
  return *this;
}

void CliffordCircuit::append(const CliffordCircuit& other) {
  if (other.n != n) throw std::invalid_argument("circuit width mismatch");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

CliffordCircuit CliffordCircuit::inverse() const {
  CliffordCircuit inv(n);
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (it->kind == GateKind::P) {
      inv.p(it->q0).p(it->q0).p(it->q0);
    } else {
      inv.gates.push_back(*it);
    }
  }
  return inv;
}

CliffordCircuit CliffordCircuit::conjugated() const {
  CliffordCircuit conj(n);
  for (const Gate& g : gates) {
    if (g.kind == GateKind::P) {
      conj.p(g.q0).p(g.q0).p(g.q0);
    } else {
      conj.gates.push_back(g);
    }
  }
  return conj;
}

CliffordCircuit CliffordCircuit::remapped(int new_n, const std::vector<int>& qubit_map) const {
  if (static_cast<int>(qubit_map.size()) != n) throw std::invalid_argument("qubit map size mismatch");
  CliffordCircuit out(new_n);
  for (const Gate& g : gates) {
    Gate m = g;
    m.q0 = qubit_map[g.q0];
    if (g.q1 >= 0) m.q1 = qubit_map[g.q1];
    out.gates.push_back(m);
  }
  out.validate();
  return out;
}

void CliffordCircuit::validate() const {
  for (const Gate& g : gates) {
    if (g.q0 < 0 || g.q0 >= n) throw std::invalid_argument("gate qubit out of range");
    if (g.kind == GateKind::CNOT) {
      if (g.q1 < 0 || g.q1 >= n) throw std::invalid_argument("gate qubit out of range");
      if (g.q1 == g.q0) throw std::invalid_argument("CNOT qubits must be distinct");
    } else if (g.q1 != -1) {
      throw std::invalid_argument("single-qubit gate with two indices");
    }
  }
}

void conjugate_by_gate(const Gate& g, PauliString& p) {
  switch (g.kind) {
    case GateKind::H: {
      bool xb = p.x_bit(g.q0), zb = p.z_bit(g.q0);
      // X <-> Z, Y -> -Y
      if (xb && zb) p.phase = (p.phase + 2) & 3;
      p.set_x(g.q0, zb);
      p.set_z(g.q0, xb);
      break;
    }
    case GateKind::P: {
      bool xb = p.x_bit(g.q0), zb = p.z_bit(g.q0);
      // X -> iXZ (=Y), XZ -> iX
      if (xb) {
        p.phase = (p.phase + 1) & 3;
        p.set_z(g.q0, !zb);
      }
      break;
    }
    case GateKind::CNOT: {
      bool xc = p.x_bit(g.q0), zc = p.z_bit(g.q0);
      bool xt = p.x_bit(g.q1), zt = p.z_bit(g.q1);
      // Sign rule in the Hermitian-letter convention, plus the change in Y
      // count (each Y carries an i in the i^phase X^x Z^z form).
      int delta = 0;
      if (xc && zt && (xt == zc)) delta += 2;
      int y_before = static_cast<int>(xc && zc) + static_cast<int>(xt && zt);
      bool nxt = xt ^ xc, nzc = zc ^ zt;
      int y_after = static_cast<int>(xc && nzc) + static_cast<int>(nxt && zt);
      p.phase = (p.phase + delta + y_after - y_before + 4) & 3;
      p.set_x(g.q1, nxt);
      p.set_z(g.q0, nzc);
      break;
    }
    case GateKind::X:
      if (p.z_bit(g.q0)) p.phase = (p.phase + 2) & 3;
      break;
    case GateKind::Z:
      if (p.x_bit(g.q0)) p.phase = (p.phase + 2) & 3;
      break;
  }
}

PauliString conjugate_pauli(const CliffordCircuit& c, const PauliString& p) {
  if (c.n != p.n) throw std::invalid_argument("circuit/pauli length mismatch");
  PauliString q = p;
  for (const Gate& g : c.gates) conjugate_by_gate(g, q);
  return q;
}

CliffordTableau CliffordTableau::from_circuit(const CliffordCircuit& c) {
  CliffordTableau t;
  t.n = c.n;
  t.x_images.reserve(c.n);
  t.z_images.reserve(c.n);
  for (int q = 0; q < c.n; ++q) {
    t.x_images.push_back(conjugate_pauli(c, PauliString::single(c.n, q, 'X')));
    t.z_images.push_back(conjugate_pauli(c, PauliString::single(c.n, q, 'Z')));
  }
  return t;
}

bool CliffordTableau::is_symplectic() const {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!x_images[i].commutes_with(x_images[j])) return false;
      if (!z_images[i].commutes_with(z_images[j])) return false;
      bool should_anticommute = (i == j);
      if (x_images[i].commutes_with(z_images[j]) == should_anticommute) return false;
    }
  }
  return true;
}

bool CliffordTableau::operator==(const CliffordTableau& other) const {
  return n == other.n && x_images == other.x_images && z_images == other.z_images;
}

std::string CliffordTableau::key() const {
  std::string s;
  for (int q = 0; q < n; ++q) {
    s += x_images[q].str();
    s += '|';
    s += z_images[q].str();
    s += '|';
  }
  return s;
}

CliffordCircuit random_clifford(int k, Rng& rng, int length) {
  if (k < 1 || k > 6) throw std::invalid_argument("random_clifford supports 1..6 qubits");
  CliffordCircuit c(k);
  // One extra optional gate: fixed-parity {H,P} words only reach half of
  // the single-qubit group.
  length += static_cast<int>(rng.below(2));
  for (int i = 0; i < length; ++i) {
    int which = static_cast<int>(rng.below(k >= 2 ? 3 : 2));
    int q = static_cast<int>(rng.below(k));
    switch (which) {
      case 0: c.h(q); break;
      case 1: c.p(q); break;
      default: {
        int t = static_cast<int>(rng.below(k - 1));
        if (t >= q) ++t;
        c.cnot(q, t);
      }
    }
  }
  return c;
}

// --- serialization -------------------------------------------------------

nlohmann::json PauliString::to_json() const {
  std::string xs(n, '0'), zs(n, '0');
  for (int q = 0; q < n; ++q) {
    if (x_bit(q)) xs[q] = '1';
    if (z_bit(q)) zs[q] = '1';
  }
  return nlohmann::json{{"x", xs}, {"z", zs}, {"phase", phase}};
}

PauliString PauliString::from_json(const nlohmann::json& j) {
  std::string xs = j.at("x").get<std::string>();
  std::string zs = j.at("z").get<std::string>();
  if (xs.size() != zs.size()) throw std::invalid_argument("pauli x/z length mismatch");
  PauliString p = identity(static_cast<int>(xs.size()));
  for (size_t q = 0; q < xs.size(); ++q) {
    p.set_x(static_cast<int>(q), xs[q] == '1');
    p.set_z(static_cast<int>(q), zs[q] == '1');
  }
  p.phase = j.at("phase").get<int>() & 3;
  return p;
}

nlohmann::json CliffordCircuit::to_json() const {
  nlohmann::json gs = nlohmann::json::array();
  for (const Gate& g : gates) {
    nlohmann::json e = nlohmann::json::array();
    e.push_back(gate_name(g.kind));
    e.push_back(g.q0);
    if (g.kind == GateKind::CNOT) e.push_back(g.q1);
    gs.push_back(e);
  }
  return nlohmann::json{{"n", n}, {"gates", gs}};
}

CliffordCircuit CliffordCircuit::from_json(const nlohmann::json& j) {
  CliffordCircuit c(j.at("n").get<int>());
  for (const auto& e : j.at("gates")) {
    std::string name = e.at(0).get<std::string>();
    int q0 = e.at(1).get<int>();
    if (name == "H")
      c.h(q0);
    else if (name == "P")
      c.p(q0);
    else if (name == "X")
      c.x(q0);
    else if (name == "Z")
      c.z(q0);
    else if (name == "CNOT")
      c.cnot(q0, e.at(2).get<int>());
    else
      throw std::invalid_argument("unknown gate name: " + name);
  }
  c.validate();
  return c;
}

}  // namespace lchzk
