#include "qf/genrand.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace qf {

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) { return n <= 1 ? 0 : next() % n; }

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

Cx SplitMix64::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Cx(re, im) / std::sqrt(2.0);
}

Mat haar_unitary(unsigned dim, SplitMix64& rng) {
  Mat a(dim, dim);
  for (unsigned r = 0; r < dim; ++r)
    for (unsigned c = 0; c < dim; ++c) a(r, c) = rng.complex_gaussian();
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (unsigned i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    q.col(i) *= mag > 1e-300 ? r(i, i) / mag : Cx(1.0, 0.0);
  }
  return q;
}

DensityMatrix random_pure(SplitMix64& rng) {
  Vec psi(2);
  psi << rng.complex_gaussian(), rng.complex_gaussian();
  return pure_state(psi);
}

DensityMatrix random_density(SplitMix64& rng) {
  double nx = rng.gaussian(), ny = rng.gaussian(), nz = rng.gaussian();
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (norm < 1e-12) return DensityMatrix{0.5 * Mat::Identity(2, 2)};
  const double r = rng.uniform();
  nx *= r / norm;
  ny *= r / norm;
  nz *= r / norm;
  Mat m = 0.5 * (Mat::Identity(2, 2) + nx * pauli_x() + ny * pauli_y() + nz * pauli_z());
  return DensityMatrix{std::move(m)};
}

Channel random_single_qubit_channel(SplitMix64& rng) {
  const double q = 0.5 * static_cast<double>(rng.below(3));
  const Mat u = haar_unitary(2, rng);
  const DensityMatrix prep = rng.below(2) ? random_pure(rng) : random_density(rng);
  if (q == 1.0) return unitary_channel(u);
  if (q == 0.0) return prepare_channel(prep);
  Channel c{1, 1, {}};
  c.kraus.push_back(std::sqrt(q) * u);
  for (const Mat& k : prepare_channel(prep).kraus) c.kraus.push_back(std::sqrt(1.0 - q) * k);
  validate_channel(c, 1e-9);
  return c;
}

Channel random_dressing_channel(SplitMix64& rng) {
  if (rng.below(2) == 0) {
    switch (rng.below(4)) {
      case 0: return identity_channel(1);
      case 1: return unitary_channel(pauli_x());
      case 2: return prepare_channel(basis_state(0));
      default: return prepare_channel(basis_state(1));
    }
  }
  if (rng.below(4) == 0) {
    // X eigenstates make the traced Toffoli ignore the target input.
    Vec plus(2);
    plus << 1.0, (rng.below(2) ? 1.0 : -1.0);
    return prepare_channel(pure_state(plus));
  }
  return random_single_qubit_channel(rng);
}

void validate(const GenConfig& cfg) {
  if (cfg.max_vars < 1 || cfg.max_vars > 20) throw Error("GenConfig: max_vars must be in [1, 20]");
  if (cfg.max_arity < 2 || cfg.max_arity > 6) throw Error("GenConfig: max_arity must be in [2, 6]");
  if (cfg.noise < 0.0 || cfg.noise >= 1.0) throw Error("GenConfig: noise must be in [0, 1)");
}

namespace {

// Largest leaf count reachable with the given depth budget.
unsigned capacity(unsigned depth, unsigned max_arity) {
  unsigned cap = 1;
  for (unsigned i = 0; i < depth; ++i) {
    if (cap > 20 / max_arity + 1) return 21;  // saturate past the enumeration ceiling
    cap *= max_arity;
  }
  return std::min(cap, 21u);
}

TruthTable random_nondegenerate_table(unsigned arity, SplitMix64& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    TruthTable t{arity, std::vector<std::uint8_t>(1u << arity)};
    for (auto& b : t.bits) b = static_cast<std::uint8_t>(rng.below(2));
    if (is_nondegenerate(t)) return t;
  }
  return xor_table(arity);
}

TruthTable random_gate_table(unsigned arity, SplitMix64& rng) {
  switch (rng.below(3)) {
    case 0:
      return xor_table(arity);
    case 1: {
      // Toffoli-style: the classical Toffoli with NOT gates sprinkled on
      // inputs and output; stays nondegenerate.
      TruthTable base = toffoli_table(arity);
      const unsigned in_mask = static_cast<unsigned>(rng.below(1u << arity));
      const bool flip_out = rng.below(2) != 0;
      TruthTable t{arity, std::vector<std::uint8_t>(1u << arity)};
      for (unsigned x = 0; x < t.bits.size(); ++x)
        t.bits[x] = static_cast<std::uint8_t>(base.at(x ^ in_mask) ^ (flip_out ? 1 : 0));
      return t;
    }
    default:
      return random_nondegenerate_table(arity, rng);
  }
}

CFormula build_rof(const unsigned* vars, unsigned count, unsigned depth, unsigned max_arity,
                   SplitMix64& rng) {
  if (count == 1) return CFormula{CFormula::Leaf{vars[0]}};
  const unsigned child_cap = capacity(depth - 1, max_arity);
  const unsigned min_arity = std::max(2u, (count + child_cap - 1) / child_cap);
  const unsigned max_a = std::min(max_arity, count);
  const unsigned arity = min_arity + static_cast<unsigned>(rng.below(max_a - min_arity + 1));

  // Split the variable block into `arity` contiguous sub-blocks, each nonempty
  // and within the child capacity.
  std::vector<unsigned> sizes(arity, 0);
  unsigned remaining = count;
  for (unsigned i = 0; i < arity; ++i) {
    const unsigned slots_after = arity - i - 1;
    const unsigned lo = std::max(1u, remaining > slots_after * child_cap
                                         ? remaining - slots_after * child_cap
                                         : 1u);
    const unsigned hi = std::min(child_cap, remaining - slots_after);
    sizes[i] = lo + static_cast<unsigned>(rng.below(hi - lo + 1));
    remaining -= sizes[i];
  }

  CFormula::Gate gate;
  gate.table = random_gate_table(arity, rng);
  unsigned offset = 0;
  for (unsigned i = 0; i < arity; ++i) {
    gate.children.push_back(build_rof(vars + offset, sizes[i], depth - 1, max_arity, rng));
    offset += sizes[i];
  }
  return CFormula{std::move(gate)};
}

// Quantum lift of a truth table: measure the inputs in the computational
// basis and prepare the table's output bit.
Channel classical_lift(const TruthTable& t) {
  Channel c{t.arity, 1, {}};
  for (unsigned x = 0; x < t.bits.size(); ++x) {
    Mat k = Mat::Zero(2, Eigen::Index(1) << t.arity);
    k(t.at(x), x) = 1.0;
    c.kraus.push_back(std::move(k));
  }
  validate_channel(c, 1e-12);
  return c;
}

QFormula lift_node(const CFormula& f) {
  if (f.is_leaf()) return QFormula{QFormula::Leaf{f.leaf().var}};
  QFormula::Gate gate;
  gate.channel = classical_lift(f.gate().table);
  for (const CFormula& c : f.gate().children) {
    gate.pre.push_back(std::nullopt);
    gate.children.push_back(lift_node(c));
  }
  return QFormula{std::move(gate)};
}

// Applies u^dag to wire `wire` of the gate's channel (fusing it into every
// Kraus operator).
void absorb_adjoint(Channel& channel, unsigned wire, const Mat& u) {
  Mat w = Mat::Identity(1, 1);
  for (unsigned i = 0; i < channel.in_qubits; ++i)
    w = kron(w, i == wire ? Mat(u.adjoint()) : Mat(Mat::Identity(2, 2)));
  for (Mat& k : channel.kraus) k = k * w;
}

void obfuscate_node(QFormula& f, unsigned rounds, SplitMix64& rng) {
  if (f.is_leaf()) return;
  auto& gate = f.gate();
  for (unsigned k = 0; k < gate.children.size(); ++k) {
    for (unsigned round = 0; round < rounds; ++round) {
      const Mat u = haar_unitary(2, rng);
      const Channel uc = unitary_channel(u);
      gate.pre[k] = gate.pre[k].has_value() ? compose(uc, *gate.pre[k]) : uc;
      absorb_adjoint(gate.channel, k, u);
    }
    obfuscate_node(gate.children[k], rounds, rng);
  }
}

void add_noise_node(QFormula& f, const Channel& noise) {
  if (f.is_leaf()) return;
  auto& gate = f.gate();
  for (unsigned k = 0; k < gate.children.size(); ++k) {
    gate.pre[k] = gate.pre[k].has_value() ? compose(noise, *gate.pre[k]) : noise;
    add_noise_node(gate.children[k], noise);
  }
}

BoolCircuit build_circuit(unsigned depth, unsigned max_vars, SplitMix64& rng) {
  const bool leaf = depth == 0 || rng.below(4) == 0;
  BoolCircuit c =
      leaf ? BoolCircuit::make_var(static_cast<unsigned>(rng.below(max_vars)))
           : (rng.below(2) ? BoolCircuit::make_and(build_circuit(depth - 1, max_vars, rng),
                                                   build_circuit(depth - 1, max_vars, rng))
                           : BoolCircuit::make_or(build_circuit(depth - 1, max_vars, rng),
                                                  build_circuit(depth - 1, max_vars, rng)));
  if (rng.below(4) == 0) c = BoolCircuit::make_not(std::move(c));
  return c;
}

CFormula build_affine(unsigned depth, unsigned max_vars, unsigned max_arity, SplitMix64& rng) {
  if (depth == 0 || rng.below(5) == 0) {
    switch (rng.below(4)) {
      case 0: {
        CFormula::Gate g;
        g.table = constant_table(static_cast<int>(rng.below(2)));
        g.children.push_back(CFormula{CFormula::Leaf{static_cast<unsigned>(rng.below(max_vars))}});
        return CFormula{std::move(g)};
      }
      default:
        return CFormula{CFormula::Leaf{static_cast<unsigned>(rng.below(max_vars))}};
    }
  }
  if (rng.below(4) == 0) {
    CFormula::Gate g;
    g.table = not_table();
    g.children.push_back(build_affine(depth - 1, max_vars, max_arity, rng));
    return CFormula{std::move(g)};
  }
  const unsigned arity = 2 + static_cast<unsigned>(rng.below(max_arity - 1));
  CFormula::Gate g;
  g.table = xor_table(arity);
  for (unsigned i = 0; i < arity; ++i)
    g.children.push_back(build_affine(depth - 1, max_vars, max_arity, rng));
  return CFormula{std::move(g)};
}

}  // namespace

CFormula gen_classical_rof(const GenConfig& cfg) {
  validate(cfg);
  SplitMix64 rng(cfg.seed);
  const unsigned cap = std::min(cfg.max_vars, capacity(cfg.max_depth, cfg.max_arity));
  const unsigned count = cap < 2 ? cap : 2 + static_cast<unsigned>(rng.below(cap - 1));
  std::vector<unsigned> vars(count);
  for (unsigned i = 0; i < count; ++i) vars[i] = i;
  if (count == 1) return CFormula{CFormula::Leaf{0}};
  return build_rof(vars.data(), count, cfg.max_depth, cfg.max_arity, rng);
}

QFormula lift_classical(const CFormula& f) { return lift_node(f); }

QFormula obfuscate(const CFormula& f, const GenConfig& cfg) {
  validate(cfg);
  SplitMix64 rng(cfg.seed ^ 0xb0f0a2d1c3e5f709ull);
  QFormula q = lift_node(f);
  obfuscate_node(q, cfg.obfuscation_rounds, rng);
  return q;
}

QFormula add_noise(const QFormula& f, double noise) {
  if (noise < 0.0 || noise >= 1.0) throw Error("noise must be in [0, 1)");
  QFormula out = f;
  if (noise > 0.0) add_noise_node(out, depolarizing_channel(noise));
  return out;
}

BoolCircuit gen_circuit(const GenConfig& cfg) {
  validate(cfg);
  SplitMix64 rng(cfg.seed ^ 0x51ab3c92ef77d104ull);
  return build_circuit(cfg.max_depth, cfg.max_vars, rng);
}

CFormula gen_affine_cformula(const GenConfig& cfg) {
  validate(cfg);
  SplitMix64 rng(cfg.seed ^ 0x0ddc0ffeebadf00dull);
  return build_affine(cfg.max_depth, cfg.max_vars, cfg.max_arity, rng);
}

}  // namespace qf
