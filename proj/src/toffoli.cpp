#include "qf/toffoli.hpp"

#include <sstream>

namespace qf {

namespace {

void check_m(unsigned m) {
  if (m < 2 || m > 6) {
    std::ostringstream msg;
    msg << "Toffoli arity m=" << m << " out of supported range [2, 6]";
    throw EvalError(msg.str());
  }
}

int and_of_bits(unsigned x, unsigned width) {
  return x == (1u << width) - 1 ? 1 : 0;
}

// The four single-bit gates available around the classical Toffoli.
using BitGate = int (*)(int);
constexpr BitGate kBitGates[4] = {
    [](int b) { return b; },
    [](int b) { return 1 - b; },
    [](int) { return 0; },
    [](int) { return 1; },
};

}  // namespace

Channel toffoli_channel(unsigned m) {
  check_m(m);
  const unsigned controls = m - 1;
  Channel c{m, 1, {}};
  // One Kraus operator per measured control pattern x: it maps |x, b> to
  // |b xor AND(x)> and annihilates every other control pattern.
  for (unsigned x = 0; x < (1u << controls); ++x) {
    Mat k = Mat::Zero(2, Eigen::Index(1) << m);
    for (int b = 0; b < 2; ++b) k(b ^ and_of_bits(x, controls), (x << 1) | b) = 1.0;
    c.kraus.push_back(std::move(k));
  }
  validate_channel(c, 1e-12);
  return c;
}

ToffoliAnalysis verify_output_identity(const std::vector<DensityMatrix>& controls,
                                       const DensityMatrix& target, const Tolerances& tol) {
  const unsigned m = static_cast<unsigned>(controls.size()) + 1;
  check_m(m);
  for (const DensityMatrix& c : controls)
    if (c.dim() != 2) throw EvalError("controls must be single-qubit states");
  if (target.dim() != 2) throw EvalError("target must be a single-qubit state");

  ToffoliAnalysis out;
  out.m = m;
  out.a = 1.0;
  Mat joint = Mat::Identity(1, 1);
  for (const DensityMatrix& c : controls) {
    out.control_one_weights.push_back(c.mat(1, 1).real());
    out.a *= out.control_one_weights.back();
    joint = kron(joint, c.mat);
  }
  joint = kron(joint, target.mat);

  out.actual = apply_channel(toffoli_channel(m), DensityMatrix{std::move(joint)});
  const Mat x = pauli_x();
  out.predicted = DensityMatrix{out.a * (x * target.mat * x) + (1.0 - out.a) * target.mat};

  const double dist = trace_distance(out.predicted, out.actual);
  if (dist > tol.eps_num) {
    std::ostringstream msg;
    msg << "traced-Toffoli output identity violated by " << dist << " (m=" << m << ")";
    throw InternalError(msg.str());
  }
  return out;
}

std::set<TruthTable> enumerate_f_tof(unsigned m) {
  check_m(m);
  const TruthTable base = toffoli_table(m);
  std::set<TruthTable> tables;
  // 4 choices per input wire plus 4 for the output: iterate them as digits of
  // a base-4 counter.
  unsigned combos = 1;
  for (unsigned i = 0; i <= m; ++i) combos *= 4;
  for (unsigned sel = 0; sel < combos; ++sel) {
    TruthTable t{m, std::vector<std::uint8_t>(1u << m)};
    for (unsigned x = 0; x < t.bits.size(); ++x) {
      unsigned digits = sel;
      unsigned y = 0;
      for (unsigned i = 0; i < m; ++i) {
        const int in = (x >> (m - 1 - i)) & 1u;
        y = (y << 1) | static_cast<unsigned>(kBitGates[digits & 3u](in));
        digits >>= 2;
      }
      t.bits[x] = static_cast<std::uint8_t>(kBitGates[digits & 3u](base.at(y)));
    }
    tables.insert(std::move(t));
  }
  return tables;
}

TruthTable classify_depth_one(const std::vector<Channel>& pre, const Channel& post, unsigned m,
                              const Tolerances& tol) {
  check_m(m);
  if (pre.size() != m) throw EvalError("classify_depth_one: one pre channel per input required");
  for (const Channel& c : pre)
    if (c.in_qubits != 1 || c.out_qubits != 1)
      throw EvalError("classify_depth_one: pre channels must be 1->1");
  if (post.in_qubits != 1 || post.out_qubits != 1)
    throw EvalError("classify_depth_one: post channel must be 1->1");

  const Channel tof = toffoli_channel(m);
  TruthTable t{m, std::vector<std::uint8_t>(1u << m)};
  for (unsigned x = 0; x < t.bits.size(); ++x) {
    Mat joint = Mat::Identity(1, 1);
    for (unsigned i = 0; i < m; ++i) {
      const DensityMatrix in = basis_state((x >> (m - 1 - i)) & 1u);
      joint = kron(joint, apply_channel(pre[i], in).mat);
    }
    const DensityMatrix out = apply_channel(post, apply_channel(tof, DensityMatrix{joint}));
    const auto bit = is_classical_state(out, tol);
    if (!bit.has_value()) {
      std::ostringstream msg;
      msg << "NonClassicalOutput: input " << x << " yields a non-classical output";
      throw NonClassicalOutput(msg.str());
    }
    t.bits[x] = static_cast<std::uint8_t>(*bit);
  }

  if (!enumerate_f_tof(m).count(t))
    throw InternalError("classical depth-one Toffoli dressing produced a table outside F^Tof");
  return t;
}

}  // namespace qf
