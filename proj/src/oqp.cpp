#include "qf/oqp.hpp"

#include <algorithm>
#include <cmath>

namespace qf {

namespace {

using Item = OneQubitProgram::Item;
using Single = OneQubitProgram::SingleQubit;
using Ctrl = OneQubitProgram::ControlledX;

void push_single(std::vector<Item>& items, const Mat& u) {
  if (!items.empty()) {
    if (auto* s = std::get_if<Single>(&items.back())) {
      s->u = u * s->u;  // later gate acts after, i.e. multiplies on the left
      return;
    }
  }
  items.emplace_back(Single{u});
}

void append(std::vector<Item>& items, const std::vector<Item>& tail) {
  for (const Item& it : tail) {
    if (const auto* s = std::get_if<Single>(&it))
      push_single(items, s->u);
    else
      items.push_back(it);
  }
}

// Emits the program for `c` in time order. The matrix products in the AND
// construction read right to left, so emission order is the reverse of the
// algebraic expression V X^{C'} H^{C''} X^{C'} H^{C''} V.
std::vector<Item> emit(const BoolCircuit& c) {
  const GateConstants& g = gate_constants();
  switch (c.kind) {
    case BoolCircuit::Kind::Var:
      return {Ctrl{c.var}};
    case BoolCircuit::Kind::Not: {
      std::vector<Item> items = emit(c.children[0]);
      push_single(items, g.x);
      return items;
    }
    case BoolCircuit::Kind::And: {
      const std::vector<Item> first = emit(c.children[0]);
      const std::vector<Item> second = emit(c.children[1]);
      std::vector<Item> items;
      push_single(items, g.v);
      for (int rep = 0; rep < 2; ++rep) {
        push_single(items, g.r);  // R F'' R performs H^{C''}
        append(items, second);
        push_single(items, g.r);
        append(items, first);
      }
      push_single(items, g.v);
      return items;
    }
    case BoolCircuit::Kind::Or:
      return emit(de_morgan(c));
  }
  throw InternalError("unreachable circuit kind");
}

}  // namespace

const GateConstants& gate_constants() {
  static const GateConstants g = [] {
    GateConstants c;
    c.x = pauli_x();
    c.y = pauli_y();
    c.z = pauli_z();
    c.h = hadamard();
    c.v = (c.x + c.y) / std::sqrt(2.0);
    c.r = (c.x + c.h) / std::sqrt(2.0 + std::sqrt(2.0));
    return c;
  }();
  return g;
}

BoolCircuit de_morgan(const BoolCircuit& c) {
  switch (c.kind) {
    case BoolCircuit::Kind::Var:
      return c;
    case BoolCircuit::Kind::Not:
      return BoolCircuit::make_not(de_morgan(c.children[0]));
    case BoolCircuit::Kind::And:
      return BoolCircuit::make_and(de_morgan(c.children[0]), de_morgan(c.children[1]));
    case BoolCircuit::Kind::Or:
      return BoolCircuit::make_not(
          BoolCircuit::make_and(BoolCircuit::make_not(de_morgan(c.children[0])),
                                BoolCircuit::make_not(de_morgan(c.children[1]))));
  }
  throw InternalError("unreachable circuit kind");
}

CompileReport compile(const BoolCircuit& c) {
  CompileReport report;
  report.program.items = emit(c);
  report.source_depth = circuit_depth(c);
  report.length = report.program.length();
  if (report.source_depth > 31) throw EvalError("circuit depth too large for the 4^d bound");
  report.bound = std::uint64_t(1) << (2 * report.source_depth);
  if (report.length > report.bound)
    throw InternalError("compiled program exceeds the 4^depth length bound");
  return report;
}

Mat net_unitary(const OneQubitProgram& p, const Assignment& x) {
  Mat u = Mat::Identity(2, 2);
  for (const auto& it : p.items) {
    if (const auto* s = std::get_if<Single>(&it)) {
      u = s->u * u;
    } else {
      const unsigned var = std::get<Ctrl>(it).var;
      const auto found = x.find(var);
      if (found == x.end()) throw EvalError("unassigned variable x" + std::to_string(var));
      if (found->second) u = pauli_x() * u;
    }
  }
  return u;
}

Mat net_unitary(const OneQubitProgram& p, const std::vector<unsigned>& vars,
                std::uint32_t index) {
  Assignment x;
  for (size_t i = 0; i < vars.size(); ++i)
    x[vars[i]] = (index >> (vars.size() - 1 - i)) & 1u;
  return net_unitary(p, x);
}

bool up_to_phase_equal(const Mat& a, const Mat& b, const Tolerances& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw EvalError("up_to_phase_equal: shape mismatch");
  const Mat id = Mat::Identity(a.rows(), a.cols());
  if ((a.adjoint() * a - id).cwiseAbs().maxCoeff() > 1e-8 ||
      (b.adjoint() * b - id).cwiseAbs().maxCoeff() > 1e-8)
    throw EvalError("up_to_phase_equal: inputs must be unitary");
  return std::abs((a.adjoint() * b).trace()) >= static_cast<double>(a.rows()) - tol.eps_num;
}

bool affine_check(const TruthTable& t) {
  if (t.arity > kMaxEnumerationVars) throw EvalError("affine_check: arity above the ceiling");
  std::vector<std::uint8_t> anf = t.bits;
  const unsigned n = t.arity;
  for (unsigned p = 0; p < n; ++p) {
    const unsigned mask = 1u << p;
    for (unsigned x = 0; x < anf.size(); ++x)
      if (x & mask) anf[x] ^= anf[x ^ mask];
  }
  for (unsigned x = 0; x < anf.size(); ++x)
    if (anf[x] && __builtin_popcount(x) >= 2) return false;
  return true;
}

}  // namespace qf
