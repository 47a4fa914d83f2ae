#pragma once

#include <cstdint>

#include "qf/simulate.hpp"

namespace qf {

/// Fixed single-qubit unitaries used by the compiler. V swaps X and Y under
/// conjugation; R swaps X and H.
struct GateConstants {
  Mat x, y, z, h;
  Mat v;  // (X + Y) / sqrt(2)
  Mat r;  // (X + H) / sqrt(2 + sqrt(2))
};

const GateConstants& gate_constants();

struct CompileReport {
  OneQubitProgram program;
  unsigned source_depth = 0;
  unsigned length = 0;
  std::uint64_t bound = 1;  // 4^source_depth
};

/// Compiles a fanin-2 AND/OR/NOT circuit into a one-qubit program of length
/// at most 4^depth whose net unitary is X^{C(x)} up to global phase. OR gates
/// are rewritten through AND and NOT first; adjacent single-qubit items are
/// merged.
CompileReport compile(const BoolCircuit& c);

/// Rewrites every OR as NOT(AND(NOT, NOT)); size and depth are unchanged.
BoolCircuit de_morgan(const BoolCircuit& c);

/// Product of the program's item matrices in time order (later items multiply
/// on the left); a controlled-X contributes X iff its variable is 1.
Mat net_unitary(const OneQubitProgram& p, const Assignment& x);
Mat net_unitary(const OneQubitProgram& p, const std::vector<unsigned>& vars, std::uint32_t index);

/// True iff a = phi * b for a unit scalar phi. Both inputs must be unitary.
bool up_to_phase_equal(const Mat& a, const Mat& b, const Tolerances& tol);

/// True iff the function's algebraic normal form over F2 has degree at most
/// one (computed with the Moebius transform).
bool affine_check(const TruthTable& t);

}  // namespace qf
