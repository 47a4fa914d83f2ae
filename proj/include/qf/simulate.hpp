#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qf/ir.hpp"

namespace qf {

/// Enumeration ceiling: formulas and programs on more variables than this are
/// rejected by whole-table operations.
inline constexpr unsigned kMaxEnumerationVars = 20;

using Assignment = std::map<unsigned, bool>;

/// Distinct states reachable by a sub-formula over all assignments of its
/// variables, deduplicated by trace distance. witnesses[i] is the assignment
/// index (big-endian over `vars`) that first produced states[i].
struct StateSet {
  std::vector<unsigned> vars;
  std::vector<DensityMatrix> states;
  std::vector<std::uint32_t> witnesses;
};

/// Reachable states plus, for every assignment index, the id of the state it
/// produces.
struct StateEnumeration {
  StateSet set;
  std::vector<std::uint32_t> ids;
};

struct TruthTableResult {
  std::vector<unsigned> vars;  // ascending; vars[0] is the most significant table bit
  TruthTable table;
  bool classical = false;
};

DensityMatrix eval_qformula(const QFormula& f, const Assignment& x);
bool eval_cformula(const CFormula& f, const Assignment& x);
bool eval_circuit(const BoolCircuit& c, const Assignment& x);
DensityMatrix eval_oqp(const OneQubitProgram& p, const Assignment& x);

// Assignment-index forms used by enumerations: bit of vars[i] is
// (index >> (vars.size()-1-i)) & 1.
DensityMatrix eval_qformula(const QFormula& f, const std::vector<unsigned>& vars,
                            std::uint32_t index);
bool eval_cformula(const CFormula& f, const std::vector<unsigned>& vars, std::uint32_t index);
bool eval_circuit(const BoolCircuit& c, const std::vector<unsigned>& vars, std::uint32_t index);
DensityMatrix eval_oqp(const OneQubitProgram& p, const std::vector<unsigned>& vars,
                       std::uint32_t index);

/// Exhaustive truth table over the object's variables. For quantum objects,
/// `classical` reports whether every output passed is_classical_state; table
/// entries are the rounded measurement outcome <1|rho|1> >= 1/2 (ties round
/// to 1), which coincides with the classical bit whenever one exists.
TruthTableResult truth_table(const QFormula& f, const Tolerances& tol, unsigned threads = 0);
TruthTableResult truth_table(const CFormula& f, const Tolerances& tol, unsigned threads = 0);
TruthTableResult truth_table(const BoolCircuit& c, const Tolerances& tol, unsigned threads = 0);
TruthTableResult truth_table(const OneQubitProgram& p, const Tolerances& tol,
                             unsigned threads = 0);

StateEnumeration enumerate_reachable(const QFormula& f, const Tolerances& tol,
                                     unsigned threads = 0);
StateSet reachable_states(const QFormula& f, const Tolerances& tol, unsigned threads = 0);

}  // namespace qf
