#pragma once

#include <utility>
#include <vector>

#include "qf/simulate.hpp"

namespace qf {

/// Widest multi-qubit gate the dequantizer accepts (joint inputs are 2^arity
/// dimensional).
inline constexpr unsigned kMaxGateArity = 6;

/// Bounded-error budget: output-state classes must sit at least 2 - delta
/// apart in trace distance.
struct ErrorBudget {
  double delta = 0.0;
};

/// Per-wire outcome of the dependence analysis on the final multi-qubit gate.
struct WirePlan {
  enum class Kind { Dependent, Independent };
  Kind kind = Kind::Independent;
  // Dependent wires: the states standing for classical 0 and 1 on this wire
  // (exact mode: basis_change^dag |b><b| basis_change; bounded mode: class
  // representatives), plus the basis change itself in exact mode.
  Mat basis_change;
  DensityMatrix state0, state1;
  // Independent wires: the fixed reachable state fed in place of the wire.
  DensityMatrix fixed_state;
};

struct DequantizeOutput {
  CFormula cformula;
  /// One certificate per emitted gate, keyed by the child-index path of the
  /// gate in `cformula` (empty path = root).
  std::vector<std::pair<std::vector<unsigned>, GateCertificate>> certificates;
  unsigned size = 0;
  unsigned depth = 0;
};

/// Rewrites an exact read-once quantum formula (classical outputs on every
/// input) into a read-once classical formula of identical size and depth,
/// with a depth-one realization certificate for every emitted gate.
DequantizeOutput dequantize_exact(const QFormula& f, const Tolerances& tol, unsigned threads = 0);

/// Bounded-error variant: the function is inferred by rounding the output
/// measurement at 1/2 and must satisfy the 2 - delta output separation; wire
/// state sets are split with partition_states instead of the orthogonal-pure
/// assertion. The result computes the inferred function exactly.
DequantizeOutput dequantize_bounded(const QFormula& f, const ErrorBudget& budget,
                                    const Tolerances& tol, unsigned threads = 0);

/// Splits a state set into the two connected components of the graph whose
/// edges join states closer than 2 - delta. The first component contains
/// states[0]. Throws NotSeparable unless there are exactly two components.
std::pair<StateSet, StateSet> partition_states(const StateSet& set, const ErrorBudget& budget,
                                               const Tolerances& tol);

/// True iff simulating the certificate's realization on every classical input
/// yields a classical state equal to the table entry.
bool certify_gate(const GateCertificate& cert, const TruthTable& table, const Tolerances& tol);

}  // namespace qf
