#pragma once

#include <set>
#include <vector>

#include "qf/ir.hpp"

namespace qf {

/// Closed-form analysis of one traced-Toffoli application: the output equals
/// a X rho X + (1-a) rho with a the product of the controls' |1> weights.
struct ToffoliAnalysis {
  unsigned m = 0;
  std::vector<double> control_one_weights;  // rho_i(1,1) for each control
  double a = 0.0;
  DensityMatrix predicted;
  DensityMatrix actual;
};

/// The m-qubit Toffoli unitary (controls first, target last) with all m-1
/// controls traced out; a channel from m qubits to one.
Channel toffoli_channel(unsigned m);

/// Applies toffoli_channel(m) to the product of the given controls and
/// target, checks the closed-form output identity within eps_num, and returns
/// both routes.
ToffoliAnalysis verify_output_identity(const std::vector<DensityMatrix>& controls,
                                       const DensityMatrix& target, const Tolerances& tol);

/// All classical gates obtained from the m-bit Toffoli function by composing
/// each input and the output with one of {identity, NOT, const-0, const-1}.
std::set<TruthTable> enumerate_f_tof(unsigned m);

/// Simulates single-qubit channels before and after toffoli_channel(m) on all
/// classical inputs. Succeeds iff every output is classical, and checks that
/// the resulting table is a member of enumerate_f_tof(m).
TruthTable classify_depth_one(const std::vector<Channel>& pre, const Channel& post, unsigned m,
                              const Tolerances& tol);

}  // namespace qf
