#pragma once

#include <cstdint>

#include "qf/ir.hpp"

namespace qf {

/// splitmix64: the fixed PRNG behind every generator, so corpora are
/// reproducible from seeds alone. Gaussians come from Box-Muller on the raw
/// stream (std::normal_distribution is not stable across platforms).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)
  double uniform();                      // [0, 1)
  double gaussian();
  Cx complex_gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
/// diagonal's phases folded into Q.
Mat haar_unitary(unsigned dim, SplitMix64& rng);

DensityMatrix random_pure(SplitMix64& rng);
/// Uniform Bloch direction with a uniform radius; may be mixed.
DensityMatrix random_density(SplitMix64& rng);

/// Mixture q * (Haar unitary conjugation) + (1-q) * (state preparation) with
/// q drawn from {0, 0.5, 1}.
Channel random_single_qubit_channel(SplitMix64& rng);

/// Like random_single_qubit_channel but, with probability one half, returns
/// the quantum lift of a classical single-bit gate (identity, NOT, const-0,
/// const-1) so that depth-one Toffoli dressings often compute classical
/// functions; may also prepare X eigenstates.
Channel random_dressing_channel(SplitMix64& rng);

struct GenConfig {
  std::uint64_t seed = 1;
  unsigned max_vars = 8;
  unsigned max_depth = 3;
  unsigned max_arity = 3;
  double noise = 0.0;
  unsigned obfuscation_rounds = 1;
};

void validate(const GenConfig& cfg);

/// Random read-once classical formula. Every gate is nondegenerate (sensitive
/// to each of its inputs), so the computed function depends on every leaf and
/// dequantization preserves size and depth exactly.
CFormula gen_classical_rof(const GenConfig& cfg);

/// Lifts every truth-table gate to the measure-and-prepare channel computing
/// it. The result is a quantum formula with the same tree, size and depth.
QFormula lift_classical(const CFormula& f);

/// lift_classical plus basis obfuscation: every child wire receives
/// obfuscation_rounds Haar unitaries, with the adjoints fused into the
/// consuming gate's Kraus operators, so wire states are non-classical while
/// the computed function, size and depth are unchanged.
QFormula obfuscate(const CFormula& f, const GenConfig& cfg);

/// Composes every child wire with a depolarizing channel of the given
/// strength. Size and depth are unchanged.
QFormula add_noise(const QFormula& f, double noise);

/// Random AND/OR/NOT circuit (variables may repeat).
BoolCircuit gen_circuit(const GenConfig& cfg);

/// Random classical formula over XOR, NOT and constant gates only; computes
/// an affine function over F2 by construction.
CFormula gen_affine_cformula(const GenConfig& cfg);

}  // namespace qf
