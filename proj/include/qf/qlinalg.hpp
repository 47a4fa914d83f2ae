#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qf/errors.hpp"

namespace qf {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Numerical slack knobs shared across the library. The underlying math is
/// exact; every epsilon here is an implementation choice.
struct Tolerances {
  double eps_num = 1e-9;        ///< generic numerical slack
  double eps_dedup = 1e-7;      ///< state-set deduplication radius (trace distance)
  double eps_classical = 1e-7;  ///< distance bound for calling a state classical
};

/// Throws unless 0 < eps_num <= eps_classical <= eps_dedup <= 1e-3.
void validate(const Tolerances& tol);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat hadamard();

/// Kronecker product; `a` occupies the more significant qubits.
Mat kron(const Mat& a, const Mat& b);

/// Density operator on k qubits (dim = 2^k). Basis index convention: qubit 0
/// is the most significant bit of the basis index throughout the library.
struct DensityMatrix {
  Mat mat;

  Eigen::Index dim() const { return mat.rows(); }
  unsigned qubit_count() const;
};

DensityMatrix basis_state(int bit);                         // |b><b| on one qubit
DensityMatrix basis_state(unsigned value, unsigned qubits); // |v><v| on k qubits
DensityMatrix pure_state(const Vec& psi);                   // normalizes psi
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
double purity(const DensityMatrix& rho);                    // tr(rho^2)

/// Hermiticity, unit trace and positivity within eps.
void validate_density(const DensityMatrix& rho, double eps);

/// Completely positive trace-preserving map from in_qubits to out_qubits,
/// stored as a list of Kraus operators (each 2^out x 2^in). Complete
/// positivity holds by construction; trace preservation is the one checkable
/// invariant (sum of K^dag K equals the identity).
struct Channel {
  unsigned in_qubits = 1;
  unsigned out_qubits = 1;
  std::vector<Mat> kraus;
};

void validate_channel(const Channel& c, double eps);

Channel identity_channel(unsigned qubits = 1);
Channel unitary_channel(const Mat& u);
/// Ignores its single-qubit input and emits `fixed`.
Channel prepare_channel(const DensityMatrix& fixed);
/// Measures in the computational basis and prepares rho0 or rho1.
Channel prepare_by_bit_channel(const DensityMatrix& rho0, const DensityMatrix& rho1);
/// rho -> (1-p) rho + p I/2 on one qubit.
Channel depolarizing_channel(double p);
/// Applies `before`, then `after`.
Channel compose(const Channel& after, const Channel& before);
/// Fixes a subset of input wires of `c` to constant states, yielding a channel
/// on the remaining wires (which keep their relative order). At least one
/// wire must stay free.
Channel fix_wires(const Channel& c, const std::vector<std::optional<DensityMatrix>>& fixed);

/// Trace norm of (a - b): sum of absolute eigenvalues of the difference.
/// Ranges over [0, 2] for single-qubit states.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix apply_channel(const Channel& c, const DensityMatrix& rho);

/// Reduced state on the kept qubits (indices ascending, nonempty).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<unsigned>& keep);

/// 0 or 1 if rho is within eps_classical of that basis state, absent otherwise.
std::optional<int> is_classical_state(const DensityMatrix& rho, const Tolerances& tol);

/// For pure, mutually orthogonal 2x2 states returns a unitary U with
/// U r1 U^dag = |0><0| and U r2 U^dag = |1><1|. The columns of U^dag are the
/// principal eigenvectors of r1 and r2.
Mat orthogonal_pure_pair_basis(const DensityMatrix& r1, const DensityMatrix& r2,
                               const Tolerances& tol);

}  // namespace qf
