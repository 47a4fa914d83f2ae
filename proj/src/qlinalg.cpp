#include "qf/qlinalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace qf {

namespace {

bool power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

unsigned log2_exact(Eigen::Index n) {
  unsigned k = 0;
  while ((Eigen::Index(1) << k) < n) ++k;
  return k;
}

// Closed-form eigenvalues of a 2x2 Hermitian matrix.
std::pair<double, double> herm2_eigenvalues(const Mat& h) {
  const double t = h(0, 0).real() + h(1, 1).real();
  const double det = h(0, 0).real() * h(1, 1).real() - std::norm(h(0, 1));
  const double disc = std::sqrt(std::max(0.0, t * t / 4.0 - det));
  return {t / 2.0 - disc, t / 2.0 + disc};
}

double min_eigenvalue(const Mat& h) {
  if (h.rows() == 2) return herm2_eigenvalues(h).first;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Spectral decomposition of a single-qubit state as (weight, ket) pairs with
// negligible weights dropped.
std::vector<std::pair<double, Vec>> state_mixture(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat);
  std::vector<std::pair<double, Vec>> terms;
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    const double w = std::max(0.0, es.eigenvalues()(i));
    if (w > 1e-15) terms.emplace_back(w, es.eigenvectors().col(i));
  }
  return terms;
}

}  // namespace

void validate(const Tolerances& tol) {
  if (!(tol.eps_num > 0 && tol.eps_classical >= tol.eps_num &&
        tol.eps_dedup >= tol.eps_classical && tol.eps_dedup <= 1e-3)) {
    throw Error("invalid tolerances: need 0 < eps_num <= eps_classical <= eps_dedup <= 1e-3");
  }
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, Cx(0, -1), Cx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat hadamard() {
  Mat m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

unsigned DensityMatrix::qubit_count() const { return log2_exact(dim()); }

DensityMatrix basis_state(int bit) { return basis_state(static_cast<unsigned>(bit), 1); }

DensityMatrix basis_state(unsigned value, unsigned qubits) {
  const Eigen::Index d = Eigen::Index(1) << qubits;
  Mat m = Mat::Zero(d, d);
  m(value, value) = 1.0;
  return DensityMatrix{std::move(m)};
}

DensityMatrix pure_state(const Vec& psi) {
  Vec v = psi / psi.norm();
  return DensityMatrix{v * v.adjoint()};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix{kron(a.mat, b.mat)};
}

double purity(const DensityMatrix& rho) { return (rho.mat * rho.mat).trace().real(); }

void validate_density(const DensityMatrix& rho, double eps) {
  if (rho.mat.rows() != rho.mat.cols() || !power_of_two(rho.mat.rows()))
    throw Error("density matrix must be square with power-of-two dimension");
  if (!rho.mat.allFinite()) throw Error("density matrix has non-finite entries");
  if ((rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff() > eps)
    throw Error("density matrix is not Hermitian");
  if (std::abs(rho.mat.trace().real() - 1.0) > eps || std::abs(rho.mat.trace().imag()) > eps)
    throw Error("density matrix trace is not 1");
  if (min_eigenvalue(rho.mat) < -eps) throw Error("density matrix is not positive semidefinite");
}

void validate_channel(const Channel& c, double eps) {
  if (c.kraus.empty()) throw Error("channel has no Kraus operators");
  const Eigen::Index rows = Eigen::Index(1) << c.out_qubits;
  const Eigen::Index cols = Eigen::Index(1) << c.in_qubits;
  for (const Mat& k : c.kraus) {
    if (k.rows() != rows || k.cols() != cols)
      throw Error("Kraus operator shape does not match channel arity");
    if (!k.allFinite()) throw Error("Kraus operator has non-finite entries");
  }
  Mat s = Mat::Zero(cols, cols);
  for (const Mat& k : c.kraus) s += k.adjoint() * k;
  if ((s - Mat::Identity(cols, cols)).cwiseAbs().maxCoeff() > eps)
    throw Error("channel is not trace preserving (Kraus completeness fails)");
}

Channel identity_channel(unsigned qubits) {
  const Eigen::Index d = Eigen::Index(1) << qubits;
  return Channel{qubits, qubits, {Mat::Identity(d, d)}};
}

Channel unitary_channel(const Mat& u) {
  if (u.rows() != u.cols() || !power_of_two(u.rows())) throw Error("unitary must be square 2^k");
  const unsigned q = log2_exact(u.rows());
  Channel c{q, q, {u}};
  validate_channel(c, 1e-9);
  return c;
}

Channel prepare_channel(const DensityMatrix& fixed) {
  if (fixed.dim() != 2) throw Error("prepare_channel expects a single-qubit state");
  Channel c{1, 1, {}};
  for (const auto& [w, ket] : state_mixture(fixed)) {
    for (int b = 0; b < 2; ++b) {
      Mat k = Mat::Zero(2, 2);
      k.col(b) = std::sqrt(w) * ket;
      c.kraus.push_back(std::move(k));
    }
  }
  validate_channel(c, 1e-9);
  return c;
}

Channel prepare_by_bit_channel(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != 2 || rho1.dim() != 2)
    throw Error("prepare_by_bit_channel expects single-qubit states");
  Channel c{1, 1, {}};
  const DensityMatrix* states[2] = {&rho0, &rho1};
  for (int b = 0; b < 2; ++b) {
    for (const auto& [w, ket] : state_mixture(*states[b])) {
      Mat k = Mat::Zero(2, 2);
      k.col(b) = std::sqrt(w) * ket;
      c.kraus.push_back(std::move(k));
    }
  }
  validate_channel(c, 1e-9);
  return c;
}

Channel depolarizing_channel(double p) {
  if (p < 0.0 || p >= 1.0) throw Error("depolarizing strength must lie in [0, 1)");
  Channel c{1, 1, {}};
  c.kraus.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * Mat::Identity(2, 2));
  c.kraus.push_back(std::sqrt(p / 4.0) * pauli_x());
  c.kraus.push_back(std::sqrt(p / 4.0) * pauli_y());
  c.kraus.push_back(std::sqrt(p / 4.0) * pauli_z());
  validate_channel(c, 1e-9);
  return c;
}

Channel compose(const Channel& after, const Channel& before) {
  if (after.in_qubits != before.out_qubits)
    throw EvalError("channel composition arity mismatch");
  Channel c{before.in_qubits, after.out_qubits, {}};
  c.kraus.reserve(after.kraus.size() * before.kraus.size());
  for (const Mat& a : after.kraus)
    for (const Mat& b : before.kraus) c.kraus.push_back(a * b);
  validate_channel(c, 1e-8);
  return c;
}

Channel fix_wires(const Channel& c, const std::vector<std::optional<DensityMatrix>>& fixed) {
  if (fixed.size() != c.in_qubits) throw EvalError("fix_wires: one entry per input wire required");
  unsigned free_wires = 0;
  // Per-wire factor alternatives: identity for free wires, weighted kets for
  // fixed ones (a fixed wire contributes no input column).
  std::vector<std::vector<Mat>> factors;
  for (const auto& f : fixed) {
    if (!f.has_value()) {
      ++free_wires;
      factors.push_back({Mat::Identity(2, 2)});
      continue;
    }
    if (f->dim() != 2) throw EvalError("fix_wires: fixed states must be single-qubit");
    std::vector<Mat> alts;
    for (const auto& [w, ket] : state_mixture(*f)) {
      Mat col(2, 1);
      col.col(0) = std::sqrt(w) * ket;
      alts.push_back(std::move(col));
    }
    factors.push_back(std::move(alts));
  }
  if (free_wires == 0) throw EvalError("fix_wires: at least one wire must remain free");

  std::vector<Mat> selectors;  // all tensor products of per-wire alternatives
  selectors.push_back(Mat::Identity(1, 1));
  for (const auto& alts : factors) {
    std::vector<Mat> next;
    for (const Mat& acc : selectors)
      for (const Mat& a : alts) next.push_back(kron(acc, a));
    selectors = std::move(next);
  }

  Channel out{free_wires, c.out_qubits, {}};
  for (const Mat& k : c.kraus)
    for (const Mat& sel : selectors) out.kraus.push_back(k * sel);
  validate_channel(out, 1e-8);
  return out;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw EvalError("trace_distance: dimension mismatch");
  const Mat diff = a.mat - b.mat;
  if (diff.rows() == 2) {
    auto [lo, hi] = herm2_eigenvalues(diff);
    return std::abs(lo) + std::abs(hi);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix apply_channel(const Channel& c, const DensityMatrix& rho) {
  if (rho.dim() != (Eigen::Index(1) << c.in_qubits))
    throw EvalError("apply_channel: state dimension does not match channel input");
  const Eigen::Index d = Eigen::Index(1) << c.out_qubits;
  Mat out = Mat::Zero(d, d);
  for (const Mat& k : c.kraus) out += k * rho.mat * k.adjoint();
  return DensityMatrix{std::move(out)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<unsigned>& keep) {
  const unsigned total = rho.qubit_count();
  if (keep.empty()) throw EvalError("partial_trace: keep set must be nonempty");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= total) throw EvalError("partial_trace: qubit index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw EvalError("partial_trace: keep indices must be strictly ascending");
  }
  std::vector<unsigned> traced;
  for (unsigned q = 0; q < total; ++q)
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);

  const unsigned nk = static_cast<unsigned>(keep.size());
  const unsigned nt = static_cast<unsigned>(traced.size());
  // Assemble the full-basis index from kept and traced sub-indices; qubit q
  // sits at bit (total-1-q).
  auto weave = [&](unsigned kept_idx, unsigned traced_idx) {
    unsigned full = 0;
    for (unsigned i = 0; i < nk; ++i)
      if ((kept_idx >> (nk - 1 - i)) & 1u) full |= 1u << (total - 1 - keep[i]);
    for (unsigned i = 0; i < nt; ++i)
      if ((traced_idx >> (nt - 1 - i)) & 1u) full |= 1u << (total - 1 - traced[i]);
    return full;
  };

  const Eigen::Index d = Eigen::Index(1) << nk;
  Mat out = Mat::Zero(d, d);
  for (unsigned r = 0; r < d; ++r)
    for (unsigned col = 0; col < d; ++col)
      for (unsigned t = 0; t < (1u << nt); ++t)
        out(r, col) += rho.mat(weave(r, t), weave(col, t));
  return DensityMatrix{std::move(out)};
}

std::optional<int> is_classical_state(const DensityMatrix& rho, const Tolerances& tol) {
  if (rho.dim() != 2) throw EvalError("is_classical_state expects a single-qubit state");
  if (trace_distance(rho, basis_state(0)) <= tol.eps_classical) return 0;
  if (trace_distance(rho, basis_state(1)) <= tol.eps_classical) return 1;
  return std::nullopt;
}

Mat orthogonal_pure_pair_basis(const DensityMatrix& r1, const DensityMatrix& r2,
                               const Tolerances& tol) {
  if (r1.dim() != 2 || r2.dim() != 2)
    throw EvalError("orthogonal_pure_pair_basis expects single-qubit states");
  std::ostringstream why;
  if (purity(r1) < 1.0 - tol.eps_num || purity(r2) < 1.0 - tol.eps_num) {
    why << "NotPure: purities " << purity(r1) << ", " << purity(r2);
    throw NotPure(why.str());
  }
  const double overlap = std::abs((r1.mat * r2.mat).trace());
  if (overlap > tol.eps_num) {
    why << "NotOrthogonal: overlap " << overlap;
    throw NotOrthogonal(why.str());
  }

  auto principal = [](const DensityMatrix& r) {
    Eigen::SelfAdjointEigenSolver<Mat> es(r.mat);
    return Vec(es.eigenvectors().col(1));  // eigenvalues ascending
  };
  const Vec v1 = principal(r1);
  Vec v2 = principal(r2);
  v2 -= v1 * (v1.adjoint() * v2)(0);  // exact orthogonality despite round-off
  v2.normalize();

  Mat u(2, 2);
  u.row(0) = v1.adjoint();
  u.row(1) = v2.adjoint();
  return u;
}

}  // namespace qf
