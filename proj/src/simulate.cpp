#include "qf/simulate.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <thread>

namespace qf {

namespace {

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [begin, end), writing into out[i-begin] with contiguous
// per-thread slices. Results are independent of the thread count.
template <typename T, typename Fn>
void parallel_map(std::uint64_t begin, std::uint64_t end, unsigned threads, std::vector<T>& out,
                  Fn&& fn) {
  const std::uint64_t count = end - begin;
  out.resize(count);
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2048) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(begin + i);
    return;
  }
  const std::uint64_t chunk = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = std::min<std::uint64_t>(count, t * chunk);
    const std::uint64_t hi = std::min<std::uint64_t>(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::uint64_t i = lo; i < hi; ++i) out[i] = fn(begin + i);
    });
  }
  for (auto& th : pool) th.join();
}

int bit_at(const std::vector<unsigned>& vars, std::uint32_t index, unsigned var) {
  const auto it = std::lower_bound(vars.begin(), vars.end(), var);
  if (it == vars.end() || *it != var) {
    std::ostringstream msg;
    msg << "unassigned variable x" << var;
    throw EvalError(msg.str());
  }
  const unsigned pos = static_cast<unsigned>(it - vars.begin());
  return (index >> (vars.size() - 1 - pos)) & 1u;
}

template <typename Lookup>
DensityMatrix eval_qnode(const QFormula& f, const Lookup& bit) {
  if (f.is_leaf()) return basis_state(bit(f.leaf().var));
  const auto& g = f.gate();
  Mat joint = Mat::Identity(1, 1);
  for (size_t k = 0; k < g.children.size(); ++k) {
    DensityMatrix s = eval_qnode(g.children[k], bit);
    if (g.pre[k].has_value()) s = apply_channel(*g.pre[k], s);
    joint = kron(joint, s.mat);
  }
  DensityMatrix out = apply_channel(g.channel, DensityMatrix{std::move(joint)});
  if (g.out.has_value()) out = apply_channel(*g.out, out);
  return out;
}

template <typename Lookup>
bool eval_cnode(const CFormula& f, const Lookup& bit) {
  if (f.is_leaf()) return bit(f.leaf().var) != 0;
  const auto& g = f.gate();
  unsigned index = 0;
  for (const CFormula& c : g.children) index = (index << 1) | (eval_cnode(c, bit) ? 1u : 0u);
  return g.table.at(index) != 0;
}

template <typename Lookup>
bool eval_circ(const BoolCircuit& c, const Lookup& bit) {
  switch (c.kind) {
    case BoolCircuit::Kind::Var:
      return bit(c.var) != 0;
    case BoolCircuit::Kind::Not:
      return !eval_circ(c.children[0], bit);
    case BoolCircuit::Kind::And:
      return eval_circ(c.children[0], bit) && eval_circ(c.children[1], bit);
    case BoolCircuit::Kind::Or:
      return eval_circ(c.children[0], bit) || eval_circ(c.children[1], bit);
  }
  throw InternalError("unreachable circuit kind");
}

template <typename Lookup>
DensityMatrix eval_program(const OneQubitProgram& p, const Lookup& bit) {
  DensityMatrix rho = basis_state(0);
  const Mat x = pauli_x();
  for (const auto& it : p.items) {
    if (const auto* s = std::get_if<OneQubitProgram::SingleQubit>(&it)) {
      rho.mat = s->u * rho.mat * s->u.adjoint();
    } else if (bit(std::get<OneQubitProgram::ControlledX>(it).var)) {
      rho.mat = x * rho.mat * x;
    }
  }
  return rho;
}

auto map_lookup(const Assignment& x) {
  return [&x](unsigned var) -> int {
    const auto it = x.find(var);
    if (it == x.end()) {
      std::ostringstream msg;
      msg << "unassigned variable x" << var;
      throw EvalError(msg.str());
    }
    return it->second ? 1 : 0;
  };
}

auto index_lookup(const std::vector<unsigned>& vars, std::uint32_t index) {
  return [&vars, index](unsigned var) -> int { return bit_at(vars, index, var); };
}

void check_enumeration_guard(size_t nvars) {
  if (nvars > kMaxEnumerationVars) {
    std::ostringstream msg;
    msg << "TooManyVariables: " << nvars << " variables exceeds the enumeration ceiling of "
        << kMaxEnumerationVars;
    throw TooManyVariables(msg.str());
  }
}

double prob_one(const DensityMatrix& rho) { return rho.mat(1, 1).real(); }

// Shared table enumerator over an index-evaluating functor returning either a
// bit (classical IRs) or a DensityMatrix (quantum IRs).
template <typename EvalBit>
TruthTableResult classical_table(const std::vector<unsigned>& vars, unsigned threads,
                                 EvalBit&& ev) {
  check_enumeration_guard(vars.size());
  const std::uint64_t count = std::uint64_t(1) << vars.size();
  std::vector<std::uint8_t> bits;
  parallel_map<std::uint8_t>(0, count, threads, bits, [&](std::uint64_t i) {
    return static_cast<std::uint8_t>(ev(static_cast<std::uint32_t>(i)));
  });
  TruthTableResult r;
  r.vars = vars;
  r.table = TruthTable{static_cast<unsigned>(r.vars.size()), std::move(bits)};
  r.classical = true;
  return r;
}

template <typename EvalState>
TruthTableResult quantum_table(const std::vector<unsigned>& vars, const Tolerances& tol,
                               unsigned threads, EvalState&& ev) {
  check_enumeration_guard(vars.size());
  const std::uint64_t count = std::uint64_t(1) << vars.size();
  constexpr std::uint64_t kBlock = 1 << 14;
  std::vector<std::uint8_t> bits(count);
  bool classical = true;
  std::vector<DensityMatrix> block;
  for (std::uint64_t lo = 0; lo < count; lo += kBlock) {
    const std::uint64_t hi = std::min(count, lo + kBlock);
    parallel_map<DensityMatrix>(lo, hi, threads, block,
                                [&](std::uint64_t i) { return ev(static_cast<std::uint32_t>(i)); });
    for (std::uint64_t i = lo; i < hi; ++i) {
      const DensityMatrix& s = block[i - lo];
      if (classical && !is_classical_state(s, tol).has_value()) classical = false;
      bits[i] = prob_one(s) >= 0.5 ? 1 : 0;
    }
  }
  TruthTableResult r;
  r.vars = vars;
  r.table = TruthTable{static_cast<unsigned>(r.vars.size()), std::move(bits)};
  r.classical = classical;
  return r;
}

}  // namespace

DensityMatrix eval_qformula(const QFormula& f, const Assignment& x) {
  return eval_qnode(f, map_lookup(x));
}

bool eval_cformula(const CFormula& f, const Assignment& x) { return eval_cnode(f, map_lookup(x)); }

bool eval_circuit(const BoolCircuit& c, const Assignment& x) { return eval_circ(c, map_lookup(x)); }

DensityMatrix eval_oqp(const OneQubitProgram& p, const Assignment& x) {
  return eval_program(p, map_lookup(x));
}

DensityMatrix eval_qformula(const QFormula& f, const std::vector<unsigned>& vars,
                            std::uint32_t index) {
  return eval_qnode(f, index_lookup(vars, index));
}

bool eval_cformula(const CFormula& f, const std::vector<unsigned>& vars, std::uint32_t index) {
  return eval_cnode(f, index_lookup(vars, index));
}

bool eval_circuit(const BoolCircuit& c, const std::vector<unsigned>& vars, std::uint32_t index) {
  return eval_circ(c, index_lookup(vars, index));
}

DensityMatrix eval_oqp(const OneQubitProgram& p, const std::vector<unsigned>& vars,
                       std::uint32_t index) {
  return eval_program(p, index_lookup(vars, index));
}

TruthTableResult truth_table(const QFormula& f, const Tolerances& tol, unsigned threads) {
  const std::vector<unsigned> vars = sorted_vars(f);
  return quantum_table(vars, tol, threads,
                       [&](std::uint32_t i) { return eval_qformula(f, vars, i); });
}

TruthTableResult truth_table(const CFormula& f, const Tolerances&, unsigned threads) {
  const std::vector<unsigned> vars = sorted_vars(f);
  return classical_table(vars, threads,
                         [&](std::uint32_t i) { return eval_cformula(f, vars, i) ? 1 : 0; });
}

TruthTableResult truth_table(const BoolCircuit& c, const Tolerances&, unsigned threads) {
  const std::vector<unsigned> vars = sorted_vars(c);
  return classical_table(vars, threads,
                         [&](std::uint32_t i) { return eval_circuit(c, vars, i) ? 1 : 0; });
}

TruthTableResult truth_table(const OneQubitProgram& p, const Tolerances& tol, unsigned threads) {
  const std::vector<unsigned> vars = sorted_vars(p);
  return quantum_table(vars, tol, threads,
                       [&](std::uint32_t i) { return eval_oqp(p, vars, i); });
}

StateEnumeration enumerate_reachable(const QFormula& f, const Tolerances& tol, unsigned threads) {
  StateEnumeration out;
  out.set.vars = sorted_vars(f);
  check_enumeration_guard(out.set.vars.size());
  const std::uint64_t count = std::uint64_t(1) << out.set.vars.size();
  out.ids.resize(count);
  constexpr std::uint64_t kBlock = 1 << 14;
  std::vector<DensityMatrix> block;
  // Deduplication scans in assignment order, so state ids and witnesses do
  // not depend on the thread count.
  for (std::uint64_t lo = 0; lo < count; lo += kBlock) {
    const std::uint64_t hi = std::min(count, lo + kBlock);
    parallel_map<DensityMatrix>(lo, hi, threads, block, [&](std::uint64_t i) {
      return eval_qformula(f, out.set.vars, static_cast<std::uint32_t>(i));
    });
    for (std::uint64_t i = lo; i < hi; ++i) {
      const DensityMatrix& s = block[i - lo];
      std::uint32_t id = static_cast<std::uint32_t>(out.set.states.size());
      for (std::uint32_t j = 0; j < out.set.states.size(); ++j) {
        if (trace_distance(s, out.set.states[j]) <= tol.eps_dedup) {
          id = j;
          break;
        }
      }
      if (id == out.set.states.size()) {
        out.set.states.push_back(s);
        out.set.witnesses.push_back(static_cast<std::uint32_t>(i));
      }
      out.ids[i] = id;
    }
  }
  return out;
}

StateSet reachable_states(const QFormula& f, const Tolerances& tol, unsigned threads) {
  return enumerate_reachable(f, tol, threads).set;
}

}  // namespace qf
