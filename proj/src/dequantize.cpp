#include "qf/dequantize.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

namespace qf {

namespace {

enum class Mode { Exact, Bounded };

struct Context {
  Mode mode;
  double delta = 0.0;
  Tolerances tol;
  unsigned threads = 0;
  std::vector<std::pair<std::vector<unsigned>, GateCertificate>>* certs = nullptr;
};

// The formula seen as a core node (leaf or multi-qubit gate) under a chain of
// single-qubit channels, listed in application order after the core's output.
struct Decomposed {
  const QFormula* core = nullptr;
  std::vector<Channel> chain;
};

Decomposed decompose(const QFormula& f) {
  std::vector<Channel> outer_first;
  const QFormula* cur = &f;
  while (true) {
    if (cur->is_leaf()) break;
    const auto& g = cur->gate();
    if (g.children.size() >= 2) {
      if (g.out.has_value()) outer_first.push_back(*g.out);
      break;
    }
    // One-child gates are single-qubit channels riding on the spine.
    if (g.out.has_value()) outer_first.push_back(*g.out);
    outer_first.push_back(g.channel);
    if (g.pre[0].has_value()) outer_first.push_back(*g.pre[0]);
    cur = &g.children[0];
  }
  Decomposed d;
  d.core = cur;
  d.chain.assign(outer_first.rbegin(), outer_first.rend());
  return d;
}

DensityMatrix apply_chain(const std::vector<Channel>& chain, DensityMatrix rho) {
  for (const Channel& c : chain) rho = apply_channel(c, rho);
  return rho;
}

std::optional<Channel> compose_chain(const std::vector<Channel>& chain) {
  if (chain.empty()) return std::nullopt;
  Channel acc = chain[0];
  for (size_t i = 1; i < chain.size(); ++i) acc = compose(chain[i], acc);
  return acc;
}

// Positions (within the enclosing sorted variable list) of a sorted subset.
std::vector<unsigned> var_positions(const std::vector<unsigned>& all,
                                    const std::vector<unsigned>& subset) {
  std::vector<unsigned> pos;
  pos.reserve(subset.size());
  for (unsigned v : subset) {
    const auto it = std::lower_bound(all.begin(), all.end(), v);
    if (it == all.end() || *it != v) throw InternalError("wire variables escape the formula");
    pos.push_back(static_cast<unsigned>(it - all.begin()));
  }
  return pos;
}

// Scatters a block assignment into an enclosing assignment index.
std::uint32_t scatter(std::uint32_t block_index, const std::vector<unsigned>& positions,
                      unsigned total_bits) {
  std::uint32_t out = 0;
  for (size_t i = 0; i < positions.size(); ++i)
    if ((block_index >> (positions.size() - 1 - i)) & 1u)
      out |= 1u << (total_bits - 1 - positions[i]);
  return out;
}

// Does the target function vary with the block occupying `positions`?
bool depends_on_block(const std::vector<std::uint8_t>& target, unsigned total_bits,
                      const std::vector<unsigned>& positions) {
  const unsigned l = static_cast<unsigned>(positions.size());
  std::vector<unsigned> rest;
  for (unsigned p = 0; p < total_bits; ++p)
    if (std::find(positions.begin(), positions.end(), p) == positions.end()) rest.push_back(p);
  for (std::uint32_t ctx = 0; ctx < (1u << rest.size()); ++ctx) {
    const std::uint32_t base = scatter(ctx, rest, total_bits);
    const std::uint8_t first = target[base];
    for (std::uint32_t b = 1; b < (1u << l); ++b)
      if (target[base | scatter(b, positions, total_bits)] != first) return true;
  }
  return false;
}

// Connected components of the state graph with edges at trace distance below
// 2 - delta (minus numerical slack). Returns one label per state, normalized
// so that states[0] has label 0; empty when the component count is not two.
std::vector<int> component_labels(const std::vector<DensityMatrix>& states, double delta,
                                  const Tolerances& tol, unsigned* component_count = nullptr) {
  const size_t n = states.size();
  std::vector<size_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const double threshold = 2.0 - delta - tol.eps_num;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (trace_distance(states[i], states[j]) < threshold) parent[find(i)] = find(j);

  unsigned comps = 0;
  for (size_t i = 0; i < n; ++i)
    if (find(i) == i) ++comps;
  if (component_count != nullptr) *component_count = comps;
  if (comps != 2) return {};
  std::vector<int> labels(n);
  const size_t root0 = find(0);
  for (size_t i = 0; i < n; ++i) labels[i] = find(i) == root0 ? 0 : 1;
  return labels;
}

struct WireAnalysis {
  WirePlan plan;
  QFormula formula;                  // the wire's standalone sub-formula
  std::vector<unsigned> vars;        // its variable block, ascending
  std::vector<unsigned> positions;   // block positions within the parent vars
  std::vector<std::uint8_t> child_target;  // bit per block assignment (dependent only)
  std::uint32_t witness0 = 0, witness1 = 0;  // block assignments realizing state0/state1
};

CFormula dequantize_rec(const QFormula& g, const std::vector<unsigned>& g_vars,
                        const std::vector<std::uint8_t>& target, const Context& ctx,
                        std::vector<unsigned>& path);

// Degenerate core: a leaf under a single-qubit chain computes a one-bit
// function, emitted as a bare leaf or a one-input gate.
CFormula emit_leaf_core(const QFormula& leaf_core, const std::vector<Channel>& chain,
                        const std::vector<unsigned>& g_vars,
                        const std::vector<std::uint8_t>& target, const Context& ctx,
                        std::vector<unsigned>& path) {
  if (g_vars.size() != 1 || g_vars[0] != leaf_core.leaf().var)
    throw InternalError("leaf core variables out of sync");
  if (ctx.mode == Mode::Exact) {
    for (int b = 0; b < 2; ++b) {
      const auto bit = is_classical_state(apply_chain(chain, basis_state(b)), ctx.tol);
      if (!bit.has_value() || *bit != target[b])
        throw InternalError("single-qubit chain disagrees with the expected bit function");
    }
  }
  CFormula leaf{CFormula::Leaf{leaf_core.leaf().var}};
  if (target[0] == 0 && target[1] == 1) return leaf;
  CFormula::Gate gate;
  gate.table = TruthTable{1, {target[0], target[1]}};
  gate.children.push_back(std::move(leaf));
  GateCertificate cert;
  cert.pre.push_back(std::nullopt);
  cert.channel = compose_chain(chain).value_or(identity_channel(1));
  ctx.certs->emplace_back(path, std::move(cert));
  return CFormula{std::move(gate)};
}

CFormula dequantize_rec(const QFormula& g, const std::vector<unsigned>& g_vars,
                        const std::vector<std::uint8_t>& target, const Context& ctx,
                        std::vector<unsigned>& path) {
  const Decomposed dec = decompose(g);
  if (dec.core->is_leaf()) return emit_leaf_core(*dec.core, dec.chain, g_vars, target, ctx, path);

  const auto& gate = dec.core->gate();
  const unsigned m = static_cast<unsigned>(gate.children.size());
  const unsigned n = static_cast<unsigned>(g_vars.size());

  std::vector<WireAnalysis> wires(m);
  std::vector<unsigned> dependent;
  for (unsigned k = 0; k < m; ++k) {
    WireAnalysis& w = wires[k];
    w.formula = materialize_wire(gate.children[k], gate.pre[k]);
    StateEnumeration reach = enumerate_reachable(w.formula, ctx.tol, ctx.threads);
    w.vars = reach.set.vars;
    w.positions = var_positions(g_vars, w.vars);
    const auto& states = reach.set.states;

    if (!depends_on_block(target, n, w.positions)) {
      w.plan.kind = WirePlan::Kind::Independent;
      w.plan.fixed_state = states[0];
      w.witness0 = reach.set.witnesses[0];
      continue;
    }
    w.plan.kind = WirePlan::Kind::Dependent;
    dependent.push_back(k);

    if (ctx.mode == Mode::Exact) {
      if (states.size() != 2) {
        std::ostringstream msg;
        msg << "StructureViolation at wire " << k << ": " << states.size()
            << " reachable states on a dependent wire (expected 2); the input may not exactly "
               "compute a classical function, or tolerances are too tight";
        throw StructureViolation(k, msg.str());
      }
      try {
        w.plan.basis_change = orthogonal_pure_pair_basis(states[0], states[1], ctx.tol);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "StructureViolation at wire " << k << ": " << e.what();
        throw StructureViolation(k, msg.str());
      }
      // The state seen first in assignment order stands for bit 0.
      const Mat& u = w.plan.basis_change;
      w.plan.state0 = DensityMatrix{u.adjoint() * basis_state(0).mat * u};
      w.plan.state1 = DensityMatrix{u.adjoint() * basis_state(1).mat * u};
      w.child_target.resize(reach.ids.size());
      for (size_t a = 0; a < reach.ids.size(); ++a)
        w.child_target[a] = static_cast<std::uint8_t>(reach.ids[a]);
      w.witness0 = reach.set.witnesses[0];
      w.witness1 = reach.set.witnesses[1];
      w.formula = append_output(std::move(w.formula), unitary_channel(u));
    } else {
      unsigned comps = 0;
      const std::vector<int> labels = component_labels(states, ctx.delta, ctx.tol, &comps);
      if (labels.empty()) {
        std::ostringstream msg;
        msg << "SeparationViolated at wire " << k << ": " << comps
            << " state components at threshold 2-delta (expected 2)";
        throw SeparationViolated(msg.str());
      }
      w.plan.state0 = states[0];
      w.witness0 = reach.set.witnesses[0];
      for (size_t i = 0; i < states.size(); ++i) {
        if (labels[i] == 1) {
          w.plan.state1 = states[i];
          w.witness1 = reach.set.witnesses[i];
          break;
        }
      }
      w.child_target.resize(reach.ids.size());
      for (size_t a = 0; a < reach.ids.size(); ++a)
        w.child_target[a] = static_cast<std::uint8_t>(labels[reach.ids[a]]);
    }
  }

  if (dependent.empty())
    throw TransformError(
        "formula output is independent of all inputs of a gate; dequantization would drop "
        "sub-formulas and change the size");

  // Extract the classical gate R by feeding wire states through the channel
  // and its trailing single-qubit chain.
  const unsigned dep_count = static_cast<unsigned>(dependent.size());
  TruthTable table{dep_count, std::vector<std::uint8_t>(1u << dep_count)};
  for (std::uint32_t pattern = 0; pattern < (1u << dep_count); ++pattern) {
    Mat joint = Mat::Identity(1, 1);
    std::uint32_t global_index = 0;
    unsigned dep_slot = 0;
    for (unsigned k = 0; k < m; ++k) {
      const WireAnalysis& w = wires[k];
      if (w.plan.kind == WirePlan::Kind::Dependent) {
        const int bit = (pattern >> (dep_count - 1 - dep_slot)) & 1u;
        ++dep_slot;
        joint = kron(joint, bit ? w.plan.state1.mat : w.plan.state0.mat);
        global_index |= scatter(bit ? w.witness1 : w.witness0, w.positions, n);
      } else {
        joint = kron(joint, w.plan.fixed_state.mat);
        global_index |= scatter(w.witness0, w.positions, n);
      }
    }
    if (ctx.mode == Mode::Exact) {
      const DensityMatrix out =
          apply_chain(dec.chain, apply_channel(gate.channel, DensityMatrix{std::move(joint)}));
      const auto bit = is_classical_state(out, ctx.tol);
      if (!bit.has_value()) {
        const unsigned wire = dependent[0];
        std::ostringstream msg;
        msg << "StructureViolation: gate output is not classical on dependent pattern "
            << pattern;
        throw StructureViolation(wire, msg.str());
      }
      table.bits[pattern] = static_cast<std::uint8_t>(*bit);
    } else {
      table.bits[pattern] = target[global_index];
    }
  }

  // Depth-one realization: per-wire single-qubit channels, the gate channel
  // with independent wires fixed, and the composed trailing chain.
  GateCertificate cert;
  std::vector<std::optional<DensityMatrix>> fixed(m);
  bool any_fixed = false;
  for (unsigned k = 0; k < m; ++k) {
    const WireAnalysis& w = wires[k];
    if (w.plan.kind == WirePlan::Kind::Dependent) {
      cert.pre.push_back(ctx.mode == Mode::Exact
                             ? unitary_channel(w.plan.basis_change.adjoint())
                             : prepare_by_bit_channel(w.plan.state0, w.plan.state1));
    } else {
      fixed[k] = w.plan.fixed_state;
      any_fixed = true;
    }
  }
  cert.channel = any_fixed ? fix_wires(gate.channel, fixed) : gate.channel;
  cert.out = compose_chain(dec.chain);
  ctx.certs->emplace_back(path, std::move(cert));

  CFormula::Gate out_gate;
  out_gate.table = std::move(table);
  for (unsigned slot = 0; slot < dep_count; ++slot) {
    const WireAnalysis& w = wires[dependent[slot]];
    path.push_back(slot);
    out_gate.children.push_back(dequantize_rec(w.formula, w.vars, w.child_target, ctx, path));
    path.pop_back();
  }
  return CFormula{std::move(out_gate)};
}

void check_gate_arities(const QFormula& f) {
  if (f.is_leaf()) return;
  const auto& g = f.gate();
  if (g.children.size() > kMaxGateArity)
    throw TransformError("gate arity " + std::to_string(g.children.size()) +
                         " exceeds the supported maximum of " + std::to_string(kMaxGateArity));
  for (const QFormula& c : g.children) check_gate_arities(c);
}

DequantizeOutput finish(const QFormula& input, CFormula cf,
                        std::vector<std::pair<std::vector<unsigned>, GateCertificate>> certs,
                        const std::vector<unsigned>& vars,
                        const std::vector<std::uint8_t>& target, bool bounded) {
  for (std::uint32_t a = 0; a < target.size(); ++a) {
    if (eval_cformula(cf, vars, a) != (target[a] != 0)) {
      if (bounded)
        throw SeparationViolated(
            "assembled classical formula disagrees with the inferred function; the bounded-error "
            "separation does not hold for this input");
      throw InternalError("assembled classical formula disagrees with the input function");
    }
  }
  const auto [in_size, in_depth] = size_and_depth(input);
  const auto [out_size, out_depth] = size_and_depth(cf);
  if (in_size != out_size || in_depth != out_depth) {
    std::ostringstream msg;
    msg << "size/depth not preserved: input (" << in_size << ", " << in_depth << ") vs output ("
        << out_size << ", " << out_depth
        << "); the input has gate inputs its output never depends on";
    throw TransformError(msg.str());
  }
  DequantizeOutput out;
  out.cformula = std::move(cf);
  out.certificates = std::move(certs);
  out.size = out_size;
  out.depth = out_depth;
  return out;
}

}  // namespace

DequantizeOutput dequantize_exact(const QFormula& f, const Tolerances& tol, unsigned threads) {
  validate(tol);
  if (!validate_read_once(f)) throw NotReadOnce("NotReadOnce: a variable labels several leaves");
  check_gate_arities(f);
  const TruthTableResult ttr = truth_table(f, tol, threads);
  if (!ttr.classical)
    throw NonClassicalFormulaOutput(
        "NonClassicalFormulaOutput: some outputs are not classical states");

  std::vector<std::pair<std::vector<unsigned>, GateCertificate>> certs;
  Context ctx{Mode::Exact, 0.0, tol, threads, &certs};
  std::vector<unsigned> path;
  CFormula cf = dequantize_rec(f, ttr.vars, ttr.table.bits, ctx, path);
  return finish(f, std::move(cf), std::move(certs), ttr.vars, ttr.table.bits, false);
}

DequantizeOutput dequantize_bounded(const QFormula& f, const ErrorBudget& budget,
                                    const Tolerances& tol, unsigned threads) {
  validate(tol);
  if (budget.delta < 0.0 || budget.delta >= 2.0)
    throw Error("ErrorBudget: delta must lie in [0, 2)");
  if (!validate_read_once(f)) throw NotReadOnce("NotReadOnce: a variable labels several leaves");
  check_gate_arities(f);

  // Infer the computed function by rounding the measurement outcome, then
  // verify the output classes really are 2 - delta separated.
  const StateEnumeration reach = enumerate_reachable(f, tol, threads);
  std::vector<int> measured(reach.set.states.size());
  for (size_t i = 0; i < reach.set.states.size(); ++i)
    measured[i] = reach.set.states[i].mat(1, 1).real() >= 0.5 ? 1 : 0;
  std::vector<std::uint8_t> target(reach.ids.size());
  for (size_t a = 0; a < reach.ids.size(); ++a)
    target[a] = static_cast<std::uint8_t>(measured[reach.ids[a]]);

  const bool constant =
      std::all_of(measured.begin(), measured.end(), [&](int b) { return b == measured[0]; });
  if (!constant) {
    unsigned comps = 0;
    const std::vector<int> labels = component_labels(reach.set.states, budget.delta, tol, &comps);
    if (labels.empty()) {
      std::ostringstream msg;
      msg << "SeparationViolated at the root: " << comps
          << " output-state components at threshold 2-delta (expected 2)";
      throw SeparationViolated(msg.str());
    }
    for (size_t i = 0; i < labels.size(); ++i) {
      if ((labels[i] == labels[0]) != (measured[i] == measured[0]))
        throw SeparationViolated(
            "SeparationViolated at the root: output components do not match the inferred "
            "function");
    }
  }

  std::vector<std::pair<std::vector<unsigned>, GateCertificate>> certs;
  Context ctx{Mode::Bounded, budget.delta, tol, threads, &certs};
  std::vector<unsigned> path;
  CFormula cf = dequantize_rec(f, reach.set.vars, target, ctx, path);
  return finish(f, std::move(cf), std::move(certs), reach.set.vars, target, true);
}

std::pair<StateSet, StateSet> partition_states(const StateSet& set, const ErrorBudget& budget,
                                               const Tolerances& tol) {
  if (set.states.size() < 2) throw EvalError("partition_states needs at least two states");
  unsigned comps = 0;
  const std::vector<int> labels = component_labels(set.states, budget.delta, tol, &comps);
  if (labels.empty()) {
    std::ostringstream msg;
    msg << "NotSeparable: " << comps << " components at threshold 2-delta (expected 2)";
    throw NotSeparable(msg.str());
  }
  std::pair<StateSet, StateSet> out;
  out.first.vars = out.second.vars = set.vars;
  for (size_t i = 0; i < set.states.size(); ++i) {
    StateSet& side = labels[i] == 0 ? out.first : out.second;
    side.states.push_back(set.states[i]);
    side.witnesses.push_back(set.witnesses[i]);
  }
  return out;
}

bool certify_gate(const GateCertificate& cert, const TruthTable& table, const Tolerances& tol) {
  const unsigned m = table.arity;
  if (cert.pre.size() != m || cert.channel.in_qubits != m) return false;
  if (cert.channel.out_qubits != 1) return false;
  for (std::uint32_t x = 0; x < (1u << m); ++x) {
    Mat joint = Mat::Identity(1, 1);
    for (unsigned i = 0; i < m; ++i) {
      DensityMatrix in = basis_state((x >> (m - 1 - i)) & 1u);
      if (cert.pre[i].has_value()) in = apply_channel(*cert.pre[i], in);
      joint = kron(joint, in.mat);
    }
    DensityMatrix out = apply_channel(cert.channel, DensityMatrix{std::move(joint)});
    if (cert.out.has_value()) out = apply_channel(*cert.out, out);
    const auto bit = is_classical_state(out, tol);
    if (!bit.has_value() || *bit != table.at(x)) return false;
  }
  return true;
}

}  // namespace qf
