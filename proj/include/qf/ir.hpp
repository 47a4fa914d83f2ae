#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qf/qlinalg.hpp"

namespace qf {

/// Boolean function on `arity` inputs. bits[x] is the value at input x read
/// big-endian: input 0 is the most significant bit of the index.
struct TruthTable {
  unsigned arity = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(unsigned index) const { return bits[index]; }
  friend auto operator<=>(const TruthTable&, const TruthTable&) = default;
};

TruthTable xor_table(unsigned arity);
TruthTable and_table(unsigned arity);
TruthTable not_table();
TruthTable identity_table();
TruthTable constant_table(int bit);  // arity 1, ignores its input
/// (x_0 and ... and x_{m-2}) xor x_{m-1}.
TruthTable toffoli_table(unsigned m);

bool depends_on(const TruthTable& t, unsigned input);
/// Non-constant and sensitive to every input coordinate.
bool is_nondegenerate(const TruthTable& t);

/// Quantum formula: a tree of channels over input-bit leaves. Single-qubit
/// channels ride on wires (`pre`, one slot per child) or on a gate's output
/// (`out`), so they never show up in size/depth counts. One-child gates are
/// single-qubit gates and are likewise free.
struct QFormula {
  struct Leaf {
    unsigned var = 0;
  };
  struct Gate {
    Channel channel;
    std::vector<std::optional<Channel>> pre;  // aligned with children
    std::vector<QFormula> children;
    std::optional<Channel> out;
  };
  std::variant<Leaf, Gate> node;

  bool is_leaf() const { return std::holds_alternative<Leaf>(node); }
  const Leaf& leaf() const { return std::get<Leaf>(node); }
  const Gate& gate() const { return std::get<Gate>(node); }
  Gate& gate() { return std::get<Gate>(node); }
};

/// Classical formula: a tree of truth-table gates over input-bit leaves.
struct CFormula {
  struct Leaf {
    unsigned var = 0;
  };
  struct Gate {
    TruthTable table;
    std::vector<CFormula> children;
  };
  std::variant<Leaf, Gate> node;

  bool is_leaf() const { return std::holds_alternative<Leaf>(node); }
  const Leaf& leaf() const { return std::get<Leaf>(node); }
  const Gate& gate() const { return std::get<Gate>(node); }
};

/// Fanin-2 AND/OR plus NOT tree over input bits. Input reuse is allowed.
struct BoolCircuit {
  enum class Kind { Var, Not, And, Or };
  Kind kind = Kind::Var;
  unsigned var = 0;                   // Kind::Var only
  std::vector<BoolCircuit> children;  // 1 for Not, 2 for And/Or

  static BoolCircuit make_var(unsigned v);
  static BoolCircuit make_not(BoolCircuit c);
  static BoolCircuit make_and(BoolCircuit a, BoolCircuit b);
  static BoolCircuit make_or(BoolCircuit a, BoolCircuit b);
};

/// One qubit evolving through single-qubit unitaries and input-controlled X
/// gates, in time order. Length counts only the controlled-X items.
struct OneQubitProgram {
  struct SingleQubit {
    Mat u;
  };
  struct ControlledX {
    unsigned var = 0;
  };
  using Item = std::variant<SingleQubit, ControlledX>;
  std::vector<Item> items;

  unsigned length() const;
};

/// Depth-one realization of a classical gate: single-qubit channels on the
/// input wires, a multi-qubit channel, and an optional trailing single-qubit
/// channel. Witnesses that the gate is computable by a depth-one quantum
/// formula.
struct GateCertificate {
  std::vector<std::optional<Channel>> pre;  // one slot per gate input
  Channel channel;
  std::optional<Channel> out;
};

std::vector<unsigned> sorted_vars(const QFormula& f);
std::vector<unsigned> sorted_vars(const CFormula& f);
std::vector<unsigned> sorted_vars(const BoolCircuit& c);
std::vector<unsigned> sorted_vars(const OneQubitProgram& p);

/// True iff no variable labels two distinct leaves.
bool validate_read_once(const QFormula& f);
bool validate_read_once(const CFormula& f);

/// (size, depth): multi-input gates only; wire channels and one-input gates
/// contribute to neither count.
std::pair<unsigned, unsigned> size_and_depth(const QFormula& f);
std::pair<unsigned, unsigned> size_and_depth(const CFormula& f);

/// Maximum number of AND/OR gates on any output-to-input path; NOT is free.
unsigned circuit_depth(const BoolCircuit& c);

/// The standalone formula computed by one input wire of a gate: the child
/// with the wire's single-qubit channel (if any) applied on top.
QFormula materialize_wire(const QFormula& child, const std::optional<Channel>& pre);

/// Appends a single-qubit channel after the formula's output.
QFormula append_output(QFormula f, const Channel& ch);

}  // namespace qf
