#include "qf/ir.hpp"

#include <algorithm>

namespace qf {

namespace {

// Bit of `index` belonging to input `i` under the big-endian convention.
inline int index_bit(unsigned index, unsigned arity, unsigned i) {
  return (index >> (arity - 1 - i)) & 1u;
}

void collect_vars(const QFormula& f, std::vector<unsigned>& out) {
  if (f.is_leaf()) {
    out.push_back(f.leaf().var);
    return;
  }
  for (const QFormula& c : f.gate().children) collect_vars(c, out);
}

void collect_vars(const CFormula& f, std::vector<unsigned>& out) {
  if (f.is_leaf()) {
    out.push_back(f.leaf().var);
    return;
  }
  for (const CFormula& c : f.gate().children) collect_vars(c, out);
}

void collect_vars(const BoolCircuit& c, std::vector<unsigned>& out) {
  if (c.kind == BoolCircuit::Kind::Var) {
    out.push_back(c.var);
    return;
  }
  for (const BoolCircuit& ch : c.children) collect_vars(ch, out);
}

template <typename T>
std::vector<unsigned> sorted_unique_vars(const T& f) {
  std::vector<unsigned> vars;
  collect_vars(f, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

template <typename T>
bool no_duplicate_leaves(const T& f) {
  std::vector<unsigned> vars;
  collect_vars(f, vars);
  std::sort(vars.begin(), vars.end());
  return std::adjacent_find(vars.begin(), vars.end()) == vars.end();
}

template <typename T>
std::pair<unsigned, unsigned> tree_size_depth(const T& f) {
  if (f.is_leaf()) return {0, 0};
  unsigned size = 0, depth = 0;
  for (const auto& c : f.gate().children) {
    auto [s, d] = tree_size_depth(c);
    size += s;
    depth = std::max(depth, d);
  }
  if (f.gate().children.size() >= 2) {
    size += 1;
    depth += 1;
  }
  return {size, depth};
}

}  // namespace

TruthTable xor_table(unsigned arity) {
  TruthTable t{arity, std::vector<std::uint8_t>(1u << arity)};
  for (unsigned x = 0; x < t.bits.size(); ++x)
    t.bits[x] = static_cast<std::uint8_t>(__builtin_popcount(x) & 1);
  return t;
}

TruthTable and_table(unsigned arity) {
  TruthTable t{arity, std::vector<std::uint8_t>(1u << arity, 0)};
  t.bits.back() = 1;
  return t;
}

TruthTable not_table() { return TruthTable{1, {1, 0}}; }

TruthTable identity_table() { return TruthTable{1, {0, 1}}; }

TruthTable constant_table(int bit) {
  return TruthTable{1, {static_cast<std::uint8_t>(bit), static_cast<std::uint8_t>(bit)}};
}

TruthTable toffoli_table(unsigned m) {
  TruthTable t{m, std::vector<std::uint8_t>(1u << m)};
  for (unsigned x = 0; x < t.bits.size(); ++x) {
    int acc = 1;
    for (unsigned i = 0; i + 1 < m; ++i) acc &= index_bit(x, m, i);
    t.bits[x] = static_cast<std::uint8_t>(acc ^ index_bit(x, m, m - 1));
  }
  return t;
}

bool depends_on(const TruthTable& t, unsigned input) {
  const unsigned mask = 1u << (t.arity - 1 - input);
  for (unsigned x = 0; x < t.bits.size(); ++x)
    if ((x & mask) == 0 && t.bits[x] != t.bits[x | mask]) return true;
  return false;
}

bool is_nondegenerate(const TruthTable& t) {
  bool constant = true;
  for (std::uint8_t b : t.bits)
    if (b != t.bits[0]) constant = false;
  if (constant) return false;
  for (unsigned i = 0; i < t.arity; ++i)
    if (!depends_on(t, i)) return false;
  return true;
}

BoolCircuit BoolCircuit::make_var(unsigned v) {
  BoolCircuit c;
  c.kind = Kind::Var;
  c.var = v;
  return c;
}

BoolCircuit BoolCircuit::make_not(BoolCircuit ch) {
  BoolCircuit c;
  c.kind = Kind::Not;
  c.children.push_back(std::move(ch));
  return c;
}

BoolCircuit BoolCircuit::make_and(BoolCircuit a, BoolCircuit b) {
  BoolCircuit c;
  c.kind = Kind::And;
  c.children.push_back(std::move(a));
  c.children.push_back(std::move(b));
  return c;
}

BoolCircuit BoolCircuit::make_or(BoolCircuit a, BoolCircuit b) {
  BoolCircuit c;
  c.kind = Kind::Or;
  c.children.push_back(std::move(a));
  c.children.push_back(std::move(b));
  return c;
}

unsigned OneQubitProgram::length() const {
  unsigned n = 0;
  for (const Item& it : items)
    if (std::holds_alternative<ControlledX>(it)) ++n;
  return n;
}

std::vector<unsigned> sorted_vars(const QFormula& f) { return sorted_unique_vars(f); }
std::vector<unsigned> sorted_vars(const CFormula& f) { return sorted_unique_vars(f); }
std::vector<unsigned> sorted_vars(const BoolCircuit& c) { return sorted_unique_vars(c); }

std::vector<unsigned> sorted_vars(const OneQubitProgram& p) {
  std::vector<unsigned> vars;
  for (const auto& it : p.items)
    if (const auto* cx = std::get_if<OneQubitProgram::ControlledX>(&it)) vars.push_back(cx->var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool validate_read_once(const QFormula& f) { return no_duplicate_leaves(f); }
bool validate_read_once(const CFormula& f) { return no_duplicate_leaves(f); }

std::pair<unsigned, unsigned> size_and_depth(const QFormula& f) { return tree_size_depth(f); }
std::pair<unsigned, unsigned> size_and_depth(const CFormula& f) { return tree_size_depth(f); }

unsigned circuit_depth(const BoolCircuit& c) {
  unsigned d = 0;
  for (const BoolCircuit& ch : c.children) d = std::max(d, circuit_depth(ch));
  if (c.kind == BoolCircuit::Kind::And || c.kind == BoolCircuit::Kind::Or) d += 1;
  return d;
}

QFormula materialize_wire(const QFormula& child, const std::optional<Channel>& pre) {
  if (!pre.has_value()) return child;
  QFormula::Gate g;
  g.channel = *pre;
  g.pre.push_back(std::nullopt);
  g.children.push_back(child);
  return QFormula{std::move(g)};
}

QFormula append_output(QFormula f, const Channel& ch) {
  if (f.is_leaf()) {
    QFormula::Gate g;
    g.channel = ch;
    g.pre.push_back(std::nullopt);
    g.children.push_back(std::move(f));
    return QFormula{std::move(g)};
  }
  auto& gate = f.gate();
  gate.out = gate.out.has_value() ? compose(ch, *gate.out) : ch;
  return f;
}

}  // namespace qf
