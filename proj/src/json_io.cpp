#include "qf/json_io.hpp"

#include <cmath>
#include <fstream>

namespace qf {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path.empty() ? what : path + ": " + what);
}

unsigned get_uint(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer");
  return j.get<unsigned>();
}

double get_finite(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "number must be finite");
  return v;
}

void expect_keys(const Json& j, std::initializer_list<const char*> allowed,
                 const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) fail(path, "unexpected key \"" + it.key() + "\"");
  }
}

std::optional<Channel> optional_channel_from_json(const Json& j, const std::string& path,
                                                  double eps) {
  if (j.is_null()) return std::nullopt;
  return channel_from_json(j, path, eps);
}

Json optional_channel_to_json(const std::optional<Channel>& c) {
  return c.has_value() ? channel_to_json(*c) : Json(nullptr);
}

QFormula parse_qformula_node(const Json& j, const std::string& path, double eps);
CFormula parse_cformula_node(const Json& j, const std::string& path);
BoolCircuit parse_circuit_node(const Json& j, const std::string& path);

QFormula parse_qformula_node(const Json& j, const std::string& path, double eps) {
  if (!j.is_object()) fail(path, "expected an object node");
  if (j.contains("leaf")) {
    expect_keys(j, {"leaf"}, path);
    return QFormula{QFormula::Leaf{get_uint(j.at("leaf"), path + "/leaf")}};
  }
  if (!j.contains("gate")) fail(path, "node must have \"leaf\" or \"gate\"");
  expect_keys(j, {"gate", "out"}, path);
  const Json& g = j.at("gate");
  if (!g.is_object()) fail(path + "/gate", "expected an object");
  expect_keys(g, {"channel", "pre", "children"}, path + "/gate");
  if (!g.contains("channel") || !g.contains("children"))
    fail(path + "/gate", "gate needs \"channel\" and \"children\"");

  QFormula::Gate gate;
  gate.channel = channel_from_json(g.at("channel"), path + "/gate/channel", eps);
  if (gate.channel.out_qubits != 1) fail(path + "/gate/channel", "gate channels output one qubit");

  const Json& children = g.at("children");
  if (!children.is_array() || children.empty()) fail(path + "/gate/children", "expected a nonempty array");
  for (size_t i = 0; i < children.size(); ++i)
    gate.children.push_back(
        parse_qformula_node(children[i], path + "/gate/children/" + std::to_string(i), eps));

  if (g.contains("pre")) {
    const Json& pre = g.at("pre");
    if (!pre.is_array() || pre.size() != children.size())
      fail(path + "/gate/pre", "\"pre\" must list one entry (channel or null) per child");
    for (size_t i = 0; i < pre.size(); ++i) {
      auto c = optional_channel_from_json(pre[i], path + "/gate/pre/" + std::to_string(i), eps);
      if (c && (c->in_qubits != 1 || c->out_qubits != 1))
        fail(path + "/gate/pre/" + std::to_string(i), "wire channels must be 1->1");
      gate.pre.push_back(std::move(c));
    }
  } else {
    gate.pre.assign(children.size(), std::nullopt);
  }

  if (gate.channel.in_qubits != gate.children.size())
    fail(path + "/gate", "arity mismatch: channel takes " +
                             std::to_string(gate.channel.in_qubits) + " qubits but has " +
                             std::to_string(gate.children.size()) + " children");

  if (j.contains("out")) {
    gate.out = optional_channel_from_json(j.at("out"), path + "/out", eps);
    if (gate.out && (gate.out->in_qubits != 1 || gate.out->out_qubits != 1))
      fail(path + "/out", "output channels must be 1->1");
  }
  return QFormula{std::move(gate)};
}

CFormula parse_cformula_node(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object node");
  if (j.contains("leaf")) {
    expect_keys(j, {"leaf"}, path);
    return CFormula{CFormula::Leaf{get_uint(j.at("leaf"), path + "/leaf")}};
  }
  if (!j.contains("gate")) fail(path, "node must have \"leaf\" or \"gate\"");
  expect_keys(j, {"gate", "children"}, path);
  CFormula::Gate gate;
  gate.table = truth_table_from_json(j.at("gate"), path + "/gate");
  if (!j.contains("children")) fail(path, "gate node needs \"children\"");
  const Json& children = j.at("children");
  if (!children.is_array()) fail(path + "/children", "expected an array");
  for (size_t i = 0; i < children.size(); ++i)
    gate.children.push_back(parse_cformula_node(children[i], path + "/children/" + std::to_string(i)));
  if (gate.table.arity != gate.children.size())
    fail(path, "arity mismatch: table takes " + std::to_string(gate.table.arity) +
                   " bits but has " + std::to_string(gate.children.size()) + " children");
  return CFormula{std::move(gate)};
}

BoolCircuit parse_circuit_node(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object node");
  if (j.contains("var")) {
    expect_keys(j, {"var"}, path);
    return BoolCircuit::make_var(get_uint(j.at("var"), path + "/var"));
  }
  if (j.contains("not")) {
    expect_keys(j, {"not"}, path);
    return BoolCircuit::make_not(parse_circuit_node(j.at("not"), path + "/not"));
  }
  for (const char* op : {"and", "or"}) {
    if (!j.contains(op)) continue;
    expect_keys(j, {op}, path);
    const Json& args = j.at(op);
    if (!args.is_array() || args.size() != 2)
      fail(path + "/" + op, "expected an array of two nodes");
    BoolCircuit a = parse_circuit_node(args[0], path + "/" + op + "/0");
    BoolCircuit b = parse_circuit_node(args[1], path + "/" + op + "/1");
    return op[0] == 'a' ? BoolCircuit::make_and(std::move(a), std::move(b))
                        : BoolCircuit::make_or(std::move(a), std::move(b));
  }
  fail(path, "node must have one of \"var\", \"not\", \"and\", \"or\"");
}

}  // namespace

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail(path, "expected nonempty rows");
  const size_t cols = j[0].size();
  Mat m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(path, "ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      const std::string epath = path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2) fail(epath, "complex entries are [re, im]");
      m(r, c) = Cx(get_finite(e[0], epath), get_finite(e[1], epath));
    }
  }
  return m;
}

Json channel_to_json(const Channel& c) {
  Json j;
  j["in_qubits"] = c.in_qubits;
  Json kraus = Json::array();
  for (const Mat& k : c.kraus) kraus.push_back(mat_to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

Channel channel_from_json(const Json& j, const std::string& path, double eps) {
  if (!j.is_object()) fail(path, "expected a channel object");
  expect_keys(j, {"in_qubits", "kraus"}, path);
  if (!j.contains("in_qubits") || !j.contains("kraus"))
    fail(path, "channel needs \"in_qubits\" and \"kraus\"");
  Channel c;
  c.in_qubits = get_uint(j.at("in_qubits"), path + "/in_qubits");
  if (c.in_qubits < 1) fail(path + "/in_qubits", "channels take at least one qubit");
  const Json& kl = j.at("kraus");
  if (!kl.is_array() || kl.empty()) fail(path + "/kraus", "expected a nonempty array");
  for (size_t i = 0; i < kl.size(); ++i)
    c.kraus.push_back(mat_from_json(kl[i], path + "/kraus/" + std::to_string(i)));
  const Eigen::Index rows = c.kraus[0].rows();
  if (rows <= 0 || (rows & (rows - 1)) != 0) fail(path + "/kraus", "row count must be 2^k");
  c.out_qubits = 0;
  while ((Eigen::Index(1) << c.out_qubits) < rows) ++c.out_qubits;
  try {
    validate_channel(c, eps);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return c;
}

Json truth_table_to_json(const TruthTable& t) {
  std::string bits(t.bits.size(), '0');
  for (size_t i = 0; i < t.bits.size(); ++i) bits[i] = t.bits[i] ? '1' : '0';
  return Json{{"arity", t.arity}, {"bits", bits}};
}

TruthTable truth_table_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a truth-table object");
  expect_keys(j, {"arity", "bits"}, path);
  if (!j.contains("arity") || !j.contains("bits")) fail(path, "table needs \"arity\" and \"bits\"");
  TruthTable t;
  t.arity = get_uint(j.at("arity"), path + "/arity");
  if (t.arity > 20) fail(path + "/arity", "arity above 20 is not supported");
  if (!j.at("bits").is_string()) fail(path + "/bits", "expected a 0/1 string");
  const std::string s = j.at("bits").get<std::string>();
  if (s.size() != (size_t(1) << t.arity)) fail(path + "/bits", "bits length must be 2^arity");
  for (char ch : s) {
    if (ch != '0' && ch != '1') fail(path + "/bits", "bits must contain only 0 and 1");
    t.bits.push_back(ch == '1');
  }
  return t;
}

Json serialize_qformula(const QFormula& f) {
  if (f.is_leaf()) return Json{{"leaf", f.leaf().var}};
  const auto& g = f.gate();
  Json pre = Json::array();
  for (const auto& c : g.pre) pre.push_back(optional_channel_to_json(c));
  Json children = Json::array();
  for (const QFormula& c : g.children) children.push_back(serialize_qformula(c));
  Json j;
  j["gate"] = Json{{"channel", channel_to_json(g.channel)},
                   {"pre", std::move(pre)},
                   {"children", std::move(children)}};
  if (g.out.has_value()) j["out"] = channel_to_json(*g.out);
  return j;
}

QFormula parse_qformula(const Json& j, double eps_num) {
  return parse_qformula_node(j, "", eps_num);
}

Json serialize_cformula(const CFormula& f) {
  if (f.is_leaf()) return Json{{"leaf", f.leaf().var}};
  const auto& g = f.gate();
  Json children = Json::array();
  for (const CFormula& c : g.children) children.push_back(serialize_cformula(c));
  return Json{{"gate", truth_table_to_json(g.table)}, {"children", std::move(children)}};
}

CFormula parse_cformula(const Json& j) { return parse_cformula_node(j, ""); }

Json serialize_circuit(const BoolCircuit& c) {
  switch (c.kind) {
    case BoolCircuit::Kind::Var:
      return Json{{"var", c.var}};
    case BoolCircuit::Kind::Not:
      return Json{{"not", serialize_circuit(c.children[0])}};
    case BoolCircuit::Kind::And:
      return Json{{"and", Json::array({serialize_circuit(c.children[0]),
                                       serialize_circuit(c.children[1])})}};
    case BoolCircuit::Kind::Or:
      return Json{{"or", Json::array({serialize_circuit(c.children[0]),
                                      serialize_circuit(c.children[1])})}};
  }
  throw InternalError("unreachable circuit kind");
}

BoolCircuit parse_circuit(const Json& j) { return parse_circuit_node(j, ""); }

Json serialize_oqp(const OneQubitProgram& p) {
  Json items = Json::array();
  for (const auto& it : p.items) {
    if (const auto* s = std::get_if<OneQubitProgram::SingleQubit>(&it))
      items.push_back(Json{{"u", mat_to_json(s->u)}});
    else
      items.push_back(Json{{"cx", std::get<OneQubitProgram::ControlledX>(it).var}});
  }
  return Json{{"items", std::move(items)}};
}

OneQubitProgram parse_oqp(const Json& j, double eps_num) {
  if (!j.is_object() || !j.contains("items")) fail("", "expected {\"items\": [...]}");
  expect_keys(j, {"items"}, "");
  const Json& items = j.at("items");
  if (!items.is_array()) fail("/items", "expected an array");
  OneQubitProgram p;
  for (size_t i = 0; i < items.size(); ++i) {
    const Json& it = items[i];
    const std::string path = "/items/" + std::to_string(i);
    if (!it.is_object()) fail(path, "expected an object item");
    if (it.contains("u")) {
      expect_keys(it, {"u"}, path);
      Mat u = mat_from_json(it.at("u"), path + "/u");
      if (u.rows() != 2 || u.cols() != 2) fail(path + "/u", "single-qubit items are 2x2");
      if ((u.adjoint() * u - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > eps_num)
        fail(path + "/u", "matrix is not unitary");
      p.items.emplace_back(OneQubitProgram::SingleQubit{std::move(u)});
    } else if (it.contains("cx")) {
      expect_keys(it, {"cx"}, path);
      p.items.emplace_back(OneQubitProgram::ControlledX{get_uint(it.at("cx"), path + "/cx")});
    } else {
      fail(path, "item must have \"u\" or \"cx\"");
    }
  }
  return p;
}

Json certificate_to_json(const GateCertificate& c) {
  Json pre = Json::array();
  for (const auto& ch : c.pre) pre.push_back(optional_channel_to_json(ch));
  Json j;
  j["pre"] = std::move(pre);
  j["channel"] = channel_to_json(c.channel);
  j["out"] = optional_channel_to_json(c.out);
  return j;
}

GateCertificate certificate_from_json(const Json& j, const std::string& path, double eps_num) {
  if (!j.is_object()) fail(path, "expected a certificate object");
  expect_keys(j, {"pre", "channel", "out"}, path);
  if (!j.contains("pre") || !j.contains("channel")) fail(path, "certificate needs \"pre\" and \"channel\"");
  GateCertificate c;
  const Json& pre = j.at("pre");
  if (!pre.is_array()) fail(path + "/pre", "expected an array");
  for (size_t i = 0; i < pre.size(); ++i)
    c.pre.push_back(optional_channel_from_json(pre[i], path + "/pre/" + std::to_string(i), eps_num));
  c.channel = channel_from_json(j.at("channel"), path + "/channel", eps_num);
  if (j.contains("out"))
    c.out = optional_channel_from_json(j.at("out"), path + "/out", eps_num);
  return c;
}

AnyIr parse_any(const Json& j, double eps_num) {
  if (!j.is_object()) throw ParseError("top-level IR document must be an object");
  if (j.contains("items")) return parse_oqp(j, eps_num);
  if (j.contains("var") || j.contains("not") || j.contains("and") || j.contains("or"))
    return parse_circuit(j);
  if (j.contains("gate") && j.at("gate").is_object() && j.at("gate").contains("channel"))
    return parse_qformula(j, eps_num);
  if (j.contains("gate") || j.contains("leaf")) return parse_cformula(j);
  throw ParseError("could not detect IR kind from top-level keys");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

AnyIr load_ir_file(const std::string& path, double eps_num) {
  Json j = read_json_file(path);
  if (j.is_object() && j.contains("meta")) {
    if (j.contains("qformula")) return parse_qformula(j.at("qformula"), eps_num);
    if (j.contains("cformula")) return parse_cformula(j.at("cformula"));
    if (j.contains("circuit")) return parse_circuit(j.at("circuit"));
    if (j.contains("oqp")) return parse_oqp(j.at("oqp"), eps_num);
    throw ParseError(path + ": meta envelope has no recognized payload");
  }
  try {
    return parse_any(j, eps_num);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace qf
