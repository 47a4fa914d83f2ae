#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "qf/ir.hpp"

namespace qf {

using Json = nlohmann::json;

// Wire formats (bit-exact round trip on matrix entries):
//   complex     [re, im]
//   matrix      row-major nested arrays of complex
//   channel     {"in_qubits": k, "kraus": [matrix, ...]}
//   qformula    {"leaf": n} | {"gate": {"channel", "pre", "children"}, "out": channel|null}
//   cformula    {"leaf": n} | {"gate": {"arity": m, "bits": "0110..."}, "children": [...]}
//   circuit     {"var": n} | {"not": node} | {"and": [a, b]} | {"or": [a, b]}
//   oqp         {"items": [{"u": matrix} | {"cx": var}, ...]}
// Generated files may wrap a node as {"meta": {...}, "<kind>": node} with
// <kind> one of qformula, cformula, circuit, oqp.

Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j, const std::string& path);

Json channel_to_json(const Channel& c);
Channel channel_from_json(const Json& j, const std::string& path, double eps_num = 1e-9);

Json truth_table_to_json(const TruthTable& t);
TruthTable truth_table_from_json(const Json& j, const std::string& path);

Json serialize_qformula(const QFormula& f);
QFormula parse_qformula(const Json& j, double eps_num = 1e-9);

Json serialize_cformula(const CFormula& f);
CFormula parse_cformula(const Json& j);

Json serialize_circuit(const BoolCircuit& c);
BoolCircuit parse_circuit(const Json& j);

Json serialize_oqp(const OneQubitProgram& p);
OneQubitProgram parse_oqp(const Json& j, double eps_num = 1e-9);

Json certificate_to_json(const GateCertificate& c);
GateCertificate certificate_from_json(const Json& j, const std::string& path,
                                      double eps_num = 1e-9);

using AnyIr = std::variant<QFormula, CFormula, BoolCircuit, OneQubitProgram>;

/// Detects the document kind from its top-level keys.
AnyIr parse_any(const Json& j, double eps_num = 1e-9);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Reads an IR document, unwrapping a {"meta": ..., "<kind>": node} envelope
/// when present.
AnyIr load_ir_file(const std::string& path, double eps_num = 1e-9);

}  // namespace qf
