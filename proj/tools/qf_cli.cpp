// qformula: simulate, dequantize, compile and generate quantum/classical
// formula documents.
//
// Exit codes: 0 success, 1 semantic mismatch (verify-equiv), 2 parse error,
// 3 evaluation error, 4 transformation failure, 5 usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qf/dequantize.hpp"
#include "qf/genrand.hpp"
#include "qf/json_io.hpp"
#include "qf/oqp.hpp"
#include "qf/simulate.hpp"
#include "qf/toffoli.hpp"

namespace {

struct CommonOpts {
  qf::Tolerances tol;
  unsigned threads = 0;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--eps-num", opts.tol.eps_num, "numerical slack");
  cmd->add_option("--eps-dedup", opts.tol.eps_dedup, "state deduplication radius");
  cmd->add_option("--eps-classical", opts.tol.eps_classical, "classical-state distance bound");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)")
      ->envname("QF_THREADS");
  cmd->add_flag("--json", opts.json, "machine-readable output");
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s(bits.size(), '0');
  for (size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

std::string assignment_string(std::uint32_t index, unsigned n) {
  std::string s(n, '0');
  for (unsigned i = 0; i < n; ++i) s[i] = ((index >> (n - 1 - i)) & 1u) ? '1' : '0';
  return s;
}

qf::TruthTableResult table_of(const qf::AnyIr& ir, const CommonOpts& opts) {
  return std::visit(
      [&](const auto& x) { return qf::truth_table(x, opts.tol, opts.threads); }, ir);
}

void print_state(const qf::DensityMatrix& rho, const CommonOpts& opts) {
  const auto bit = qf::is_classical_state(rho, opts.tol);
  if (opts.json) {
    qf::Json j;
    j["state"] = qf::mat_to_json(rho.mat);
    j["classical"] = bit.has_value();
    if (bit.has_value()) j["bit"] = *bit;
    std::cout << j.dump(2) << '\n';
    return;
  }
  if (bit.has_value())
    std::cout << "output: |" << *bit << "><" << *bit << "| (classical " << *bit << ")\n";
  else
    std::cout << "output (non-classical):\n" << rho.mat << '\n';
}

int run_simulate(const std::string& path, const std::string& xbits, bool all,
                 const CommonOpts& opts) {
  const qf::AnyIr ir = qf::load_ir_file(path, opts.tol.eps_num);
  if (all) {
    const qf::TruthTableResult t = table_of(ir, opts);
    if (opts.json) {
      qf::Json j;
      j["vars"] = t.vars;
      j["bits"] = bits_to_string(t.table.bits);
      j["classical"] = t.classical;
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    std::cout << "vars:";
    for (unsigned v : t.vars) std::cout << " x" << v;
    std::cout << (t.classical ? "  (classical outputs)" : "  (non-classical outputs, rounded)")
              << '\n';
    for (std::uint32_t a = 0; a < t.table.bits.size(); ++a)
      std::cout << assignment_string(a, t.table.arity) << " -> " << int(t.table.bits[a]) << '\n';
    return 0;
  }

  const std::vector<unsigned> vars =
      std::visit([](const auto& x) { return qf::sorted_vars(x); }, ir);
  if (xbits.size() != vars.size())
    throw qf::EvalError("--x needs one bit per variable (" + std::to_string(vars.size()) +
                        " expected); bit i assigns the i-th smallest variable");
  qf::Assignment x;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (xbits[i] != '0' && xbits[i] != '1') throw qf::EvalError("--x must be a 0/1 string");
    x[vars[i]] = xbits[i] == '1';
  }
  if (const auto* f = std::get_if<qf::QFormula>(&ir)) {
    print_state(qf::eval_qformula(*f, x), opts);
  } else if (const auto* p = std::get_if<qf::OneQubitProgram>(&ir)) {
    print_state(qf::eval_oqp(*p, x), opts);
  } else {
    const bool bit = std::holds_alternative<qf::CFormula>(ir)
                         ? qf::eval_cformula(std::get<qf::CFormula>(ir), x)
                         : qf::eval_circuit(std::get<qf::BoolCircuit>(ir), x);
    if (opts.json)
      std::cout << qf::Json{{"bit", bit ? 1 : 0}}.dump() << '\n';
    else
      std::cout << "output: " << (bit ? 1 : 0) << '\n';
  }
  return 0;
}

qf::Json dequantize_output_to_json(const qf::DequantizeOutput& out) {
  qf::Json certs = qf::Json::array();
  for (const auto& [path, cert] : out.certificates)
    certs.push_back(qf::Json{{"path", path}, {"realization", qf::certificate_to_json(cert)}});
  return qf::Json{{"cformula", qf::serialize_cformula(out.cformula)},
                  {"certificates", std::move(certs)},
                  {"size", out.size},
                  {"depth", out.depth}};
}

int run_dequantize(const std::string& path, std::optional<double> delta,
                   const std::string& out_path, const CommonOpts& opts) {
  const qf::AnyIr ir = qf::load_ir_file(path, opts.tol.eps_num);
  const auto* f = std::get_if<qf::QFormula>(&ir);
  if (f == nullptr) throw qf::EvalError("dequantize expects a quantum formula document");
  const qf::DequantizeOutput out =
      delta.has_value() ? qf::dequantize_bounded(*f, qf::ErrorBudget{*delta}, opts.tol, opts.threads)
                        : qf::dequantize_exact(*f, opts.tol, opts.threads);
  if (!out_path.empty()) qf::write_json_file(out_path, dequantize_output_to_json(out));
  if (opts.json) {
    std::cout << dequantize_output_to_json(out).dump(2) << '\n';
  } else {
    std::cout << "dequantized: size=" << out.size << " depth=" << out.depth
              << " certificates=" << out.certificates.size() << '\n';
    if (!out_path.empty()) std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

int run_compile(const std::string& path, const std::string& out_path, const CommonOpts& opts) {
  const qf::AnyIr ir = qf::load_ir_file(path, opts.tol.eps_num);
  const auto* c = std::get_if<qf::BoolCircuit>(&ir);
  if (c == nullptr) throw qf::EvalError("compile-oqp expects a boolean circuit document");
  const qf::CompileReport report = qf::compile(*c);
  if (!out_path.empty()) qf::write_json_file(out_path, qf::serialize_oqp(report.program));
  if (opts.json)
    std::cout << qf::Json{{"length", report.length},
                          {"depth", report.source_depth},
                          {"bound", report.bound}}
                     .dump()
              << '\n';
  else
    std::cout << "length=" << report.length << " bound=" << report.bound
              << " depth=" << report.source_depth << '\n';
  if (!out_path.empty() && !opts.json) std::cout << "wrote " << out_path << '\n';
  return 0;
}

int run_verify_equiv(const std::string& path_a, const std::string& path_b,
                     const CommonOpts& opts) {
  const qf::AnyIr a = qf::load_ir_file(path_a, opts.tol.eps_num);
  const qf::AnyIr b = qf::load_ir_file(path_b, opts.tol.eps_num);
  // Compare over the union of the two variable sets so that objects from
  // different pipelines line up.
  std::vector<unsigned> vars = std::visit([](const auto& x) { return qf::sorted_vars(x); }, a);
  for (unsigned v : std::visit([](const auto& x) { return qf::sorted_vars(x); }, b)) {
    if (!std::binary_search(vars.begin(), vars.end(), v)) {
      vars.push_back(v);
      std::sort(vars.begin(), vars.end());
    }
  }
  if (vars.size() > qf::kMaxEnumerationVars)
    throw qf::TooManyVariables("verify-equiv: too many variables");
  const auto eval_bit = [&](const qf::AnyIr& ir, std::uint32_t idx) {
    if (const auto* f = std::get_if<qf::QFormula>(&ir))
      return qf::eval_qformula(*f, vars, idx).mat(1, 1).real() >= 0.5;
    if (const auto* p = std::get_if<qf::OneQubitProgram>(&ir))
      return qf::eval_oqp(*p, vars, idx).mat(1, 1).real() >= 0.5;
    if (const auto* c = std::get_if<qf::CFormula>(&ir)) return qf::eval_cformula(*c, vars, idx);
    return qf::eval_circuit(std::get<qf::BoolCircuit>(&ir) ? std::get<qf::BoolCircuit>(ir)
                                                           : std::get<qf::BoolCircuit>(ir),
                            vars, idx);
  };
  for (std::uint32_t idx = 0; idx < (1u << vars.size()); ++idx) {
    if (eval_bit(a, idx) != eval_bit(b, idx)) {
      std::cout << "mismatch at x=" << assignment_string(idx, unsigned(vars.size())) << '\n';
      return 1;
    }
  }
  std::cout << "equivalent over " << (1u << vars.size()) << " assignments\n";
  return 0;
}

qf::Channel channel_from_spec(const qf::Json& j, const std::string& path, double eps) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "identity") return qf::identity_channel(1);
    if (name == "not") return qf::unitary_channel(qf::pauli_x());
    if (name == "hadamard") return qf::unitary_channel(qf::hadamard());
    if (name == "const0") return qf::prepare_channel(qf::basis_state(0));
    if (name == "const1") return qf::prepare_channel(qf::basis_state(1));
    if (name == "const+") {
      qf::Vec plus(2);
      plus << 1.0, 1.0;
      return qf::prepare_channel(qf::pure_state(plus));
    }
    throw qf::ParseError(path + ": unknown channel alias \"" + name + "\"");
  }
  return qf::channel_from_json(j, path, eps);
}

int run_classify_toffoli(const std::string& path, const CommonOpts& opts) {
  const qf::Json j = qf::read_json_file(path);
  if (!j.is_object() || !j.contains("m") || !j.contains("pre") || !j.contains("post"))
    throw qf::ParseError(path + ": expected {\"m\": ..., \"pre\": [...], \"post\": ...}");
  const unsigned m = j.at("m").get<unsigned>();
  std::vector<qf::Channel> pre;
  const qf::Json& pl = j.at("pre");
  if (!pl.is_array()) throw qf::ParseError(path + "/pre: expected an array");
  for (size_t i = 0; i < pl.size(); ++i)
    pre.push_back(channel_from_spec(pl[i], "/pre/" + std::to_string(i), opts.tol.eps_num));
  const qf::Channel post = channel_from_spec(j.at("post"), "/post", opts.tol.eps_num);
  const qf::TruthTable t = qf::classify_depth_one(pre, post, m, opts.tol);
  if (opts.json)
    std::cout << qf::truth_table_to_json(t).dump() << '\n';
  else
    std::cout << "table: " << bits_to_string(t.bits) << '\n';
  return 0;
}

int run_affine_check(const std::string& path, const std::string& table_bits,
                     const CommonOpts& opts) {
  qf::TruthTable t;
  if (!table_bits.empty()) {
    size_t n = 0;
    while ((size_t(1) << n) < table_bits.size()) ++n;
    if ((size_t(1) << n) != table_bits.size())
      throw qf::EvalError("--table length must be a power of two");
    t.arity = static_cast<unsigned>(n);
    for (char c : table_bits) {
      if (c != '0' && c != '1') throw qf::EvalError("--table must be a 0/1 string");
      t.bits.push_back(c == '1');
    }
  } else {
    if (path.empty()) throw CLI::ValidationError("affine-check", "need a file or --table");
    t = table_of(qf::load_ir_file(path, opts.tol.eps_num), opts).table;
  }
  const bool affine = qf::affine_check(t);
  if (opts.json)
    std::cout << qf::Json{{"affine", affine}}.dump() << '\n';
  else
    std::cout << (affine ? "affine" : "non-affine") << '\n';
  return 0;
}

int run_gen(const std::string& kind, const qf::GenConfig& cfg, const std::string& out_path,
            const CommonOpts& opts) {
  qf::Json meta{{"generator", kind},
                {"prng", "splitmix64"},
                {"seed", cfg.seed},
                {"config",
                 qf::Json{{"max_vars", cfg.max_vars},
                          {"max_depth", cfg.max_depth},
                          {"max_arity", cfg.max_arity},
                          {"noise", cfg.noise},
                          {"obfuscation_rounds", cfg.obfuscation_rounds}}}};
  qf::Json doc{{"meta", std::move(meta)}};
  if (kind == "crof") {
    doc["cformula"] = qf::serialize_cformula(qf::gen_classical_rof(cfg));
  } else if (kind == "qrof") {
    doc["qformula"] = qf::serialize_qformula(qf::obfuscate(qf::gen_classical_rof(cfg), cfg));
  } else if (kind == "noisy-qrof") {
    doc["qformula"] = qf::serialize_qformula(
        qf::add_noise(qf::obfuscate(qf::gen_classical_rof(cfg), cfg), cfg.noise));
  } else if (kind == "circuit") {
    doc["circuit"] = qf::serialize_circuit(qf::gen_circuit(cfg));
  } else if (kind == "affine-cf") {
    doc["cformula"] = qf::serialize_cformula(qf::gen_affine_cformula(cfg));
  } else if (kind == "obf-xor") {
    // The two-variable demo: a CNOT-target gate with a fresh basis change on
    // each leaf wire.
    qf::CFormula::Gate g;
    g.table = qf::xor_table(2);
    g.children.push_back(qf::CFormula{qf::CFormula::Leaf{0}});
    g.children.push_back(qf::CFormula{qf::CFormula::Leaf{1}});
    doc["qformula"] = qf::serialize_qformula(qf::obfuscate(qf::CFormula{std::move(g)}, cfg));
  } else {
    throw CLI::ValidationError(
        "gen", "unknown kind (use crof|qrof|noisy-qrof|circuit|affine-cf|obf-xor)");
  }
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    qf::write_json_file(out_path, doc);
    if (!opts.json) std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"read-once quantum formula dequantizer and one-qubit compiler"};
  app.require_subcommand(1);
  int rc = 0;

  CommonOpts opts;

  auto* sim = app.add_subcommand("simulate", "evaluate an IR file on one or all inputs");
  std::string sim_path, sim_x;
  bool sim_all = false;
  sim->add_option("file", sim_path)->required();
  sim->add_option("--x", sim_x, "assignment bits, most significant = smallest variable");
  sim->add_flag("--all", sim_all, "print the full truth table");
  add_common(sim, opts);
  sim->callback([&] { rc = run_simulate(sim_path, sim_x, sim_all, opts); });

  auto* deq = app.add_subcommand("dequantize", "rewrite a quantum formula as a classical one");
  std::string deq_path, deq_out;
  double deq_delta = -1.0;
  deq->add_option("file", deq_path)->required();
  deq->add_option("-o,--output", deq_out, "write the result document here");
  deq->add_option("--delta", deq_delta, "bounded-error budget (omit for the exact engine)");
  add_common(deq, opts);
  deq->callback([&] {
    rc = run_dequantize(deq_path,
                        deq_delta >= 0.0 ? std::optional<double>(deq_delta) : std::nullopt,
                        deq_out, opts);
  });

  auto* comp = app.add_subcommand("compile-oqp", "compile a circuit into a one-qubit program");
  std::string comp_path, comp_out;
  comp->add_option("file", comp_path)->required();
  comp->add_option("-o,--output", comp_out);
  add_common(comp, opts);
  comp->callback([&] { rc = run_compile(comp_path, comp_out, opts); });

  auto* ver = app.add_subcommand("verify-equiv", "compare the truth tables of two IR files");
  std::string ver_a, ver_b;
  ver->add_option("a", ver_a)->required();
  ver->add_option("b", ver_b)->required();
  add_common(ver, opts);
  ver->callback([&] { rc = run_verify_equiv(ver_a, ver_b, opts); });

  auto* cls = app.add_subcommand("classify-toffoli",
                                 "classify single-qubit dressings of the traced Toffoli");
  std::string cls_path;
  cls->add_option("file", cls_path)->required();
  add_common(cls, opts);
  cls->callback([&] { rc = run_classify_toffoli(cls_path, opts); });

  auto* aff = app.add_subcommand("affine-check", "is the computed function degree-one over F2?");
  std::string aff_path, aff_table;
  aff->add_option("file", aff_path);
  aff->add_option("--table", aff_table, "truth-table bits, length a power of two");
  add_common(aff, opts);
  aff->callback([&] { rc = run_affine_check(aff_path, aff_table, opts); });

  auto* gen = app.add_subcommand("gen", "generate seeded test documents");
  std::string gen_kind = "qrof", gen_out;
  qf::GenConfig cfg;
  gen->add_option("--kind", gen_kind, "crof|qrof|noisy-qrof|circuit|affine-cf|obf-xor");
  gen->add_option("--seed", cfg.seed);
  gen->add_option("--vars", cfg.max_vars);
  gen->add_option("--depth", cfg.max_depth);
  gen->add_option("--arity", cfg.max_arity);
  gen->add_option("--noise", cfg.noise);
  gen->add_option("--rounds", cfg.obfuscation_rounds);
  gen->add_option("-o,--output", gen_out);
  add_common(gen, opts);
  gen->callback([&] { rc = run_gen(gen_kind, cfg, gen_out, opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 5;
  } catch (const qf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const qf::TransformError& e) {
    std::cerr << "transformation failed: " << e.what() << '\n';
    return 4;
  } catch (const qf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return rc;
}
