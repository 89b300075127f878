#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "hxd/cutelim.hpp"
#include "hxd/hilbert.hpp"
#include "hxd/proof_io.hpp"
#include "hxd/prover.hpp"
#include "hxd/random.hpp"
#include "json.hpp"

#ifndef HXD_FIXTURE_DIR
#define HXD_FIXTURE_DIR "fixtures"
#endif

namespace hxd::tools {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

enum Exit { kPositive = 0, kNegative = 1, kInconclusive = 2, kInputError = 3 };

// Bad command-line input that is not a parse error inside a file.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text of an argument plus the name to use in diagnostics.
struct Source {
  std::string name, text;
};

// Paths under fixtures/ fall back to $HXD_FIXTURES, then to the source tree.
std::optional<fs::path> resolve(const std::string& arg) {
  fs::path p(arg);
  if (fs::is_regular_file(p)) return p;
  auto it = p.begin();
  if (it == p.end() || *it != "fixtures") return std::nullopt;
  fs::path rest;
  for (++it; it != p.end(); ++it) rest /= *it;
  std::vector<fs::path> roots;
  if (const char* env = std::getenv("HXD_FIXTURES")) roots.emplace_back(env);
  roots.emplace_back(HXD_FIXTURE_DIR);
  for (const auto& r : roots)
    if (fs::is_regular_file(r / rest)) return r / rest;
  return std::nullopt;
}

Source read_source(const std::string& arg, bool literal_ok) {
  if (auto p = resolve(arg)) {
    std::ifstream in(*p);
    std::stringstream ss;
    ss << in.rdbuf();
    return {p->string(), ss.str()};
  }
  if (!literal_ok) throw InputError("cannot open '" + arg + "'");
  return {"<inline>", arg};
}

bool looks_like_sequent(const std::string& t) {
  return t.find("|-") != std::string::npos || t.find("\xE2\x8A\xA2") != std::string::npos;
}

struct Ctx {
  std::ostream& out;
  bool structured = false;

  void emit(const ordered_json& j, const std::string& human) {
    if (structured)
      out << j.dump(2) << "\n";
    else
      out << human;
  }
};

std::string report_line(const CheckReport& r) {
  if (!r.well_formed)
    return "not well-formed at " + path_string(r.error_path) + ": " + r.error + "\n";
  if (!r.proved && r.open_leaves)
    return "well-formed, open leaves: " + std::to_string(r.open_leaves) +
           ", cuts: " + std::to_string(r.cut_count) + "\n";
  if (!r.proved) return "not proved at " + path_string(r.error_path) + ": " + r.error + "\n";
  return "proved, cuts: " + std::to_string(r.cut_count) + "\n";
}

ordered_json report_json(const CheckReport& r) {
  ordered_json j;
  j["well_formed"] = r.well_formed;
  j["proved"] = r.proved;
  j["cuts"] = r.cut_count;
  j["open_leaves"] = r.open_leaves;
  j["nodes"] = r.nodes;
  if (!r.error.empty()) {
    j["error"] = r.error;
    j["error_path"] = path_string(r.error_path);
  }
  return j;
}

void print_tree(std::ostream& out, const DerivP& d, int depth) {
  out << std::string(2 * depth, ' ') << rule_name(d->rule) << "  " << print_sequent(d->conclusion)
      << "\n";
  for (const auto& c : d->children) print_tree(out, c, depth + 1);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw InputError("cannot write '" + path + "'");
  o << text;
}

int cmd_parse(Ctx& c, const std::string& arg) {
  Source s = read_source(arg, true);
  ordered_json j;
  std::string human;
  if (looks_like_sequent(s.text)) {
    Sequent q = parse_sequent(s.text);
    j["kind"] = "sequent";
    j["core"] = print_sequent(q);
    human = "sequent: " + print_sequent(q) + "\n";
  } else {
    NodeP e = parse_node(s.text);
    j["kind"] = "node";
    j["core"] = print_node(e);
    j["size"] = size(e);
    human = "node: " + print_node(e) + "\nsize: " + std::to_string(size(e)) + "\n";
  }
  c.emit(j, human);
  return kPositive;
}

int cmd_check(Ctx& c, const std::string& arg) {
  DerivP d = load_proof(read_source(arg, false).text);
  CheckReport r = check_derivation(d);
  c.emit(report_json(r), report_line(r));
  return r.proved ? kPositive : kNegative;
}

int cmd_prove(Ctx& c, const std::string& arg, const Budget& b, const std::string& emit_proof,
              const std::string& emit_model, bool trace) {
  Sequent s = parse_sequent(read_source(arg, true).text);
  ProveResult r = prove(s, b);
  ordered_json j;
  j["status"] = status_name(r.status);
  std::ostringstream human;
  if (r.status == ProveResult::Status::Proved) {
    CheckReport rep = check_derivation(r.proof);  // re-validated at the boundary
    if (!rep.proved) throw std::logic_error("prover returned an unchecked derivation");
    j["check"] = report_json(rep);
    human << "proved, nodes: " << rep.nodes << ", cuts: " << rep.cut_count << "\n";
    if (trace) print_tree(human, r.proof, 0);
    if (!emit_proof.empty()) save_proof_file(r.proof, emit_proof);
    c.emit(j, human.str());
    return kPositive;
  }
  if (r.status == ProveResult::Status::Refuted) {
    if (sequent_valid_in(*r.model, s)) throw std::logic_error("refuter returned a model of the sequent");
    j["model"] = print_model(*r.model);
    human << "refuted by a model of size " << r.model->n_nodes << ":\n" << print_model(*r.model);
    if (!emit_model.empty()) write_text(emit_model, print_model(*r.model));
    c.emit(j, human.str());
    return kNegative;
  }
  j["reason"] = r.reason;
  human << "unknown: " << r.reason << " budget exhausted\n";
  c.emit(j, human.str());
  return kInconclusive;
}

int cmd_refute(Ctx& c, const std::string& arg, int bound, const std::string& emit_model) {
  Sequent s = parse_sequent(read_source(arg, true).text);
  auto m = find_countermodel(s, bound);
  ordered_json j;
  if (!m) {
    j["status"] = "none";
    j["bound"] = bound;
    c.emit(j, "no countermodel with at most " + std::to_string(bound) + " nodes\n");
    return kInconclusive;
  }
  j["status"] = "refuted";
  j["model"] = print_model(*m);
  if (!emit_model.empty()) write_text(emit_model, print_model(*m));
  c.emit(j, "countermodel of size " + std::to_string(m->n_nodes) + ":\n" + print_model(*m));
  return kPositive;
}

int cmd_cutfree(Ctx& c, const std::string& arg, const std::string& out_path, bool trace) {
  DerivP d = load_proof(read_source(arg, false).text);
  CheckReport before = check_derivation(d);
  if (!before.proved) {
    c.emit(report_json(before), report_line(before));
    return kNegative;
  }
  ordered_json j;
  std::ostringstream human;
  EliminationResult res;
  try {
    res = eliminate_cuts_traced(d);
  } catch (const CutElimError& e) {
    j["status"] = "failed";
    j["error"] = e.what();
    c.emit(j, std::string("cut elimination failed: ") + e.what() + "\n");
    return kNegative;
  }
  CheckReport after = check_derivation(res.derivation);
  bool ok = after.proved && after.cut_count == 0 && res.derivation->conclusion == d->conclusion;
  j["status"] = ok ? "cut-free" : "failed";
  j["steps"] = res.trace.size();
  j["check"] = report_json(after);
  if (trace) {
    j["trace"] = ordered_json::array();
    for (const auto& st : res.trace) {
      j["trace"].push_back(format_step(st));
      human << format_step(st) << "\n";
    }
  }
  human << "steps: " << res.trace.size() << "\n" << report_line(after);
  if (!out_path.empty()) save_proof_file(res.derivation, out_path);
  c.emit(j, human.str());
  return ok ? kPositive : kNegative;
}

int cmd_hilbert_check(Ctx& c, const std::string& arg) {
  HilbertProof p = parse_hilbert(read_source(arg, false).text);
  HilbertReport r = check_hilbert(p);
  ordered_json j;
  std::ostringstream human;
  j["ok"] = r.ok;
  j["formulas"] = ordered_json::array();
  for (std::size_t n = 0; n < p.size(); ++n) {
    std::string f = r.formulas[n] ? print_node(r.formulas[n]) : "";
    j["formulas"].push_back(f);
    if (r.formulas[n]) human << n + 1 << ". " << f << "\n";
  }
  j["issues"] = ordered_json::array();
  for (const auto& is : r.issues) {
    j["issues"].push_back({{"step", is.step + 1}, {"message", is.message}});
    human << "step " << is.step + 1 << ": " << is.message << "\n";
  }
  human << (r.ok ? "accepted\n" : "rejected\n");
  c.emit(j, human.str());
  return r.ok ? kPositive : kNegative;
}

int cmd_hilbert_translate(Ctx& c, const std::string& arg, const std::string& nominal,
                          const std::string& out_path) {
  HilbertProof p = parse_hilbert(read_source(arg, false).text);
  HilbertReport hr = check_hilbert(p);
  if (!hr.ok) {
    ordered_json j;
    j["status"] = "rejected";
    j["message"] = hr.issues.front().message;
    c.emit(j, "step " + std::to_string(hr.issues.front().step + 1) + ": " +
                  hr.issues.front().message + "\n");
    return kNegative;
  }
  DerivP d = translate(p, nominal);
  CheckReport r = check_derivation(d);
  if (!out_path.empty()) save_proof_file(d, out_path);
  ordered_json j;
  j["conclusion"] = print_sequent(d->conclusion);
  j["check"] = report_json(r);
  c.emit(j, print_sequent(d->conclusion) + "\n" + report_line(r));
  return r.proved ? kPositive : kNegative;
}

int cmd_eval(Ctx& c, const std::string& model_arg, const std::string& point,
             const std::string& expr_arg) {
  HybridDataModel m = parse_model(read_source(model_arg, false).text);
  NodeP e = parse_node(read_source(expr_arg, true).text);
  int n = -1;
  if (auto it = m.assign.find(point); it != m.assign.end()) {
    n = it->second;
  } else {
    std::size_t used = 0;
    try {
      n = std::stoi(point, &used);
    } catch (...) {
    }
    if (used != point.size() || n < 0 || n >= m.n_nodes)
      throw InputError("point '" + point + "' is neither a node index nor a nominal of the model");
  }
  bool v = eval_node(m, n, e);
  NodeSet all = eval_set(m, e);
  ordered_json j;
  j["value"] = v;
  j["extension"] = ordered_json::array();
  std::string ext;
  for (int x = 0; x < m.n_nodes; ++x)
    if ((all >> x) & 1) {
      j["extension"].push_back(x);
      ext += (ext.empty() ? "" : ",") + std::to_string(x);
    }
  c.emit(j, std::string(v ? "true" : "false") + "\nextension: {" + ext + "}\n");
  return v ? kPositive : kNegative;
}

int cmd_random(Ctx& c, std::uint64_t seed, int max_size, int count, const std::string& kind) {
  ExprGen g(seed);
  ordered_json j = ordered_json::array();
  std::string human;
  for (int k = 0; k < count; ++k) {
    std::string t = kind == "sequent" ? print_sequent(g.sequent(max_size)) : print_node(g.node(max_size));
    j.push_back(t);
    human += t + "\n";
  }
  c.emit(j, human);
  return kPositive;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof toolkit for hybrid XPath with data comparisons", "hxd"};
  app.require_subcommand(1);
  std::string format = "human";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "structured"}));

  std::string input, out_path, emit_proof, emit_model, nominal = "I", point, expr, kind = "sequent";
  bool trace = false;
  Budget budget;
  int bound = 3, max_size = 10, count = 1;
  std::uint64_t seed = 1;

  auto* parse = app.add_subcommand("parse", "Parse an expression or sequent and print its core form");
  parse->add_option("input", input, "File or inline text")->required();

  auto* check = app.add_subcommand("check", "Check a proof file");
  check->add_option("proof", input, "Proof file")->required();

  auto* prove_cmd = app.add_subcommand("prove", "Search for a proof of a sequent");
  prove_cmd->add_option("sequent", input, "File or inline sequent")->required();
  prove_cmd->add_option("--max-fresh", budget.max_fresh)->check(CLI::NonNegativeNumber);
  prove_cmd->add_option("--max-depth", budget.max_depth)->check(CLI::PositiveNumber);
  prove_cmd->add_option("--model-bound", budget.model_bound)->check(CLI::Range(1, kMaxNodes));
  prove_cmd->add_option("--emit-proof", emit_proof, "Write the proof here");
  prove_cmd->add_option("--emit-model", emit_model, "Write the countermodel here");
  prove_cmd->add_flag("--trace", trace, "Print the proof tree");

  auto* refute = app.add_subcommand("refute", "Search for a countermodel");
  refute->add_option("sequent", input, "File or inline sequent")->required();
  refute->add_option("--bound", bound, "Largest carrier")->check(CLI::Range(1, kMaxNodes));
  refute->add_option("--emit-model", emit_model, "Write the countermodel here");

  auto* cutfree = app.add_subcommand("cutfree", "Eliminate the cuts of a proved derivation");
  cutfree->add_option("proof", input, "Proof file")->required();
  cutfree->add_option("-o,--output", out_path, "Write the cut-free proof here");
  cutfree->add_flag("--trace", trace, "One line per reduction");

  auto* hcheck = app.add_subcommand("hilbert-check", "Check a Hilbert-style deduction");
  hcheck->add_option("file", input, "Deduction file")->required();

  auto* htrans = app.add_subcommand("hilbert-translate", "Translate a Hilbert deduction into G");
  htrans->add_option("file", input, "Deduction file")->required();
  htrans->add_option("--nominal", nominal, "Label of the end-sequent");
  htrans->add_option("-o,--output", out_path, "Write the derivation here");

  auto* eval = app.add_subcommand("eval", "Evaluate an expression at a point of a model");
  eval->add_option("model", input, "Model file")->required();
  eval->add_option("point", point, "Node index or nominal")->required();
  eval->add_option("expr", expr, "File or inline expression")->required();

  auto* fixtures = app.add_subcommand("fixtures", "Write the fixture corpus");
  fixtures->add_option("dir", input, "Output directory")->required();

  auto* random = app.add_subcommand("random", "Print seeded random sequents or expressions");
  random->add_option("--seed", seed, "Generator seed");
  random->add_option("--size", max_size, "Largest size")->check(CLI::PositiveNumber);
  random->add_option("--count", count, "How many")->check(CLI::NonNegativeNumber);
  random->add_option("--kind", kind)->check(CLI::IsMember({"sequent", "node"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPositive : kInputError;
  }

  Ctx c{out, format == "structured"};
  auto resolved = resolve(input);
  std::string src = resolved ? resolved->string() : "<inline>";
  try {
    if (parse->parsed()) return cmd_parse(c, input);
    if (check->parsed()) return cmd_check(c, input);
    if (prove_cmd->parsed()) return cmd_prove(c, input, budget, emit_proof, emit_model, trace);
    if (refute->parsed()) return cmd_refute(c, input, bound, emit_model);
    if (cutfree->parsed()) return cmd_cutfree(c, input, out_path, trace);
    if (hcheck->parsed()) return cmd_hilbert_check(c, input);
    if (htrans->parsed()) return cmd_hilbert_translate(c, input, nominal, out_path);
    if (eval->parsed()) return cmd_eval(c, input, point, expr);
    if (fixtures->parsed()) {
      int n = write_fixtures(input);
      c.emit(ordered_json{{"written", n}}, "wrote " + std::to_string(n) + " fixtures\n");
      return kPositive;
    }
    if (random->parsed()) return cmd_random(c, seed, max_size, count, kind);
  } catch (const ParseError& e) {
    err << src << ":" << e.what() << "\n";
    return kInputError;
  } catch (const ProofFormatError& e) {
    err << src << ":" << e.what() << "\n";
    return kInputError;
  } catch (const HilbertError& e) {
    if (e.code == HilbertError::Code::Syntax) {
      err << src << ": " << e.what() << "\n";
      return kInputError;
    }
    err << src << ": " << e.what() << "\n";
    return kNegative;
  } catch (const InputError& e) {
    err << e.what() << "\n";
    return kInputError;
  } catch (const KernelError& e) {
    err << src << ": " << e.what() << "\n";
    return kNegative;
  }
  return kInputError;
}

}  // namespace hxd::tools
