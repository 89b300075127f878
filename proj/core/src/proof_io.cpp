#include "hxd/proof_io.hpp"

#include <fstream>
#include <sstream>

#include "hxd/meta.hpp"
#include "json.hpp"

namespace hxd {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw ProofFormatError(where.empty() ? "/" : where, msg);
}

std::string line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

template <class T, class F>
T parsed(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    bad(where, e.what());
  }
}

std::string text_at(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad(where, std::string("missing \"") + key + "\"");
  if (!j[key].is_string()) bad(where + "/" + key, "expected a string");
  return j[key].get<std::string>();
}

std::vector<Ident> idents(const ordered_json& p, const char* key, const std::string& where) {
  std::vector<Ident> out;
  if (!p.contains(key)) return out;
  if (!p[key].is_array()) bad(where + "/" + key, "expected an array");
  for (const auto& x : p[key]) {
    if (!x.is_string()) bad(where + "/" + key, "expected nominal names");
    out.push_back(x.get<std::string>());
  }
  return out;
}

RuleParams read_params(const ordered_json& node, const std::string& where) {
  RuleParams rp;
  if (!node.contains("params")) return rp;
  const auto& p = node["params"];
  std::string w = where + "/params";
  if (!p.is_object()) bad(w, "expected an object");
  if (p.contains("principal")) {
    if (!p["principal"].is_array()) bad(w + "/principal", "expected an array");
    int k = 0;
    for (const auto& f : p["principal"]) {
      std::string wk = w + "/principal/" + std::to_string(k++);
      if (!f.is_string()) bad(wk, "expected formula text");
      rp.principal.push_back(parsed<LabeledExpr>(wk, [&] { return parse_labeled(f.get<std::string>()); }));
    }
  }
  rp.fresh = idents(p, "fresh", w);
  rp.witness = idents(p, "witness", w);
  if (p.contains("cut") && !p["cut"].is_null()) {
    std::string t = text_at(p, "cut", w);
    rp.cut = parsed<LabeledExpr>(w + "/cut", [&] { return parse_labeled(t); });
  }
  if (p.contains("path") && !p["path"].is_null()) {
    std::string t = text_at(p, "path", w);
    rp.path = parsed<PathP>(w + "/path", [&] { return parse_path(t, {true}); });
  }
  return rp;
}

DerivP read_node(const ordered_json& node, const std::string& where) {
  if (!node.is_object()) bad(where, "expected a derivation node");
  std::string rule = text_at(node, "rule", where);
  std::string concl = text_at(node, "conclusion", where);
  Sequent c = parsed<Sequent>(where + "/conclusion", [&] { return parse_sequent(concl); });
  RuleParams rp = read_params(node, where);
  std::vector<DerivP> kids;
  if (node.contains("children")) {
    if (!node["children"].is_array()) bad(where + "/children", "expected an array");
    int k = 0;
    for (const auto& ch : node["children"])
      kids.push_back(read_node(ch, where + "/children/" + std::to_string(k++)));
  }
  if (rule.rfind("D:", 0) == 0) {
    auto dr = derived_from_name(std::string_view(rule).substr(2));
    if (!dr) bad(where + "/rule", "unknown derived rule '" + rule + "'");
    std::vector<Sequent> stubs;
    for (const auto& k : kids) stubs.push_back(k->conclusion);
    DerivP d;
    try {
      d = expand_derived(*dr, c, rp, stubs);
    } catch (const MetaError& e) {
      bad(where, e.what());
    }
    return graft(d, kids);
  }
  auto r = rule_from_name(rule);
  if (!r) bad(where + "/rule", "unknown rule '" + rule + "'");
  return make_deriv(*r, std::move(c), std::move(rp), std::move(kids));
}

ordered_json write_node(const DerivP& d) {
  ordered_json j;
  j["rule"] = rule_name(d->rule);
  j["conclusion"] = print_sequent(d->conclusion);
  ordered_json p = ordered_json::object();
  const auto& rp = d->params;
  if (!rp.principal.empty()) {
    p["principal"] = ordered_json::array();
    for (const auto& f : rp.principal) p["principal"].push_back(print_labeled(f));
  }
  if (!rp.fresh.empty()) p["fresh"] = rp.fresh;
  if (!rp.witness.empty()) p["witness"] = rp.witness;
  if (rp.cut) p["cut"] = print_labeled(*rp.cut);
  if (rp.path) p["path"] = print_path(rp.path);
  j["params"] = p;
  j["children"] = ordered_json::array();
  for (const auto& c : d->children) j["children"].push_back(write_node(c));
  return j;
}

}  // namespace

DerivP load_proof(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  return read_node(j, "");
}

DerivP load_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_proof(ss.str());
  } catch (const ProofFormatError& e) {
    throw ProofFormatError(path + ":" + e.where, std::string(e.what()).substr(e.where.size() + 2));
  }
}

std::string save_proof(const DerivP& d) { return write_node(d).dump(2) + "\n"; }

void save_proof_file(const DerivP& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << save_proof(d);
}

}  // namespace hxd
