// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "hxd/builder.hpp"
#include "hxd/cutelim.hpp"
#include "hxd/hilbert.hpp"
#include "hxd/meta.hpp"
#include "hxd/proof_io.hpp"
#include "hxd/prover.hpp"
#include "hxd/random.hpp"
#include "oracle.hpp"

#ifndef HXD_FIXTURE_DIR
#define HXD_FIXTURE_DIR "fixtures"
#endif

using namespace hxd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = o.pass && s < limit_s;
  if (o.pass && !pass) o.detail += "; over the time limit";
  failures += !pass;
  std::cout << (pass ? "PASS" : "FAIL") << " " << id << " " << title << ": " << o.detail << " ("
            << std::fixed << std::setprecision(2) << s << " s, limit " << limit_s << " s)"
            << std::endl;
}

fs::path fixture_root() {
  if (const char* env = std::getenv("HXD_FIXTURES")) return env;
  return HXD_FIXTURE_DIR;
}

struct LoadedFixture {
  std::string name;
  DerivP d;
};

std::vector<LoadedFixture> load_fixtures() {
  std::vector<LoadedFixture> out;
  for (const auto& e : fs::recursive_directory_iterator(fixture_root()))
    if (e.is_regular_file() && e.path().extension() == ".proof")
      out.push_back({fs::relative(e.path(), fixture_root()).string(), load_proof_file(e.path().string())});
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.name < y.name; });
  return out;
}

// Random sequents until `want` of them are proved, within `tries` attempts.
std::vector<std::pair<Sequent, DerivP>> proved_sample(std::uint64_t seed, int want, int tries) {
  ExprGen g(seed);
  std::vector<std::pair<Sequent, DerivP>> out;
  for (int n = 0; n < tries && int(out.size()) < want; ++n) {
    Sequent s = g.sequent(10);
    auto r = prove(s);
    if (r.status == ProveResult::Status::Proved) out.emplace_back(s, r.proof);
  }
  return out;
}

// ---------- random rule instances ----------

struct Instance {
  Sequent conclusion;
  RuleParams params;
};

const Ident kFresh1 = "L", kFresh2 = "M";

class InstanceGen {
 public:
  explicit InstanceGen(std::uint64_t seed) : g_(seed) {}

  Ident nom() { return pick(g_.symbols().noms); }
  Ident prop() { return pick(g_.symbols().props); }
  Ident mod() { return pick(g_.symbols().mods); }
  Ident sort() { return pick(g_.symbols().cmps); }
  NodeP body(int n = 4) { return g_.node(n); }
  CmpPolarity pol() { return g_.coin() ? CmpPolarity::Eq : CmpPolarity::Neq; }

  // Context of up to two formulas per side.
  Sequent context() {
    Sequent s;
    for (int k = g_.uniform(0, 2); k > 0; --k) s.ante.insert(g_.labeled(4));
    for (int k = g_.uniform(0, 2); k > 0; --k) s.cons.insert(g_.labeled(4));
    return s;
  }

  Instance make(RuleId r) {
    Sequent s = context();
    RuleParams p;
    auto L = [&](const LabeledExpr& f) { s.ante.insert(f); p.principal.push_back(f); };
    auto R = [&](const LabeledExpr& f) { s.cons.insert(f); p.principal.push_back(f); };
    Ident i = nom(), j = nom(), k = nom();
    switch (r) {
      case RuleId::Ax: {
        int c = g_.uniform(0, 2);
        LabeledExpr f = c == 0 ? sat(i, hxd::prop(prop())) : c == 1 ? sat(i, hxd::nom(j)) : data_eq(sort(), i, j);
        s.ante.insert(f);
        R(f);
        break;
      }
      case RuleId::Bot: L(sat(i, bot())); break;
      case RuleId::ImpL: L(sat(i, imp(body(3), body(3)))); break;
      case RuleId::ImpR: R(sat(i, imp(body(3), body(3)))); break;
      case RuleId::AtT: p.principal.push_back(sat(i, hxd::nom(i))); break;
      case RuleId::At5: L(sat(i, hxd::nom(j))); L(sat(i, hxd::nom(k))); break;
      case RuleId::NomFresh:
        p.principal.push_back(sat(i, hxd::nom(kFresh1)));
        p.fresh = {kFresh1};
        break;
      case RuleId::S1: {
        int c = g_.uniform(0, 2);
        NodeP phi = c == 0 ? hxd::prop(prop()) : c == 1 ? bot() : dia(mod(), hxd::nom(k));
        L(sat(i, hxd::nom(j)));
        L(sat(i, phi));
        break;
      }
      case RuleId::S2: L(sat(j, hxd::nom(k))); L(sat(i, dia(mod(), hxd::nom(j)))); break;
      case RuleId::S3: L(sat(i, hxd::nom(j))); L(data_eq(sort(), i, k)); break;
      case RuleId::AtL: L(sat(i, at(j, body(3)))); break;
      case RuleId::AtR: R(sat(i, at(j, body(3)))); break;
      case RuleId::DiaL:
        L(sat(i, dia(mod(), body(3))));
        p.fresh = {kFresh1};
        break;
      case RuleId::DiaR: {
        Ident a = mod();
        R(sat(i, dia(a, body(3))));
        s.ante.insert(sat(i, dia(a, hxd::nom(j))));
        p.witness = {j};
        break;
      }
      case RuleId::CmpL:
        L(sat(i, cmp(pol(), sort(), g_.path(3), g_.path(3))));
        p.fresh = {kFresh1, kFresh2};
        break;
      case RuleId::CmpR: {
        PathP l = g_.path(3), rr = g_.path(3);
        R(sat(i, cmp(pol(), sort(), l, rr)));
        s.ante.insert(sat(i, diamond(l, hxd::nom(j))));
        s.ante.insert(sat(i, diamond(rr, hxd::nom(k))));
        p.witness = {j, k};
        break;
      }
      case RuleId::EqT: p.principal.push_back(data_eq(sort(), i, i)); break;
      case RuleId::Eq5: {
        Ident c = sort();
        L(data_eq(c, i, j));
        L(data_eq(c, i, k));
        break;
      }
      case RuleId::NEqL: L(data(CmpPolarity::Neq, sort(), i, j)); break;
      case RuleId::NEqR: R(data(CmpPolarity::Neq, sort(), i, j)); break;
      case RuleId::Cut: p.cut = g_.labeled(4); break;
      case RuleId::WL: L(g_.labeled(4)); break;
      case RuleId::WR: R(g_.labeled(4)); break;
      case RuleId::Open: break;
    }
    return {s, p};
  }

  ExprGen& gen() { return g_; }

 private:
  Ident pick(const std::vector<Ident>& v) { return v[g_.uniform(0, int(v.size()) - 1)]; }
  ExprGen g_;
};

// Premisses valid in every variant of m over the eigen-nominals imply the conclusion valid in m.
bool rule_sound_in(const HybridDataModel& m, const Instance& in, const std::vector<Sequent>& prem) {
  const auto& fresh = in.params.fresh;
  HybridDataModel v = m;
  int variants = 1;
  for (std::size_t k = 0; k < fresh.size(); ++k) variants *= m.n_nodes;
  for (int code = 0; code < variants; ++code) {
    int c = code;
    for (const auto& f : fresh) {
      v.assign[f] = c % m.n_nodes;
      c /= m.n_nodes;
    }
    for (const auto& s : prem)
      if (!oracle::valid_in(v, s)) return true;
  }
  return oracle::valid_in(m, in.conclusion);
}

Signature base_signature(const Instance& in, const std::vector<Sequent>& prem) {
  Signature sig = signature_of(in.conclusion);
  for (const auto& s : prem) sig.merge(signature_of(s));
  for (const auto& f : in.params.fresh) sig.noms.erase(f);
  return sig;
}

const std::vector<RuleId>& kernel_rules() {
  static const std::vector<RuleId> rs = [] {
    std::vector<RuleId> v;
    for (int k = 0; k < kRuleCount; ++k)
      if (RuleId(k) != RuleId::Open) v.push_back(RuleId(k));
    return v;
  }();
  return rs;
}

// ---------- random models ----------

HybridDataModel random_model(ExprGen& g, int n) {
  HybridDataModel m;
  m.n_nodes = n;
  const auto& sy = g.symbols();
  for (const auto& a : sy.mods) {
    m.rel[a].assign(n, 0);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (g.coin()) m.add_edge(a, x, y);
  }
  for (const auto& c : sy.cmps) {
    m.cmp[c].resize(n);
    for (int x = 0; x < n; ++x) m.cmp[c][x] = g.uniform(0, n - 1);
  }
  for (const auto& i : sy.noms) m.assign[i] = g.uniform(0, n - 1);
  for (const auto& p : sy.props) m.val[p] = NodeSet(g.uniform(0, (1 << n) - 1));
  return m;
}

// ---------- criteria ----------

Outcome fixture_corpus_check() {
  auto fx = load_fixtures();
  int bad = 0, closed = 0;
  std::string first;
  for (const auto& f : fx) {
    CheckReport r = check_derivation(f.d);
    bool ok = r.well_formed && (r.open_leaves > 0 || r.proved);
    closed += r.open_leaves == 0;
    if (!ok && bad++ == 0) first = f.name + ": " + r.error;
  }
  std::ostringstream o;
  o << fx.size() << " trees, " << closed << " closed, " << bad << " rejected";
  if (!first.empty()) o << "; first: " << first;
  return {fx.size() >= 30 && bad == 0, o.str()};
}

Outcome schema_completeness() {
  int proved = 0;
  std::string missing;
  for (int k = 0; k < kSchemaCount; ++k) {
    auto s = SchemaId(k);
    NodeP phi = schema_instance(s, standard_instantiation(s));
    Sequent goal;
    goal.cons.insert(sat("I", phi));
    auto r = prove(goal);
    if (r.status == ProveResult::Status::Proved && check_derivation(r.proof).proved)
      ++proved;
    else
      missing += std::string(missing.empty() ? "" : ", ") + schema_name(s);
  }
  return {proved == kSchemaCount,
          std::to_string(proved) + "/" + std::to_string(kSchemaCount) + " schemas proved" +
              (missing.empty() ? "" : "; missing " + missing)};
}

Outcome executable_soundness() {
  auto sample = proved_sample(3001, 200, 5000);
  int violations = 0;
  long models = 0;
  for (const auto& [s, d] : sample) {
    if (!check_derivation(d).proved) ++violations;
    for_each_model(signature_of(d->conclusion), 2, [&](const HybridDataModel& m) {
      ++models;
      if (!oracle::valid_in(m, d->conclusion)) {
        ++violations;
        return false;
      }
      return true;
    });
  }
  return {sample.size() == 200 && violations == 0,
          std::to_string(sample.size()) + " proved derivations, " + std::to_string(models) +
              " models, " + std::to_string(violations) + " violations"};
}

Outcome rule_soundness() {
  InstanceGen ig(4001);
  int violations = 0, instances = 0;
  long models = 0;
  std::string first;
  for (RuleId r : kernel_rules()) {
    for (int n = 0; n < 50; ++n) {
      Instance in = ig.make(r);
      auto prem = apply_rule_backward(r, in.conclusion, in.params);
      ++instances;
      for_each_model(base_signature(in, prem), 2, [&](const HybridDataModel& m) {
        ++models;
        if (rule_sound_in(m, in, prem)) return true;
        if (violations++ == 0) first = std::string(rule_name(r)) + " at " + print_sequent(in.conclusion);
        return false;
      });
    }
  }
  return {violations == 0, std::to_string(instances) + " instances over " +
                               std::to_string(kernel_rules().size()) + " rules, " +
                               std::to_string(models) + " models, " + std::to_string(violations) +
                               " violations" + (first.empty() ? "" : "; first: " + first)};
}

struct ElimCheck {
  bool ok;
  std::string why;
  std::size_t steps = 0;
};

ElimCheck eliminate_and_check(const DerivP& d) {
  EliminationResult res;
  try {
    res = eliminate_cuts_traced(d);
  } catch (const CutElimError& e) {
    return {false, e.what()};
  }
  for (const auto& st : res.trace)
    if (!st.decreased()) return {false, "no decrease: " + format_step(st), res.trace.size()};
  CheckReport r = check_derivation(res.derivation);
  if (!r.proved) return {false, "result not proved: " + r.error, res.trace.size()};
  if (r.cut_count) return {false, "cuts remain", res.trace.size()};
  if (!(res.derivation->conclusion == d->conclusion)) return {false, "end-sequent changed", res.trace.size()};
  return {true, "", res.trace.size()};
}

Outcome cut_elimination() {
  int with_cut = 0, done = 0;
  std::size_t steps = 0;
  std::vector<std::string> failed;
  std::string first;
  for (const auto& f : load_fixtures()) {
    CheckReport r = check_derivation(f.d);
    if (!r.proved || r.cut_count == 0) continue;
    ++with_cut;
    ElimCheck e = eliminate_and_check(f.d);
    steps += e.steps;
    if (e.ok) {
      ++done;
    } else {
      failed.push_back(f.name);
      if (first.empty()) first = f.name + ": " + e.why;
    }
  }
  std::ostringstream o;
  o << done << "/" << with_cut << " cut-bearing fixtures eliminated, " << steps << " reductions";
  if (!failed.empty()) {
    o << "; failed:";
    for (const auto& n : failed) o << " " << n;
    o << "; first: " << first;
  }
  return {with_cut > 0 && done == with_cut, o.str()};
}

Outcome invertibility() {
  InstanceGen ig(6001);
  int rules = 0, complete = 0, premisses = 0, bad = 0;
  std::string short_rules, first;
  for (RuleId r : kernel_rules()) {
    if (premiss_count(r) == 0 || r == RuleId::Cut || r == RuleId::WL || r == RuleId::WR) continue;
    ++rules;
    int found = 0;
    for (int t = 0; t < 3000 && found < 20; ++t) {
      Instance in = ig.make(r);
      auto pr = prove(in.conclusion);
      if (pr.status != ProveResult::Status::Proved || check_derivation(pr.proof).cut_count) continue;
      ++found;
      for (const auto& d : invert(r, in.params, pr.proof)) {
        ++premisses;
        ElimCheck e = eliminate_and_check(d);
        if (!e.ok && bad++ == 0) first = std::string(rule_name(r)) + ": " + e.why;
      }
    }
    if (found == 20)
      ++complete;
    else
      short_rules += std::string(short_rules.empty() ? "" : ", ") + rule_name(r);
  }
  std::ostringstream o;
  o << complete << "/" << rules << " rules with 20 proved instances, " << premisses
    << " premiss derivations, " << bad << " failures";
  if (!short_rules.empty()) o << "; short: " << short_rules;
  if (!first.empty()) o << "; first: " << first;
  return {complete == rules && bad == 0, o.str()};
}

Outcome translation() {
  HilbertProof p = parse_hilbert(tools::mixed_deduction());
  if (!check_hilbert(p).ok) return {false, "deduction rejected"};
  DerivP d = translate(p, "I");
  CheckReport r = check_derivation(d);
  bool target = d->conclusion.ante.empty() && d->conclusion.cons.size() == 1 &&
                d->conclusion.cons.begin()->i == "I";
  std::ostringstream o;
  o << p.size() << " steps, translation " << (r.proved ? "proved" : "not proved") << " with "
    << r.cut_count << " cuts";
  if (!r.proved || !target) return {false, o.str()};
  ElimCheck e = eliminate_and_check(d);
  o << "; cut elimination " << (e.ok ? "succeeded" : "failed: " + e.why);
  return {e.ok, o.str()};
}

Outcome sugar_semantics() {
  ExprGen g(8001);
  int violations = 0;
  for (int n = 0; n < 500; ++n) {
    HybridDataModel m = random_model(g, g.uniform(1, 3));
    PathP a = g.path(4), b = g.path(4);
    NodeP e = g.node(4);
    CmpPolarity pol = g.coin() ? CmpPolarity::Eq : CmpPolarity::Neq;
    NodeP bx = box_cmp(pol, "c", a, b);
    for (int x = 0; x < m.n_nodes; ++x) {
      bool dia_direct = false;
      for (int y = 0; y < m.n_nodes; ++y) dia_direct |= oracle::path_at(m, x, y, a) && oracle::sat_at(m, y, e);
      if (diamond_check(m, x, a, e) != dia_direct) ++violations;
      if (oracle::sat_at(m, x, diamond(a, e)) != dia_direct) ++violations;
      bool all = true;
      const auto& blk = m.cmp.at("c");
      for (int y = 0; y < m.n_nodes; ++y)
        for (int z = 0; z < m.n_nodes; ++z)
          if (oracle::path_at(m, x, y, a) && oracle::path_at(m, x, z, b))
            all = all && ((blk[y] == blk[z]) == (pol == CmpPolarity::Eq));
      if (eval_node(m, x, bx) != all) ++violations;
    }
  }
  return {violations == 0, "500 pairs, " + std::to_string(violations) + " violations"};
}

Outcome round_trip() {
  ExprGen g(9001);
  int bad = 0;
  for (int n = 0; n < 1000; ++n) {
    NodeP e = g.node(12);
    if (!equal(parse_node(print_node(e)), e)) ++bad;
  }
  return {bad == 0, "1000 trees, " + std::to_string(bad) + " mismatches"};
}

Outcome prover_consistency() {
  ExprGen g(10001);
  int proved = 0, refuted = 0, unknown = 0, bad = 0;
  for (int n = 0; n < 300; ++n) {
    Sequent s = g.sequent(10);
    auto r = prove(s);
    switch (r.status) {
      case ProveResult::Status::Proved:
        ++proved;
        if (!check_derivation(r.proof).proved || find_countermodel(s, 3)) ++bad;
        break;
      case ProveResult::Status::Refuted:
        ++refuted;
        if (oracle::valid_in(*r.model, s) || sequent_valid_in(*r.model, s)) ++bad;
        break;
      case ProveResult::Status::Unknown: ++unknown; break;
    }
  }
  std::ostringstream o;
  o << "300 sequents: " << proved << " proved, " << refuted << " refuted, " << unknown
    << " unknown, " << bad << " inconsistent";
  return {bad == 0, o.str()};
}

}  // namespace

int main() {
  report(1, "fixture corpus", 5, fixture_corpus_check);
  report(2, "axiom completeness", 60, schema_completeness);
  report(3, "executable soundness", 120, executable_soundness);
  report(4, "rule-level soundness", 120, rule_soundness);
  report(5, "cut elimination on fixtures", 60, cut_elimination);
  report(6, "invertibility", 60, invertibility);
  report(7, "Hilbert translation", 30, translation);
  report(8, "sugar semantics", 60, sugar_semantics);
  report(9, "parser round trip", 10, round_trip);
  report(10, "prover/refuter consistency", 120, prover_consistency);
  std::cout << (10 - failures) << "/10 criteria passed" << std::endl;
  return failures ? 1 : 0;
}
