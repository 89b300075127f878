#include "doctest.h"
#include "hxd/hilbert.hpp"
#include "hxd/proof_io.hpp"
#include "hxd/prover.hpp"

using namespace hxd;

namespace {

bool same_tree(const DerivP& a, const DerivP& b) {
  if (a->rule != b->rule || !(a->conclusion == b->conclusion)) return false;
  const auto &p = a->params, &q = b->params;
  if (p.principal != q.principal || p.fresh != q.fresh || p.witness != q.witness || p.cut != q.cut)
    return false;
  if (bool(p.path) != bool(q.path) || (p.path && !equal(p.path, q.path))) return false;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t k = 0; k < a->children.size(); ++k)
    if (!same_tree(a->children[k], b->children[k])) return false;
  return true;
}

const char* kAtRefl = R"J({
  "rule": "AtR", "conclusion": "|- @J @I I", "params": {"principal": ["@J @I I"]},
  "children": [
    {"rule": "AtT", "conclusion": "|- @I I", "params": {"principal": ["@I I"]},
     "children": [
       {"rule": "Ax", "conclusion": "@I I |- @I I", "params": {"principal": ["@I I"]}}]}]
})J";

}  // namespace

TEST_CASE("load and check a small proof") {
  DerivP d = load_proof(kAtRefl);
  auto r = check_derivation(d);
  CHECK(r.proved);
  CHECK(r.cut_count == 0);
  CHECK(r.nodes == 3);
}

TEST_CASE("save and load round trip") {
  DerivP a = load_proof(kAtRefl);
  CHECK(same_tree(load_proof(save_proof(a)), a));
  CHECK(save_proof(load_proof(save_proof(a))) == save_proof(a));

  // a translated deduction exercises every parameter field
  DerivP t = translate(parse_hilbert("1. AXIOM DiaDef [alpha=a;b, phi=p, c=c]"), "I");
  CHECK(same_tree(load_proof(save_proof(t)), t));
  auto found = prove(parse_sequent("@I <a;b =c eps> |- @I <a>true"));
  REQUIRE(found.status == ProveResult::Status::Proved);
  CHECK(same_tree(load_proof(save_proof(found.proof)), found.proof));
}

TEST_CASE("derived rules expand on load") {
  const char* text = R"J({
    "rule": "D:AndR", "conclusion": "@I p, @I q |- @I (p & q)",
    "params": {"principal": ["@I (p & q)"]},
    "children": [
      {"rule": "Ax", "conclusion": "@I p, @I q |- @I p", "params": {"principal": ["@I p"]}},
      {"rule": "Ax", "conclusion": "@I p, @I q |- @I q", "params": {"principal": ["@I q"]}}]
  })J";
  DerivP d = load_proof(text);
  auto r = check_derivation(d);
  CHECK(r.proved);
  CHECK(r.open_leaves == 0);
  CHECK(d->conclusion == parse_sequent("@I p, @I q |- @I (p & q)"));
}

TEST_CASE("format errors name the offending node") {
  auto where = [](const char* text) {
    try {
      load_proof(text);
    } catch (const ProofFormatError& e) {
      return e.where;
    }
    FAIL("no error");
    return std::string();
  };
  CHECK(where("{\"rule\": \"Ax\"") == "1:14");  // end of input
  CHECK(where("{\"conclusion\": \"|-\"}") == "/");
  CHECK(where("{\"rule\": \"Nope\", \"conclusion\": \"|-\"}") == "/rule");
  CHECK(where("{\"rule\": \"D:Nope\", \"conclusion\": \"|-\"}") == "/rule");
  CHECK(where("{\"rule\": \"Ax\", \"conclusion\": \"|- p\"}") == "/conclusion");
  CHECK(where(R"J({"rule": "AtR", "conclusion": "|- @J @I I",
                  "children": [{"rule": "Ax", "conclusion": "@I I |- @I I",
                                "params": {"principal": ["@I ("]}}]})J") ==
        "/children/0/params/principal/0");
}

TEST_CASE("derivations that do not check still load") {
  DerivP d = load_proof(R"J({"rule": "Ax", "conclusion": "@I p |- @I q",
                            "params": {"principal": ["@I p"]}})J");
  auto r = check_derivation(d);
  CHECK_FALSE(r.proved);
  CHECK_FALSE(r.error.empty());
}
