#include <set>

#include "doctest.h"
#include "hxd/random.hpp"
#include "hxd/semantics.hpp"
#include "oracle.hpp"

using namespace hxd;

namespace {

HybridDataModel m1() {
  HybridDataModel m;
  m.n_nodes = 2;
  m.rel["a"] = {0b10, 0b00};
  m.cmp["c"] = {0, 1};
  m.assign["I"] = 0;
  m.val["p"] = 0b10;
  return m;
}

Signature sig1() {
  Signature s;
  s.props = {"p"};
  s.noms = {"I"};
  s.mods = {"a"};
  s.cmps = {"c"};
  return s;
}

}  // namespace

TEST_CASE("eval_node on M1") {
  HybridDataModel m = m1();
  CHECK(eval_node(m, 0, dia("a", prop("p"))));
  CHECK(oracle::sat_at(m, 0, dia("a", prop("p"))));
  CHECK_FALSE(eval_node(m, 1, at("I", bot())));
  CHECK(eval_node(m, 0, parse_node("<eps =c eps>")));
  CHECK_THROWS_AS(eval_node(m, 0, prop("q")), EvalError);
  CHECK_THROWS_AS(eval_node(m, 0, dia("b", prop("p"))), EvalError);
}

TEST_CASE("eval_path on M1") {
  HybridDataModel m = m1();
  CHECK(eval_path(m, 0, 1, step("a")));
  CHECK(eval_path(m, 1, 0, go("I")));
  CHECK(eval_path(m, 0, 0, comp(go("I"), test(top()))));
  CHECK(oracle::path_at(m, 0, 0, comp(go("I"), test(top()))));
  CHECK_FALSE(eval_path(m, 1, 1, step("a")));
}

TEST_CASE("diamond_check on M1") {
  HybridDataModel m = m1();
  CHECK(diamond_check(m, 0, step("a"), prop("p")));
  CHECK(diamond_check(m, 0, step("a"), prop("p")) == eval_node(m, 0, dia("a", prop("p"))));
  CHECK(diamond_check(m, 0, go("I"), nom("I")));
  CHECK_FALSE(diamond_check(m, 1, step("a"), prop("p")));
}

TEST_CASE("sequent_valid_in") {
  HybridDataModel m = m1();
  CHECK(sequent_valid_in(m, parse_sequent("@I p |- @I p")));
  CHECK_FALSE(sequent_valid_in(m, Sequent{}));
  CHECK_FALSE(sequent_valid_in(m, parse_sequent("|- @I p")));
  CHECK_FALSE(oracle::valid_in(m, parse_sequent("|- @I p")));
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_models(sig1(), 1).size() == 4);
  auto upto2 = enumerate_models(sig1(), 2);
  CHECK(upto2.size() == 4 + 256);
  CHECK(count_models(sig1(), 2) == 260);
  CHECK(enumerate_models(Signature{}, 1).size() == 1);
  // no duplicates, ascending size, every partition is a partition
  std::set<std::string> seen;
  int last_n = 0;
  for (const auto& m : upto2) {
    CHECK(seen.insert(print_model(m)).second);
    CHECK(m.n_nodes >= last_n);
    last_n = m.n_nodes;
    for (const auto& [c, blk] : m.cmp)
      for (int b : blk) CHECK((b >= 0 && b < m.n_nodes));
  }
  Signature s3;
  s3.cmps = {"c"};
  CHECK(enumerate_models(s3, 3).size() == 1 + 2 + 5);
}

TEST_CASE("find_countermodel") {
  auto cm = find_countermodel(parse_sequent("|- @I p"), 1);
  REQUIRE(cm);
  CHECK(cm->n_nodes == 1);
  CHECK(cm->val.at("p") == 0);
  CHECK_FALSE(find_countermodel(parse_sequent("<I =c J> |- <J =c I>"), 3));
  auto cm2 = find_countermodel(parse_sequent("|- <I =c J>"), 2);
  REQUIRE(cm2);
  CHECK(cm2->cmp.at("c")[cm2->assign.at("I")] != cm2->cmp.at("c")[cm2->assign.at("J")]);
}

TEST_CASE("bitset evaluator agrees with the clause oracle") {
  ExprGen g(11);
  GenSymbols syms;
  Signature sig;
  sig.props = {"p", "q"};
  sig.noms = {"I", "J", "K"};
  sig.mods = {"a"};
  sig.cmps = {"c"};
  auto models = enumerate_models(sig, 2);
  std::mt19937_64 pick(5);
  for (int k = 0; k < 400; ++k) {
    NodeP e = g.node(10);
    const auto& m = models[pick() % models.size()];
    for (int n = 0; n < m.n_nodes; ++n) {
      CHECK(eval_node(m, n, e) == oracle::sat_at(m, n, e));
      CHECK(eval_node(m, n, neg(e)) == !eval_node(m, n, e));
    }
    LabeledExpr f = g.labeled(8);
    bool v = eval_node(m, 0, f.as_node());
    for (int n = 1; n < m.n_nodes; ++n) CHECK(eval_node(m, n, f.as_node()) == v);
  }
}

TEST_CASE("model text round trip") {
  HybridDataModel m = m1();
  std::string t = print_model(m);
  CHECK(t == "nodes 2\nrel a: (0,1)\ncmp c: {0}{1}\nnom I = 0\nval p: 1\n");
  CHECK(parse_model(t) == m);
  HybridDataModel m2 = parse_model("nodes 3\nrel a: (0,1) (1,1)\ncmp c: {0,2}{1}\nnom I = 0\nval p: 1 2\n");
  CHECK(m2.cmp.at("c") == std::vector<int>{0, 1, 0});
  CHECK(m2.has_edge("a", 1, 1));
  CHECK_THROWS_AS(parse_model("nodes 2\ncmp c: {0}\n"), ParseError);
  CHECK_THROWS_AS(parse_model("rel a:\n"), ParseError);
}
