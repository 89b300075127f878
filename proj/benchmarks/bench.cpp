#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "hxd/cutelim.hpp"
#include "hxd/hilbert.hpp"
#include "hxd/prover.hpp"
#include "hxd/random.hpp"

using namespace hxd;

namespace {

std::vector<Sequent> sample(std::uint64_t seed, int n, int size) {
  ExprGen g(seed);
  std::vector<Sequent> out;
  for (int k = 0; k < n; ++k) out.push_back(g.sequent(size));
  return out;
}

void BM_ParsePrint(benchmark::State& st) {
  ExprGen g(1);
  std::vector<std::string> texts;
  for (int k = 0; k < 256; ++k) texts.push_back(print_node(g.node(int(st.range(0)))));
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(print_node(parse_node(texts[k++ % texts.size()])));
}
BENCHMARK(BM_ParsePrint)->Arg(8)->Arg(32);

void BM_Evaluate(benchmark::State& st) {
  ExprGen g(2);
  NodeP e = g.node(16);
  auto models = enumerate_models(signature_of(e), int(st.range(0)));
  for (auto _ : st)
    for (const auto& m : models) benchmark::DoNotOptimize(eval_set(m, e));
  st.counters["models"] = double(models.size());
}
BENCHMARK(BM_Evaluate)->Arg(1)->Arg(2);

void BM_ProveRandom(benchmark::State& st) {
  auto xs = sample(3, 64, int(st.range(0)));
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(prove(xs[k++ % xs.size()]));
}
BENCHMARK(BM_ProveRandom)->Arg(6)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_ProveSchemas(benchmark::State& st) {
  std::vector<Sequent> goals;
  for (int k = 0; k < kSchemaCount; ++k) {
    Sequent s;
    s.cons.insert(sat("I", schema_instance(SchemaId(k), standard_instantiation(SchemaId(k)))));
    goals.push_back(s);
  }
  for (auto _ : st)
    for (const auto& s : goals) benchmark::DoNotOptimize(prove(s));
}
BENCHMARK(BM_ProveSchemas)->Unit(benchmark::kMillisecond);

void BM_CheckTranslation(benchmark::State& st) {
  DerivP d = translate(parse_hilbert(tools::mixed_deduction()), "I");
  for (auto _ : st) benchmark::DoNotOptimize(check_derivation(d));
}
BENCHMARK(BM_CheckTranslation)->Unit(benchmark::kMicrosecond);

void BM_EliminateCuts(benchmark::State& st) {
  std::vector<DerivP> ds;
  for (const auto& f : tools::fixture_corpus()) {
    if (!f.closed || check_derivation(f.derivation).cut_count == 0) continue;
    try {
      eliminate_cuts(f.derivation);
      ds.push_back(f.derivation);
    } catch (const CutElimError&) {
    }
  }
  for (auto _ : st)
    for (const auto& d : ds) benchmark::DoNotOptimize(eliminate_cuts(d));
  st.counters["derivations"] = double(ds.size());
}
BENCHMARK(BM_EliminateCuts)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
