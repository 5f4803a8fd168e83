#include <benchmark/benchmark.h>

#include "fnl/parser.hpp"
#include "fnl/semantics.hpp"

using namespace fnl;

namespace {

// Sort alpha with n elements, hashed binary g and unary h, variables x, y, z, w, v.
Structure wide(std::size_t n) {
  const SortId a{"alpha"};
  Signature sig;
  sig.add_sort(a, true);
  for (auto v : {"x", "y", "z", "w", "v"}) sig.add_variable(v, a);
  sig.add_op("c", OpSignature{a, {}});
  sig.add_op("g", OpSignature{a, {ArgSlot{a, {}}, ArgSlot{a, {}}}});
  sig.add_op("h", OpSignature{a, {ArgSlot{a, {}}}});
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  return make_full_structure(sig, {{a, names}},
                             {{"c", OpInterp::constant(0)}, {"g", OpInterp::hashed(7)}, {"h", OpInterp::hashed(11)}});
}

const char* const kExpr = "or(g(h(x), g(y, z)) = g(w, h(c)), exists v. g(v, x) = h(g(y, w)))";

void run(benchmark::State& state, EvalMode mode) {
  Structure s = wide(static_cast<std::size_t>(state.range(0)));
  Expr e = parse_expr(s.signature, kExpr);
  const SortId a{"alpha"};
  Perspective p{{Var{"x", a}, Var{"y", a}, Var{"z", a}, Var{"w", a}}};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(s, e, p, mode));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.tuple_count(p.sorts())));
}

void BM_EvalSerial(benchmark::State& state) { run(state, EvalMode::Serial); }
void BM_EvalParallel(benchmark::State& state) { run(state, EvalMode::Parallel); }

}  // namespace

BENCHMARK(BM_EvalSerial)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvalParallel)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
