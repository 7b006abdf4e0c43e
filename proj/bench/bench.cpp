// Serial vs OpenMP kernels, and pruned vs exhaustive plan search.

#include <benchmark/benchmark.h>

#include "aespa/kernels.hpp"
#include "aespa/scheduler.hpp"

using namespace aespa;
using kernels::KernelKind;

namespace {

struct Operands {
  StoredMatrix a, b;
};

Operands operands(KernelKind kind, Index n, double d) {
  static const char* const tags[][2] = {
      {"UMUK", "UKUN"}, {"UMCK", "UKUN"}, {"UMCK", "UNCK"}, {"UKCM", "UKCN"}, {"UKCM", "UNCK"}};
  const auto* t = tags[static_cast<int>(kind)];
  const double da = kind == KernelKind::DenseGemm ? 1.0 : d;
  const double db = parse_ccf(t[1]).compressed() ? d : 1.0;
  return {convert(gen_uniform_random(n, n, da, 1), parse_ccf(t[0])),
          convert(gen_uniform_random(n, n, db, 2, Role::B), parse_ccf(t[1]))};
}

template <bool Parallel>
void BM_Kernel(benchmark::State& state) {
  const auto kind = static_cast<KernelKind>(state.range(0));
  const auto ops = operands(kind, state.range(1), 0.05);
  for (auto _ : state) {
    auto r = Parallel ? kernels::run(kind, ops.a, ops.b) : kernels::serial::run(kind, ops.a, ops.b);
    benchmark::DoNotOptimize(r.counters.macs);
  }
  state.SetLabel(kernels::kernel_name(kind));
}

void kernel_args(benchmark::internal::Benchmark* b) {
  for (int k = 0; k < 5; ++k) b->Args({k, k == 0 ? 256 : 1024});
}

BENCHMARK(BM_Kernel<false>)->Name("serial")->Apply(kernel_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kernel<true>)->Name("parallel")->Apply(kernel_args)->Unit(benchmark::kMillisecond);

template <bool Pruned>
void BM_Search(benchmark::State& state) {
  const auto config = arch::preset("aespa-quarters");
  const auto& spec = workloads::find_builtin("gnmt").spec;
  const auto bw = cost::Bandwidth::limited(1e12);
  for (auto _ : state) {
    auto r = Pruned ? sched::search_single_kernel(spec, config, bw) : sched::search_single_kernel_exhaustive(spec, config, bw);
    benchmark::DoNotOptimize(r.report.makespan_cycles);
  }
}

BENCHMARK(BM_Search<false>)->Name("search_exhaustive")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Search<true>)->Name("search_pruned")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
