#include <benchmark/benchmark.h>

#include "gl2kit/groups.hpp"
#include "gl2kit/lemmas.hpp"
#include "gl2kit/stabilizers.hpp"

using namespace gl2kit;

static void BM_ClosureSL2(benchmark::State& state) {
  const std::int64_t ell = state.range(0);
  const std::vector<Mat2> gens{Mat2(ell, 1, 1, 0, 1), Mat2(ell, 1, 0, 1, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(closure(Modulus(ell), gens).order());
}
BENCHMARK(BM_ClosureSL2)->Arg(5)->Arg(11)->Arg(23)->Unit(benchmark::kMillisecond);

static void BM_DegreeSpectrum(benchmark::State& state) {
  const Subgroup g = named_group(NamedGroupId::DeltaU1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(degree_spectrum(g).entries.size());
}
BENCHMARK(BM_DegreeSpectrum)->Arg(11)->Arg(23)->Arg(47)->Unit(benchmark::kMillisecond);

static void BM_ExhaustiveSpectrum(benchmark::State& state) {
  const Subgroup g = named_group(NamedGroupId::DeltaU1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_spectrum(g).entries.size());
}
BENCHMARK(BM_ExhaustiveSpectrum)->Arg(11)->Arg(23)->Unit(benchmark::kMillisecond);

static void BM_DecomposeAllSL2(benchmark::State& state) {
  const Subgroup sl = named_group(NamedGroupId::SL2, state.range(0));
  for (auto _ : state) {
    std::size_t letters = 0;
    for (const Mat2& x : sl.elements()) letters += decompose_sl2(x).letters.size();
    benchmark::DoNotOptimize(letters);
  }
}
BENCHMARK(BM_DecomposeAllSL2)->Arg(7)->Arg(13)->Unit(benchmark::kMillisecond);

static void BM_NormalizerOfCartan(benchmark::State& state) {
  const Subgroup c = named_group(NamedGroupId::NonsplitCartan, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(normalizer_in_gl2(c).order());
}
BENCHMARK(BM_NormalizerOfCartan)->Arg(5)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
