#include <benchmark/benchmark.h>

#include <random>

#include "krongraph/covariance.hpp"
#include "krongraph/glasso.hpp"
#include "krongraph/nodewise.hpp"
#include "krongraph/simulate.hpp"

using namespace krongraph;

namespace {

SymMatrix benchmark_correlation(int dim) {
  // Sample correlation of a banded factor at the scale the estimation
  // pipeline sees, so the solver benchmarks run on realistic inputs.
  const SymMatrix word = make_factor(FactorSpec::parse("banded:2:0.5", dim));
  const SymMatrix time = make_factor(FactorSpec::parse("ar1:0.7", 19));
  const ReplicateTensor t = sample_matrix_normal(time, word, 20, 4, 1234);
  return to_correlation(word_sample_cov(residualize(t)));
}

void BM_Glasso(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const double lambda = static_cast<double>(state.range(1)) / 100.0;
  const SymMatrix gamma = benchmark_correlation(dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glasso(gamma, lambda));
  }
}
BENCHMARK(BM_Glasso)->Args({30, 10})->Args({93, 10})->Args({93, 30});

void BM_Nodewise(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const SymMatrix gamma = benchmark_correlation(dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nodewise_fit(gamma, 0.1));
  }
}
BENCHMARK(BM_Nodewise)->Arg(30)->Arg(93);

void BM_WordGram(benchmark::State& state) {
  const SymMatrix word = make_factor(FactorSpec::parse("banded:2:0.5", 93));
  const SymMatrix time = make_factor(FactorSpec::parse("ar1:0.7", 19));
  const ResidualTensor r = residualize(sample_matrix_normal(time, word, 20, 4, 99));
  for (auto _ : state) {
    benchmark::DoNotOptimize(word_sample_cov(r));
  }
}
BENCHMARK(BM_WordGram);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
