#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "tqsearch/bounds.hpp"
#include "tqsearch/channel.hpp"
#include "tqsearch/experiments.hpp"
#include "tqsearch/ormac.hpp"
#include "tqsearch/procedure.hpp"
#include "tqsearch/rng.hpp"

namespace {

using tq::Codebook;
using tq::CubePartition;
using tq::NoiseMap;
using tq::NoiseModel;

void BM_CodebookGenerate(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const long long n = state.range(1);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto cb = Codebook::generate(M, 1, n, 0.23, seed++);
    benchmark::DoNotOptimize(cb.row(0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(M) * n);
}
BENCHMARK(BM_CodebookGenerate)->Args({8861, 400})->Args({2048, 400})
    ->Unit(benchmark::kMillisecond);

// One full decode on a fresh noisy instance; items are scanned pair
// candidates, so the rate is the effective tuple throughput.
void BM_PairScanDecode(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const long long n = state.range(1);
  auto noise = NoiseModel::bsc(NoiseMap::affine(0.3, 0.1));
  const double p = 0.230187452542;
  const double gamma = 0.5 * std::log(static_cast<double>(n));
  CubePartition part(M, 1);
  std::uint64_t seed = 0;
  long long tuples = 0;
  for (auto _ : state) {
    state.PauseTiming();
    ++seed;
    tq::Rng rng(seed);
    auto cb = Codebook::generate(M, 1, n, p, seed);
    std::vector<std::vector<double>> targets = {{rng.next_double()},
                                                {rng.next_double()}};
    auto oracle = tq::oracle_noiseless(part, cb, targets);
    auto y = tq::apply_noise(oracle.z, cb, noise, rng);
    state.ResumeTiming();
    auto out = tq::decode(y, cb, part, noise, p, gamma, 2);
    tuples += out.tuples_evaluated;
    benchmark::DoNotOptimize(out.m);
  }
  state.SetItemsProcessed(tuples);
}
BENCHMARK(BM_PairScanDecode)->Args({8861, 400})->Args({2048, 400})
    ->Unit(benchmark::kMillisecond);

void BM_SingleTrial(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const long long n = state.range(1);
  auto noise = NoiseModel::bsc(NoiseMap::affine(0.3, 0.1));
  const double p = 0.230187452542;
  const double gamma = 0.5 * std::log(static_cast<double>(n));
  CubePartition part(M, 1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto rec = tq::run_single_trial(noise, part, n, 2, p, gamma, 1000000000LL,
                                    ++seed, 0, nullptr, false);
    benchmark::DoNotOptimize(rec.rho);
  }
}
BENCHMARK(BM_SingleTrial)->Args({8861, 400})->Args({36, 200})
    ->Unit(benchmark::kMillisecond);

void BM_OrMacMoments(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  auto noise = NoiseModel::bsc(NoiseMap::affine(0.3, 0.1));
  tq::OrMac mac(noise, 0.23, t);
  for (auto _ : state) {
    auto st = mac.moments(0);
    benchmark::DoNotOptimize(st.V);
  }
}
BENCHMARK(BM_OrMacMoments)->Arg(2)->Arg(8)->Arg(16);

void BM_ConverseQuantile(benchmark::State& state) {
  const long long n = state.range(0);
  auto noise = NoiseModel::bsc(NoiseMap::constant(0.05));
  for (auto _ : state) {
    tq::ConverseParams cp;
    cp.n = n;
    cp.k = 1;
    cp.d = 1;
    cp.eps = 0.3;
    cp.p_query = 0.5;
    cp.samples = 100000;
    cp.seed = 3;
    auto rep = tq::converse_resolution_bound(noise, cp);
    benchmark::DoNotOptimize(rep.value);
  }
}
BENCHMARK(BM_ConverseQuantile)->Arg(400)->Arg(40000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
