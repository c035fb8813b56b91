#include "tvgap/elliptic.hpp"
#include "tvgap/hill.hpp"
#include "tvgap/premodular.hpp"
#include "tvgap/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace tvgap;

namespace {

const cplx I(0, 1);

void BM_LatticeSetup(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(LatticeData(0.3 + 0.8 * I));
}
BENCHMARK(BM_LatticeSetup);

void BM_Wp(benchmark::State& st) {
    const LatticeData L(st.range(0) == 0 ? I : 0.05 * I);
    cplx z = 0.31 + 0.27 * L.tau();
    for (auto _ : st) {
        benchmark::DoNotOptimize(L.wp_and_prime(z));
        z += 1e-9;
    }
}
BENCHMARK(BM_Wp)->Arg(0)->Arg(1);

void BM_PhiRoute(benchmark::State& st) {
    const LatticeData L(I);
    const int n0 = static_cast<int>(st.range(0));
    const MultiplicityTuple t({n0, 1, 1, 0});
    for (auto _ : st) benchmark::DoNotOptimize(q_via_phi_ansatz(L, t));
}
BENCHMARK(BM_PhiRoute)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_Factorization(benchmark::State& st) {
    const LatticeData L(I);
    const MultiplicityTuple t({2, 2, 1, 1});
    for (auto _ : st) benchmark::DoNotOptimize(q_via_factorization(L, t));
}
BENCHMARK(BM_Factorization)->Unit(benchmark::kMicrosecond);

void BM_Monodromy(benchmark::State& st) {
    const GLEProblem P(LatticeData(I), MultiplicityTuple({2, 0, 0, 0}));
    for (auto _ : st) benchmark::DoNotOptimize(P.monodromy(cplx(1.3, 0.2)));
}
BENCHMARK(BM_Monodromy)->Unit(benchmark::kMillisecond);

void BM_Zn(benchmark::State& st) {
    const LatticeData L(0.4 + 0.9 * I);
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(z_n(L, 0.21, 0.34, n));
}
BENCHMARK(BM_Zn)->DenseRange(1, 4);

} // namespace
BENCHMARK_MAIN();
