#include <benchmark/benchmark.h>

#include <random>

#include "lvn/core_ops.hpp"
#include "lvn/diagnostics.hpp"
#include "lvn/engine.hpp"

using namespace lvn;

namespace {

TruncatedMatrix random_hs(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) m(r, c) = Complex(gauss(rng), gauss(rng));
    m /= m.norm();
    return TruncatedMatrix(std::move(m));
}

void bm_hs_inner(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const TruncatedMatrix a = random_hs(1, n), b = random_hs(2, n);
    for (auto _ : state) benchmark::DoNotOptimize(hs_inner(a, b));
}
BENCHMARK(bm_hs_inner)->Arg(32)->Arg(128)->Arg(512);

void bm_hs_norm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const TruncatedMatrix a = random_hs(3, n);
    for (auto _ : state) benchmark::DoNotOptimize(hs_norm(a));
}
BENCHMARK(bm_hs_norm)->Arg(32)->Arg(128)->Arg(512);

void bm_operator_norm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const TruncatedMatrix a = random_hs(4, n);
    for (auto _ : state) benchmark::DoNotOptimize(operator_norm(a));
}
BENCHMARK(bm_operator_norm)->Arg(32)->Arg(64)->Arg(128);

void bm_commutator_diagonal(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto h = HamiltonianModel::diagonal("n");
    const TruncatedMatrix a = random_hs(5, n);
    for (auto _ : state) benchmark::DoNotOptimize(commutator_apply(h, a));
}
BENCHMARK(bm_commutator_diagonal)->Arg(64)->Arg(256);

void bm_commutator_padded(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto h = HamiltonianModel::hermitian("1/(m+n)", "0");
    const TruncatedMatrix a = random_hs(6, n);
    for (auto _ : state) benchmark::DoNotOptimize(commutator_apply(h, a));
}
BENCHMARK(bm_commutator_padded)->Arg(32)->Arg(64)->Arg(128);

void bm_vectorized_build(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto h = HamiltonianModel::diagonal("n");
    for (auto _ : state) benchmark::DoNotOptimize(VectorizedLiouvillian::build(h, n));
}
BENCHMARK(bm_vectorized_build)->Arg(8)->Arg(16)->Arg(32);

void bm_vectorized_apply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto h = HamiltonianModel::diagonal("n");
    const auto liou = VectorizedLiouvillian::build(h, n);
    const TruncatedMatrix a = random_hs(7, n);
    for (auto _ : state) benchmark::DoNotOptimize(liou.apply(a));
}
BENCHMARK(bm_vectorized_apply)->Arg(8)->Arg(16)->Arg(32);

void bm_propagator_apply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto h = HamiltonianModel::hermitian("1/(m+n)", "0");
    const Propagator p = Propagator::make(h, n);
    const TruncatedMatrix a = random_hs(8, n);
    for (auto _ : state) benchmark::DoNotOptimize(p.apply(0.37, a));
}
BENCHMARK(bm_propagator_apply)->Arg(32)->Arg(64)->Arg(128);

void bm_partial_sums_comm(benchmark::State& state) {
    const int top = static_cast<int>(state.range(0));
    const auto& f = catalog_fixture("slow-rank-one");
    const TruncationLadder ladder = TruncationLadder::up_to(top);
    for (auto _ : state)
        benchmark::DoNotOptimize(partial_sums(f.hamiltonian, f.op, Quantity::comm(), ladder));
}
BENCHMARK(bm_partial_sums_comm)->Arg(64)->Arg(128)->Arg(256);

void bm_classify(benchmark::State& state) {
    const auto& f = catalog_fixture("slow-rank-one");
    const auto series =
        partial_sums(f.hamiltonian, f.op, Quantity::comm(), TruncationLadder::defaults());
    const Tolerances tol;
    for (auto _ : state) benchmark::DoNotOptimize(classify(series, tol));
}
BENCHMARK(bm_classify);

void bm_rk4_quarter_unit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto h = HamiltonianModel::diagonal("n");
    const TruncatedMatrix a0 = random_hs(9, n);
    EvolveOptions opts;
    opts.method = EvolveMethod::Rk4;
    opts.rk4_step = 1.0 / 64.0;
    opts.preflight_dom_H = Classification::ConvergentEvidence;
    const std::vector<double> times = {0.0, 0.25};
    for (auto _ : state) benchmark::DoNotOptimize(evolve(h, a0, times, opts));
}
BENCHMARK(bm_rk4_quarter_unit)->Arg(16)->Arg(32)->Arg(64);

} // namespace

BENCHMARK_MAIN();
