// Serial reference paths against their OpenMP counterparts.
#include "trustregion/adversary_transport.hpp"
#include "trustregion/binary_trust.hpp"
#include "trustregion/game_oracle.hpp"
#include "trustregion/kernels.hpp"
#include "trustregion/spherical.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace trustregion;

namespace {

std::vector<double> random_tableau(std::size_t rows, std::size_t cols) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    std::vector<double> t(rows * cols);
    for (double& v : t) {
        v = n(rng);
    }
    return t;
}

template <Exec E>
void BM_Pivot(benchmark::State& st) {
    const auto rows = static_cast<std::size_t>(st.range(0));
    const std::size_t cols = 2 * rows;
    const std::vector<double> base = random_tableau(rows, cols);
    std::vector<double> t = base;
    std::size_t k = 0;
    for (auto _ : st) {
        pivot_eliminate(t.data(), rows, cols, k % rows, (k * 7) % cols, E);
        benchmark::DoNotOptimize(t.data());
        if (++k % 64 == 0) {
            t = base;
        }
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) * static_cast<std::int64_t>(rows * cols));
}

template <Exec E>
void BM_Consistency(benchmark::State& st) {
    const auto u = UtilityCurve::quadratic();
    const auto tau = BeliefDensity::uniform();
    const TrustInterval t = solve_trust_interval(u, tau, 0.75);
    const TransportMap m = build_tre_map(u, tau, 0.75, t);
    const auto cells = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) {
        benchmark::DoNotOptimize(verify_posterior_consistency(m, tau, 0.75, t, cells, E).max_deviation);
    }
}

template <Exec E>
void BM_RadiusSweep(benchmark::State& st) {
    SphericalInstance in{{1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.2,
                         BeliefDensity::radial([](double x) { return 1.0 + x; }, 0.2)};
    std::vector<double> alphas;
    for (int i = 0; i <= 100; ++i) {
        alphas.push_back(i / 100.0);
    }
    for (auto _ : st) {
        benchmark::DoNotOptimize(radius_sweep(in, alphas, E).back().r_star);
    }
}

void BM_Saddle21(benchmark::State& st) {
    std::vector<double> mus, tau, acts;
    for (int i = 0; i <= 20; ++i) {
        mus.push_back(i / 20.0);
        tau.push_back(1.0 / 21);
    }
    for (int i = 0; i <= 100; ++i) {
        acts.push_back(i / 100.0);
    }
    const FiniteGame g = binary_quadratic_game(mus, tau, acts, 0.75);
    SaddleOptions o;
    o.lp.exec = st.range(0) ? Exec::parallel : Exec::serial;
    for (auto _ : st) {
        benchmark::DoNotOptimize(solve_saddle(g, o).value);
    }
}

} // namespace

BENCHMARK(BM_Pivot<Exec::serial>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Pivot<Exec::parallel>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Consistency<Exec::serial>)->Arg(200)->Arg(2000);
BENCHMARK(BM_Consistency<Exec::parallel>)->Arg(200)->Arg(2000);
BENCHMARK(BM_RadiusSweep<Exec::serial>);
BENCHMARK(BM_RadiusSweep<Exec::parallel>);
BENCHMARK(BM_Saddle21)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
