#include <benchmark/benchmark.h>

#include "laqcc/fourier.hpp"
#include "laqcc/hadamard.hpp"
#include "laqcc/primitives.hpp"
#include "laqcc/stateprep.hpp"

using namespace laqcc;

namespace {

void BM_single_qubit_gate(benchmark::State &state) {
    const auto width = static_cast<uint32_t>(state.range(0));
    QuantumState st;
    auto q = st.alloc(width);
    GateOp h = gate(GateKind::H, {q[width / 2]});
    for (auto _ : state) {
        st.apply(h);
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << width));
}
BENCHMARK(BM_single_qubit_gate)->Arg(10)->Arg(16)->Arg(20)->Arg(22);

void BM_cnot(benchmark::State &state) {
    const auto width = static_cast<uint32_t>(state.range(0));
    QuantumState st;
    auto q = st.alloc(width);
    st.apply(gate(GateKind::H, {q[0]}));
    GateOp cx = gate(GateKind::CNOT, {q[0], q[width - 1]});
    for (auto _ : state) {
        st.apply(cx);
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << width));
}
BENCHMARK(BM_cnot)->Arg(10)->Arg(16)->Arg(20)->Arg(22);

void BM_measure_recycle(benchmark::State &state) {
    const auto width = static_cast<uint32_t>(state.range(0));
    RandomSource rng(1);
    for (auto _ : state) {
        QuantumState st;
        auto q = st.alloc(width);
        st.apply(gate(GateKind::H, {q[width - 1]}));
        st.measure(q[width - 1], rng);
        st.recycle(q[width - 1]);
    }
}
BENCHMARK(BM_measure_recycle)->Arg(10)->Arg(16)->Arg(20);

void BM_ghz_expanded(benchmark::State &state) {
    const auto n = static_cast<uint32_t>(state.range(0));
    RandomSource rng(2);
    for (auto _ : state) {
        MeasureDriver d = MeasureDriver::sampling(rng);
        QuantumState st = ghz_laqcc(n, PrimitiveMode::Expanded, d);
        benchmark::DoNotOptimize(st.norm_sq());
    }
}
BENCHMARK(BM_ghz_expanded)->Arg(4)->Arg(8)->Arg(12);

void BM_fanout_expanded(benchmark::State &state) {
    const auto targets = static_cast<uint32_t>(state.range(0));
    RandomSource rng(3);
    for (auto _ : state) {
        QuantumState st;
        auto q = st.alloc(targets + 1);
        st.apply(gate(GateKind::H, {q[0]}));
        MeasureDriver d = MeasureDriver::sampling(rng);
        fanout(st, q[0], {q.begin() + 1, q.end()}, PrimitiveMode::Expanded, d);
        benchmark::DoNotOptimize(st.norm_sq());
    }
}
BENCHMARK(BM_fanout_expanded)->Arg(2)->Arg(5)->Arg(8);

void BM_decode_distribution(benchmark::State &state) {
    const int k = static_cast<int>(state.range(0));
    Message x;
    x.p = 2;
    x.k = k;
    x.coords.assign(k, 1);
    Codeword c = encode(x);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode_distribution(c));
    }
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << k));
}
BENCHMARK(BM_decode_distribution)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void BM_gowers_u3(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    RandomSource rng(4);
    QuadraticPhaseParams q = random_quadratic(2, n, rng);
    PhaseFunction f = quadratic_phase(q);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gowers_norm(f, 3));
    }
}
BENCHMARK(BM_gowers_u3)->Arg(4)->Arg(6)->Arg(8);

void BM_dicke_small(benchmark::State &state) {
    const auto n = static_cast<uint32_t>(state.range(0));
    RandomSource rng(5);
    for (auto _ : state) {
        MeasureDriver d = MeasureDriver::sampling(rng);
        QuantumState st = prepare_dicke_small_k(n, 2, PrimitiveMode::Ideal, d);
        benchmark::DoNotOptimize(st.norm_sq());
    }
}
BENCHMARK(BM_dicke_small)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
