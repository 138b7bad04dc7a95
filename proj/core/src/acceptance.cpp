#include "laqcc/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "laqcc/errors.hpp"
#include "laqcc/fourier.hpp"
#include "laqcc/hadamard.hpp"
#include "laqcc/noise.hpp"
#include "laqcc/numbersys.hpp"
#include "laqcc/primitives.hpp"
#include "laqcc/stateprep.hpp"

namespace laqcc {

namespace {

struct Check {
    bool pass = true;
    int failures = 0;
    std::ostringstream detail;

    void expect(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            if (failures++ < 3) {
                detail << (failures > 1 ? "; " : "") << what;
            }
        }
    }
    CriterionResult result(int index, const std::string &name, const std::string &ok_note) {
        CriterionResult r;
        r.index = index;
        r.name = name;
        r.pass = pass;
        r.detail = pass ? ok_note : detail.str();
        return r;
    }
};

QuantumState ghz_reference(uint32_t n) {
    QuantumState st;
    auto q = st.alloc(n);
    st.apply(gate(GateKind::H, {q[0]}));
    for (uint32_t i = 1; i < n; i++) {
        st.apply(gate(GateKind::CNOT, {q[i - 1], q[i]}));
    }
    return st;
}

QuantumState random_state(uint32_t n, RandomSource &rng) {
    QuantumState st;
    auto q = st.alloc(n);
    for (uint32_t i = 0; i < n; i++) {
        st.apply(gate(GateKind::RY, {q[i]}, {}, rng.next_double() * 3.0));
        st.apply(gate(GateKind::RZ, {q[i]}, {}, rng.next_double() * 3.0));
    }
    for (uint32_t i = 0; i + 1 < n; i++) {
        if (rng.next_below(2)) {
            st.apply(gate(GateKind::CNOT, {q[i], q[i + 1]}));
        }
    }
    return st;
}

// 1. GHZ determinism over every forced branch, n in 2..8, under 10 s.
CriterionResult criterion_ghz(uint64_t seed) {
    (void)seed;
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    for (uint32_t n = 2; n <= 8; n++) {
        QuantumState ref = ghz_reference(n);
        double total = for_each_branch(static_cast<int>(n - 1), [&](MeasureDriver &d) {
            QuantumState st = ghz_laqcc(n, PrimitiveMode::Expanded, d);
            c.expect(QuantumState::fidelity(st, ref) >= 1.0 - 1e-9,
                     "branch fidelity below 1-1e-9 at n=" + std::to_string(n));
            return d.branch_probability;
        });
        c.expect(std::abs(total - 1.0) < 1e-9, "branch probabilities do not sum to 1");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs < 10.0, "runtime " + std::to_string(secs) + " s exceeds 10 s");
    std::ostringstream note;
    note << "254 branches, " << secs << " s";
    return c.result(1, "ghz determinism", note.str());
}

// 2. Expanded fanout vs the ideal unitary: targets 1..5, 20 random states,
// all forced branches.
CriterionResult criterion_fanout(uint64_t seed) {
    Check c;
    RandomSource rng(seed, {2});
    int64_t branches_run = 0;
    for (uint32_t t = 1; t <= 5; t++) {
        for (int rep = 0; rep < 20; rep++) {
            RandomSource state_rng = rng.derive(t * 100 + rep);
            QuantumState input = random_state(t + 1, state_rng);
            auto q = input.live_qubits();
            std::vector<QubitId> targets(q.begin() + 1, q.end());
            QuantumState ideal = input;
            MeasureDriver di;
            fanout(ideal, q[0], targets, PrimitiveMode::Ideal, di);
            double total = for_each_branch(static_cast<int>(2 * t + 1), [&](MeasureDriver &d) {
                QuantumState st = input;
                fanout(st, q[0], targets, PrimitiveMode::Expanded, d);
                branches_run++;
                c.expect(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9,
                         "fanout branch fidelity below threshold at t=" + std::to_string(t));
                return d.branch_probability;
            });
            c.expect(std::abs(total - 1.0) < 1e-9, "fanout branch probabilities broken");
        }
    }
    return c.result(2, "fanout mode equivalence",
                    std::to_string(branches_run) + " branch runs");
}

// 3. Uniform superposition amplitudes 1/sqrt(q) for q in 1..64.
CriterionResult criterion_uniform(uint64_t seed) {
    (void)seed;
    Check c;
    for (uint64_t q = 1; q <= 64; q++) {
        MeasureDriver d;
        QuantumState st = prepare_uniform_q(q, PrimitiveMode::Ideal, d);
        auto qs = st.live_qubits();
        for (uint64_t v = 0; v < (uint64_t{1} << st.width()); v++) {
            double expect = v < q ? 1.0 / std::sqrt(static_cast<double>(q)) : 0.0;
            double amp = std::sqrt(st.basis_prob(qs, v));
            c.expect(std::abs(amp - expect) < 1e-8,
                     "amplitude off at q=" + std::to_string(q) + " v=" + std::to_string(v));
        }
    }
    return c.result(3, "uniform superposition", "q = 1..64 exact");
}

void check_uniform_family(Check &c, const QuantumState &st, uint32_t n, uint32_t k,
                          const std::string &label) {
    double expect_amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, k).get_d()));
    double lo = 2.0, hi = -1.0, off = 0.0;
    for (uint64_t v = 0; v < (uint64_t{1} << n); v++) {
        double p = st.basis_prob(st.live_qubits(), v);
        if (static_cast<uint32_t>(__builtin_popcountll(v)) == k) {
            double a = std::sqrt(p);
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            c.expect(std::abs(a - expect_amp) < 1e-7, label + ": amplitude off");
        } else {
            off += p;
        }
    }
    c.expect(off < 1e-12, label + ": support leaks outside the legal basis set");
    c.expect(hi - lo < 1e-9, label + ": amplitude deviation over the support >= 1e-9");
}

// 4. W and Dicke states: uniform support with deviation < 1e-9.
CriterionResult criterion_w_dicke(uint64_t seed) {
    Check c;
    for (uint32_t n : {1u, 2u, 4u, 8u, 16u}) {
        MeasureDriver d;
        QuantumState st = prepare_w(n, PrimitiveMode::Ideal, d);
        if (n <= 8) {
            check_uniform_family(c, st, n, 1, "w n=" + std::to_string(n));
        } else {
            for (uint32_t i = 0; i < n; i++) {
                double p = st.basis_prob(st.live_qubits(), uint64_t{1} << i);
                c.expect(std::abs(std::sqrt(p) - 1.0 / std::sqrt(16.0)) < 1e-7,
                         "w n=16 amplitude off");
            }
        }
    }
    // n = 2 expanded, every forced branch
    {
        MeasureDriver di;
        QuantumState ideal = prepare_w(2, PrimitiveMode::Ideal, di);
        RandomSource rng(seed, {41});
        MeasureDriver count_probe = MeasureDriver::sampling(rng);
        QuantumState sampled = prepare_w(2, PrimitiveMode::Expanded, count_probe);
        c.expect(QuantumState::fidelity(sampled, ideal) >= 1.0 - 1e-9, "w n=2 sampled run");
        int m = static_cast<int>(count_probe.records.size());
        double total = for_each_branch(m, [&](MeasureDriver &d) {
            QuantumState st = prepare_w(2, PrimitiveMode::Expanded, d);
            c.expect(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9,
                     "w n=2 expanded branch below threshold");
            return d.branch_probability;
        });
        c.expect(std::abs(total - 1.0) < 1e-9, "w n=2 branch probabilities broken");
    }
    for (uint32_t n = 1; n <= 6; n++) {
        for (uint32_t k = 1; k <= std::min(n, 2u); k++) {
            RandomSource rng(seed, {4, n, k});
            MeasureDriver d = MeasureDriver::sampling(rng);
            QuantumState st = prepare_dicke_small_k(n, k, PrimitiveMode::Ideal, d);
            check_uniform_family(c, st, n, k,
                                 "dicke_small n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
    }
    for (uint32_t n = 1; n <= 4; n++) {
        for (uint32_t k = 1; k <= n; k++) {
            MeasureDriver d;
            QuantumState st = prepare_dicke_factoradic(n, k, PrimitiveMode::Ideal, d);
            check_uniform_family(c, st, n, k,
                                 "dicke_fact n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
    }
    return c.result(4, "w and dicke preparation", "all families uniform");
}

// 5. Number systems: exhaustive bijections and the k!(n-k)! preimage law.
CriterionResult criterion_numbers(uint64_t seed) {
    (void)seed;
    Check c;
    for (int n = 1; n <= 8; n++) {
        // enumerate factoradics via integers
        int64_t nfact = factorial(n).get_si();
        std::vector<Factoradic> ys;
        ys.reserve(nfact);
        for (int64_t m = 0; m < nfact; m++) {
            Factoradic y = int_to_factoradic(m, n);
            c.expect(factoradic_to_int(y) == m, "factoradic round trip failed");
            ys.push_back(std::move(y));
        }
        for (int k = 0; k <= n; k++) {
            std::map<uint64_t, int64_t> counts;
            for (const auto &y : ys) {
                counts[fact_to_comb(y, k).bits]++;
            }
            int64_t expect = mpz_class(factorial(k) * factorial(n - k)).get_si();
            c.expect(counts.size() == static_cast<size_t>(binomial(n, k).get_si()),
                     "missing weight-k strings at n=" + std::to_string(n));
            for (const auto &[bits, cnt] : counts) {
                c.expect(cnt == expect, "preimage law violated at n=" + std::to_string(n) +
                                            " k=" + std::to_string(k));
            }
            // inverse construction: bijection on every (s, X, Z)
            for (int64_t m = 0; m < binomial(n, k).get_si(); m++) {
                WeightKString s = unrank_weightk(m, n, k);
                c.expect(rank_weightk(s) == m, "rank/unrank mismatch");
            }
        }
    }
    return c.result(5, "number systems", "exhaustive to n = 8, zero failures");
}

// 6. Hadamard decoder: exact p=2 identity, circuit sampling TV, list decode.
CriterionResult criterion_hadamard(uint64_t seed) {
    Check c;
    RandomSource rng(seed, {6});
    // (1 - 2d/n)^2 identity over 100 random corruptions, k <= 8
    for (int rep = 0; rep < 100; rep++) {
        int k = 1 + static_cast<int>(rng.next_below(8));
        size_t n = size_t{1} << k;
        std::vector<int> coords(k);
        for (auto &v : coords) {
            v = static_cast<int>(rng.next_below(2));
        }
        Message x{2, k, coords};
        Codeword cw = encode(x);
        NoiseChannelSpec spec;
        spec.rho = rng.next_double();
        cw = corrupt(cw, spec, rng);
        std::vector<double> probs = decode_distribution(cw);
        for (size_t z = 0; z < n; z++) {
            std::vector<int> zc(k);
            for (int i = 0; i < k; i++) {
                zc[i] = static_cast<int>((z >> i) & 1);
            }
            int d = hamming_distance(cw, encode(Message{2, k, zc}));
            double expect = 1.0 - 2.0 * static_cast<double>(d) / static_cast<double>(n);
            expect *= expect;
            c.expect(std::abs(probs[z] - expect) < 1e-10, "decode identity broken");
        }
    }
    // circuit sampling within TV 0.02 at 10^4 trials, k <= 4
    for (int k : {1, 2, 3, 4}) {
        std::vector<int> coords(k, 1);
        Codeword cw = encode(Message{2, k, coords});
        NoiseChannelSpec spec;
        spec.rho = 0.75;
        cw = corrupt(cw, spec, rng);
        std::vector<double> probs = decode_distribution(cw);
        std::vector<int> counts(cw.values.size(), 0);
        const int trials = 10000;
        for (int i = 0; i < trials; i++) {
            Message m = circuit_decode(cw, rng);
            size_t z = 0;
            for (int b = 0; b < k; b++) {
                z |= static_cast<size_t>(m.coords[b]) << b;
            }
            counts[z]++;
        }
        double tv = 0.0;
        for (size_t z = 0; z < probs.size(); z++) {
            tv += std::abs(static_cast<double>(counts[z]) / trials - probs[z]);
        }
        c.expect(tv / 2 < 0.02, "circuit sampling TV too large at k=" + std::to_string(k));
    }
    // list decoding at k = 8, worst-case delta = 0.25: the per-run success
    // probability is the exact formula (2 eps)^2 = 1/4, so with
    // ceil(8 eps^-2 ln(1/eps)) = 178 samples the target is essentially
    // never missed; require >= 90% of 200 seeded runs.
    {
        std::vector<int> coords(8);
        for (auto &v : coords) {
            v = static_cast<int>(rng.next_below(2));
        }
        Codeword clean = encode(Message{2, 8, coords});
        NoiseChannelSpec spec;
        spec.model = NoiseChannelSpec::Model::WorstCaseFraction;
        spec.delta = 0.25;
        int hits = 0;
        for (int run = 0; run < 200; run++) {
            RandomSource run_rng = rng.derive(run);
            Codeword cw = corrupt(clean, spec, run_rng);
            for (const auto &m : list_decode(cw, 0.25, run_rng)) {
                if (m.coords == coords) {
                    hits++;
                    break;
                }
            }
        }
        c.expect(hits >= 180, "list decoding hit rate " + std::to_string(hits) + "/200");
    }
    return c.result(6, "hadamard decoder", "identity, sampling and list decode hold");
}

// 7. Fourier lab: Parseval, nesting, the U2 identity, both learners.
CriterionResult criterion_fourier(uint64_t seed) {
    Check c;
    RandomSource rng(seed, {7});
    for (int rep = 0; rep < 100; rep++) {
        int p = rep % 2 == 0 ? 2 : 3;
        int n = 2 + rep % 2;
        PhaseFunction f;
        f.p = p;
        f.n = n;
        size_t sz = 1;
        for (int i = 0; i < n; i++) {
            sz *= p;
        }
        f.table.resize(sz);
        for (auto &v : f.table) {
            v = std::polar(1.0, 2.0 * M_PI * rng.next_double());
        }
        FourierSpectrum s = fourier(f);
        double lhs = 0.0, rhs = 0.0;
        for (const auto &v : f.table) {
            lhs += std::norm(v);
        }
        lhs /= static_cast<double>(sz);
        double m4 = 0.0;
        for (const auto &co : s.coeff) {
            rhs += std::norm(co);
            m4 += std::norm(co) * std::norm(co);
        }
        c.expect(std::abs(lhs - rhs) < 1e-9, "Parseval violated");
        double u1 = gowers_norm(f, 1), u2 = gowers_norm(f, 2), u3 = gowers_norm(f, 3);
        c.expect(u1 <= u2 + 1e-9 && u2 <= u3 + 1e-9, "nesting violated");
        c.expect(std::abs(u2 - std::pow(m4, 0.25)) < 1e-10, "U2 spectral identity violated");
    }
    // noiseless learner, 100/100 seeds at (p=2, n=8) and (p=3, n=4)
    for (int variant = 0; variant < 2; variant++) {
        int p = variant == 0 ? 2 : 3;
        int n = variant == 0 ? 8 : 4;
        for (uint64_t s = 0; s < 100; s++) {
            RandomSource seed_rng(seed, {7, static_cast<uint64_t>(variant), s});
            QuadraticPhaseParams planted = random_quadratic(p, n, seed_rng);
            CountingOracle oracle{quadratic_phase(planted)};
            QuadraticPhaseParams got = learn_quadratic_noiseless(oracle);
            c.expect(got == planted, "noiseless learner missed a seed");
            c.expect(oracle.queries == static_cast<int64_t>(p) * n + 2,
                     "query counter is not pn+2");
        }
    }
    // unique-radius learner at n=8, eps=0.3, corruption 0.05
    {
        int hits = 0;
        for (uint64_t s = 0; s < 50; s++) {
            RandomSource seed_rng(seed, {7, 9, s});
            QuadraticPhaseParams planted = random_quadratic(2, 8, seed_rng);
            PhaseFunction f = quadratic_phase(planted);
            size_t flips = static_cast<size_t>(0.05 * f.table.size());
            std::set<size_t> chosen;
            while (chosen.size() < flips) {
                chosen.insert(seed_rng.next_below(f.table.size()));
            }
            for (size_t x : chosen) {
                f.table[x] *= -1.0;
            }
            CountingOracle oracle{f};
            hits += learn_quadratic_unique_radius(oracle, 0.3, seed_rng) == planted;
        }
        c.expect(hits >= 45, "unique-radius recovery " + std::to_string(hits) + "/50");
    }
    return c.result(7, "fourier lab", "norms and learners hold");
}

// 8. Brisbane closed forms and Bernoulli Monte Carlo.
CriterionResult criterion_brisbane(uint64_t seed, const std::string &device_path) {
    Check c;
    DeviceParams dev = DeviceParams::load(device_path);
    double p_lin = success_expr(Protocol::GhzLinear, 55).evaluate(dev);
    double p_laqcc = success_expr(Protocol::GhzLaqcc, 55).evaluate(dev);
    c.expect(std::abs(p_lin / 4.52e-4 - 1.0) < 0.01, "ghz_linear(55) off the published value");
    c.expect(std::abs(p_laqcc / 4.82e-2 - 1.0) < 0.01, "ghz_laqcc(55) off the published value");
    c.expect(std::abs(duration_ns(Protocol::GhzLinear, 55, dev) / 18510.0 - 1.0) < 0.01,
             "linear duration off 18.51 us");
    c.expect(std::abs(duration_ns(Protocol::GhzLaqcc, 55, dev) / 3990.0 - 1.0) < 0.01,
             "feedforward duration off 3.99 us");
    RandomSource rng(seed, {8});
    int idx = 0;
    // 3-sigma gate at 1e5 trials; a check that lands outside gets one
    // independent re-draw (an unbiased estimator trips a 3-sigma bound in
    // about 0.3% of streams, which across ~35 checks would make the suite
    // flaky without the second stage).
    auto check_mc = [&](Protocol p, int64_t n, int64_t k) {
        SuccessExpr e = success_expr(p, n, k);
        double expect = e.evaluate(dev);
        for (int attempt = 0; attempt < 2; attempt++) {
            RandomSource sub = rng.derive(idx++);
            McResult r = mc_bernoulli(e, dev, 100000, sub);
            double sigma = std::max(r.std_error, std::sqrt(expect * (1 - expect) / 100000.0));
            if (std::abs(r.estimate - expect) <= 3.0 * sigma) {
                return;
            }
        }
        c.expect(false, std::string("Monte Carlo off for ") + protocol_name(p) + " n=" +
                            std::to_string(n));
    };
    for (Protocol p : {Protocol::GhzAll, Protocol::GhzLinear, Protocol::GhzLaqcc,
                       Protocol::WDirect, Protocol::WLaqcc, Protocol::WLaqccApprox,
                       Protocol::Fanout, Protocol::Parity, Protocol::OrReduction,
                       Protocol::OrExact, Protocol::ControlledU}) {
        std::vector<int64_t> sizes = {4, 8, 16};
        if (p == Protocol::ControlledU) {
            sizes = {0};
        }
        for (int64_t n : sizes) {
            check_mc(p, n, 0);
        }
    }
    check_mc(Protocol::GhzHybridAll, 16, 4);
    check_mc(Protocol::GhzHybridLinear, 16, 4);
    return c.result(8, "success probability anchors", "published values and MC agree");
}

// 9. Crossover verdicts on a 20x20 grid in the assumption regime.
CriterionResult criterion_crossover(uint64_t seed) {
    (void)seed;
    Check c;
    const int64_t n = 16;
    double boundary =
        crossover(Protocol::GhzLaqcc, Protocol::GhzAll, n, nullptr).boundary_exponent;
    int checked = 0;
    for (int i = 0; i < 20; i++) {
        for (int j = 0; j < 20; j++) {
            double pd = 0.90 + 0.0995 * i / 19.0;
            double pid = 0.90 + 0.0995 * j / 19.0;
            DeviceParams dev;
            dev.set(BaseProb::d, pd);
            dev.set(BaseProb::m, pd);
            dev.set(BaseProb::id, pid);
            dev.set(BaseProb::im, pid);
            dev.set(BaseProb::ic, pid);
            ComparisonVerdict v = crossover(Protocol::GhzLaqcc, Protocol::GhzAll, n, &dev);
            double lhs = std::log(pd), rhs = boundary * std::log(pid);
            double margin = std::abs(lhs - rhs);
            bool near_boundary = margin < 0.05 * std::abs(rhs) || v.winner == "tie";
            if (near_boundary) {
                continue;
            }
            bool symbolic_laqcc = lhs > rhs;
            c.expect(v.winner == (symbolic_laqcc ? "ghz_laqcc" : "ghz_all"),
                     "verdict disagrees away from the boundary");
            checked++;
        }
    }
    c.expect(checked >= 300, "grid coverage too thin");
    return c.result(9, "crossover consistency",
                    std::to_string(checked) + " grid points consistent");
}

}  // namespace

std::vector<CriterionResult> run_acceptance(uint64_t seed, const std::string &device_path) {
    std::vector<CriterionResult> results;
    results.push_back(criterion_ghz(seed));
    results.push_back(criterion_fanout(seed));
    results.push_back(criterion_uniform(seed));
    results.push_back(criterion_w_dicke(seed));
    results.push_back(criterion_numbers(seed));
    results.push_back(criterion_hadamard(seed));
    results.push_back(criterion_fourier(seed));
    results.push_back(criterion_brisbane(seed, device_path));
    results.push_back(criterion_crossover(seed));
    return results;
}

}  // namespace laqcc
