#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "laqcc/errors.hpp"
#include "laqcc/hadamard.hpp"
#include "laqcc/primitives.hpp"

using namespace laqcc;

namespace {

Message msg(int p, std::vector<int> coords) {
    Message m;
    m.p = p;
    m.k = static_cast<int>(coords.size());
    m.coords = std::move(coords);
    return m;
}

size_t pack(const std::vector<int> &coords, int p) {
    size_t v = 0, mul = 1;
    for (int c : coords) {
        v += static_cast<size_t>(c) * mul;
        mul *= static_cast<size_t>(p);
    }
    return v;
}

}  // namespace

TEST_CASE("encode basics") {
    Codeword zero = encode(msg(2, {0, 0, 0}));
    for (int v : zero.values) {
        CHECK(v == 0);
    }
    // x = (1, 0), y little-endian over {00, 01, 10, 11} -> (0, 1, 0, 1)
    Codeword c = encode(msg(2, {1, 0}));
    CHECK(c.values == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("distinct p=2 codewords differ in exactly n/2 positions") {
    const int k = 5;
    RandomSource rng(2);
    for (int rep = 0; rep < 10; rep++) {
        std::vector<int> a(k), b(k);
        do {
            for (int i = 0; i < k; i++) {
                a[i] = static_cast<int>(rng.next_below(2));
                b[i] = static_cast<int>(rng.next_below(2));
            }
        } while (a == b);
        CHECK(hamming_distance(encode(msg(2, a)), encode(msg(2, b))) == (1 << k) / 2);
    }
}

TEST_CASE("corrupt with rho = 1 is the identity") {
    RandomSource rng(3);
    Codeword c = encode(msg(2, {1, 1, 0}));
    NoiseChannelSpec spec;
    spec.rho = 1.0;
    CHECK(corrupt(c, spec, rng).values == c.values);
}

TEST_CASE("corrupt with rho = 0 agrees with the original about half the time") {
    RandomSource rng(4);
    Codeword c = encode(msg(2, std::vector<int>(14, 1)));  // n = 2^14
    NoiseChannelSpec spec;
    spec.rho = 0.0;
    Codeword out = corrupt(c, spec, rng);
    double agree = 1.0 - static_cast<double>(hamming_distance(c, out)) / c.values.size();
    CHECK(agree == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("worst-case corruption changes exactly floor(delta n) coordinates") {
    RandomSource rng(5);
    Codeword c = encode(msg(2, {0, 1, 0, 1}));  // n = 16
    NoiseChannelSpec spec;
    spec.model = NoiseChannelSpec::Model::WorstCaseFraction;
    spec.delta = 0.25;
    Codeword out = corrupt(c, spec, rng);
    CHECK(hamming_distance(c, out) == 4);
}

TEST_CASE("uncorrupted decoding is a point mass at the message") {
    for (int p : {2, 3}) {
        RandomSource rng(6);
        std::vector<int> coords(3);
        for (auto &v : coords) {
            v = static_cast<int>(rng.next_below(p));
        }
        Codeword c = encode(msg(p, coords));
        std::vector<double> probs = decode_distribution(c);
        CHECK(probs[pack(coords, p)] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("one flipped coordinate at k=2 spreads uniformly") {
    Codeword c = encode(msg(2, {1, 0}));
    c.values[2] ^= 1;
    std::vector<double> probs = decode_distribution(c);
    for (double pr : probs) {
        CHECK(pr == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("one flip at k=2: sampled outcome frequencies are 0.25 each") {
    RandomSource rng(55);
    Codeword c = encode(msg(2, {1, 0}));
    c.values[1] ^= 1;
    std::vector<int> counts(4, 0);
    const int trials = 10000;
    for (int i = 0; i < trials; i++) {
        Message m = decode_sample(c, rng);
        counts[pack(m.coords, 2)]++;
    }
    for (int z = 0; z < 4; z++) {
        CHECK(static_cast<double>(counts[z]) / trials ==
              doctest::Approx(0.25).epsilon(0.08));  // 0.25 +- 0.02
    }
}

TEST_CASE("fast transform equals the brute-force character sum") {
    RandomSource rng(7);
    for (int p : {2, 3, 5}) {
        for (int k : {1, 2, 3}) {
            Codeword c;
            c.p = p;
            c.k = k;
            size_t n = 1;
            for (int i = 0; i < k; i++) {
                n *= p;
            }
            c.values.resize(n);
            for (auto &v : c.values) {
                v = static_cast<int>(rng.next_below(p));
            }
            auto fast = decode_distribution(c);
            auto slow = decode_distribution_bruteforce(c);
            for (size_t z = 0; z < n; z++) {
                CHECK(fast[z] == doctest::Approx(slow[z]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("p=2 identity: probs[z] = (1 - 2 d(c, H(z)) / n)^2 exactly") {
    RandomSource rng(8);
    for (int k = 1; k <= 8; k++) {
        const size_t n = size_t{1} << k;
        for (int rep = 0; rep < (k <= 4 ? 8 : 3); rep++) {
            std::vector<int> coords(k);
            for (auto &v : coords) {
                v = static_cast<int>(rng.next_below(2));
            }
            Codeword c = encode(msg(2, coords));
            NoiseChannelSpec spec;
            spec.rho = 0.6 + 0.4 * rng.next_double();
            c = corrupt(c, spec, rng);
            std::vector<double> probs = decode_distribution(c);
            double sum = 0.0;
            for (size_t z = 0; z < n; z++) {
                std::vector<int> zc(k);
                for (int i = 0; i < k; i++) {
                    zc[i] = static_cast<int>((z >> i) & 1);
                }
                int d = hamming_distance(c, encode(msg(2, zc)));
                double expect = 1.0 - 2.0 * d / static_cast<double>(n);
                expect *= expect;
                CHECK(std::abs(probs[z] - expect) < 1e-10);
                sum += probs[z];
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("odd-p lower bound at the true message") {
    RandomSource rng(9);
    for (int rep = 0; rep < 20; rep++) {
        std::vector<int> coords = {static_cast<int>(rng.next_below(3)),
                                   static_cast<int>(rng.next_below(3))};
        Codeword clean = encode(msg(3, coords));
        NoiseChannelSpec spec;
        spec.model = NoiseChannelSpec::Model::WorstCaseFraction;
        spec.delta = 0.2 * rng.next_double();
        Codeword c = corrupt(clean, spec, rng);
        int d = hamming_distance(c, clean);
        double bound = 1.0 - 2.0 * d / static_cast<double>(c.values.size());
        std::vector<double> probs = decode_distribution(c);
        CHECK(probs[pack(coords, 3)] >= bound * bound - 1e-10);
    }
}

TEST_CASE("circuit decoder distribution equals the transform exactly") {
    RandomSource rng(10);
    for (int k : {2, 3, 4}) {
        std::vector<int> coords(k);
        for (auto &v : coords) {
            v = static_cast<int>(rng.next_below(2));
        }
        Codeword c = encode(msg(2, coords));
        NoiseChannelSpec spec;
        spec.rho = 0.7;
        c = corrupt(c, spec, rng);
        std::vector<double> probs = decode_distribution(c);
        // exact statevector probabilities, no sampling
        QuantumState st;
        auto qs = st.alloc(static_cast<uint32_t>(k));
        for (QubitId q : qs) {
            st.apply(gate(GateKind::H, {q}));
        }
        st.apply_diagonal(qs, [&c](uint64_t y) {
            return c.values[y] ? Amplitude(-1.0, 0.0) : Amplitude(1.0, 0.0);
        });
        for (QubitId q : qs) {
            st.apply(gate(GateKind::H, {q}));
        }
        double tv = 0.0;
        for (uint64_t z = 0; z < c.values.size(); z++) {
            tv += std::abs(st.basis_prob(qs, z) - probs[z]);
        }
        CHECK(tv / 2 < 1e-9);
    }
}

TEST_CASE("circuit decoder sampling matches within TV 0.02 at 10^4 trials") {
    RandomSource rng(11);
    Codeword c = encode(msg(2, {1, 0, 1}));
    NoiseChannelSpec spec;
    spec.rho = 0.75;
    c = corrupt(c, spec, rng);
    std::vector<double> probs = decode_distribution(c);
    std::vector<int> counts(c.values.size(), 0);
    const int trials = 10000;
    for (int i = 0; i < trials; i++) {
        Message m = circuit_decode(c, rng);
        counts[pack(m.coords, 2)]++;
    }
    double tv = 0.0;
    for (size_t z = 0; z < probs.size(); z++) {
        tv += std::abs(static_cast<double>(counts[z]) / trials - probs[z]);
    }
    CHECK(tv / 2 < 0.02);
    CHECK_THROWS_AS(circuit_decode(encode(msg(2, std::vector<int>(5, 1))), rng),
                    CapacityError);
}

TEST_CASE("decode success rate at k=10, rho=0.4 concentrates near rho^2") {
    RandomSource rng(12);
    std::vector<int> coords(10);
    for (auto &v : coords) {
        v = static_cast<int>(rng.next_below(2));
    }
    Codeword clean = encode(msg(2, coords));
    int hits = 0;
    const int trials = 10000;
    NoiseChannelSpec spec;
    spec.rho = 0.4;
    // fresh corruption every 100 samples keeps the Monte Carlo honest
    // without recomputing the transform 10^4 times
    for (int block = 0; block < trials / 100; block++) {
        Codeword c = corrupt(clean, spec, rng);
        for (int i = 0; i < 100; i++) {
            hits += decode_sample(c, rng).coords == coords;
        }
    }
    double freq = static_cast<double>(hits) / trials;
    CHECK(freq == doctest::Approx(0.16).epsilon(0.15));  // 0.16 +- 0.02
}

TEST_CASE("list decode keeps the target and respects the length bound") {
    RandomSource rng(13);
    Codeword c = encode(msg(2, {1, 1, 0, 1}));
    auto list = list_decode(c, 0.5, rng);
    bool found = false;
    for (const auto &m : list) {
        found = found || m.coords == std::vector<int>{1, 1, 0, 1};
    }
    CHECK(found);
    CHECK(list.size() <= list_decode_sample_count(0.5));
    CHECK(list_decode_sample_count(0.25) == 178);  // ceil(8 * 16 * ln 4)
}

TEST_CASE("list decode at k=8, worst-case delta=0.25 contains the target") {
    RandomSource rng(14);
    std::vector<int> coords(8);
    for (auto &v : coords) {
        v = static_cast<int>(rng.next_below(2));
    }
    Codeword clean = encode(msg(2, coords));
    NoiseChannelSpec spec;
    spec.model = NoiseChannelSpec::Model::WorstCaseFraction;
    spec.delta = 0.25;
    int hits = 0;
    const int runs = 50;
    for (int r = 0; r < runs; r++) {
        RandomSource run_rng = rng.derive(r);
        Codeword c = corrupt(clean, spec, run_rng);
        auto list = list_decode(c, 0.25, run_rng);
        for (const auto &m : list) {
            if (m.coords == coords) {
                hits++;
                break;
            }
        }
    }
    CHECK(hits >= 45);  // >= 90%
}

TEST_CASE("expanded QNC-style decoder at k=2 via the primitive layer") {
    // uniform superposition, per-index conditional phase flips realized by
    // an Equal-marked ancilla and a Z, inverse Hadamard layer
    RandomSource rng(15);
    Codeword c = encode(msg(2, {0, 1}));
    c.values[3] ^= 1;
    std::vector<double> probs = decode_distribution(c);
    QuantumState st;
    auto q = st.alloc(3);  // 2 index qubits + 1 phase ancilla
    std::vector<QubitId> reg = {q[0], q[1]};
    st.apply(gate(GateKind::H, {q[0]}));
    st.apply(gate(GateKind::H, {q[1]}));
    MeasureDriver d = MeasureDriver::sampling(rng);
    for (uint64_t y = 0; y < 4; y++) {
        if (c.values[y]) {
            equal_gate(st, reg, y, q[2], PrimitiveMode::Expanded, d);
            st.apply(gate(GateKind::Z, {q[2]}));
            equal_gate(st, reg, y, q[2], PrimitiveMode::Expanded, d);
        }
    }
    st.apply(gate(GateKind::H, {q[0]}));
    st.apply(gate(GateKind::H, {q[1]}));
    for (uint64_t z = 0; z < 4; z++) {
        CHECK(st.basis_prob(reg, z) == doctest::Approx(probs[z]).epsilon(1e-8));
    }
}

TEST_CASE("codeword JSON round trip") {
    Codeword c = encode(msg(2, {1, 0, 1}));
    Codeword back = Codeword::from_json(c.to_json());
    CHECK(back.values == c.values);
    CHECK(back.p == 2);
    CHECK(back.k == 3);
}
