#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "laqcc/errors.hpp"
#include "laqcc/primitives.hpp"

using namespace laqcc;

namespace {

QuantumState ghz_reference(uint32_t n) {
    QuantumState st;
    auto q = st.alloc(n);
    st.apply(gate(GateKind::H, {q[0]}));
    for (uint32_t i = 1; i < n; i++) {
        st.apply(gate(GateKind::CNOT, {q[i - 1], q[i]}));
    }
    return st;
}

/// Random pure state on `n` fresh qubits; seeded.
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

}  // namespace

TEST_CASE("ghz_laqcc n=1 is |+>") {
    MeasureDriver d;
    QuantumState st = ghz_laqcc(1, PrimitiveMode::Expanded, d);
    CHECK(QuantumState::fidelity(st, ghz_reference(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ghz_laqcc expanded, forced outcomes (0,0): no corrections needed") {
    MeasureDriver d = MeasureDriver::forcing({0, 0});
    QuantumState st = ghz_laqcc(3, PrimitiveMode::Expanded, d);
    CHECK(st.width() == 3);
    CHECK(QuantumState::fidelity(st, ghz_reference(3)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ghz_laqcc expanded, forced outcomes (1,0): X corrections on qubits 2 and 3") {
    // prefix parities (1, 1) flip logical qubits 2 and 3; still an exact GHZ
    MeasureDriver d = MeasureDriver::forcing({1, 0});
    QuantumState st = ghz_laqcc(3, PrimitiveMode::Expanded, d);
    CHECK(QuantumState::fidelity(st, ghz_reference(3)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ghz_laqcc is deterministic over every measurement branch") {
    for (uint32_t n = 2; n <= 6; n++) {
        QuantumState ref = ghz_reference(n);
        double total = for_each_branch(static_cast<int>(n - 1), [&](MeasureDriver &d) {
            QuantumState st = ghz_laqcc(n, PrimitiveMode::Expanded, d);
            CHECK(QuantumState::fidelity(st, ref) >= 1.0 - 1e-9);
            return d.branch_probability;
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("ghz protocol peak width is 2n-1, final width n") {
    MeasureDriver d = MeasureDriver::forcing(std::vector<int>(5, 0));
    QuantumState st = ghz_laqcc(6, PrimitiveMode::Expanded, d);
    CHECK(st.width() == 6);
    CHECK(ghz_laqcc_program(6).cost().peak_width == 11);
}

TEST_CASE("fanout copies a classical control onto all targets") {
    QuantumState st;
    auto q = st.alloc(4);
    st.apply(gate(GateKind::X, {q[0]}));
    MeasureDriver d;
    fanout(st, q[0], {q[1], q[2], q[3]}, PrimitiveMode::Ideal, d);
    CHECK(st.basis_prob(q, 0b1111) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fanout from |+> control builds a GHZ state") {
    QuantumState st;
    auto q = st.alloc(3);
    st.apply(gate(GateKind::H, {q[0]}));
    MeasureDriver d;
    fanout(st, q[0], {q[1], q[2]}, PrimitiveMode::Ideal, d);
    CHECK(QuantumState::fidelity(st, ghz_reference(3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fanout rejects overlapping control and targets") {
    QuantumState st;
    auto q = st.alloc(2);
    MeasureDriver d;
    CHECK_THROWS_AS(fanout(st, q[0], {q[0], q[1]}, PrimitiveMode::Ideal, d), ValidationError);
}

TEST_CASE("expanded fanout equals the ideal unitary on every branch") {
    RandomSource rng(17);
    for (uint32_t targets = 1; targets <= 3; targets++) {
        const uint32_t n = targets + 1;
        const int branches = static_cast<int>(2 * targets + 1);
        for (int rep = 0; rep < 4; rep++) {
            RandomSource state_rng = rng.derive(targets * 10 + rep);
            QuantumState input = random_state(n, state_rng);
            auto q = input.live_qubits();
            QuantumState ideal = input;
            MeasureDriver d0;
            fanout(ideal, q[0], {q.begin() + 1, q.end()}, PrimitiveMode::Ideal, d0);
            double total = for_each_branch(branches, [&](MeasureDriver &d) {
                QuantumState st = input;
                fanout(st, q[0], {q.begin() + 1, q.end()}, PrimitiveMode::Expanded, d);
                CHECK(st.width() == n);  // no net ancillas
                CHECK(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9);
                return d.branch_probability;
            });
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("fanout expanded program has constant quantum depth") {
    int64_t depth = fanout_program(2).cost().quantum_depth;
    for (uint32_t t = 1; t <= 9; t++) {
        CHECK(fanout_program(t).cost().quantum_depth == depth);
    }
}

TEST_CASE("fanout program run matches the primitive") {
    Program prog = fanout_program(2);
    const int branches = 2 + 1 + 2;  // cat measurements + d0 + X-basis
    QuantumState ideal;
    auto qi = ideal.alloc(3);
    ideal.apply(gate(GateKind::RY, {qi[0]}, {}, 1.1));
    MeasureDriver di;
    fanout(ideal, qi[0], {qi[1], qi[2]}, PrimitiveMode::Ideal, di);
    double total = for_each_branch(branches, [&](MeasureDriver &d) {
        QuantumState st;
        auto q = st.alloc(8);
        st.apply(gate(GateKind::RY, {q[0]}, {}, 1.1));
        prog.run(st, d);
        CHECK(st.width() == 3);
        CHECK(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9);
        return d.branch_probability;
    });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("parity gate truth table over all basis inputs") {
    for (PrimitiveMode mode : {PrimitiveMode::Ideal, PrimitiveMode::Expanded}) {
        for (uint64_t x = 0; x < 8; x++) {
            QuantumState st;
            auto q = st.alloc(4);
            for (int b = 0; b < 3; b++) {
                if ((x >> b) & 1) {
                    st.apply(gate(GateKind::X, {q[b]}));
                }
            }
            RandomSource rng(999 + x);
            MeasureDriver d = MeasureDriver::sampling(rng);
            parity_gate(st, {q[0], q[1], q[2]}, q[3], mode, d);
            int expected = __builtin_popcountll(x) & 1;
            uint64_t value = x | (static_cast<uint64_t>(expected) << 3);
            CHECK(st.basis_prob(q, value) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("expanded parity gate matches ideal on superpositions, all branches") {
    RandomSource rng(29);
    for (int rep = 0; rep < 3; rep++) {
        QuantumState input = random_state(4, rng);
        auto q = input.live_qubits();
        QuantumState ideal = input;
        MeasureDriver di;
        parity_gate(ideal, {q[0], q[1], q[2]}, q[3], PrimitiveMode::Ideal, di);
        // expanded fanout over 3 sources: 3 cat + 1 + 3 X-basis measurements
        double total = for_each_branch(7, [&](MeasureDriver &d) {
            QuantumState st = input;
            parity_gate(st, {q[0], q[1], q[2]}, q[3], PrimitiveMode::Expanded, d);
            CHECK(st.width() == 4);
            CHECK(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9);
            return d.branch_probability;
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("equal gate flips exactly the matching index") {
    QuantumState st;
    auto q = st.alloc(4);
    // register value 5
    st.apply(gate(GateKind::X, {q[0]}));
    st.apply(gate(GateKind::X, {q[2]}));
    MeasureDriver d;
    equal_gate(st, {q[0], q[1], q[2]}, 5, q[3], PrimitiveMode::Ideal, d);
    CHECK(st.basis_prob(q, 0b1101) == doctest::Approx(1.0).epsilon(1e-12));

    QuantumState st2;
    auto q2 = st2.alloc(2);
    equal_gate(st2, {q2[0]}, 0, q2[1], PrimitiveMode::Ideal, d);
    CHECK(st2.basis_prob(q2, 0b10) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(equal_gate(st2, {q2[0]}, 2, q2[1], PrimitiveMode::Ideal, d),
                    ValidationError);
}

TEST_CASE("equal gate acts linearly on superpositions") {
    QuantumState st;
    auto q = st.alloc(4);
    // (|3> + |5>)/sqrt(2) on the register
    st.apply(gate(GateKind::X, {q[0]}));
    st.apply(gate(GateKind::H, {q[1]}));
    st.apply(gate(GateKind::X, {q[2]}));
    st.apply(gate(GateKind::CNOT, {q[1], q[2]}));
    CHECK(st.basis_prob({q[0], q[1], q[2]}, 3) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(st.basis_prob({q[0], q[1], q[2]}, 5) == doctest::Approx(0.5).epsilon(1e-12));
    MeasureDriver d;
    equal_gate(st, {q[0], q[1], q[2]}, 3, q[3], PrimitiveMode::Ideal, d);
    CHECK(st.basis_prob(q, 3 | 8) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(st.basis_prob(q, 5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expanded equal gate matches ideal on every branch") {
    RandomSource rng(23);
    for (uint64_t i = 0; i < 4; i++) {
        QuantumState input = random_state(3, rng);
        auto q = input.live_qubits();
        QuantumState ideal = input;
        MeasureDriver di;
        equal_gate(ideal, {q[0], q[1]}, i, q[2], PrimitiveMode::Ideal, di);
        // expanded: exact_or over 2 inputs uses a GHZ_3 resource (2 cat
        // measurements), no other measurements
        double total = for_each_branch(2, [&](MeasureDriver &d) {
            QuantumState st = input;
            equal_gate(st, {q[0], q[1]}, i, q[2], PrimitiveMode::Expanded, d);
            CHECK(st.width() == 3);
            CHECK(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9);
            return d.branch_probability;
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("or_reduction on the all-zeros input leaves every output at |0>") {
    for (uint32_t n : {1u, 3u, 4u}) {
        QuantumState st;
        auto q = st.alloc(n);
        MeasureDriver d;
        auto outs = or_reduction(st, q, PrimitiveMode::Ideal, d);
        for (QubitId o : outs) {
            CHECK(st.prob_one(o) == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("or_reduction mu-state amplitudes at |x| = 2, n = 3") {
    QuantumState st;
    auto q = st.alloc(3);
    st.apply(gate(GateKind::X, {q[0]}));
    st.apply(gate(GateKind::X, {q[1]}));
    MeasureDriver d;
    auto outs = or_reduction(st, q, PrimitiveMode::Ideal, d);
    REQUIRE(outs.size() == 2);
    // phi_1 = pi: (1+e^{2 pi i})/2 = 1 -> |0>;  phi_2 = pi/2: (1+e^{i pi})/2 = 0 -> |1>
    CHECK(st.prob_one(outs[0]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(st.prob_one(outs[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("or_reduction mu amplitudes match the closed form for all weights") {
    const uint32_t n = 4;
    for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
        QuantumState st;
        auto q = st.alloc(n);
        for (uint32_t b = 0; b < n; b++) {
            if ((x >> b) & 1) {
                st.apply(gate(GateKind::X, {q[b]}));
            }
        }
        MeasureDriver d;
        auto outs = or_reduction(st, q, PrimitiveMode::Ideal, d);
        int c = __builtin_popcountll(x);
        for (size_t k = 1; k <= outs.size(); k++) {
            double phi = 2.0 * M_PI / std::pow(2.0, static_cast<double>(k));
            double amp0 = std::abs((1.0 + std::polar(1.0, phi * c)) / 2.0);
            CHECK(st.prob_one(outs[k - 1]) ==
                  doctest::Approx(1.0 - amp0 * amp0).epsilon(1e-9));
        }
    }
}

TEST_CASE("or_reduction expanded equals ideal on basis inputs") {
    const uint32_t n = 4;
    for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
        QuantumState ideal;
        auto qi = ideal.alloc(n);
        QuantumState expanded;
        auto qe = expanded.alloc(n);
        for (uint32_t b = 0; b < n; b++) {
            if ((x >> b) & 1) {
                ideal.apply(gate(GateKind::X, {qi[b]}));
                expanded.apply(gate(GateKind::X, {qe[b]}));
            }
        }
        MeasureDriver d1, d2;
        or_reduction(ideal, qi, PrimitiveMode::Ideal, d1);
        or_reduction(expanded, qe, PrimitiveMode::Expanded, d2);
        CHECK(QuantumState::fidelity(ideal, expanded) >= 1.0 - 1e-9);
    }
}

TEST_CASE("exact_or basics") {
    MeasureDriver d;
    QuantumState st;
    auto q = st.alloc(3);
    exact_or(st, {q[0], q[1]}, q[2], PrimitiveMode::Ideal, d);
    CHECK(st.basis_prob(q, 0) == doctest::Approx(1.0).epsilon(1e-12));  // |00> unchanged
    st.apply(gate(GateKind::X, {q[0]}));
    exact_or(st, {q[0], q[1]}, q[2], PrimitiveMode::Ideal, d);
    CHECK(st.basis_prob(q, 0b101) == doctest::Approx(1.0).epsilon(1e-12));  // |10> flips
}

TEST_CASE("expanded exact_or equals ideal on all basis inputs and superpositions") {
    const uint32_t t = 3;
    RandomSource rng(71);
    // all 8 basis inputs: forced over the GHZ_7 cat preparation (6 bits)
    for (uint64_t x = 0; x < 8; x++) {
        QuantumState input;
        auto q = input.alloc(t + 1);
        for (uint32_t b = 0; b < t; b++) {
            if ((x >> b) & 1) {
                input.apply(gate(GateKind::X, {q[b]}));
            }
        }
        QuantumState ideal = input;
        MeasureDriver di;
        exact_or(ideal, {q[0], q[1], q[2]}, q[3], PrimitiveMode::Ideal, di);
        double total = for_each_branch(6, [&](MeasureDriver &d) {
            QuantumState st = input;
            exact_or(st, {q[0], q[1], q[2]}, q[3], PrimitiveMode::Expanded, d);
            CHECK(st.width() == t + 1);
            CHECK(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9);
            return d.branch_probability;
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    // random superpositions, sampled branches
    for (int rep = 0; rep < 10; rep++) {
        QuantumState input = random_state(t + 1, rng);
        auto q = input.live_qubits();
        QuantumState ideal = input;
        MeasureDriver di;
        exact_or(ideal, {q[0], q[1], q[2]}, q[3], PrimitiveMode::Ideal, di);
        RandomSource branch_rng = rng.derive(rep);
        MeasureDriver d = MeasureDriver::sampling(branch_rng);
        QuantumState st = input;
        exact_or(st, {q[0], q[1], q[2]}, q[3], PrimitiveMode::Expanded, d);
        CHECK(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9);
    }
}

TEST_CASE("expanded exact_or at t=4 falls back to the ladder resource") {
    RandomSource rng(5);
    QuantumState input = random_state(5, rng);
    auto q = input.live_qubits();
    QuantumState ideal = input;
    MeasureDriver di;
    exact_or(ideal, {q[0], q[1], q[2], q[3]}, q[4], PrimitiveMode::Ideal, di);
    MeasureDriver d;
    QuantumState st = input;
    exact_or(st, {q[0], q[1], q[2], q[3]}, q[4], PrimitiveMode::Expanded, d);
    CHECK(QuantumState::fidelity(st, ideal) >= 1.0 - 1e-9);

    QuantumState wide;
    auto qw = wide.alloc(6);
    MeasureDriver dw;
    CHECK_THROWS_AS(
        exact_or(wide, {qw[0], qw[1], qw[2], qw[3], qw[4]}, qw[5], PrimitiveMode::Expanded, dw),
        CapacityError);
}

TEST_CASE("exact_or emitted program matches the ideal unitary") {
    for (uint32_t t : {1u, 2u}) {
        Program prog = exact_or_program(t);
        for (uint64_t x = 0; x < (uint64_t{1} << t); x++) {
            QuantumState st;
            uint32_t total = t + 2 + ((1u << t) - 1);
            auto q = st.alloc(total);
            for (uint32_t b = 0; b < t; b++) {
                if ((x >> b) & 1) {
                    st.apply(gate(GateKind::X, {q[b]}));
                }
            }
            MeasureDriver d;
            prog.run(st, d);
            uint64_t expect = x | (x != 0 ? (uint64_t{1} << t) : 0);
            CHECK(st.basis_prob(q, expect) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("parity program equals the parity truth table") {
    Program prog = parity_program(3);
    for (uint64_t x = 0; x < 8; x++) {
        QuantumState st;
        auto q = st.alloc(static_cast<uint32_t>(prog.qubits.size()));
        for (int b = 0; b < 3; b++) {
            if ((x >> b) & 1) {
                st.apply(gate(GateKind::X, {q[1 + b]}));
            }
        }
        RandomSource rng(50 + x);
        MeasureDriver d = MeasureDriver::sampling(rng);
        prog.run(st, d);
        uint64_t expect = (x << 1) | static_cast<uint64_t>(__builtin_popcountll(x) & 1);
        CHECK(st.basis_prob({st.live_qubits().begin(), st.live_qubits().begin() + 4}, expect) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("equal program flips only the matching index") {
    Program prog = equal_program(2, 2);
    for (uint64_t x = 0; x < 4; x++) {
        QuantumState st;
        auto q = st.alloc(static_cast<uint32_t>(prog.qubits.size()));
        for (int b = 0; b < 2; b++) {
            if ((x >> b) & 1) {
                st.apply(gate(GateKind::X, {q[b]}));
            }
        }
        MeasureDriver d;
        prog.run(st, d);
        uint64_t expect = x | (x == 2 ? 4u : 0u);
        CHECK(st.basis_prob({q[0], q[1], q[2]}, expect) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("or_reduction program matches the primitive") {
    const uint32_t n = 3;
    Program prog = or_reduction_program(n);
    for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
        QuantumState st;
        auto q = st.alloc(static_cast<uint32_t>(prog.qubits.size()));
        QuantumState ref;
        auto qr = ref.alloc(n);
        for (uint32_t b = 0; b < n; b++) {
            if ((x >> b) & 1) {
                st.apply(gate(GateKind::X, {q[b]}));
                ref.apply(gate(GateKind::X, {qr[b]}));
            }
        }
        MeasureDriver d, dr;
        prog.run(st, d);
        auto outs = or_reduction(ref, qr, PrimitiveMode::Ideal, dr);
        for (size_t k = 0; k < outs.size(); k++) {
            CHECK(st.prob_one(q[n + k]) ==
                  doctest::Approx(ref.prob_one(outs[k])).epsilon(1e-9));
        }
    }
}

TEST_CASE("exact amplification: rotation oracle gives unit mass") {
    CHECK(exact_amplify_rotation_mass(3, 4) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(exact_amplify_rotation_mass(5, 8) == doctest::Approx(1.0).epsilon(1e-10));
    for (uint64_t den : {4u, 8u, 16u, 32u, 64u}) {
        for (uint64_t num = 1; num <= den; num++) {
            CHECK(exact_amplify_rotation_mass(num, den) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("exact amplification on the engine hits unit good mass") {
    auto run = [](uint32_t n, uint64_t good_count) {
        QuantumState st;
        auto q = st.alloc(n);
        auto prep = [&q](QuantumState &s) {
            for (QubitId x : q) {
                s.apply(gate(GateKind::H, {x}));
            }
        };
        prep(st);
        exact_amplify(
            st, q, [good_count](uint64_t v) { return v < good_count; }, good_count,
            uint64_t{1} << n, prep, prep);
        double mass = 0.0;
        for (uint64_t v = 0; v < good_count; v++) {
            mass += st.basis_prob(q, v);
        }
        return mass;
    };
    CHECK(run(2, 3) == doctest::Approx(1.0).epsilon(1e-8));   // N=4, 3 good
    CHECK(run(3, 5) == doctest::Approx(1.0).epsilon(1e-8));   // N=8, 5 good
    CHECK(run(4, 11) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("good_fraction = 1 applies zero iterations") {
    QuantumState st;
    auto q = st.alloc(2);
    st.apply(gate(GateKind::RY, {q[0]}, {}, 0.4));
    QuantumState before = st;
    exact_amplify(
        st, q, [](uint64_t) { return true; }, 4, 4, [](QuantumState &) {},
        [](QuantumState &) {});
    CHECK(QuantumState::fidelity(st, before) == doctest::Approx(1.0));
    CHECK_THROWS_AS(exact_amplify(
                        st, q, [](uint64_t) { return false; }, 0, 4, [](QuantumState &) {},
                        [](QuantumState &) {}),
                    ValidationError);
}

TEST_CASE("exact_amplify inverse undoes the amplification") {
    QuantumState st;
    auto q = st.alloc(3);
    auto prep = [&q](QuantumState &s) {
        for (QubitId x : q) {
            s.apply(gate(GateKind::H, {x}));
        }
    };
    prep(st);
    QuantumState before = st;
    auto good = [](uint64_t v) { return v < 5; };
    exact_amplify(st, q, good, 5, 8, prep, prep, false);
    exact_amplify(st, q, good, 5, 8, prep, prep, true);
    CHECK(QuantumState::fidelity(st, before) == doctest::Approx(1.0).epsilon(1e-10));
}
