#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "laqcc/errors.hpp"
#include "laqcc/fourier.hpp"

using namespace laqcc;

namespace {

PhaseFunction random_unit_function(int p, int n, RandomSource &rng) {
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
    return f;
}

size_t pack_digits(const std::vector<int> &d, int p) {
    size_t v = 0, mul = 1;
    for (int x : d) {
        v += static_cast<size_t>(((x % p) + p) % p) * mul;
        mul *= static_cast<size_t>(p);
    }
    return v;
}

/// (M + M^T) h over F_p.
std::vector<int> symmetrized_apply(const QuadraticPhaseParams &q, const std::vector<int> &h) {
    std::vector<int> out(q.n, 0);
    for (int i = 0; i < q.n; i++) {
        long acc = 0;
        for (int j = 0; j < q.n; j++) {
            acc += static_cast<long>(q.M[i][j] + q.M[j][i]) * h[j];
        }
        out[i] = static_cast<int>(acc % q.p);
    }
    return out;
}

}  // namespace

TEST_CASE("fourier of the constant function is a delta at 0") {
    PhaseFunction f;
    f.p = 2;
    f.n = 3;
    f.table.assign(8, 1.0);
    FourierSpectrum s = fourier(f);
    CHECK(std::abs(s.coeff[0] - std::complex<double>(1.0, 0.0)) < 1e-12);
    for (size_t i = 1; i < 8; i++) {
        CHECK(std::abs(s.coeff[i]) < 1e-12);
    }
}

TEST_CASE("fourier of a linear phase is a delta at its vector") {
    for (int p : {2, 3}) {
        std::vector<int> a = {1, p - 1, 0};
        PhaseFunction f;
        f.p = p;
        f.n = 3;
        size_t sz = static_cast<size_t>(p) * p * p;
        f.table.resize(sz);
        for (size_t x = 0; x < sz; x++) {
            size_t xx = x;
            long ip = 0;
            for (int i = 0; i < 3; i++) {
                ip += static_cast<long>(xx % p) * a[i];
                xx /= p;
            }
            f.table[x] = std::polar(1.0, 2.0 * M_PI * (ip % p) / p);
        }
        FourierSpectrum s = fourier(f);
        CHECK(std::abs(s.coeff[pack_digits(a, p)] - std::complex<double>(1, 0)) < 1e-10);
    }
}

TEST_CASE("inverse transform undoes the forward transform") {
    RandomSource rng(1);
    for (int p : {2, 3, 5}) {
        PhaseFunction f = random_unit_function(p, 3, rng);
        PhaseFunction back = inverse_fourier(fourier(f));
        for (size_t i = 0; i < f.table.size(); i++) {
            CHECK(std::abs(back.table[i] - f.table[i]) < 1e-10);
        }
    }
}

TEST_CASE("Parseval holds on 50 random functions") {
    RandomSource rng(2);
    for (int rep = 0; rep < 50; rep++) {
        int p = rep % 2 == 0 ? 2 : 3;
        PhaseFunction f = random_unit_function(p, 3, rng);
        FourierSpectrum s = fourier(f);
        double lhs = 0.0;
        for (const auto &v : f.table) {
            lhs += std::norm(v);
        }
        lhs /= static_cast<double>(f.table.size());
        double rhs = 0.0;
        for (const auto &c : s.coeff) {
            rhs += std::norm(c);
        }
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("U1 of a nontrivial character vanishes; constants have norm 1") {
    PhaseFunction f;
    f.p = 3;
    f.n = 1;
    f.table = {std::polar(1.0, 0.0), std::polar(1.0, 2 * M_PI / 3),
               std::polar(1.0, 4 * M_PI / 3)};
    CHECK(gowers_norm(f, 1) == doctest::Approx(0.0).epsilon(1e-10));
    PhaseFunction one;
    one.p = 2;
    one.n = 2;
    one.table.assign(4, 1.0);
    for (int d : {1, 2, 3}) {
        CHECK(gowers_norm(one, d) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("U2 equals the fourth moment of the spectrum") {
    RandomSource rng(3);
    for (int rep = 0; rep < 50; rep++) {
        int p = rep % 2 == 0 ? 2 : 3;
        PhaseFunction f = random_unit_function(p, rep % 3 + 2, rng);
        FourierSpectrum s = fourier(f);
        double m4 = 0.0;
        for (const auto &c : s.coeff) {
            m4 += std::norm(c) * std::norm(c);
        }
        CHECK(std::abs(gowers_norm(f, 2) - std::pow(m4, 0.25)) < 1e-10);
    }
}

TEST_CASE("nesting U1 <= U2 <= U3 on 100 random unit functions") {
    RandomSource rng(4);
    for (int rep = 0; rep < 100; rep++) {
        int p = rep % 2 == 0 ? 2 : 3;
        PhaseFunction f = random_unit_function(p, 2, rng);
        double u1 = gowers_norm(f, 1);
        double u2 = gowers_norm(f, 2);
        double u3 = gowers_norm(f, 3);
        CHECK(u1 <= u2 + 1e-9);
        CHECK(u2 <= u3 + 1e-9);
    }
}

TEST_CASE("degree-d phases trivialize in U^{d+1}") {
    RandomSource rng(5);
    // linear phase: U2 = 1
    QuadraticPhaseParams lin;
    lin.p = 2;
    lin.n = 4;
    lin.M.assign(4, std::vector<int>(4, 0));
    lin.b = {1, 0, 1, 1};
    lin.c = 1;
    CHECK(gowers_norm(quadratic_phase(lin), 2) == doctest::Approx(1.0).epsilon(1e-9));
    // quadratic phase: U3 = 1
    for (int p : {2, 3}) {
        QuadraticPhaseParams q = random_quadratic(p, 3, rng);
        CHECK(gowers_norm(quadratic_phase(q), 3) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("fourier sampling of a quadratic is a delta at (M + M^T) h") {
    RandomSource rng(6);
    for (int p : {2, 3}) {
        QuadraticPhaseParams q = random_quadratic(p, 4, rng);
        PhaseFunction f = quadratic_phase(q);
        for (int rep = 0; rep < 5; rep++) {
            std::vector<int> h(4);
            for (auto &v : h) {
                v = static_cast<int>(rng.next_below(p));
            }
            std::vector<double> dist = fourier_sample_dist(f, h);
            double sum = 0.0;
            for (double pr : dist) {
                sum += pr;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
            size_t peak = pack_digits(symmetrized_apply(q, h), p);
            CHECK(dist[peak] >= 1.0 - 1e-10);
        }
        // h = 0: derivative is constant, delta at 0
        std::vector<double> dist0 = fourier_sample_dist(f, std::vector<int>(4, 0));
        CHECK(dist0[0] >= 1.0 - 1e-10);
    }
}

TEST_CASE("fourier sampling validates unit modulus") {
    PhaseFunction f;
    f.p = 2;
    f.n = 1;
    f.table = {0.5, 1.0};
    CHECK_THROWS_AS(fourier_sample_dist(f, {0}), ValidationError);
}

TEST_CASE("fourier sampling sums to 1 on corrupted quadratics") {
    RandomSource rng(7);
    QuadraticPhaseParams q = random_quadratic(2, 5, rng);
    PhaseFunction f = quadratic_phase(q);
    for (int i = 0; i < 6; i++) {
        f.table[rng.next_below(f.table.size())] *= -1.0;
    }
    std::vector<int> h = {1, 0, 0, 1, 0};
    std::vector<double> dist = fourier_sample_dist(f, h);
    double sum = 0.0;
    for (double pr : dist) {
        sum += pr;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("noiseless learner: trivial function") {
    QuadraticPhaseParams zero;
    zero.p = 2;
    zero.n = 3;
    zero.M.assign(3, std::vector<int>(3, 0));
    zero.b.assign(3, 0);
    zero.c = 0;
    CountingOracle oracle{quadratic_phase(zero)};
    QuadraticPhaseParams got = learn_quadratic_noiseless(oracle);
    CHECK(got == zero);
}

TEST_CASE("noiseless learner is exact on 100/100 seeds at p=2 n=8") {
    for (uint64_t seed = 0; seed < 100; seed++) {
        RandomSource rng(seed);
        QuadraticPhaseParams planted = random_quadratic(2, 8, rng);
        CountingOracle oracle{quadratic_phase(planted)};
        QuadraticPhaseParams got = learn_quadratic_noiseless(oracle);
        CHECK(got == planted);
        CHECK(oracle.queries == 2 * 8 + 2);
    }
}

TEST_CASE("noiseless learner is exact at p=3 n=4 with 3n+2 queries") {
    for (uint64_t seed = 0; seed < 100; seed++) {
        RandomSource rng(1000 + seed);
        QuadraticPhaseParams planted = random_quadratic(3, 4, rng);
        CountingOracle oracle{quadratic_phase(planted)};
        QuadraticPhaseParams got = learn_quadratic_noiseless(oracle);
        CHECK(got == planted);
        CHECK(oracle.queries == 3 * 4 + 2);
    }
}

TEST_CASE("noiseless learner rejects non-quadratic oracles") {
    RandomSource rng(8);
    CountingOracle oracle{random_unit_function(2, 4, rng)};
    CHECK_THROWS_AS(learn_quadratic_noiseless(oracle), ModelError);
}

TEST_CASE("unique-radius learner equals the noiseless learner at zero corruption") {
    RandomSource rng(9);
    QuadraticPhaseParams planted = random_quadratic(2, 5, rng);
    CountingOracle oracle{quadratic_phase(planted)};
    QuadraticPhaseParams got = learn_quadratic_unique_radius(oracle, 0.3, rng);
    CHECK(got == planted);
}

TEST_CASE("unique-radius learner: >= 90% recovery at n=8, eps=0.3, corruption 0.05") {
    int hits = 0;
    const int seeds = 50;
    for (int seed = 0; seed < seeds; seed++) {
        RandomSource rng(5000 + seed);
        QuadraticPhaseParams planted = random_quadratic(2, 8, rng);
        PhaseFunction f = quadratic_phase(planted);
        size_t flips = static_cast<size_t>(0.05 * f.table.size());
        std::set<size_t> chosen;
        while (chosen.size() < flips) {
            chosen.insert(rng.next_below(f.table.size()));
        }
        for (size_t x : chosen) {
            f.table[x] *= -1.0;
        }
        CountingOracle oracle{f};
        QuadraticPhaseParams got = learn_quadratic_unique_radius(oracle, 0.3, rng);
        hits += got == planted;
    }
    CHECK(hits >= 45);
}

TEST_CASE("per-draw success probability under the distance promise is >= 1/2 + eps") {
    const double eps = 0.3;
    const int n = 8;
    const double radius = 0.25 - 0.25 * std::sqrt(0.5 + eps);
    RandomSource rng(10);
    for (int rep = 0; rep < 10; rep++) {
        QuadraticPhaseParams planted = random_quadratic(2, n, rng);
        PhaseFunction f = quadratic_phase(planted);
        size_t flips = static_cast<size_t>(radius * f.table.size());
        std::set<size_t> chosen;
        while (chosen.size() < flips) {
            chosen.insert(rng.next_below(f.table.size()));
        }
        for (size_t x : chosen) {
            f.table[x] *= -1.0;
        }
        for (int i = 0; i < n; i++) {
            std::vector<int> h(n, 0);
            h[i] = 1;
            std::vector<double> dist = fourier_sample_dist(f, h);
            size_t peak = pack_digits(symmetrized_apply(planted, h), 2);
            CHECK(dist[peak] >= 0.5 + eps - 1e-9);
        }
    }
}

TEST_CASE("energy of a full subgroup is |A|^3") {
    // F_2^3 x {0} inside F_2^4
    std::vector<uint64_t> sub;
    for (uint64_t v = 0; v < 8; v++) {
        sub.push_back(v);
    }
    CHECK(energy(2, 4, sub) == 8ull * 8 * 8);
    CHECK(energy(2, 4, {5}) == 1);
}

TEST_CASE("energy matches the brute-force quadruple count") {
    RandomSource rng(11);
    std::set<uint64_t> set;
    while (set.size() < 20) {
        set.insert(rng.next_below(81));  // F_3^4
    }
    std::vector<uint64_t> a(set.begin(), set.end());
    uint64_t brute = 0;
    auto add3 = [](uint64_t x, uint64_t y) {
        uint64_t out = 0, mul = 1;
        for (int i = 0; i < 4; i++) {
            out += ((x % 3) + (y % 3)) % 3 * mul;
            mul *= 3;
            x /= 3;
            y /= 3;
        }
        return out;
    };
    for (uint64_t w : a) {
        for (uint64_t x : a) {
            for (uint64_t y : a) {
                for (uint64_t z : a) {
                    brute += add3(w, x) == add3(y, z);
                }
            }
        }
    }
    CHECK(energy(3, 4, a) == brute);
}

TEST_CASE("function file JSON round trip") {
    RandomSource rng(12);
    QuadraticPhaseParams q = random_quadratic(3, 2, rng);
    PhaseFunction f = quadratic_phase(q);
    PhaseFunction back = PhaseFunction::from_json(f.to_json());
    for (size_t i = 0; i < f.table.size(); i++) {
        CHECK(std::abs(back.table[i] - f.table[i]) < 1e-9);
    }
}
