#include "laqcc/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "laqcc/errors.hpp"

namespace laqcc {

namespace {

size_t pow_sz(int p, int n) {
    size_t r = 1;
    for (int i = 0; i < n; i++) {
        r *= static_cast<size_t>(p);
    }
    return r;
}

/// In-place unnormalized character transform with kernel w^{sign * <x,y>}.
void transform(std::vector<std::complex<double>> &f, int p, int n, int sign) {
    const size_t sz = f.size();
    const size_t up = static_cast<size_t>(p);
    std::vector<std::complex<double>> w(up * up);
    for (size_t a = 0; a < up; a++) {
        for (size_t b = 0; b < up; b++) {
            w[a * up + b] =
                std::polar(1.0, sign * 2.0 * M_PI * static_cast<double>(a * b) / p);
        }
    }
    size_t stride = 1;
    std::vector<std::complex<double>> tmp(up);
    for (int dim = 0; dim < n; dim++) {
        for (size_t block = 0; block < sz; block += stride * up) {
            for (size_t off = 0; off < stride; off++) {
                for (size_t a = 0; a < up; a++) {
                    std::complex<double> acc = 0.0;
                    for (size_t b = 0; b < up; b++) {
                        acc += w[a * up + b] * f[block + off + b * stride];
                    }
                    tmp[a] = acc;
                }
                for (size_t a = 0; a < up; a++) {
                    f[block + off + a * stride] = tmp[a];
                }
            }
        }
        stride *= up;
    }
}

size_t add_index(size_t x, size_t h, int p, int n) {
    size_t out = 0, mul = 1;
    for (int i = 0; i < n; i++) {
        size_t d = (x % p + h % p) % static_cast<size_t>(p);
        out += d * mul;
        mul *= static_cast<size_t>(p);
        x /= static_cast<size_t>(p);
        h /= static_cast<size_t>(p);
    }
    return out;
}

size_t pack(const std::vector<int> &digits, int p) {
    size_t out = 0, mul = 1;
    for (int d : digits) {
        out += static_cast<size_t>(((d % p) + p) % p) * mul;
        mul *= static_cast<size_t>(p);
    }
    return out;
}

std::vector<int> unpack(size_t v, int p, int n) {
    std::vector<int> d(n);
    for (int i = 0; i < n; i++) {
        d[i] = static_cast<int>(v % p);
        v /= static_cast<size_t>(p);
    }
    return d;
}

size_t argmax(const std::vector<double> &v) {
    return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

bool PhaseFunction::unit_modulus(double tol) const {
    for (const auto &v : table) {
        if (std::abs(std::abs(v) - 1.0) > tol) {
            return false;
        }
    }
    return true;
}

PhaseFunction quadratic_phase(const QuadraticPhaseParams &params) {
    PhaseFunction f;
    f.p = params.p;
    f.n = params.n;
    f.table.resize(pow_sz(params.p, params.n));
    for (size_t xi = 0; xi < f.table.size(); xi++) {
        std::vector<int> x = unpack(xi, params.p, params.n);
        long acc = params.c;
        for (int i = 0; i < params.n; i++) {
            acc += static_cast<long>(params.b[i]) * x[i];
            for (int j = 0; j < params.n; j++) {
                acc += static_cast<long>(params.M[i][j]) * x[i] * x[j];
            }
        }
        f.table[xi] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(acc % params.p) / params.p);
    }
    return f;
}

QuadraticPhaseParams random_quadratic(int p, int n, RandomSource &rng) {
    QuadraticPhaseParams q;
    q.p = p;
    q.n = n;
    q.M.assign(n, std::vector<int>(n, 0));
    q.b.assign(n, 0);
    for (int i = 0; i < n; i++) {
        for (int j = i + (p == 2 ? 1 : 0); j < n; j++) {
            q.M[i][j] = static_cast<int>(rng.next_below(p));
        }
        q.b[i] = static_cast<int>(rng.next_below(p));
    }
    q.c = static_cast<int>(rng.next_below(p));
    return q;
}

FourierSpectrum fourier(const PhaseFunction &f) {
    if (f.table.size() > (size_t{1} << 24)) {
        throw CapacityError("fourier: table limited to 2^24 entries");
    }
    FourierSpectrum s;
    s.p = f.p;
    s.n = f.n;
    s.coeff = f.table;
    transform(s.coeff, f.p, f.n, -1);
    const double inv = 1.0 / static_cast<double>(f.table.size());
    for (auto &c : s.coeff) {
        c *= inv;
    }
    return s;
}

PhaseFunction inverse_fourier(const FourierSpectrum &s) {
    PhaseFunction f;
    f.p = s.p;
    f.n = s.n;
    f.table = s.coeff;
    transform(f.table, s.p, s.n, +1);
    return f;
}

PhaseFunction derivative(const PhaseFunction &f, const std::vector<int> &h) {
    PhaseFunction g;
    g.p = f.p;
    g.n = f.n;
    g.table.resize(f.table.size());
    size_t hp = pack(h, f.p);
    for (size_t x = 0; x < f.table.size(); x++) {
        g.table[x] = f.table[add_index(x, hp, f.p, f.n)] * std::conj(f.table[x]);
    }
    return g;
}

double gowers_norm(const PhaseFunction &f, int d) {
    const size_t sz = f.table.size();
    if (d == 1) {
        std::complex<double> mean = 0.0;
        for (const auto &v : f.table) {
            mean += v;
        }
        return std::abs(mean) / static_cast<double>(sz);
    }
    if (d == 2) {
        // ||f||_{U2}^4 = E_h ||D_h f||_{U1}^2
        double acc = 0.0;
        for (size_t h = 0; h < sz; h++) {
            std::complex<double> mean = 0.0;
            for (size_t x = 0; x < sz; x++) {
                mean += f.table[add_index(x, h, f.p, f.n)] * std::conj(f.table[x]);
            }
            acc += std::norm(mean) / static_cast<double>(sz * sz);
        }
        return std::pow(acc / static_cast<double>(sz), 0.25);
    }
    if (d == 3) {
        if (sz > (size_t{1} << 16)) {
            throw CapacityError("gowers_norm: U^3 limited to p^n <= 2^16");
        }
        // ||f||_{U3}^8 = E_h ||D_h f||_{U2}^4 with the inner norms from
        // exact spectra: ||g||_{U2}^4 = sum_a |g_hat(a)|^4.
        double acc = 0.0;
        for (size_t h = 0; h < sz; h++) {
            std::vector<int> hd = unpack(h, f.p, f.n);
            FourierSpectrum s = fourier(derivative(f, hd));
            double u2_4 = 0.0;
            for (const auto &c : s.coeff) {
                u2_4 += std::norm(c) * std::norm(c);
            }
            acc += u2_4;
        }
        return std::pow(acc / static_cast<double>(sz), 0.125);
    }
    throw ValidationError("gowers_norm: d must be 1, 2 or 3");
}

std::vector<double> fourier_sample_dist(const PhaseFunction &f, const std::vector<int> &h) {
    if (!f.unit_modulus()) {
        throw ValidationError("fourier_sample_dist: table must have unit modulus");
    }
    FourierSpectrum s = fourier(derivative(f, h));
    std::vector<double> probs(s.coeff.size());
    for (size_t a = 0; a < probs.size(); a++) {
        probs[a] = std::norm(s.coeff[a]);
    }
    return probs;
}

std::vector<double> CountingOracle::sample_dist(const std::vector<int> &h) {
    queries += f.p;
    return fourier_sample_dist(f, h);
}

std::vector<double> CountingOracle::bv_dist(const std::vector<std::complex<double>> &extra) {
    queries += 1;
    PhaseFunction g = f;
    for (size_t i = 0; i < g.table.size(); i++) {
        g.table[i] *= extra[i];
    }
    FourierSpectrum s = fourier(g);
    std::vector<double> probs(s.coeff.size());
    for (size_t a = 0; a < probs.size(); a++) {
        probs[a] = std::norm(s.coeff[a]);
    }
    return probs;
}

std::complex<double> CountingOracle::eval(size_t x) {
    queries += 1;
    return f.table.at(x);
}

namespace {

/// conj of the pure quadratic part w^{<x,Mx>}, as a table multiplier.
std::vector<std::complex<double>> conj_quadratic_part(const QuadraticPhaseParams &q) {
    QuadraticPhaseParams pure = q;
    pure.b.assign(q.n, 0);
    pure.c = 0;
    PhaseFunction g = quadratic_phase(pure);
    std::vector<std::complex<double>> out(g.table.size());
    for (size_t i = 0; i < out.size(); i++) {
        out[i] = std::conj(g.table[i]);
    }
    return out;
}

QuadraticPhaseParams matrix_from_columns(int p, int n,
                                         const std::vector<std::vector<int>> &columns) {
    // columns[i] = (M + M^T) e_i. Upper-triangular normal form: for p = 2
    // the diagonal vanishes in M + M^T and is absorbed into b; for odd p the
    // diagonal of M is S_ii / 2.
    QuadraticPhaseParams q;
    q.p = p;
    q.n = n;
    q.M.assign(n, std::vector<int>(n, 0));
    q.b.assign(n, 0);
    const int inv2 = p == 2 ? 0 : (p + 1) / 2;
    for (int i = 0; i < n; i++) {
        for (int j = i; j < n; j++) {
            int s_ij = columns[j][i];  // S[i][j], S symmetric
            if (i == j) {
                q.M[i][i] = p == 2 ? 0 : (s_ij * inv2) % p;
            } else {
                q.M[i][j] = s_ij;
            }
        }
    }
    return q;
}

int phase_to_scalar(std::complex<double> v, int p) {
    double turns = std::arg(v) / (2.0 * M_PI);
    long c = std::lround(turns * p);
    return static_cast<int>(((c % p) + p) % p);
}

}  // namespace

QuadraticPhaseParams learn_quadratic_noiseless(CountingOracle &oracle) {
    const int p = oracle.f.p, n = oracle.f.n;
    std::vector<std::vector<int>> columns(n);
    for (int i = 0; i < n; i++) {
        std::vector<int> h(n, 0);
        h[i] = 1;
        std::vector<double> dist = oracle.sample_dist(h);
        size_t a = argmax(dist);
        if (dist[a] < 1.0 - 1e-7) {
            throw ModelError("learn_quadratic_noiseless: sampling distribution is not a "
                             "point mass; oracle is not an exact quadratic phase");
        }
        columns[i] = unpack(a, p, n);
    }
    QuadraticPhaseParams q = matrix_from_columns(p, n, columns);
    std::vector<double> bdist = oracle.bv_dist(conj_quadratic_part(q));
    size_t b = argmax(bdist);
    if (bdist[b] < 1.0 - 1e-7) {
        throw ModelError("learn_quadratic_noiseless: residual spectrum is not a point mass");
    }
    q.b = unpack(b, p, n);
    q.c = phase_to_scalar(oracle.eval(0), p);
    return q;
}

QuadraticPhaseParams learn_quadratic_unique_radius(CountingOracle &oracle, double eps,
                                                   RandomSource &rng) {
    if (oracle.f.p != 2) {
        throw ValidationError("learn_quadratic_unique_radius: p = 2 only");
    }
    const int n = oracle.f.n;
    const size_t m = static_cast<size_t>(
        std::ceil(std::log2(std::max(2, n)) / (eps * eps)));

    auto draw = [&rng](const std::vector<double> &dist) {
        double u = rng.next_double(), acc = 0.0;
        for (size_t a = 0; a < dist.size(); a++) {
            acc += dist[a];
            if (u < acc) {
                return a;
            }
        }
        return dist.size() - 1;
    };
    auto majority = [&](const std::function<std::vector<double>()> &query) {
        std::unordered_map<size_t, size_t> counts;
        std::vector<double> dist = query();
        for (size_t i = 0; i < m; i++) {
            counts[draw(dist)]++;
        }
        for (;;) {
            size_t best = 0, best_count = 0;
            bool tie = false;
            for (const auto &[val, cnt] : counts) {
                if (cnt > best_count) {
                    best = val;
                    best_count = cnt;
                    tie = false;
                } else if (cnt == best_count) {
                    tie = true;
                }
            }
            if (!tie) {
                return best;
            }
            counts[draw(dist)]++;  // tie-break with one extra draw
        }
    };

    std::vector<std::vector<int>> columns(n);
    for (int i = 0; i < n; i++) {
        std::vector<int> h(n, 0);
        h[i] = 1;
        // m sampler invocations at p queries each
        oracle.queries += static_cast<int64_t>(m - 1) * oracle.f.p;
        size_t a = majority([&] { return oracle.sample_dist(h); });
        columns[i] = unpack(a, 2, n);
    }
    QuadraticPhaseParams q = matrix_from_columns(2, n, columns);
    auto extra = conj_quadratic_part(q);
    oracle.queries += static_cast<int64_t>(m - 1);
    size_t b = majority([&] { return oracle.bv_dist(extra); });
    q.b = unpack(b, 2, n);

    // c maximizes Re E_x f(x) w^{-<x,Mx> - <x,b> - c} over the p choices.
    QuadraticPhaseParams mb = q;
    mb.c = 0;
    PhaseFunction ref = quadratic_phase(mb);
    std::complex<double> corr = 0.0;
    for (size_t x = 0; x < oracle.f.table.size(); x++) {
        corr += oracle.f.table[x] * std::conj(ref.table[x]);
    }
    double best = -1e300;
    for (int c = 0; c < 2; c++) {
        double val = ((corr * std::polar(1.0, -2.0 * M_PI * c / 2.0)).real());
        if (val > best) {
            best = val;
            q.c = c;
        }
    }
    return q;
}

uint64_t energy(int p, int n, const std::vector<uint64_t> &elements) {
    if (elements.size() > (size_t{1} << 12)) {
        throw CapacityError("energy: set size limited to 2^12");
    }
    std::unordered_map<uint64_t, uint64_t> sums;
    for (uint64_t a : elements) {
        for (uint64_t b : elements) {
            sums[add_index(a, b, p, n)]++;
        }
    }
    uint64_t e = 0;
    for (const auto &[s, r] : sums) {
        e += r * r;
    }
    return e;
}

std::string PhaseFunction::to_json() const {
    nlohmann::ordered_json j;
    j["p"] = p;
    j["n"] = n;
    std::vector<int> phases(table.size());
    for (size_t i = 0; i < table.size(); i++) {
        double turns = std::arg(table[i]) / (2.0 * M_PI);
        long c = std::lround(turns * p);
        phases[i] = static_cast<int>(((c % p) + p) % p);
        if (std::abs(table[i] - std::polar(1.0, 2.0 * M_PI * phases[i] / p)) > 1e-9) {
            throw ValidationError("to_json: table is not a polynomial phase");
        }
    }
    j["phase_table"] = phases;
    return j.dump(2);
}

PhaseFunction PhaseFunction::from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    PhaseFunction f;
    f.p = j.at("p").get<int>();
    f.n = j.at("n").get<int>();
    auto phases = j.at("phase_table").get<std::vector<int>>();
    if (phases.size() != pow_sz(f.p, f.n)) {
        throw ValidationError("function file: phase_table must have p^n entries");
    }
    f.table.resize(phases.size());
    for (size_t i = 0; i < phases.size(); i++) {
        f.table[i] = std::polar(1.0, 2.0 * M_PI * (phases[i] % f.p) / f.p);
    }
    return f;
}

}  // namespace laqcc
