#include "laqcc/hadamard.hpp"

#include <cmath>
#include <complex>
#include <set>

#include <json.hpp>

#include "laqcc/errors.hpp"
#include "laqcc/state.hpp"

namespace laqcc {

namespace {

size_t pow_sz(int p, int k) {
    size_t r = 1;
    for (int i = 0; i < k; i++) {
        r *= static_cast<size_t>(p);
    }
    return r;
}

void check(const Codeword &c) {
    if (c.p < 2 || c.k < 1) {
        throw ValidationError("codeword: p >= 2 and k >= 1 required");
    }
    if (c.values.size() != pow_sz(c.p, c.k)) {
        throw ValidationError("codeword: length must be p^k");
    }
}

std::vector<int> digits_of(size_t idx, int p, int k) {
    std::vector<int> d(k);
    for (int i = 0; i < k; i++) {
        d[i] = static_cast<int>(idx % p);
        idx /= p;
    }
    return d;
}

}  // namespace

Codeword encode(const Message &x) {
    if (x.p < 2 || x.k < 1 || x.coords.size() != static_cast<size_t>(x.k)) {
        throw ValidationError("message: bad dimensions");
    }
    Codeword c;
    c.p = x.p;
    c.k = x.k;
    c.values.resize(pow_sz(x.p, x.k));
    for (size_t y = 0; y < c.values.size(); y++) {
        std::vector<int> yd = digits_of(y, x.p, x.k);
        long acc = 0;
        for (int i = 0; i < x.k; i++) {
            acc += static_cast<long>(x.coords[i]) * yd[i];
        }
        c.values[y] = static_cast<int>(acc % x.p);
    }
    return c;
}

Codeword corrupt(const Codeword &c, const NoiseChannelSpec &spec, RandomSource &rng) {
    check(c);
    Codeword out = c;
    if (spec.model == NoiseChannelSpec::Model::Symmetric) {
        for (auto &v : out.values) {
            if (rng.next_double() >= spec.rho) {
                v = static_cast<int>(rng.next_below(static_cast<uint64_t>(c.p)));
            }
        }
        return out;
    }
    size_t n = c.values.size();
    size_t budget = static_cast<size_t>(spec.delta * static_cast<double>(n));
    // Partial Fisher-Yates to pick `budget` distinct positions.
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; i++) {
        idx[i] = i;
    }
    for (size_t i = 0; i < budget; i++) {
        size_t j = i + rng.next_below(n - i);
        std::swap(idx[i], idx[j]);
        int shift = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(c.p - 1)));
        out.values[idx[i]] = (out.values[idx[i]] + shift) % c.p;
    }
    return out;
}

int hamming_distance(const Codeword &a, const Codeword &b) {
    if (a.values.size() != b.values.size()) {
        throw ValidationError("hamming_distance: length mismatch");
    }
    int d = 0;
    for (size_t i = 0; i < a.values.size(); i++) {
        d += a.values[i] != b.values[i];
    }
    return d;
}

std::vector<double> decode_distribution(const Codeword &c) {
    check(c);
    const size_t n = c.values.size();
    std::vector<std::complex<double>> f(n);
    if (c.p == 2) {
        for (size_t y = 0; y < n; y++) {
            f[y] = c.values[y] ? -1.0 : 1.0;
        }
        // in-place fast Walsh-Hadamard
        for (size_t len = 1; len < n; len <<= 1) {
            for (size_t i = 0; i < n; i += len << 1) {
                for (size_t j = i; j < i + len; j++) {
                    auto a = f[j], b = f[j + len];
                    f[j] = a + b;
                    f[j + len] = a - b;
                }
            }
        }
    } else {
        for (size_t y = 0; y < n; y++) {
            f[y] = std::polar(1.0, 2.0 * M_PI * c.values[y] / c.p);
        }
        // radix-p butterflies with the decoder kernel w^{-<y,z>}
        const size_t p = static_cast<size_t>(c.p);
        std::vector<std::complex<double>> w(p * p);
        for (size_t a = 0; a < p; a++) {
            for (size_t b = 0; b < p; b++) {
                w[a * p + b] = std::polar(1.0, -2.0 * M_PI * static_cast<double>(a * b) / c.p);
            }
        }
        size_t stride = 1;
        std::vector<std::complex<double>> tmp(p);
        for (int dim = 0; dim < c.k; dim++) {
            for (size_t block = 0; block < n; block += stride * p) {
                for (size_t off = 0; off < stride; off++) {
                    for (size_t a = 0; a < p; a++) {
                        std::complex<double> acc = 0.0;
                        for (size_t b = 0; b < p; b++) {
                            acc += w[a * p + b] * f[block + off + b * stride];
                        }
                        tmp[a] = acc;
                    }
                    for (size_t a = 0; a < p; a++) {
                        f[block + off + a * stride] = tmp[a];
                    }
                }
            }
            stride *= p;
        }
    }
    std::vector<double> probs(n);
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (size_t z = 0; z < n; z++) {
        probs[z] = std::norm(f[z]) * scale;
    }
    return probs;
}

std::vector<double> decode_distribution_bruteforce(const Codeword &c) {
    check(c);
    const size_t n = c.values.size();
    std::vector<double> probs(n);
    for (size_t z = 0; z < n; z++) {
        std::vector<int> zd = digits_of(z, c.p, c.k);
        std::complex<double> acc = 0.0;
        for (size_t y = 0; y < n; y++) {
            std::vector<int> yd = digits_of(y, c.p, c.k);
            long ip = 0;
            for (int i = 0; i < c.k; i++) {
                ip += static_cast<long>(yd[i]) * zd[i];
            }
            long phase = (c.values[y] - ip) % c.p;
            acc += std::polar(1.0, 2.0 * M_PI * static_cast<double>(phase) / c.p);
        }
        probs[z] = std::norm(acc) / (static_cast<double>(n) * static_cast<double>(n));
    }
    return probs;
}

Message decode_sample(const Codeword &c, RandomSource &rng) {
    std::vector<double> probs = decode_distribution(c);
    double u = rng.next_double();
    double acc = 0.0;
    size_t pick = probs.size() - 1;
    for (size_t z = 0; z < probs.size(); z++) {
        acc += probs[z];
        if (u < acc) {
            pick = z;
            break;
        }
    }
    Message m;
    m.p = c.p;
    m.k = c.k;
    m.coords = digits_of(pick, c.p, c.k);
    return m;
}

Message circuit_decode(const Codeword &c, RandomSource &rng) {
    check(c);
    if (c.p != 2) {
        throw ValidationError("circuit_decode: only p = 2 is supported");
    }
    if (c.k > 4) {
        throw CapacityError("circuit_decode: k <= 4 in circuit mode");
    }
    QuantumState st;
    auto qs = st.alloc(static_cast<uint32_t>(c.k));
    for (QubitId q : qs) {
        st.apply(gate(GateKind::H, {q}));
    }
    st.apply_diagonal(qs, [&c](uint64_t y) {
        return c.values[y] ? Amplitude(-1.0, 0.0) : Amplitude(1.0, 0.0);
    });
    for (QubitId q : qs) {
        st.apply(gate(GateKind::H, {q}));
    }
    Message m;
    m.p = 2;
    m.k = c.k;
    m.coords.resize(c.k);
    for (int i = 0; i < c.k; i++) {
        m.coords[i] = st.measure(qs[i], rng).outcome;
    }
    return m;
}

size_t list_decode_sample_count(double eps) {
    if (eps <= 0.0 || eps > 0.5) {
        throw ValidationError("list_decode: eps must be in (0, 1/2]");
    }
    constexpr double kListConstant = 8.0;
    return static_cast<size_t>(
        std::ceil(kListConstant / (eps * eps) * std::log(1.0 / eps)));
}

std::vector<Message> list_decode(const Codeword &c, double eps, RandomSource &rng) {
    size_t trials = std::max<size_t>(1, list_decode_sample_count(eps));
    std::vector<Message> list;
    std::set<std::vector<int>> seen;
    for (size_t i = 0; i < trials; i++) {
        Message m = decode_sample(c, rng);
        if (seen.insert(m.coords).second) {
            list.push_back(std::move(m));
        }
    }
    return list;
}

std::string Codeword::to_json() const {
    nlohmann::ordered_json j;
    j["p"] = p;
    j["k"] = k;
    j["values"] = values;
    return j.dump(2);
}

Codeword Codeword::from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    Codeword c;
    c.p = j.at("p").get<int>();
    c.k = j.at("k").get<int>();
    c.values = j.at("values").get<std::vector<int>>();
    check(c);
    return c;
}

}  // namespace laqcc
