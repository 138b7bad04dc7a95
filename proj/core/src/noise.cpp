#include "laqcc/noise.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "laqcc/errors.hpp"
#include "laqcc/toml.hpp"

namespace laqcc {

namespace {

int64_t ceil_div(int64_t a, int64_t b) {
    return (a + b - 1) / b;
}

int64_t ceil_log2(int64_t n) {
    int64_t t = 0;
    while ((int64_t{1} << t) < n) {
        t++;
    }
    return t;
}

bool is_pow2(int64_t n) {
    return n > 0 && (n & (n - 1)) == 0;
}

}  // namespace

const char *base_prob_name(BaseProb b) {
    switch (b) {
        case BaseProb::s: return "p_s";
        case BaseProb::is: return "p_is";
        case BaseProb::d: return "p_d";
        case BaseProb::id: return "p_id";
        case BaseProb::m: return "p_m";
        case BaseProb::im: return "p_im";
        case BaseProb::ic: return "p_ic";
    }
    return "?";
}

const char *protocol_name(Protocol p) {
    switch (p) {
        case Protocol::GhzAll: return "ghz_all";
        case Protocol::GhzLinear: return "ghz_linear";
        case Protocol::GhzLaqcc: return "ghz_laqcc";
        case Protocol::GhzHybridAll: return "ghz_hybrid_all";
        case Protocol::GhzHybridLinear: return "ghz_hybrid_linear";
        case Protocol::WDirect: return "w_direct";
        case Protocol::WLaqcc: return "w_laqcc";
        case Protocol::WLaqccApprox: return "w_laqcc_approx";
        case Protocol::Fanout: return "fanout";
        case Protocol::Parity: return "parity";
        case Protocol::OrReduction: return "or_reduction";
        case Protocol::OrExact: return "or_exact";
        case Protocol::ControlledU: return "controlled_u";
    }
    return "?";
}

Protocol protocol_from_name(const std::string &name) {
    for (Protocol p :
         {Protocol::GhzAll, Protocol::GhzLinear, Protocol::GhzLaqcc, Protocol::GhzHybridAll,
          Protocol::GhzHybridLinear, Protocol::WDirect, Protocol::WLaqcc, Protocol::WLaqccApprox,
          Protocol::Fanout, Protocol::Parity, Protocol::OrReduction, Protocol::OrExact,
          Protocol::ControlledU}) {
        if (name == protocol_name(p)) {
            return p;
        }
    }
    throw ValidationError("unknown protocol: " + name);
}

DeviceParams DeviceParams::load(const std::string &path) {
    std::map<std::string, std::string> kv;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        std::ifstream in(path);
        if (!in) {
            throw ValidationError("cannot open file: " + path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        auto j = nlohmann::json::parse(ss.str());
        for (auto it = j.begin(); it != j.end(); ++it) {
            kv[it.key()] = it.value().dump();
        }
    } else {
        kv = read_flat_toml(path);
    }
    DeviceParams dev;
    auto need = [&kv, &path](const std::string &key) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw ValidationError("device file " + path + " missing key " + key);
        }
        return std::stod(it->second);
    };
    dev.set(BaseProb::s, need("p_s"));
    dev.set(BaseProb::is, need("p_is"));
    dev.set(BaseProb::d, need("p_d"));
    dev.set(BaseProb::id, need("p_id"));
    dev.set(BaseProb::m, need("p_m"));
    dev.set(BaseProb::im, need("p_im"));
    // The model treats classical computations as exact; p_ic stays a free
    // parameter defaulting to the device's p_im.
    dev.set(BaseProb::ic, kv.count("p_ic") ? std::stod(kv["p_ic"]) : dev.get(BaseProb::im));
    if (kv.count("t_single_ns") || kv.count("t_two_ns") || kv.count("t_meas_ns")) {
        GateTimes t;
        t.single_ns = need("t_single_ns");
        t.two_qubit_ns = need("t_two_ns");
        t.measure_ns = need("t_meas_ns");
        dev.times = t;
    }
    for (double v : dev.p) {
        if (v <= 0.0 || v > 1.0) {
            throw ValidationError("device probabilities must lie in (0, 1]");
        }
    }
    return dev;
}

double SuccessExpr::evaluate(const DeviceParams &params) const {
    double acc = 1.0;
    for (int i = 0; i < kBaseProbCount; i++) {
        acc *= std::pow(params.p[i], static_cast<double>(exponents[i]));
    }
    return acc;
}

double SuccessExpr::log_evaluate(const DeviceParams &params) const {
    double acc = 0.0;
    for (int i = 0; i < kBaseProbCount; i++) {
        acc += static_cast<double>(exponents[i]) * std::log(params.p[i]);
    }
    return acc;
}

SuccessExpr success_expr(Protocol protocol, int64_t n, int64_t k) {
    SuccessExpr e;
    auto set = [&e](BaseProb b, int64_t v) { e.exponents[static_cast<int>(b)] = v; };
    switch (protocol) {
        case Protocol::GhzAll: {
            if (n < 2) {
                throw ValidationError("ghz_all: n >= 2");
            }
            set(BaseProb::s, 1);
            set(BaseProb::is, n - 1);
            set(BaseProb::d, n - 1);
            set(BaseProb::id, n * (ceil_log2(n) - 2) + 2);
            break;
        }
        case Protocol::GhzLinear: {
            if (n < 2) {
                throw ValidationError("ghz_linear: n >= 2");
            }
            set(BaseProb::s, 1);
            set(BaseProb::is, n - 1);
            set(BaseProb::d, n - 1);
            set(BaseProb::id, n * (ceil_div(n, 2) - 2) + 2);
            break;
        }
        case Protocol::GhzLaqcc: {
            if (n < 2) {
                throw ValidationError("ghz_laqcc: n >= 2");
            }
            set(BaseProb::s, n + n / 2);
            set(BaseProb::is, n + ceil_div(n, 2) - 1);
            set(BaseProb::d, 2 * (n - 1));
            set(BaseProb::id, 2);
            set(BaseProb::m, n - 1);
            set(BaseProb::im, n);
            set(BaseProb::ic, n);
            e.lower_bound = true;
            break;
        }
        case Protocol::GhzHybridAll:
        case Protocol::GhzHybridLinear: {
            if (k < 2 || n % k != 0) {
                throw ValidationError("hybrid GHZ: requires k >= 2 dividing n");
            }
            int64_t g = n / k;
            set(BaseProb::s, 2 * k + n / 2);
            set(BaseProb::is, 3 * n - k + ceil_div(n, 2) - 1);
            set(BaseProb::d, n + k - 2);
            int64_t depth = protocol == Protocol::GhzHybridAll ? ceil_log2(g) : ceil_div(g, 2);
            set(BaseProb::id, (n + k) * depth + 2);
            set(BaseProb::m, k - 1);
            set(BaseProb::im, n);
            set(BaseProb::ic, n);
            e.lower_bound = true;
            break;
        }
        case Protocol::WDirect: {
            if (n < 2) {
                throw ValidationError("w_direct: n >= 2");
            }
            set(BaseProb::s, 3 * n - 4);
            set(BaseProb::is, n * (2 * n - 5) + 4);
            set(BaseProb::d, 3 * n - 5);
            set(BaseProb::id, n * (3 * n - 11) + 10);
            break;
        }
        case Protocol::Fanout: {
            if (n < 2) {
                throw ValidationError("fanout: n >= 2");
            }
            set(BaseProb::s, 2 * n + ceil_div(n - 1, 2));
            set(BaseProb::is, 5 * n + (n - 1) / 2 - 2);
            set(BaseProb::d, 3 * n - 2);
            set(BaseProb::id, 2 * n + 1);
            set(BaseProb::m, 2 * n - 1);
            set(BaseProb::im, 3 * n - 1);
            set(BaseProb::ic, 3 * n - 1);
            e.lower_bound = true;
            break;
        }
        case Protocol::Parity: {
            if (n < 2) {
                throw ValidationError("parity: n >= 2");
            }
            set(BaseProb::s, 4 * n + ceil_div(n - 1, 2) - 1);
            set(BaseProb::is, 3 * n + (n - 1) / 2 - 1);
            set(BaseProb::d, 3 * n - 2);
            set(BaseProb::id, 2 * n + 1);
            set(BaseProb::m, 2 * n - 1);
            set(BaseProb::im, 3 * n - 1);
            set(BaseProb::ic, 3 * n - 1);
            e.lower_bound = true;
            break;
        }
        case Protocol::OrReduction: {
            if (n < 1) {
                throw ValidationError("or_reduction: n >= 1");
            }
            int64_t t = ceil_log2(n + 1);
            set(BaseProb::s, 11 * n * t + 2 * (n * ceil_div(t - 1, 2) + t * ceil_div(n - 1, 2)) +
                                 2 * t);
            set(BaseProb::is,
                23 * n * t + 2 * n * ((t - 1) / 2) + 2 * t * ((n - 1) / 2) - 4 * (n + t));
            set(BaseProb::d, 14 * n * t - 4 * (n + t));
            set(BaseProb::id, 8 * n * t + 2 * (n + t));
            set(BaseProb::m, 8 * n * t - 2 * (n + t));
            set(BaseProb::im, 12 * n * t - 2 * (n + t));
            set(BaseProb::ic, 12 * n * t - 2 * (n + t));
            e.lower_bound = true;
            break;
        }
        case Protocol::OrExact: {
            if (n < 1) {
                throw ValidationError("or_exact: n >= 1");
            }
            int64_t t = ceil_log2(n + 1);
            int64_t pt = int64_t{1} << t;  // 2^t
            set(BaseProb::s, 22 * n * t + 2 * (2 * n - pt - 1) * ceil_div(t - 1, 2) +
                                 4 * t * ceil_div(n - 1, 2) + 2 * t * ceil_div(pt / 2 - 1, 2) +
                                 2 * ceil_div(pt - 1, 2) + 10 * t * pt + 3 * pt - 4 * t - 2);
            set(BaseProb::is, 2 * (2 * n + pt - 1) * ((t - 1) / 2) + 4 * t * ((n - 1) / 2) +
                                  2 * t * ((pt / 2 - 1) / 2) + 2 * ((pt - 1) / 2) +
                                  46 * n * t - 8 * n - 18 * t + 11 * t * pt + 3 * pt - 5);
            set(BaseProb::d, 28 * n * t - 8 * n - 18 * t + 9 * t * pt + 2 * pt - 6);
            set(BaseProb::id, 16 * n * t + 4 * n + 2 * t + 6 * t * pt + 2 * pt + 2);
            set(BaseProb::m, 16 * n * t - 4 * n - 10 * t + 6 * t * pt - 2);
            set(BaseProb::im, 24 * n * t - 4 * n - 12 * t + 9 * t * pt);
            set(BaseProb::ic, 24 * n * t - 4 * n - 12 * t + 9 * t * pt);
            e.lower_bound = true;
            break;
        }
        case Protocol::WLaqcc: {
            if (!is_pow2(n) || n < 2) {
                throw ValidationError("w_laqcc: n must be a power of two >= 2");
            }
            int64_t kk = ceil_log2(n);  // log2(n) exactly
            int64_t t = ceil_log2(kk + 1);
            int64_t pt = int64_t{1} << t;
            set(BaseProb::s,
                22 * n * kk * t + 14 * n * kk + 2 * n * ceil_div(pt - 1, 2) +
                    n * (3 * pt + ceil_div(kk, 2)) + 2 * n * t * (5 * pt - 2) + 3 * kk +
                    4 * kk * ceil_div(n - 1, 2) + 2 * n * (2 * kk - pt - 1) * ceil_div(t - 1, 2) +
                    4 * n * t * ceil_div(kk - 1, 2) + 2 * n * t * ceil_div(pt / 2 - 1, 2) +
                    2 * n * ceil_div(pt - 1, 2));
            set(BaseProb::is,
                46 * n * kk * t + 20 * n * kk + 3 * n * pt - 18 * n * t + 21 * n - 11 * kk +
                    n * (kk / 2) + 2 * n * (2 * kk + pt - 1) * ((t - 1) / 2) +
                    4 * n * t * ((kk - 1) / 2) + 2 * n * t * ((pt / 2 - 1) / 2) +
                    2 * n * ((pt - 1) / 2) + 11 * n * t * pt + 4 * kk * ((n - 1) / 2));
            set(BaseProb::d,
                28 * n * kk * t + 7 * n * kk + 9 * n * t * (pt - 2) + 2 * n * pt - 5 * n - 8 * kk);
            set(BaseProb::id, 16 * n * kk * t + 14 * n * kk + 2 * n * t * (3 * pt + 1) +
                                  2 * n * pt + 17 * n + 4 * kk);
            set(BaseProb::m,
                16 * n * kk * t + 6 * n * kk + 2 * n * t * (3 * pt - 5) - n - 4 * kk);
            set(BaseProb::im,
                24 * n * kk * t + 11 * n * kk + 3 * n * t * (3 * pt - 4) + 10 * n - 4 * kk);
            set(BaseProb::ic,
                24 * n * kk * t + 11 * n * kk + 3 * n * t * (3 * pt - 4) + 10 * n - 4 * kk);
            e.lower_bound = true;
            break;
        }
        case Protocol::WLaqccApprox: {
            if (!is_pow2(n) || n < 2) {
                throw ValidationError("w_laqcc_approx: n must be a power of two >= 2");
            }
            int64_t kk = ceil_log2(n);
            int64_t t = ceil_log2(kk + 1);
            set(BaseProb::s,
                71 * n * kk * t / 2 + 37 * n * kk / 2 + 3 * n * kk - 8 * n * t - n + kk);
            set(BaseProb::is, 125 * n * kk * t / 2 + 47 * n * kk / 2 - 22 * n * t + 21 * n -
                                  13 * kk);
            set(BaseProb::d, 37 * n * kk * t + 9 * n * kk - 18 * n * t - 5 * n - 8 * kk);
            set(BaseProb::id, 22 * n * kk * t + 16 * n * kk + 2 * n * t + 17 * n + 4 * kk);
            set(BaseProb::m, 22 * n * kk * t + 6 * n * kk - 10 * n * t - n - 4 * kk);
            set(BaseProb::im, 33 * n * kk * t + 11 * n * kk - 12 * n * t + 10 * n - 4 * kk);
            set(BaseProb::ic, 33 * n * kk * t + 11 * n * kk - 12 * n * t + 10 * n - 4 * kk);
            e.lower_bound = true;
            break;
        }
        case Protocol::ControlledU: {
            set(BaseProb::s, 3);
            set(BaseProb::is, 3);
            set(BaseProb::d, 2);
            break;
        }
    }
    for (int64_t v : e.exponents) {
        if (v < 0) {
            throw ValidationError(std::string("negative exponent in ") +
                                  protocol_name(protocol) + " at n=" + std::to_string(n));
        }
    }
    return e;
}

double duration_ns(Protocol protocol, int64_t n, const DeviceParams &params) {
    if (!params.times) {
        throw ValidationError("duration: device gate times missing");
    }
    const GateTimes &t = *params.times;
    switch (protocol) {
        case Protocol::GhzAll:
            return t.single_ns + static_cast<double>(ceil_log2(n)) * t.two_qubit_ns;
        case Protocol::GhzLinear:
            return t.single_ns + static_cast<double>(ceil_div(n, 2)) * t.two_qubit_ns;
        case Protocol::GhzLaqcc:
            return 2.0 * (t.single_ns + t.two_qubit_ns + t.measure_ns);
        case Protocol::WDirect:
            return static_cast<double>(n - 2) * (2.0 * t.single_ns + 2.0 * t.two_qubit_ns) +
                   2.0 * t.single_ns + static_cast<double>(n - 1) * t.two_qubit_ns;
        default:
            throw ValidationError(std::string("duration not defined for ") +
                                  protocol_name(protocol));
    }
}

ComparisonVerdict crossover(Protocol a, Protocol b, int64_t n, const DeviceParams *params) {
    ComparisonVerdict verdict;
    auto boundary = [n](Protocol other) {
        double ratio = static_cast<double>(n) / static_cast<double>(n - 1);
        if (other == Protocol::GhzAll) {
            return ratio * (static_cast<double>(ceil_log2(n)) / 2.0 - 2.0);
        }
        return ratio * (static_cast<double>(ceil_div(n, 2)) / 2.0 - 2.0);
    };
    bool symbolic_pair = (a == Protocol::GhzLaqcc &&
                          (b == Protocol::GhzAll || b == Protocol::GhzLinear)) ||
                         (b == Protocol::GhzLaqcc &&
                          (a == Protocol::GhzAll || a == Protocol::GhzLinear));
    if (symbolic_pair) {
        Protocol other = a == Protocol::GhzLaqcc ? b : a;
        verdict.boundary_exponent = boundary(other);
    }
    if (params != nullptr) {
        double la = success_expr(a, n).log_evaluate(*params);
        double lb = success_expr(b, n).log_evaluate(*params);
        if (std::abs(la - lb) < 1e-12) {
            verdict.winner = "tie";
        } else {
            verdict.winner = protocol_name(la > lb ? a : b);
        }
    } else {
        if (!symbolic_pair) {
            throw ValidationError("symbolic crossover supported for ghz_laqcc vs ghz_all/linear");
        }
        verdict.assumptions_applied = true;
    }
    return verdict;
}

McResult mc_bernoulli(const SuccessExpr &expr, const DeviceParams &params, int64_t trials,
                      RandomSource &rng) {
    // Per base probability, P(zero failures among e_i operations) = p_i^{e_i};
    // a trial succeeds iff every base survives.
    std::array<double, kBaseProbCount> survive;
    for (int i = 0; i < kBaseProbCount; i++) {
        survive[i] = std::pow(params.p[i], static_cast<double>(expr.exponents[i]));
    }
    int64_t successes = 0;
    for (int64_t t = 0; t < trials; t++) {
        bool ok = true;
        for (int i = 0; i < kBaseProbCount; i++) {
            if (expr.exponents[i] > 0 && rng.next_double() >= survive[i]) {
                ok = false;
            }
        }
        successes += ok;
    }
    McResult r;
    r.trials = trials;
    r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
    return r;
}

McResult mc_haar(const Program &program, uint32_t qubit_count, const QuantumState &ideal,
                 const DeviceParams &params, int64_t trials, RandomSource &rng) {
    if (qubit_count > 12) {
        throw CapacityError("mc_haar: programs limited to 12 qubits");
    }
    int64_t successes = 0;
    for (int64_t t = 0; t < trials; t++) {
        RandomSource trial_rng = rng.derive(static_cast<uint64_t>(t));
        QuantumState st;
        st.alloc(qubit_count);
        RunHooks hooks;
        hooks.noise_rng = &trial_rng;
        hooks.measurement_flip_probability = 1.0 - params.get(BaseProb::m);
        hooks.after_gate = [&](QuantumState &s, const std::vector<QubitId> &acted) {
            double p = acted.size() >= 2 ? params.get(BaseProb::d) : params.get(BaseProb::s);
            if (trial_rng.next_double() >= p) {
                GateOp err = sample_haar_error(trial_rng, acted.size() >= 2 ? 2 : 1);
                err.targets = acted.size() >= 2 ? std::vector<QubitId>{acted[0], acted[1]}
                                                : std::vector<QubitId>{acted[0]};
                s.apply(err);
            }
        };
        hooks.on_idle = [&](QuantumState &s, const std::vector<QubitId> &idle) {
            for (QubitId q : idle) {
                if (trial_rng.next_double() >= params.get(BaseProb::id)) {
                    GateOp err = sample_haar_error(trial_rng, 1);
                    err.targets = {q};
                    s.apply(err);
                }
            }
        };
        MeasureDriver driver = MeasureDriver::sampling(trial_rng);
        program.run(st, driver, &hooks);
        if (QuantumState::fidelity(st, ideal) > 1.0 - 1e-6) {
            successes++;
        }
    }
    McResult r;
    r.trials = trials;
    r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    r.std_error = std::sqrt(std::max(r.estimate * (1.0 - r.estimate), 1e-12) /
                            static_cast<double>(trials));
    return r;
}

}  // namespace laqcc
