#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "laqcc/program.hpp"
#include "laqcc/random.hpp"

namespace laqcc {

/// The seven base success probabilities of the worst-case error model:
/// single-qubit gate, idle-during-single, two-qubit gate, idle-during-two,
/// measurement, idle-during-measurement, idle-during-classical-compute.
enum class BaseProb { s = 0, is = 1, d = 2, id = 3, m = 4, im = 5, ic = 6 };
constexpr int kBaseProbCount = 7;
const char *base_prob_name(BaseProb b);

struct GateTimes {
    double single_ns = 0.0;
    double two_qubit_ns = 0.0;
    double measure_ns = 0.0;
};

struct DeviceParams {
    std::array<double, kBaseProbCount> p{1, 1, 1, 1, 1, 1, 1};
    std::optional<GateTimes> times;

    double get(BaseProb b) const { return p[static_cast<int>(b)]; }
    void set(BaseProb b, double v) { p[static_cast<int>(b)] = v; }

    /// Reads {p_s, p_is, p_d, p_id, p_m, p_im, p_ic, t_single_ns, t_two_ns,
    /// t_meas_ns} from a flat TOML or JSON file.
    static DeviceParams load(const std::string &path);
};

/// Success probability as an integer exponent vector over the base
/// probabilities: P = prod_i p_i^{e_i}. LAQCC-style expressions are lower
/// bounds; the flag records that.
struct SuccessExpr {
    std::array<int64_t, kBaseProbCount> exponents{0, 0, 0, 0, 0, 0, 0};
    bool lower_bound = false;

    double evaluate(const DeviceParams &params) const;
    double log_evaluate(const DeviceParams &params) const;  // natural log
};

enum class Protocol {
    GhzAll,
    GhzLinear,
    GhzLaqcc,
    GhzHybridAll,
    GhzHybridLinear,
    WDirect,
    WLaqcc,
    WLaqccApprox,
    Fanout,
    Parity,
    OrReduction,
    OrExact,
    ControlledU,
};

const char *protocol_name(Protocol p);
Protocol protocol_from_name(const std::string &name);

/// Closed-form exponent vector for a protocol at size n. Hybrid protocols
/// take the number of blocks k (k | n); w_laqcc requires n a power of two.
SuccessExpr success_expr(Protocol protocol, int64_t n, int64_t k = 0);

/// Depth-weighted protocol duration in nanoseconds.
double duration_ns(Protocol protocol, int64_t n, const DeviceParams &params);

struct ComparisonVerdict {
    std::string winner;  // protocol name or "tie"
    double boundary_exponent = 0.0;
    bool assumptions_applied = false;
};

/// Numeric mode (params != nullptr): compares evaluated probabilities.
/// Symbolic mode: applies the reductions p_s ~ 1 ~ p_is, p_d ~ p_m,
/// p_id ~ p_im ~ p_ic and reports the boundary exponent of the crossover
/// p_d = p_id^E; supported for ghz_laqcc versus ghz_all / ghz_linear.
ComparisonVerdict crossover(Protocol a, Protocol b, int64_t n, const DeviceParams *params);

struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
    int64_t trials = 0;
};

/// Bernoulli Monte Carlo under the worst-case model: a trial succeeds iff
/// none of the exponent-counted operations fails.
McResult mc_bernoulli(const SuccessExpr &expr, const DeviceParams &params, int64_t trials,
                      RandomSource &rng);

/// Haar-error Monte Carlo: runs `program` with random unitary errors
/// injected per operation / idle slot / measurement and reports the
/// fraction of runs with fidelity > 1 - 1e-6 against `ideal`. A failed
/// two-qubit gate draws one joint Haar unitary on both qubits; whether such
/// an error is joint or two independent single-qubit unitaries is left open
/// by the model, so the choice is fixed here and documented.
McResult mc_haar(const Program &program, uint32_t qubit_count, const QuantumState &ideal,
                 const DeviceParams &params, int64_t trials, RandomSource &rng);

}  // namespace laqcc
