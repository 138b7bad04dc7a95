#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laqcc/gates.hpp"
#include "laqcc/state.hpp"

namespace laqcc {

/// Classical compute step descriptor. Layers are restricted to a registered
/// function set so transcripts stay serializable and deterministic.
/// Registry: parity, prefix-parity, hamming-weight, sort-permutation,
/// comparison-table, custom-table.
struct ClassicalFn {
    std::string name;
    std::map<std::string, int64_t> params;  // e.g. {"count": 3, "width": 2}
    std::vector<uint64_t> table;            // custom-table payload
};

/// Evaluate a registry function on a bit vector. Pure.
std::vector<int> classical_eval(const ClassicalFn &fn, const std::vector<int> &bits);

struct QuantumLayer {
    std::vector<GateOp> gates;
};

struct MeasureLayer {
    std::vector<QubitId> qubits;
    bool recycle = false;  // recycle each qubit right after measuring it
};

struct ClassicalLayer {
    ClassicalFn fn;
    std::vector<std::string> inputs;   // names of measurement/classical bits
    std::vector<std::string> outputs;  // names bound to the function's output bits
};

struct Layer {
    enum class Kind { Quantum, Measure, Classical } kind;
    QuantumLayer quantum;
    MeasureLayer measure;
    ClassicalLayer classical;

    static Layer of(QuantumLayer l);
    static Layer of(MeasureLayer l);
    static Layer of(ClassicalLayer l);
};

struct CostReport {
    int64_t quantum_depth = 0;
    int64_t peak_width = 0;
    int64_t alternations = 0;
    std::map<std::string, int64_t> gate_counts;
};

struct Transcript {
    std::vector<MeasurementRecord> records;
    std::map<std::string, int> bits;  // "m<i>" and classical outputs
    double branch_probability = 1.0;
};

/// Supplies measurement outcomes: forced outcomes are consumed in order,
/// after which sampling falls back to `rng`. Enumerating all forced vectors
/// of a protocol enumerates its measurement branches.
struct MeasureDriver {
    RandomSource *rng = nullptr;
    std::vector<int> forced;
    size_t cursor = 0;
    std::vector<MeasurementRecord> records;
    double branch_probability = 1.0;

    MeasurementRecord measure(QuantumState &st, QubitId q);
    static MeasureDriver sampling(RandomSource &rng);
    static MeasureDriver forcing(std::vector<int> outcomes);
};

/// Optional instrumentation for run(); used for error-model Monte Carlo.
struct RunHooks {
    // Called after each executed gate, with the qubits it acted on.
    std::function<void(QuantumState &, const std::vector<QubitId> &)> after_gate;
    // Called once per quantum layer with the qubits idle in that layer.
    std::function<void(QuantumState &, const std::vector<QubitId> &)> on_idle;
    // Flips each measurement record's outcome with this probability (the
    // post-measurement state keeps the actually-projected value).
    double measurement_flip_probability = 0.0;
    RandomSource *noise_rng = nullptr;
};

/// Alternating quantum / measurement / classical layers with feedforward.
struct Program {
    std::vector<QubitId> qubits;  // the program's qubit universe
    std::vector<Layer> layers;
    int64_t declared_alternations = 0;

    void validate() const;  // feedforward references resolvable, layering sane

    Transcript run(QuantumState &st, MeasureDriver &driver, const RunHooks *hooks = nullptr) const;

    CostReport cost() const;

    std::string to_json() const;
    static Program from_json(const std::string &text);
};

/// Optional topology lint (off by default everywhere): flags two-qubit gates
/// whose qubits are not adjacent in the given 1-D order. The constructions
/// here are stated logically and are routable with constant overhead, so the
/// runtime never enforces this.
std::vector<std::string> lint_linear_adjacency(const Program &prog,
                                               const std::vector<QubitId> &order);

}  // namespace laqcc
