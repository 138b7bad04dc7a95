#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "laqcc/gates.hpp"
#include "laqcc/random.hpp"

namespace laqcc {

struct MeasurementRecord {
    QubitId qubit = 0;
    int outcome = 0;
    double probability_of_outcome = 0.0;
    bool forced = false;
};

/// Dense statevector over a dynamic set of live qubits.
///
/// Qubit 0 of the internal ordering is least significant in amplitude
/// indexing (little-endian). Qubit ids are stable handles: they survive
/// recycling of other qubits and are never reused.
class QuantumState {
  public:
    explicit QuantumState(uint32_t max_width = 26);

    uint32_t width() const { return static_cast<uint32_t>(order_.size()); }
    uint32_t max_width() const { return max_width_; }
    const std::vector<QubitId> &live_qubits() const { return order_; }
    const std::vector<Amplitude> &amplitudes() const { return amps_; }
    bool is_live(QubitId q) const { return position_.count(q) != 0; }

    /// Append `count` fresh qubits in |0> and return their ids.
    std::vector<QubitId> alloc(uint32_t count);

    /// Apply a gate. Throws UsageError on dead qubits, ValidationError on a
    /// non-unitary custom matrix or overlapping targets/controls.
    /// `classical_condition` on the op must already be resolved by the caller
    /// (see Program::run); this entry point ignores it.
    void apply(const GateOp &op);

    /// Projective measurement in the computational basis. When `forced` is
    /// 0 or 1 the corresponding branch is taken and renormalized (BranchError
    /// if that branch has probability < 1e-12).
    MeasurementRecord measure(QubitId q, RandomSource &rng, int forced = -1);
    MeasurementRecord measure_forced(QubitId q, int outcome);

    /// Remove a disentangled qubit (mass off its dominant basis value must
    /// be < 1e-12); halves the amplitude table.
    void recycle(QubitId q);

    /// Phase per basis value of `qubits` (first id = least significant bit).
    void apply_diagonal(const std::vector<QubitId> &qubits,
                        const std::function<Amplitude(uint64_t)> &phase);

    /// Basis permutation on `qubits`: amplitude of value v moves to perm(v).
    /// perm must be a bijection on [0, 2^{|qubits|}).
    void apply_permutation(const std::vector<QubitId> &qubits,
                           const std::function<uint64_t(uint64_t)> &perm);

    /// Probability that measuring `q` yields 1.
    double prob_one(QubitId q) const;

    /// Basis-state probability by value of the listed qubits.
    double basis_prob(const std::vector<QubitId> &qubits, uint64_t value) const;

    double norm_sq() const;

    /// Tensor another state into this one; returns old-id -> new-id map.
    std::unordered_map<QubitId, QubitId> absorb(const QuantumState &other);

    /// |<a|b>|, global-phase insensitive. Requires equal width. When both
    /// states hold the same id set the inner product matches qubits by id,
    /// otherwise by position.
    static double fidelity(const QuantumState &a, const QuantumState &b);

    /// JSON dump {"n": int, "amplitudes": [[re, im], ...]} (little-endian).
    std::string dump_json() const;
    static QuantumState from_json(const std::string &text, uint32_t max_width = 26);

  private:
    uint32_t max_width_;
    QubitId next_id_ = 0;
    std::vector<QubitId> order_;                      // position -> id
    std::unordered_map<QubitId, uint32_t> position_;  // id -> position
    std::vector<Amplitude> amps_;

    uint32_t pos_of(QubitId q, const char *what) const;
    void project(uint32_t pos, int value, double branch_prob);
};

}  // namespace laqcc
