#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laqcc/random.hpp"

namespace laqcc {

using Amplitude = std::complex<double>;
using QubitId = uint32_t;

enum class GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
    CRZ,
    CRY,
    SWAP,
    Custom,
};

const char *gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string &name);

/// Reference to a classical bit produced earlier in a program run, by name
/// ("m3" for the fourth measurement, or a classical-layer output like "c0").
struct ClassicalRef {
    std::string name;
};

/// One gate application. `targets` are the qubits the unitary acts on
/// (2^|targets| dimensional matrix); `controls` apply the usual quantum
/// control on top. `condition` gates the whole operation on a classical bit.
struct GateOp {
    GateKind kind = GateKind::X;
    std::vector<QubitId> targets;
    std::vector<QubitId> controls;
    double angle = 0.0;                      // RX/RY/RZ/CRZ/CRY
    std::vector<Amplitude> matrix;           // Custom: row-major 2^k x 2^k
    std::optional<ClassicalRef> condition;

    /// Dense matrix of the uncontrolled part, row-major.
    std::vector<Amplitude> unitary() const;
    size_t arity() const { return targets.size(); }
};

GateOp gate(GateKind kind, std::vector<QubitId> targets, std::vector<QubitId> controls = {},
            double angle = 0.0);
GateOp custom_gate(std::vector<QubitId> targets, std::vector<Amplitude> matrix);

/// Haar-random unitary on 2^arity dimensions (arity 1 or 2), as a custom gate
/// with unset targets. Complex-Gaussian matrix, Gram-Schmidt, then each
/// column's phase fixed so its first nonzero entry is real positive; this
/// makes draws reproducible for a fixed (seed, path).
GateOp sample_haar_error(RandomSource &rng, int arity);

/// ||U^dag U - I||_max for a row-major d x d matrix; unitarity check helper.
double unitarity_defect(const std::vector<Amplitude> &matrix);

}  // namespace laqcc
