#include "laqcc/gates.hpp"

#include <cmath>
#include <cstring>

#include "laqcc/errors.hpp"

namespace laqcc {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

using Mat = std::vector<Amplitude>;

Mat mat2(Amplitude a, Amplitude b, Amplitude c, Amplitude d) {
    return {a, b, c, d};
}

}  // namespace

const char *gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::S: return "S";
        case GateKind::T: return "T";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::CRZ: return "CRZ";
        case GateKind::CRY: return "CRY";
        case GateKind::SWAP: return "SWAP";
        case GateKind::Custom: return "custom";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string &name) {
    for (GateKind k : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S,
                       GateKind::T, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CNOT,
                       GateKind::CZ, GateKind::CRZ, GateKind::CRY, GateKind::SWAP,
                       GateKind::Custom}) {
        if (name == gate_kind_name(k)) {
            return k;
        }
    }
    throw ValidationError("unknown gate kind: " + name);
}

std::vector<Amplitude> GateOp::unitary() const {
    const Amplitude i(0.0, 1.0);
    switch (kind) {
        case GateKind::H:
            return mat2(kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
        case GateKind::X:
            return mat2(0, 1, 1, 0);
        case GateKind::Y:
            return mat2(0, -i, i, 0);
        case GateKind::Z:
            return mat2(1, 0, 0, -1);
        case GateKind::S:
            return mat2(1, 0, 0, i);
        case GateKind::T:
            return mat2(1, 0, 0, std::polar(1.0, M_PI / 4));
        case GateKind::RX: {
            double c = std::cos(angle / 2), s = std::sin(angle / 2);
            return mat2(c, -i * s, -i * s, c);
        }
        case GateKind::RY:
        case GateKind::CRY: {
            double c = std::cos(angle / 2), s = std::sin(angle / 2);
            return mat2(c, -s, s, c);
        }
        case GateKind::RZ:
        case GateKind::CRZ:
            // Global phase fixed so RZ(theta) = diag(1, e^{i theta}).
            return mat2(1, 0, 0, std::polar(1.0, angle));
        case GateKind::CNOT:
            return mat2(0, 1, 1, 0);
        case GateKind::CZ:
            return mat2(1, 0, 0, -1);
        case GateKind::SWAP:
            return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
        case GateKind::Custom:
            return matrix;
    }
    throw ValidationError("unreachable gate kind");
}

GateOp gate(GateKind kind, std::vector<QubitId> targets, std::vector<QubitId> controls,
            double angle) {
    GateOp op;
    op.kind = kind;
    op.angle = angle;
    switch (kind) {
        case GateKind::CNOT:
        case GateKind::CZ:
        case GateKind::CRZ:
        case GateKind::CRY:
            // Convention: first listed qubit is the control.
            if (targets.size() != 2 || !controls.empty()) {
                throw ValidationError("two-qubit controlled gate expects {control, target}");
            }
            op.controls = {targets[0]};
            op.targets = {targets[1]};
            return op;
        default:
            op.targets = std::move(targets);
            op.controls = std::move(controls);
            return op;
    }
}

GateOp custom_gate(std::vector<QubitId> targets, std::vector<Amplitude> matrix) {
    GateOp op;
    op.kind = GateKind::Custom;
    op.targets = std::move(targets);
    size_t dim = size_t{1} << op.targets.size();
    if (matrix.size() != dim * dim) {
        throw ValidationError("custom gate matrix has wrong dimension");
    }
    if (unitarity_defect(matrix) > 1e-12) {
        throw ValidationError("custom gate matrix is not unitary");
    }
    op.matrix = std::move(matrix);
    return op;
}

double unitarity_defect(const std::vector<Amplitude> &matrix) {
    size_t d = 1;
    while (d * d < matrix.size()) {
        d++;
    }
    double worst = 0.0;
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            Amplitude acc = 0.0;
            for (size_t k = 0; k < d; k++) {
                acc += std::conj(matrix[k * d + i]) * matrix[k * d + j];
            }
            if (i == j) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

GateOp sample_haar_error(RandomSource &rng, int arity) {
    if (arity != 1 && arity != 2) {
        throw ValidationError("Haar error arity must be 1 or 2");
    }
    size_t d = size_t{1} << arity;
    Mat m(d * d);
    for (auto &x : m) {
        x = Amplitude(rng.next_gaussian(), rng.next_gaussian());
    }
    // Gram-Schmidt on columns.
    for (size_t j = 0; j < d; j++) {
        for (size_t k = 0; k < j; k++) {
            Amplitude proj = 0.0;
            for (size_t r = 0; r < d; r++) {
                proj += std::conj(m[r * d + k]) * m[r * d + j];
            }
            for (size_t r = 0; r < d; r++) {
                m[r * d + j] -= proj * m[r * d + k];
            }
        }
        double norm = 0.0;
        for (size_t r = 0; r < d; r++) {
            norm += std::norm(m[r * d + j]);
        }
        norm = std::sqrt(norm);
        for (size_t r = 0; r < d; r++) {
            m[r * d + j] /= norm;
        }
        // Fix column phase: first entry of non-negligible magnitude made real positive.
        for (size_t r = 0; r < d; r++) {
            Amplitude v = m[r * d + j];
            if (std::abs(v) > 1e-9) {
                Amplitude phase = std::conj(v) / std::abs(v);
                for (size_t rr = 0; rr < d; rr++) {
                    m[rr * d + j] *= phase;
                }
                break;
            }
        }
    }
    GateOp op;
    op.kind = GateKind::Custom;
    op.matrix = std::move(m);
    op.targets.resize(arity);  // placeholder ids, caller assigns
    return op;
}

}  // namespace laqcc
