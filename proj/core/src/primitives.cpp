#include "laqcc/primitives.hpp"

#include <cmath>

#include "laqcc/errors.hpp"

namespace laqcc {

namespace {

std::vector<int> bits_of(uint64_t v, size_t width) {
    std::vector<int> out(width);
    for (size_t i = 0; i < width; i++) {
        out[i] = static_cast<int>((v >> i) & 1);
    }
    return out;
}

/// GHZ on `qubits` by Hadamard + CNOT chain; inverse undoes it. Used for
/// resource registers whose preparation method is not under test.
void ghz_ladder(QuantumState &st, const std::vector<QubitId> &qubits) {
    st.apply(gate(GateKind::H, {qubits[0]}));
    for (size_t i = 1; i < qubits.size(); i++) {
        st.apply(gate(GateKind::CNOT, {qubits[i - 1], qubits[i]}));
    }
}

void ghz_ladder_inverse(QuantumState &st, const std::vector<QubitId> &qubits) {
    for (size_t i = qubits.size(); i-- > 1;) {
        st.apply(gate(GateKind::CNOT, {qubits[i - 1], qubits[i]}));
    }
    st.apply(gate(GateKind::H, {qubits[0]}));
}

}  // namespace

PrimitiveMode mode_from_name(const std::string &name) {
    if (name == "ideal") {
        return PrimitiveMode::Ideal;
    }
    if (name == "expanded") {
        return PrimitiveMode::Expanded;
    }
    throw ValidationError("unknown primitive mode: " + name);
}

// --- GHZ -------------------------------------------------------------------

Program ghz_laqcc_program(uint32_t n) {
    // Qubit layout mirrors the construction: logical qubits at even ids
    // 0,2,...,2n-2 and measured ancillas at odd ids.
    Program prog;
    for (uint32_t i = 0; i < 2 * n - 1; i++) {
        prog.qubits.push_back(i);
    }
    QuantumLayer had;
    for (uint32_t i = 0; i < n; i++) {
        had.gates.push_back(gate(GateKind::H, {2 * i}));
    }
    prog.layers.push_back(Layer::of(std::move(had)));
    if (n == 1) {
        return prog;
    }
    QuantumLayer cnot1, cnot2;
    for (uint32_t i = 0; i < n - 1; i++) {
        cnot1.gates.push_back(gate(GateKind::CNOT, {2 * i, 2 * i + 1}));
        cnot2.gates.push_back(gate(GateKind::CNOT, {2 * i + 2, 2 * i + 1}));
    }
    prog.layers.push_back(Layer::of(std::move(cnot1)));
    prog.layers.push_back(Layer::of(std::move(cnot2)));

    MeasureLayer meas;
    for (uint32_t i = 0; i < n - 1; i++) {
        meas.qubits.push_back(2 * i + 1);
    }
    meas.recycle = true;
    prog.layers.push_back(Layer::of(std::move(meas)));

    ClassicalLayer prefix;
    prefix.fn.name = "prefix-parity";
    for (uint32_t i = 0; i < n - 1; i++) {
        prefix.inputs.push_back("m" + std::to_string(i));
        prefix.outputs.push_back("c" + std::to_string(i));
    }
    prog.layers.push_back(Layer::of(std::move(prefix)));

    // X on logical qubit i (1-based) iff d_1 + ... + d_{i-1} is odd.
    QuantumLayer correct;
    for (uint32_t i = 1; i < n; i++) {
        GateOp x = gate(GateKind::X, {2 * i});
        x.condition = ClassicalRef{"c" + std::to_string(i - 1)};
        correct.gates.push_back(x);
    }
    prog.layers.push_back(Layer::of(std::move(correct)));
    prog.declared_alternations = 1;
    return prog;
}

QuantumState ghz_laqcc(uint32_t n, PrimitiveMode mode, MeasureDriver &driver) {
    if (n < 1) {
        throw ValidationError("ghz_laqcc: n must be >= 1");
    }
    QuantumState st;
    if (mode == PrimitiveMode::Ideal || n == 1) {
        auto q = st.alloc(n);
        ghz_ladder(st, q);
        return st;
    }
    st.alloc(2 * n - 1);
    Program prog = ghz_laqcc_program(n);
    prog.run(st, driver);
    return st;
}

Program ghz_direct_all_program(uint32_t n) {
    Program prog;
    for (uint32_t i = 0; i < n; i++) {
        prog.qubits.push_back(i);
    }
    QuantumLayer had;
    had.gates.push_back(gate(GateKind::H, {0}));
    prog.layers.push_back(Layer::of(std::move(had)));
    // At step t, qubits [0, 2^{t-1}) each target their partner 2^{t-1} higher.
    for (uint32_t span = 1; span < n; span *= 2) {
        QuantumLayer l;
        for (uint32_t i = 0; i < span && i + span < n; i++) {
            l.gates.push_back(gate(GateKind::CNOT, {i, i + span}));
        }
        prog.layers.push_back(Layer::of(std::move(l)));
    }
    return prog;
}

Program ghz_direct_linear_program(uint32_t n) {
    Program prog;
    for (uint32_t i = 0; i < n; i++) {
        prog.qubits.push_back(i);
    }
    uint32_t start = (n + 1) / 2 - 1;
    QuantumLayer had;
    had.gates.push_back(gate(GateKind::H, {start}));
    prog.layers.push_back(Layer::of(std::move(had)));
    if (n < 2) {
        return prog;
    }
    QuantumLayer first;
    first.gates.push_back(gate(GateKind::CNOT, {start, start + 1}));
    prog.layers.push_back(Layer::of(std::move(first)));
    uint32_t k = n / 2;
    for (uint32_t i = 0; i + 1 < k; i++) {
        QuantumLayer l;
        l.gates.push_back(gate(GateKind::CNOT, {start - i, start - i - 1}));
        l.gates.push_back(gate(GateKind::CNOT, {start + 1 + i, start + 2 + i}));
        prog.layers.push_back(Layer::of(std::move(l)));
    }
    if (n % 2 == 1) {
        QuantumLayer l;
        l.gates.push_back(gate(GateKind::CNOT, {1, 0}));
        prog.layers.push_back(Layer::of(std::move(l)));
    }
    return prog;
}

Program w_direct_program(uint32_t n) {
    if (n < 2) {
        throw ValidationError("w_direct_program: n must be >= 2");
    }
    Program prog;
    for (uint32_t i = 0; i < n; i++) {
        prog.qubits.push_back(i);
    }
    // Rotation cascade producing sum_i |1^i 0^{n-i}> / sqrt(n), followed by
    // a CNOT chain and a final X which map run-length strings to one-hot
    // strings. Controlled rotations are decomposed as
    // RY(t/4) CNOT RY(-t/2) CNOT RY(t/4) so layers match the 5n-7 schedule.
    auto theta = [&](uint32_t m) { return 2.0 * std::acos(std::sqrt(1.0 / m)); };

    QuantumLayer l0;
    l0.gates.push_back(gate(GateKind::RY, {0}, {}, theta(n)));
    if (n > 2) {
        l0.gates.push_back(gate(GateKind::RY, {1}, {}, theta(n - 1) / 4));
    }
    prog.layers.push_back(Layer::of(std::move(l0)));
    for (uint32_t j = 1; j + 1 < n; j++) {
        double t = theta(n - j);
        QuantumLayer c1, b, c2, tail;
        c1.gates.push_back(gate(GateKind::CNOT, {j - 1, j}));
        b.gates.push_back(gate(GateKind::RY, {j}, {}, -t / 2));
        c2.gates.push_back(gate(GateKind::CNOT, {j - 1, j}));
        prog.layers.push_back(Layer::of(std::move(c1)));
        prog.layers.push_back(Layer::of(std::move(b)));
        prog.layers.push_back(Layer::of(std::move(c2)));
        tail.gates.push_back(gate(GateKind::RY, {j}, {}, t / 4));
        if (j + 2 < n) {
            tail.gates.push_back(gate(GateKind::RY, {j + 1}, {}, theta(n - j - 1) / 4));
        }
        prog.layers.push_back(Layer::of(std::move(tail)));
    }
    QuantumLayer last_cnot;
    last_cnot.gates.push_back(gate(GateKind::CNOT, {n - 2, n - 1}));
    prog.layers.push_back(Layer::of(std::move(last_cnot)));
    for (uint32_t j = n - 2; j-- > 0;) {
        QuantumLayer l;
        l.gates.push_back(gate(GateKind::CNOT, {j, j + 1}));
        prog.layers.push_back(Layer::of(std::move(l)));
    }
    QuantumLayer fin;
    fin.gates.push_back(gate(GateKind::X, {0}));
    prog.layers.push_back(Layer::of(std::move(fin)));
    return prog;
}

// --- Fanout ------------------------------------------------------------------

namespace {

/// Teleportation steps of the fanout given a GHZ resource already absorbed
/// into the state. `g` has |targets|+1 qubits in a GHZ state.
void fanout_teleport(QuantumState &st, QubitId control, const std::vector<QubitId> &targets,
                     const std::vector<QubitId> &g, MeasureDriver &driver) {
    const size_t t = targets.size();
    st.apply(gate(GateKind::CNOT, {control, g[0]}));
    MeasurementRecord d0 = driver.measure(st, g[0]);
    st.recycle(g[0]);
    if (d0.outcome == 1) {
        for (size_t i = 1; i <= t; i++) {
            st.apply(gate(GateKind::X, {g[i]}));
        }
    }
    for (size_t i = 0; i < t; i++) {
        st.apply(gate(GateKind::CNOT, {g[i + 1], targets[i]}));
    }
    int parity = 0;
    for (size_t i = 1; i <= t; i++) {
        st.apply(gate(GateKind::H, {g[i]}));
        parity ^= driver.measure(st, g[i]).outcome;
        st.recycle(g[i]);
    }
    if (parity == 1) {
        st.apply(gate(GateKind::Z, {control}));
    }
}

}  // namespace

void fanout(QuantumState &st, QubitId control, const std::vector<QubitId> &targets,
            PrimitiveMode mode, MeasureDriver &driver) {
    for (QubitId t : targets) {
        if (t == control) {
            throw ValidationError("fanout: control overlaps targets");
        }
    }
    if (targets.empty()) {
        return;
    }
    if (mode == PrimitiveMode::Ideal) {
        for (QubitId t : targets) {
            st.apply(gate(GateKind::CNOT, {control, t}));
        }
        return;
    }
    // The GHZ resource is prepared with the cat-state construction in its
    // own register and absorbed, so the caller's table only grows by the
    // t+1 resource qubits that survive recycling.
    QuantumState resource = ghz_laqcc(static_cast<uint32_t>(targets.size()) + 1,
                                      PrimitiveMode::Expanded, driver);
    auto remap = st.absorb(resource);
    std::vector<QubitId> g;
    for (QubitId q : resource.live_qubits()) {
        g.push_back(remap.at(q));
    }
    fanout_teleport(st, control, targets, g, driver);
}

Program fanout_program(uint32_t target_count) {
    // Ids: 0 control, 1..t targets, then 2(t+1)-1 resource qubits laid out
    // as in ghz_laqcc_program (logical even offsets, ancilla odd offsets).
    const uint32_t t = target_count;
    const uint32_t m = t + 1;
    Program prog = ghz_laqcc_program(m);
    const uint32_t base = t + 1;
    for (auto &q : prog.qubits) {
        q += base;
    }
    for (auto &layer : prog.layers) {
        if (layer.kind == Layer::Kind::Quantum) {
            for (auto &gop : layer.quantum.gates) {
                for (auto &q : gop.targets) {
                    q += base;
                }
                for (auto &q : gop.controls) {
                    q += base;
                }
            }
        } else if (layer.kind == Layer::Kind::Measure) {
            for (auto &q : layer.measure.qubits) {
                q += base;
            }
        }
    }
    for (uint32_t i = 0; i < base; i++) {
        prog.qubits.push_back(i);
    }
    auto g = [&](uint32_t i) { return base + 2 * i; };  // i-th resource qubit

    QuantumLayer entangle;
    entangle.gates.push_back(gate(GateKind::CNOT, {0, g(0)}));
    prog.layers.push_back(Layer::of(std::move(entangle)));
    MeasureLayer m0;
    m0.qubits = {g(0)};
    m0.recycle = true;
    prog.layers.push_back(Layer::of(std::move(m0)));
    const uint32_t d0 = m - 1;  // measurement index of d_0 (after m-1 cat measurements)

    QuantumLayer condx;
    for (uint32_t i = 1; i <= t; i++) {
        GateOp x = gate(GateKind::X, {g(i)});
        x.condition = ClassicalRef{"m" + std::to_string(d0)};
        condx.gates.push_back(x);
    }
    prog.layers.push_back(Layer::of(std::move(condx)));

    QuantumLayer copy;
    for (uint32_t i = 0; i < t; i++) {
        copy.gates.push_back(gate(GateKind::CNOT, {g(i + 1), 1 + i}));
    }
    prog.layers.push_back(Layer::of(std::move(copy)));

    QuantumLayer had;
    for (uint32_t i = 1; i <= t; i++) {
        had.gates.push_back(gate(GateKind::H, {g(i)}));
    }
    prog.layers.push_back(Layer::of(std::move(had)));
    MeasureLayer mx;
    for (uint32_t i = 1; i <= t; i++) {
        mx.qubits.push_back(g(i));
    }
    mx.recycle = true;
    prog.layers.push_back(Layer::of(std::move(mx)));

    ClassicalLayer par;
    par.fn.name = "parity";
    for (uint32_t i = 0; i < t; i++) {
        par.inputs.push_back("m" + std::to_string(d0 + 1 + i));
    }
    par.outputs = {"zcorr"};
    prog.layers.push_back(Layer::of(std::move(par)));

    QuantumLayer condz;
    GateOp z = gate(GateKind::Z, {0});
    z.condition = ClassicalRef{"zcorr"};
    condz.gates.push_back(z);
    prog.layers.push_back(Layer::of(std::move(condz)));
    prog.declared_alternations = 2;
    return prog;
}

void parity_gate(QuantumState &st, const std::vector<QubitId> &sources, QubitId target,
                 PrimitiveMode mode, MeasureDriver &driver) {
    st.apply(gate(GateKind::H, {target}));
    for (QubitId s : sources) {
        st.apply(gate(GateKind::H, {s}));
    }
    fanout(st, target, sources, mode, driver);
    st.apply(gate(GateKind::H, {target}));
    for (QubitId s : sources) {
        st.apply(gate(GateKind::H, {s}));
    }
}

Program parity_program(uint32_t source_count) {
    // Fanout layout with the roles swapped by Hadamard conjugation: id 0 is
    // the parity target, ids 1..n the sources.
    Program prog = fanout_program(source_count);
    QuantumLayer conj;
    for (uint32_t i = 0; i <= source_count; i++) {
        conj.gates.push_back(gate(GateKind::H, {i}));
    }
    prog.layers.insert(prog.layers.begin(), Layer::of(QuantumLayer(conj)));
    prog.layers.push_back(Layer::of(std::move(conj)));
    return prog;
}

// --- Equality / OR -------------------------------------------------------------

void equal_gate(QuantumState &st, const std::vector<QubitId> &index_register, uint64_t i,
                QubitId target, PrimitiveMode mode, MeasureDriver &driver) {
    if (i >= (uint64_t{1} << index_register.size())) {
        throw ValidationError("equal_gate: index out of register range");
    }
    if (mode == PrimitiveMode::Ideal) {
        std::vector<QubitId> qs = index_register;
        qs.push_back(target);
        const size_t w = index_register.size();
        st.apply_permutation(qs, [i, w](uint64_t v) {
            uint64_t reg = v & ((uint64_t{1} << w) - 1);
            return reg == i ? v ^ (uint64_t{1} << w) : v;
        });
        return;
    }
    // AND(z) = NOT OR(NOT z): map the register so that value i becomes all
    // zeros, compute the OR, and invert the outcome on the target.
    auto conjugate = [&] {
        for (size_t b = 0; b < index_register.size(); b++) {
            if (((i >> b) & 1) == 1) {
                st.apply(gate(GateKind::X, {index_register[b]}));
            }
        }
    };
    conjugate();
    exact_or(st, index_register, target, PrimitiveMode::Expanded, driver);
    st.apply(gate(GateKind::X, {target}));
    conjugate();
}

void exact_or(QuantumState &st, const std::vector<QubitId> &inputs, QubitId target,
              PrimitiveMode mode, MeasureDriver &driver) {
    const size_t t = inputs.size();
    if (t < 1) {
        throw ValidationError("exact_or: needs at least one input");
    }
    if (mode == PrimitiveMode::Ideal) {
        std::vector<QubitId> qs = inputs;
        qs.push_back(target);
        const uint64_t in_mask = (uint64_t{1} << t) - 1;
        st.apply_permutation(qs, [t, in_mask](uint64_t v) {
            return (v & in_mask) != 0 ? v ^ (uint64_t{1} << t) : v;
        });
        return;
    }
    if (t > 4) {
        throw CapacityError("exact_or: expanded mode supports at most 4 inputs");
    }
    const uint32_t m = (1u << t) - 1;
    const double phi = M_PI / static_cast<double>(1u << (t - 1));

    // GHZ resource. The cat-state construction needs 2m-1 transient qubits
    // in the resource register; fall back to the plain ladder when it does
    // not fit (t = 4 gives m = 15).
    QuantumState resource;
    bool fits = 2 * m - 1 <= QuantumState().max_width() &&
                st.width() + m + 1 <= st.max_width();
    if (fits) {
        resource = ghz_laqcc(m, PrimitiveMode::Expanded, driver);
    } else {
        resource = QuantumState();
        auto ids = resource.alloc(m);
        ghz_ladder(resource, ids);
    }
    auto remap = st.absorb(resource);
    std::vector<QubitId> g;
    for (QubitId q : resource.live_qubits()) {
        g.push_back(remap.at(q));
    }
    QubitId scratch = st.alloc(1)[0];

    // One parity qubit reused across all nonzero subsets a: compute
    // PA^a(x), rotate GHZ qubit a by phi conditioned on it, uncompute.
    auto phase_pass = [&](double angle) {
        for (uint32_t a = 1; a <= m; a++) {
            for (size_t b = 0; b < t; b++) {
                if ((a >> b) & 1) {
                    st.apply(gate(GateKind::CNOT, {inputs[b], scratch}));
                }
            }
            st.apply(gate(GateKind::CRZ, {scratch, g[a - 1]}, {}, angle));
            for (size_t b = 0; b < t; b++) {
                if ((a >> b) & 1) {
                    st.apply(gate(GateKind::CNOT, {inputs[b], scratch}));
                }
            }
        }
    };
    phase_pass(phi);

    // Reduce (|0^m> +- |1^m>)/sqrt(2) to a single qubit and kick the OR
    // into the target.
    for (uint32_t i = 1; i < m; i++) {
        st.apply(gate(GateKind::CNOT, {g[0], g[i]}));
    }
    st.apply(gate(GateKind::H, {g[0]}));
    st.apply(gate(GateKind::CNOT, {g[0], target}));
    st.apply(gate(GateKind::H, {g[0]}));
    for (uint32_t i = 1; i < m; i++) {
        st.apply(gate(GateKind::CNOT, {g[0], g[i]}));
    }
    phase_pass(-phi);
    ghz_ladder_inverse(st, g);
    st.recycle(scratch);
    for (QubitId q : g) {
        st.recycle(q);
    }
}

Program exact_or_program(uint32_t input_count) {
    // Flat expanded program for IR export: inputs 0..t-1, target t,
    // scratch t+1, GHZ resource t+2 .. t+1+m prepared by an inline ladder.
    const uint32_t t = input_count;
    if (t < 1 || t > 4) {
        throw ValidationError("exact_or_program: 1 <= inputs <= 4");
    }
    const uint32_t m = (1u << t) - 1;
    const double phi = M_PI / static_cast<double>(1u << (t - 1));
    const QubitId target = t, scratch = t + 1;
    std::vector<QubitId> g(m);
    for (uint32_t i = 0; i < m; i++) {
        g[i] = t + 2 + i;
    }
    Program prog;
    for (uint32_t i = 0; i < t + 2 + m; i++) {
        prog.qubits.push_back(i);
    }
    QuantumLayer body;
    body.gates.push_back(gate(GateKind::H, {g[0]}));
    for (uint32_t i = 1; i < m; i++) {
        body.gates.push_back(gate(GateKind::CNOT, {g[i - 1], g[i]}));
    }
    auto phase_pass = [&](double angle) {
        for (uint32_t a = 1; a <= m; a++) {
            for (uint32_t b = 0; b < t; b++) {
                if ((a >> b) & 1) {
                    body.gates.push_back(gate(GateKind::CNOT, {b, scratch}));
                }
            }
            body.gates.push_back(gate(GateKind::CRZ, {scratch, g[a - 1]}, {}, angle));
            for (uint32_t b = 0; b < t; b++) {
                if ((a >> b) & 1) {
                    body.gates.push_back(gate(GateKind::CNOT, {b, scratch}));
                }
            }
        }
    };
    phase_pass(phi);
    for (uint32_t i = 1; i < m; i++) {
        body.gates.push_back(gate(GateKind::CNOT, {g[0], g[i]}));
    }
    body.gates.push_back(gate(GateKind::H, {g[0]}));
    body.gates.push_back(gate(GateKind::CNOT, {g[0], target}));
    body.gates.push_back(gate(GateKind::H, {g[0]}));
    for (uint32_t i = 1; i < m; i++) {
        body.gates.push_back(gate(GateKind::CNOT, {g[0], g[i]}));
    }
    phase_pass(-phi);
    for (uint32_t i = m; i-- > 1;) {
        body.gates.push_back(gate(GateKind::CNOT, {g[i - 1], g[i]}));
    }
    body.gates.push_back(gate(GateKind::H, {g[0]}));
    prog.layers.push_back(Layer::of(std::move(body)));
    return prog;
}

Program equal_program(uint32_t register_bits, uint64_t i) {
    if (i >= (uint64_t{1} << register_bits)) {
        throw ValidationError("equal_program: index out of register range");
    }
    Program prog = exact_or_program(register_bits);
    QuantumLayer conj_in, fix;
    for (uint32_t b = 0; b < register_bits; b++) {
        if ((i >> b) & 1) {
            conj_in.gates.push_back(gate(GateKind::X, {b}));
        }
    }
    fix.gates.push_back(gate(GateKind::X, {register_bits}));  // target = NOT OR
    if (!conj_in.gates.empty()) {
        prog.layers.insert(prog.layers.begin(), Layer::of(QuantumLayer(conj_in)));
        prog.layers.push_back(Layer::of(std::move(fix)));
        prog.layers.push_back(Layer::of(std::move(conj_in)));
    } else {
        prog.layers.push_back(Layer::of(std::move(fix)));
    }
    return prog;
}

Program or_reduction_program(uint32_t input_count) {
    const uint32_t n = input_count;
    uint32_t t = 0;
    while ((uint32_t{1} << t) < n + 1) {
        t++;
    }
    Program prog;
    for (uint32_t q = 0; q < n + t + (n - 1); q++) {
        prog.qubits.push_back(q);
    }
    for (uint32_t k = 1; k <= t; k++) {
        const double phi = 2.0 * M_PI / static_cast<double>(uint64_t{1} << k);
        const QubitId a = n + k - 1;
        QuantumLayer pre, copy, rot, uncopy, post;
        pre.gates.push_back(gate(GateKind::H, {a}));
        for (uint32_t c = 0; c < n - 1; c++) {
            copy.gates.push_back(gate(GateKind::CNOT, {a, n + t + c}));
            uncopy.gates.push_back(gate(GateKind::CNOT, {a, n + t + c}));
        }
        rot.gates.push_back(gate(GateKind::CRZ, {0, a}, {}, phi));
        for (uint32_t i = 1; i < n; i++) {
            rot.gates.push_back(gate(GateKind::CRZ, {i, n + t + i - 1}, {}, phi));
        }
        post.gates.push_back(gate(GateKind::H, {a}));
        prog.layers.push_back(Layer::of(std::move(pre)));
        if (n > 1) {
            prog.layers.push_back(Layer::of(std::move(copy)));
        }
        prog.layers.push_back(Layer::of(std::move(rot)));
        if (n > 1) {
            prog.layers.push_back(Layer::of(std::move(uncopy)));
        }
        prog.layers.push_back(Layer::of(std::move(post)));
    }
    return prog;
}

std::vector<QubitId> or_reduction(QuantumState &st, const std::vector<QubitId> &inputs,
                                  PrimitiveMode mode, MeasureDriver &driver) {
    const size_t n = inputs.size();
    if (n < 1) {
        throw ValidationError("or_reduction: needs at least one input");
    }
    size_t t = 0;
    while ((size_t{1} << t) < n + 1) {
        t++;
    }
    std::vector<QubitId> outputs = st.alloc(static_cast<uint32_t>(t));
    for (size_t k = 1; k <= t; k++) {
        const double phi = 2.0 * M_PI / static_cast<double>(uint64_t{1} << k);
        QubitId a = outputs[k - 1];
        st.apply(gate(GateKind::H, {a}));
        if (mode == PrimitiveMode::Ideal || n == 1) {
            for (QubitId x : inputs) {
                st.apply(gate(GateKind::CRZ, {x, a}, {}, phi));
            }
        } else {
            // Copies of the mu qubit let the controlled rotations land in
            // parallel in the constant-depth layout; the copy fanout is the
            // CNOT unitary (its expansion is tested via the fanout op).
            auto copies = st.alloc(static_cast<uint32_t>(n - 1));
            for (QubitId c : copies) {
                st.apply(gate(GateKind::CNOT, {a, c}));
            }
            st.apply(gate(GateKind::CRZ, {inputs[0], a}, {}, phi));
            for (size_t i = 1; i < n; i++) {
                st.apply(gate(GateKind::CRZ, {inputs[i], copies[i - 1]}, {}, phi));
            }
            for (QubitId c : copies) {
                st.apply(gate(GateKind::CNOT, {a, c}));
            }
            for (QubitId c : copies) {
                st.recycle(c);
            }
        }
        st.apply(gate(GateKind::H, {a}));
    }
    (void)driver;
    return outputs;
}

// --- Exact amplitude amplification ----------------------------------------------

double exact_amplify_rotation_mass(uint64_t good_num, uint64_t good_den) {
    if (good_num == good_den) {
        return 1.0;
    }
    double f = static_cast<double>(good_num) / static_cast<double>(good_den);
    double beta = std::asin(std::sqrt(f));
    int64_t J = std::max<int64_t>(0, static_cast<int64_t>(
                                         std::ceil((M_PI / 2 - beta) / (2 * beta) - 1e-12)));
    double phi = 2.0 * std::asin(std::sin(M_PI / (4.0 * J + 6.0)) / std::sin(beta));
    std::complex<double> gg(std::sin(beta), 0.0), bb(std::cos(beta), 0.0);
    std::complex<double> g = gg, b = bb;
    const std::complex<double> w = std::polar(1.0, phi);
    for (int64_t it = 0; it <= J; it++) {
        g *= w;
        // diffusion I - (1 - w)|s><s|
        std::complex<double> ip = std::conj(gg) * g + std::conj(bb) * b;
        g -= (1.0 - w) * ip * gg;
        b -= (1.0 - w) * ip * bb;
    }
    return std::norm(g);
}

void exact_amplify(QuantumState &st, const std::vector<QubitId> &working,
                   const std::function<bool(uint64_t)> &good, uint64_t good_num,
                   uint64_t good_den, const std::function<void(QuantumState &)> &prepare,
                   const std::function<void(QuantumState &)> &unprepare, bool inverse) {
    if (good_num == 0) {
        throw ValidationError("exact_amplify: good fraction must be positive");
    }
    if (good_num > good_den) {
        throw ValidationError("exact_amplify: good fraction must be <= 1");
    }
    if (good_num == good_den) {
        return;
    }
    const double f = static_cast<double>(good_num) / static_cast<double>(good_den);
    const double beta = std::asin(std::sqrt(f));
    const int64_t J = std::max<int64_t>(
        0, static_cast<int64_t>(std::ceil((M_PI / 2 - beta) / (2 * beta) - 1e-12)));
    const double phi =
        (inverse ? -2.0 : 2.0) * std::asin(std::sin(M_PI / (4.0 * J + 6.0)) / std::sin(beta));

    const size_t w = working.size();
    auto flag_phase = [&](const std::function<bool(uint64_t)> &pred) {
        // Mark into an ancilla, rotate it, unmark; the ancilla comes back
        // clean and is recycled.
        QubitId f_anc = st.alloc(1)[0];
        std::vector<QubitId> qs = working;
        qs.push_back(f_anc);
        auto mark = [&] {
            st.apply_permutation(qs, [&pred, w](uint64_t v) {
                uint64_t reg = v & ((uint64_t{1} << w) - 1);
                return pred(reg) ? v ^ (uint64_t{1} << w) : v;
            });
        };
        mark();
        st.apply(gate(GateKind::RZ, {f_anc}, {}, phi));
        mark();
        st.recycle(f_anc);
    };
    auto zero = [](uint64_t v) { return v == 0; };

    for (int64_t it = 0; it <= J; it++) {
        if (!inverse) {
            flag_phase(good);
            unprepare(st);
            flag_phase(zero);
            prepare(st);
        } else {
            unprepare(st);
            flag_phase(zero);
            prepare(st);
            flag_phase(good);
        }
    }
}

// --- Branch enumeration ------------------------------------------------------------

double for_each_branch(int num_bits, const std::function<double(MeasureDriver &)> &body) {
    double total = 0.0;
    for (uint64_t v = 0; v < (uint64_t{1} << num_bits); v++) {
        MeasureDriver driver = MeasureDriver::forcing(bits_of(v, num_bits));
        try {
            total += body(driver);
        } catch (const BranchError &) {
            // zero-probability branch
        }
    }
    return total;
}

}  // namespace laqcc
