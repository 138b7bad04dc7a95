#include "laqcc/program.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "laqcc/errors.hpp"

namespace laqcc {

namespace {

int64_t param(const ClassicalFn &fn, const std::string &key) {
    auto it = fn.params.find(key);
    if (it == fn.params.end()) {
        throw ValidationError("classical fn " + fn.name + " missing param " + key);
    }
    return it->second;
}

uint64_t take_uint(const std::vector<int> &bits, size_t offset, size_t width) {
    uint64_t v = 0;
    for (size_t b = 0; b < width; b++) {
        v |= static_cast<uint64_t>(bits.at(offset + b) & 1) << b;
    }
    return v;
}

}  // namespace

std::vector<int> classical_eval(const ClassicalFn &fn, const std::vector<int> &bits) {
    if (fn.name == "parity") {
        int acc = 0;
        for (int b : bits) {
            acc ^= b & 1;
        }
        return {acc};
    }
    if (fn.name == "prefix-parity") {
        std::vector<int> out(bits.size());
        int acc = 0;
        for (size_t i = 0; i < bits.size(); i++) {
            acc ^= bits[i] & 1;
            out[i] = acc;
        }
        return out;
    }
    if (fn.name == "hamming-weight") {
        int64_t w = std::accumulate(bits.begin(), bits.end(), int64_t{0});
        size_t out_bits = 1;
        while ((int64_t{1} << out_bits) <= static_cast<int64_t>(bits.size())) {
            out_bits++;
        }
        // Most significant bit first.
        std::vector<int> out(out_bits);
        for (size_t i = 0; i < out_bits; i++) {
            out[i] = static_cast<int>((w >> (out_bits - 1 - i)) & 1);
        }
        return out;
    }
    if (fn.name == "sort-permutation") {
        size_t count = static_cast<size_t>(param(fn, "count"));
        size_t width = static_cast<size_t>(param(fn, "width"));
        if (bits.size() != count * width) {
            throw ValidationError("sort-permutation: input size mismatch");
        }
        std::vector<uint64_t> vals(count);
        for (size_t i = 0; i < count; i++) {
            vals[i] = take_uint(bits, i * width, width);
        }
        std::vector<size_t> idx(count);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return vals[a] < vals[b]; });
        // Output: for each register i, its position in sorted order.
        std::vector<size_t> dest(count);
        for (size_t rank = 0; rank < count; rank++) {
            dest[idx[rank]] = rank;
        }
        size_t pw = 1;
        while ((size_t{1} << pw) < count) {
            pw++;
        }
        std::vector<int> out;
        for (size_t i = 0; i < count; i++) {
            for (size_t b = 0; b < pw; b++) {
                out.push_back(static_cast<int>((dest[i] >> b) & 1));
            }
        }
        return out;
    }
    if (fn.name == "comparison-table") {
        size_t count = static_cast<size_t>(param(fn, "count"));
        size_t width = static_cast<size_t>(param(fn, "width"));
        if (bits.size() != count * width) {
            throw ValidationError("comparison-table: input size mismatch");
        }
        std::vector<int> out;
        for (size_t i = 0; i < count; i++) {
            for (size_t j = i + 1; j < count; j++) {
                out.push_back(take_uint(bits, i * width, width) > take_uint(bits, j * width, width)
                                  ? 1
                                  : 0);
            }
        }
        return out;
    }
    if (fn.name == "custom-table") {
        size_t out_width = static_cast<size_t>(param(fn, "out_width"));
        uint64_t key = take_uint(bits, 0, bits.size());
        if (key >= fn.table.size()) {
            throw ValidationError("custom-table: input out of table range");
        }
        std::vector<int> out(out_width);
        for (size_t b = 0; b < out_width; b++) {
            out[b] = static_cast<int>((fn.table[key] >> b) & 1);
        }
        return out;
    }
    throw ValidationError("unknown classical function: " + fn.name);
}

Layer Layer::of(QuantumLayer l) {
    Layer layer;
    layer.kind = Kind::Quantum;
    layer.quantum = std::move(l);
    return layer;
}

Layer Layer::of(MeasureLayer l) {
    Layer layer;
    layer.kind = Kind::Measure;
    layer.measure = std::move(l);
    return layer;
}

Layer Layer::of(ClassicalLayer l) {
    Layer layer;
    layer.kind = Kind::Classical;
    layer.classical = std::move(l);
    return layer;
}

MeasurementRecord MeasureDriver::measure(QuantumState &st, QubitId q) {
    MeasurementRecord rec;
    if (cursor < forced.size()) {
        rec = st.measure_forced(q, forced[cursor++]);
    } else {
        if (rng == nullptr) {
            throw ValidationError("MeasureDriver: forced outcomes exhausted and no rng set");
        }
        rec = st.measure(q, *rng);
    }
    records.push_back(rec);
    branch_probability *= rec.probability_of_outcome;
    return rec;
}

MeasureDriver MeasureDriver::sampling(RandomSource &rng) {
    MeasureDriver d;
    d.rng = &rng;
    return d;
}

MeasureDriver MeasureDriver::forcing(std::vector<int> outcomes) {
    MeasureDriver d;
    d.forced = std::move(outcomes);
    return d;
}

void Program::validate() const {
    std::set<std::string> known;
    size_t m_counter = 0;
    for (const auto &layer : layers) {
        switch (layer.kind) {
            case Layer::Kind::Quantum:
                for (const auto &g : layer.quantum.gates) {
                    if (g.condition && !known.count(g.condition->name)) {
                        throw ValidationError("dangling feedforward reference: " +
                                              g.condition->name);
                    }
                }
                break;
            case Layer::Kind::Measure:
                for (size_t i = 0; i < layer.measure.qubits.size(); i++) {
                    known.insert("m" + std::to_string(m_counter++));
                }
                break;
            case Layer::Kind::Classical:
                for (const auto &in : layer.classical.inputs) {
                    if (!known.count(in)) {
                        throw ValidationError("classical layer reads unknown bit: " + in);
                    }
                }
                for (const auto &out : layer.classical.outputs) {
                    known.insert(out);
                }
                break;
        }
    }
}

Transcript Program::run(QuantumState &st, MeasureDriver &driver, const RunHooks *hooks) const {
    validate();
    Transcript tr;
    size_t m_counter = 0;
    for (const auto &layer : layers) {
        switch (layer.kind) {
            case Layer::Kind::Quantum: {
                std::set<QubitId> touched;
                for (const auto &g : layer.quantum.gates) {
                    if (g.condition) {
                        auto it = tr.bits.find(g.condition->name);
                        if (it == tr.bits.end()) {
                            throw ValidationError("dangling feedforward reference: " +
                                                  g.condition->name);
                        }
                        if (it->second == 0) {
                            continue;
                        }
                    }
                    st.apply(g);
                    std::vector<QubitId> acted = g.targets;
                    acted.insert(acted.end(), g.controls.begin(), g.controls.end());
                    touched.insert(acted.begin(), acted.end());
                    if (hooks && hooks->after_gate) {
                        hooks->after_gate(st, acted);
                    }
                }
                if (hooks && hooks->on_idle) {
                    std::vector<QubitId> idle;
                    for (QubitId q : st.live_qubits()) {
                        if (!touched.count(q)) {
                            idle.push_back(q);
                        }
                    }
                    hooks->on_idle(st, idle);
                }
                break;
            }
            case Layer::Kind::Measure:
                for (QubitId q : layer.measure.qubits) {
                    MeasurementRecord rec = driver.measure(st, q);
                    if (hooks && hooks->measurement_flip_probability > 0.0 &&
                        hooks->noise_rng != nullptr &&
                        hooks->noise_rng->next_double() < hooks->measurement_flip_probability) {
                        rec.outcome ^= 1;
                    }
                    tr.records.push_back(rec);
                    tr.bits["m" + std::to_string(m_counter++)] = rec.outcome;
                    if (layer.measure.recycle) {
                        st.recycle(q);
                    }
                }
                break;
            case Layer::Kind::Classical: {
                std::vector<int> in;
                in.reserve(layer.classical.inputs.size());
                for (const auto &name : layer.classical.inputs) {
                    auto it = tr.bits.find(name);
                    if (it == tr.bits.end()) {
                        throw ValidationError("classical layer reads unknown bit: " + name);
                    }
                    in.push_back(it->second);
                }
                std::vector<int> out = classical_eval(layer.classical.fn, in);
                if (out.size() != layer.classical.outputs.size()) {
                    throw ValidationError("classical layer output arity mismatch");
                }
                for (size_t i = 0; i < out.size(); i++) {
                    tr.bits[layer.classical.outputs[i]] = out[i];
                }
                break;
            }
        }
    }
    tr.branch_probability = driver.branch_probability;
    return tr;
}

CostReport Program::cost() const {
    CostReport report;
    std::set<QubitId> universe(qubits.begin(), qubits.end());
    for (const auto &layer : layers) {
        if (layer.kind == Layer::Kind::Quantum) {
            for (const auto &g : layer.quantum.gates) {
                universe.insert(g.targets.begin(), g.targets.end());
                universe.insert(g.controls.begin(), g.controls.end());
            }
        } else if (layer.kind == Layer::Kind::Measure) {
            universe.insert(layer.measure.qubits.begin(), layer.measure.qubits.end());
        }
    }
    report.peak_width = static_cast<int64_t>(universe.size());

    // Quantum depth counts only quantum layers; a layer's depth is the
    // longest per-qubit gate chain inside it.
    for (const auto &layer : layers) {
        if (layer.kind != Layer::Kind::Quantum) {
            continue;
        }
        std::map<QubitId, int64_t> chain;
        int64_t depth = 0;
        for (const auto &g : layer.quantum.gates) {
            std::vector<QubitId> acted = g.targets;
            acted.insert(acted.end(), g.controls.begin(), g.controls.end());
            int64_t start = 0;
            for (QubitId q : acted) {
                start = std::max(start, chain[q]);
            }
            for (QubitId q : acted) {
                chain[q] = start + 1;
            }
            depth = std::max(depth, start + 1);
            report.gate_counts[gate_kind_name(g.kind)]++;
        }
        report.quantum_depth += depth;
    }

    // Alternations: classical layers whose outputs feed at least one later gate.
    for (size_t li = 0; li < layers.size(); li++) {
        if (layers[li].kind != Layer::Kind::Classical) {
            continue;
        }
        std::set<std::string> outs(layers[li].classical.outputs.begin(),
                                   layers[li].classical.outputs.end());
        bool feeds = false;
        for (size_t lj = li + 1; lj < layers.size() && !feeds; lj++) {
            if (layers[lj].kind != Layer::Kind::Quantum) {
                continue;
            }
            for (const auto &g : layers[lj].quantum.gates) {
                if (g.condition && outs.count(g.condition->name)) {
                    feeds = true;
                    break;
                }
            }
        }
        if (feeds) {
            report.alternations++;
        }
    }
    return report;
}

std::vector<std::string> lint_linear_adjacency(const Program &prog,
                                               const std::vector<QubitId> &order) {
    std::map<QubitId, int64_t> pos;
    for (size_t i = 0; i < order.size(); i++) {
        pos[order[i]] = static_cast<int64_t>(i);
    }
    std::vector<std::string> findings;
    for (size_t li = 0; li < prog.layers.size(); li++) {
        if (prog.layers[li].kind != Layer::Kind::Quantum) {
            continue;
        }
        for (const auto &g : prog.layers[li].quantum.gates) {
            std::vector<QubitId> acted = g.targets;
            acted.insert(acted.end(), g.controls.begin(), g.controls.end());
            if (acted.size() != 2 || !pos.count(acted[0]) || !pos.count(acted[1])) {
                continue;
            }
            if (std::abs(pos[acted[0]] - pos[acted[1]]) != 1) {
                findings.push_back("layer " + std::to_string(li) + ": " +
                                   gate_kind_name(g.kind) + " on non-adjacent qubits " +
                                   std::to_string(acted[0]) + "," + std::to_string(acted[1]));
            }
        }
    }
    return findings;
}

std::string Program::to_json() const {
    nlohmann::ordered_json j;
    j["qubits"] = qubits;
    auto &jl = j["layers"] = nlohmann::ordered_json::array();
    for (const auto &layer : layers) {
        nlohmann::ordered_json e;
        switch (layer.kind) {
            case Layer::Kind::Quantum: {
                e["kind"] = "quantum";
                auto &gs = e["gates"] = nlohmann::ordered_json::array();
                for (const auto &g : layer.quantum.gates) {
                    nlohmann::ordered_json jg;
                    jg["g"] = gate_kind_name(g.kind);
                    if (g.kind == GateKind::CNOT || g.kind == GateKind::CZ ||
                        g.kind == GateKind::CRZ || g.kind == GateKind::CRY) {
                        jg["t"] = std::vector<QubitId>{g.controls.at(0), g.targets.at(0)};
                    } else {
                        jg["t"] = g.targets;
                        if (!g.controls.empty()) {
                            jg["c"] = g.controls;
                        }
                    }
                    if (g.kind == GateKind::RX || g.kind == GateKind::RY ||
                        g.kind == GateKind::RZ || g.kind == GateKind::CRZ ||
                        g.kind == GateKind::CRY) {
                        jg["angle"] = g.angle;
                    }
                    if (g.kind == GateKind::Custom) {
                        auto &m = jg["matrix"] = nlohmann::ordered_json::array();
                        for (const auto &a : g.matrix) {
                            m.push_back({a.real(), a.imag()});
                        }
                    }
                    if (g.condition) {
                        jg["if"] = g.condition->name;
                    }
                    gs.push_back(std::move(jg));
                }
                break;
            }
            case Layer::Kind::Measure:
                e["kind"] = "measure";
                e["qubits"] = layer.measure.qubits;
                if (layer.measure.recycle) {
                    e["recycle"] = true;
                }
                break;
            case Layer::Kind::Classical:
                e["kind"] = "classical";
                e["fn"] = layer.classical.fn.name;
                if (!layer.classical.fn.params.empty()) {
                    e["params"] = layer.classical.fn.params;
                }
                if (!layer.classical.fn.table.empty()) {
                    e["table"] = layer.classical.fn.table;
                }
                e["in"] = layer.classical.inputs;
                e["out"] = layer.classical.outputs;
                break;
        }
        jl.push_back(std::move(e));
    }
    return j.dump(2);
}

Program Program::from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    Program prog;
    if (j.contains("qubits")) {
        prog.qubits = j["qubits"].get<std::vector<QubitId>>();
    }
    for (const auto &e : j.at("layers")) {
        std::string kind = e.at("kind").get<std::string>();
        if (kind == "quantum") {
            QuantumLayer ql;
            for (const auto &jg : e.at("gates")) {
                GateKind gk = gate_kind_from_name(jg.at("g").get<std::string>());
                std::vector<QubitId> t = jg.at("t").get<std::vector<QubitId>>();
                GateOp op;
                if (gk == GateKind::Custom) {
                    std::vector<Amplitude> m;
                    for (const auto &a : jg.at("matrix")) {
                        m.emplace_back(a[0].get<double>(), a[1].get<double>());
                    }
                    op = custom_gate(t, std::move(m));
                } else {
                    double angle = jg.contains("angle") ? jg["angle"].get<double>() : 0.0;
                    std::vector<QubitId> c;
                    if (jg.contains("c")) {
                        c = jg["c"].get<std::vector<QubitId>>();
                    }
                    op = gate(gk, t, c, angle);
                }
                if (jg.contains("if")) {
                    op.condition = ClassicalRef{jg["if"].get<std::string>()};
                }
                ql.gates.push_back(std::move(op));
            }
            prog.layers.push_back(Layer::of(std::move(ql)));
        } else if (kind == "measure") {
            MeasureLayer ml;
            ml.qubits = e.at("qubits").get<std::vector<QubitId>>();
            ml.recycle = e.value("recycle", false);
            prog.layers.push_back(Layer::of(std::move(ml)));
        } else if (kind == "classical") {
            ClassicalLayer cl;
            cl.fn.name = e.at("fn").get<std::string>();
            if (e.contains("params")) {
                for (auto it = e["params"].begin(); it != e["params"].end(); ++it) {
                    cl.fn.params[it.key()] = it.value().get<int64_t>();
                }
            }
            if (e.contains("table")) {
                cl.fn.table = e["table"].get<std::vector<uint64_t>>();
            }
            cl.inputs = e.at("in").get<std::vector<std::string>>();
            cl.outputs = e.at("out").get<std::vector<std::string>>();
            prog.layers.push_back(Layer::of(std::move(cl)));
        } else {
            throw ValidationError("unknown layer kind: " + kind);
        }
    }
    return prog;
}

}  // namespace laqcc
