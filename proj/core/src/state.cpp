#include "laqcc/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "laqcc/errors.hpp"

namespace laqcc {

namespace {
constexpr double kNormTol = 1e-10;
constexpr double kBranchTol = 1e-12;
}  // namespace

QuantumState::QuantumState(uint32_t max_width) : max_width_(max_width) {
    amps_ = {Amplitude(1.0, 0.0)};
}

uint32_t QuantumState::pos_of(QubitId q, const char *what) const {
    auto it = position_.find(q);
    if (it == position_.end()) {
        throw UsageError(std::string(what) + ": qubit " + std::to_string(q) + " is not live");
    }
    return it->second;
}

std::vector<QubitId> QuantumState::alloc(uint32_t count) {
    if (count < 1) {
        throw ValidationError("alloc: count must be >= 1");
    }
    if (width() + count > max_width_) {
        throw CapacityError("alloc: live width " + std::to_string(width() + count) +
                            " would exceed limit " + std::to_string(max_width_));
    }
    std::vector<QubitId> ids;
    ids.reserve(count);
    for (uint32_t i = 0; i < count; i++) {
        QubitId id = next_id_++;
        position_[id] = width();
        order_.push_back(id);
        ids.push_back(id);
    }
    // New qubits sit at the most significant positions in |0>: the table
    // doubles per qubit with the upper half zero.
    amps_.resize(size_t{1} << width(), Amplitude(0.0, 0.0));
    return ids;
}

void QuantumState::apply(const GateOp &op) {
    size_t k = op.targets.size();
    if (k == 0) {
        return;
    }
    uint64_t cmask = 0;
    for (QubitId c : op.controls) {
        cmask |= uint64_t{1} << pos_of(c, "apply");
    }
    std::vector<uint32_t> tpos(k);
    uint64_t tmask = 0;
    for (size_t i = 0; i < k; i++) {
        tpos[i] = pos_of(op.targets[i], "apply");
        uint64_t bit = uint64_t{1} << tpos[i];
        if (tmask & bit) {
            throw ValidationError("apply: duplicate target qubit");
        }
        tmask |= bit;
    }
    if (tmask & cmask) {
        throw ValidationError("apply: targets and controls must be disjoint");
    }
    std::vector<Amplitude> u = op.unitary();
    size_t dim = size_t{1} << k;
    if (u.size() != dim * dim) {
        throw ValidationError("apply: matrix dimension mismatch");
    }
    if (op.kind == GateKind::Custom && unitarity_defect(u) > 1e-12) {
        throw ValidationError("apply: custom matrix is not unitary");
    }

    const uint64_t size = amps_.size();
    if (k == 1) {
        const uint64_t bit = uint64_t{1} << tpos[0];
        const Amplitude u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
        for (uint64_t i = 0; i < size; i++) {
            if ((i & bit) || ((i & cmask) != cmask)) {
                continue;
            }
            Amplitude a0 = amps_[i], a1 = amps_[i | bit];
            Amplitude b0 = u00 * a0 + u01 * a1;
            Amplitude b1 = u10 * a0 + u11 * a1;
            amps_[i] = b0;
            amps_[i | bit] = b1;
        }
    } else {
        std::vector<Amplitude> in(dim), out(dim);
        for (uint64_t i = 0; i < size; i++) {
            if ((i & tmask) || ((i & cmask) != cmask)) {
                continue;
            }
            for (size_t r = 0; r < dim; r++) {
                uint64_t idx = i;
                for (size_t b = 0; b < k; b++) {
                    if (r & (size_t{1} << b)) {
                        idx |= uint64_t{1} << tpos[b];
                    }
                }
                in[r] = amps_[idx];
            }
            for (size_t r = 0; r < dim; r++) {
                Amplitude acc = 0.0;
                for (size_t c = 0; c < dim; c++) {
                    acc += u[r * dim + c] * in[c];
                }
                out[r] = acc;
            }
            for (size_t r = 0; r < dim; r++) {
                uint64_t idx = i;
                for (size_t b = 0; b < k; b++) {
                    if (r & (size_t{1} << b)) {
                        idx |= uint64_t{1} << tpos[b];
                    }
                }
                amps_[idx] = out[r];
            }
        }
    }
}

double QuantumState::prob_one(QubitId q) const {
    uint64_t bit = uint64_t{1} << pos_of(q, "measure");
    double p1 = 0.0;
    for (uint64_t i = 0; i < amps_.size(); i++) {
        if (i & bit) {
            p1 += std::norm(amps_[i]);
        }
    }
    return p1;
}

void QuantumState::project(uint32_t pos, int value, double branch_prob) {
    const uint64_t bit = uint64_t{1} << pos;
    const double scale = 1.0 / std::sqrt(branch_prob);
    for (uint64_t i = 0; i < amps_.size(); i++) {
        bool hit = ((i & bit) != 0) == (value == 1);
        amps_[i] = hit ? amps_[i] * scale : Amplitude(0.0, 0.0);
    }
}

MeasurementRecord QuantumState::measure(QubitId q, RandomSource &rng, int forced) {
    uint32_t pos = pos_of(q, "measure");
    double p1 = prob_one(q);
    MeasurementRecord rec;
    rec.qubit = q;
    if (forced == 0 || forced == 1) {
        rec.forced = true;
        rec.outcome = forced;
        rec.probability_of_outcome = forced ? p1 : 1.0 - p1;
        if (rec.probability_of_outcome < kBranchTol) {
            throw BranchError("measure: forcing a zero-probability outcome on qubit " +
                              std::to_string(q));
        }
    } else {
        rec.forced = false;
        rec.outcome = rng.next_double() < p1 ? 1 : 0;
        rec.probability_of_outcome = rec.outcome ? p1 : 1.0 - p1;
    }
    project(pos, rec.outcome, rec.probability_of_outcome);
    return rec;
}

MeasurementRecord QuantumState::measure_forced(QubitId q, int outcome) {
    RandomSource unused(0);
    return measure(q, unused, outcome);
}

void QuantumState::recycle(QubitId q) {
    uint32_t pos = pos_of(q, "recycle");
    const uint64_t bit = uint64_t{1} << pos;
    double m1 = 0.0, m0 = 0.0;
    for (uint64_t i = 0; i < amps_.size(); i++) {
        ((i & bit) ? m1 : m0) += std::norm(amps_[i]);
    }
    int keep = m1 > m0 ? 1 : 0;
    double off = keep ? m0 : m1;
    if (off >= kBranchTol) {
        throw RecycleError("recycle: qubit " + std::to_string(q) +
                           " is not disentangled (off-mass " + std::to_string(off) + ")");
    }
    // Compact the table: drop position `pos`, keeping the dominant branch.
    std::vector<Amplitude> next(amps_.size() >> 1);
    const uint64_t low = bit - 1;
    for (uint64_t j = 0; j < next.size(); j++) {
        uint64_t i = (j & low) | ((j & ~low) << 1) | (keep ? bit : 0);
        next[j] = amps_[i];
    }
    amps_ = std::move(next);
    order_.erase(order_.begin() + pos);
    position_.erase(q);
    for (uint32_t p = pos; p < order_.size(); p++) {
        position_[order_[p]] = p;
    }
    // Restore unit norm; the dominant branch held all but < 1e-12 of the mass.
    double n = norm_sq();
    if (std::abs(n - 1.0) > 1e-15) {
        double scale = 1.0 / std::sqrt(n);
        for (auto &a : amps_) {
            a *= scale;
        }
    }
}

void QuantumState::apply_diagonal(const std::vector<QubitId> &qubits,
                                  const std::function<Amplitude(uint64_t)> &phase) {
    std::vector<uint32_t> pos(qubits.size());
    for (size_t i = 0; i < qubits.size(); i++) {
        pos[i] = pos_of(qubits[i], "apply_diagonal");
    }
    for (uint64_t i = 0; i < amps_.size(); i++) {
        uint64_t v = 0;
        for (size_t b = 0; b < pos.size(); b++) {
            v |= uint64_t{(i >> pos[b]) & 1} << b;
        }
        amps_[i] *= phase(v);
    }
}

void QuantumState::apply_permutation(const std::vector<QubitId> &qubits,
                                     const std::function<uint64_t(uint64_t)> &perm) {
    std::vector<uint32_t> pos(qubits.size());
    for (size_t i = 0; i < qubits.size(); i++) {
        pos[i] = pos_of(qubits[i], "apply_permutation");
    }
    const uint64_t m = uint64_t{1} << qubits.size();
    std::vector<Amplitude> next(amps_.size(), Amplitude(0.0, 0.0));
    std::vector<char> seen(m, 0);
    for (uint64_t v = 0; v < m; v++) {
        uint64_t w = perm(v);
        if (w >= m || seen[w]) {
            throw ValidationError("apply_permutation: map is not a bijection");
        }
        seen[w] = 1;
    }
    for (uint64_t i = 0; i < amps_.size(); i++) {
        uint64_t v = 0;
        for (size_t b = 0; b < pos.size(); b++) {
            v |= uint64_t{(i >> pos[b]) & 1} << b;
        }
        uint64_t w = perm(v);
        uint64_t j = i;
        for (size_t b = 0; b < pos.size(); b++) {
            uint64_t bit = uint64_t{1} << pos[b];
            j = (w >> b) & 1 ? (j | bit) : (j & ~bit);
        }
        next[j] = amps_[i];
    }
    amps_ = std::move(next);
}

double QuantumState::basis_prob(const std::vector<QubitId> &qubits, uint64_t value) const {
    std::vector<uint32_t> pos(qubits.size());
    for (size_t i = 0; i < qubits.size(); i++) {
        pos[i] = pos_of(qubits[i], "basis_prob");
    }
    double p = 0.0;
    for (uint64_t i = 0; i < amps_.size(); i++) {
        uint64_t v = 0;
        for (size_t b = 0; b < pos.size(); b++) {
            v |= uint64_t{(i >> pos[b]) & 1} << b;
        }
        if (v == value) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

double QuantumState::norm_sq() const {
    double n = 0.0;
    for (const auto &a : amps_) {
        n += std::norm(a);
    }
    return n;
}

std::unordered_map<QubitId, QubitId> QuantumState::absorb(const QuantumState &other) {
    if (width() + other.width() > max_width_) {
        throw CapacityError("absorb: combined width exceeds limit");
    }
    std::unordered_map<QubitId, QubitId> remap;
    uint32_t w_old = width();
    for (QubitId q : other.order_) {
        QubitId id = next_id_++;
        position_[id] = width();
        order_.push_back(id);
        remap[q] = id;
    }
    std::vector<Amplitude> next(size_t{1} << width());
    const uint64_t lo_size = uint64_t{1} << w_old;
    for (uint64_t j = 0; j < other.amps_.size(); j++) {
        for (uint64_t i = 0; i < lo_size; i++) {
            next[(j << w_old) | i] = other.amps_[j] * amps_[i];
        }
    }
    amps_ = std::move(next);
    return remap;
}

double QuantumState::fidelity(const QuantumState &a, const QuantumState &b) {
    if (a.width() != b.width()) {
        throw UsageError("fidelity: width mismatch");
    }
    std::vector<QubitId> ia = a.order_, ib = b.order_;
    std::vector<QubitId> sa = ia, sb = ib;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    Amplitude acc = 0.0;
    if (sa == sb && ia != ib) {
        // Same qubit ids in different table orders: match by id.
        std::vector<uint32_t> bpos(a.width());
        for (uint32_t p = 0; p < a.width(); p++) {
            bpos[p] = b.position_.at(ia[p]);
        }
        for (uint64_t i = 0; i < a.amps_.size(); i++) {
            uint64_t j = 0;
            for (uint32_t p = 0; p < a.width(); p++) {
                j |= uint64_t{(i >> p) & 1} << bpos[p];
            }
            acc += std::conj(a.amps_[i]) * b.amps_[j];
        }
    } else {
        for (uint64_t i = 0; i < a.amps_.size(); i++) {
            acc += std::conj(a.amps_[i]) * b.amps_[i];
        }
    }
    return std::abs(acc);
}

std::string QuantumState::dump_json() const {
    nlohmann::ordered_json j;
    j["n"] = width();
    auto &arr = j["amplitudes"] = nlohmann::ordered_json::array();
    for (const auto &a : amps_) {
        arr.push_back({a.real(), a.imag()});
    }
    return j.dump(2);
}

QuantumState QuantumState::from_json(const std::string &text, uint32_t max_width) {
    auto j = nlohmann::json::parse(text);
    uint32_t n = j.at("n").get<uint32_t>();
    QuantumState st(max_width);
    if (n > 0) {
        st.alloc(n);
    }
    auto &arr = j.at("amplitudes");
    if (arr.size() != st.amps_.size()) {
        throw ValidationError("state file: amplitude count does not match n");
    }
    for (size_t i = 0; i < arr.size(); i++) {
        st.amps_[i] = Amplitude(arr[i][0].get<double>(), arr[i][1].get<double>());
    }
    if (std::abs(st.norm_sq() - 1.0) > 1e-8) {
        throw ValidationError("state file: amplitudes are not normalized");
    }
    return st;
}

}  // namespace laqcc
