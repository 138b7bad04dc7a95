#include "laqcc/stateprep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "laqcc/errors.hpp"
#include "laqcc/numbersys.hpp"

namespace laqcc {

namespace {

uint32_t bits_for(uint64_t q) {
    uint32_t b = 0;
    while ((uint64_t{1} << b) < q) {
        b++;
    }
    return b;
}

void hadamard_all(QuantumState &st, const std::vector<QubitId> &reg) {
    for (QubitId q : reg) {
        st.apply(gate(GateKind::H, {q}));
    }
}

/// The amplification step of the uniform-over-q preparation (the part after
/// the Hadamard layer), or its inverse.
void amplify_uniform(QuantumState &st, const std::vector<QubitId> &reg, uint64_t q,
                     bool inverse) {
    uint32_t n = static_cast<uint32_t>(reg.size());
    if (q == (uint64_t{1} << n)) {
        return;
    }
    exact_amplify(
        st, reg, [q](uint64_t v) { return v < q; }, q, uint64_t{1} << n,
        [&reg](QuantumState &s) { hadamard_all(s, reg); },
        [&reg](QuantumState &s) { hadamard_all(s, reg); }, inverse);
}

}  // namespace

std::vector<QubitId> uniform_q_register(QuantumState &st, uint64_t q, PrimitiveMode mode,
                                        MeasureDriver &driver) {
    (void)mode;
    (void)driver;
    if (q < 1) {
        throw ValidationError("uniform superposition needs q >= 1");
    }
    uint32_t n = bits_for(q);
    if (n == 0) {
        return {};
    }
    std::vector<QubitId> reg = st.alloc(n);
    hadamard_all(st, reg);
    amplify_uniform(st, reg, q, false);
    return reg;
}

QuantumState prepare_uniform_q(uint64_t q, PrimitiveMode mode, MeasureDriver &driver) {
    QuantumState st;
    uniform_q_register(st, q, mode, driver);
    return st;
}

// --- W state -----------------------------------------------------------------

namespace {

/// index-register value i flips system qubit i (the Equal_i sweep of the
/// Uncompress step) as one basis permutation.
void uncompress_ideal(QuantumState &st, const std::vector<QubitId> &index_reg,
                      const std::vector<QubitId> &system, uint32_t n) {
    std::vector<QubitId> qs = index_reg;
    qs.insert(qs.end(), system.begin(), system.end());
    const size_t kw = index_reg.size();
    st.apply_permutation(qs, [kw, n](uint64_t v) {
        uint64_t reg = v & ((uint64_t{1} << kw) - 1);
        return reg < n ? v ^ (uint64_t{1} << (kw + reg)) : v;
    });
}

void uncompress_expanded(QuantumState &st, const std::vector<QubitId> &index_reg,
                         const std::vector<QubitId> &system, uint32_t n,
                         MeasureDriver &driver) {
    const size_t kw = index_reg.size();
    // n-1 fanout copies of the index register.
    std::vector<std::vector<QubitId>> regs{index_reg};
    std::vector<QubitId> copies;
    if (n >= 2) {
        copies = st.alloc(static_cast<uint32_t>(kw * (n - 1)));
        for (uint32_t i = 0; i + 1 < n; i++) {
            regs.emplace_back(copies.begin() + i * kw, copies.begin() + (i + 1) * kw);
        }
        for (size_t b = 0; b < kw; b++) {
            std::vector<QubitId> targets;
            for (uint32_t i = 1; i < n; i++) {
                targets.push_back(regs[i][b]);
            }
            fanout(st, index_reg[b], targets, PrimitiveMode::Expanded, driver);
        }
    }
    for (uint32_t i = 0; i < n; i++) {
        equal_gate(st, regs[i], i, system[i], PrimitiveMode::Expanded, driver);
    }
    if (n >= 2) {
        for (size_t b = 0; b < kw; b++) {
            std::vector<QubitId> targets;
            for (uint32_t i = 1; i < n; i++) {
                targets.push_back(regs[i][b]);
            }
            fanout(st, index_reg[b], targets, PrimitiveMode::Expanded, driver);
        }
        for (QubitId c : copies) {
            st.recycle(c);
        }
    }
}

/// Hadamard basis on the index register, phase cancellation keyed to the
/// binary expansion of each one-hot position, Hadamard back. Clears the
/// index register.
void compress_ideal(QuantumState &st, const std::vector<QubitId> &index_reg,
                    const std::vector<QubitId> &system, uint32_t n) {
    hadamard_all(st, index_reg);
    for (uint32_t i = 0; i < n; i++) {
        for (size_t b = 0; b < index_reg.size(); b++) {
            if ((i >> b) & 1) {
                st.apply(gate(GateKind::CZ, {system[i], index_reg[b]}));
            }
        }
    }
    hadamard_all(st, index_reg);
}

void compress_expanded(QuantumState &st, const std::vector<QubitId> &index_reg,
                       const std::vector<QubitId> &system, uint32_t n,
                       MeasureDriver &driver) {
    const size_t kw = index_reg.size();
    hadamard_all(st, index_reg);
    std::vector<std::vector<QubitId>> regs{index_reg};
    std::vector<QubitId> copies;
    if (n >= 2) {
        copies = st.alloc(static_cast<uint32_t>(kw * (n - 1)));
        for (uint32_t i = 0; i + 1 < n; i++) {
            regs.emplace_back(copies.begin() + i * kw, copies.begin() + (i + 1) * kw);
        }
        for (size_t b = 0; b < kw; b++) {
            std::vector<QubitId> targets;
            for (uint32_t i = 1; i < n; i++) {
                targets.push_back(regs[i][b]);
            }
            fanout(st, index_reg[b], targets, PrimitiveMode::Expanded, driver);
        }
    }
    for (uint32_t i = 0; i < n; i++) {
        for (size_t b = 0; b < kw; b++) {
            if ((i >> b) & 1) {
                st.apply(gate(GateKind::CZ, {system[i], regs[i][b]}));
            }
        }
    }
    if (n >= 2) {
        for (size_t b = 0; b < kw; b++) {
            std::vector<QubitId> targets;
            for (uint32_t i = 1; i < n; i++) {
                targets.push_back(regs[i][b]);
            }
            fanout(st, index_reg[b], targets, PrimitiveMode::Expanded, driver);
        }
        for (QubitId c : copies) {
            st.recycle(c);
        }
    }
    hadamard_all(st, index_reg);
}

}  // namespace

QuantumState prepare_w(uint32_t n, PrimitiveMode mode, MeasureDriver &driver) {
    if (n < 1) {
        throw ValidationError("prepare_w: n must be >= 1");
    }
    if (mode == PrimitiveMode::Expanded && n > 4) {
        throw CapacityError("prepare_w: expanded mode supported for n <= 4");
    }
    QuantumState st;
    if (n == 1) {
        auto q = st.alloc(1);
        st.apply(gate(GateKind::X, {q[0]}));
        return st;
    }
    std::vector<QubitId> index_reg = uniform_q_register(st, n, mode, driver);
    std::vector<QubitId> system = st.alloc(n);
    if (mode == PrimitiveMode::Ideal) {
        uncompress_ideal(st, index_reg, system, n);
        compress_ideal(st, index_reg, system, n);
    } else {
        uncompress_expanded(st, index_reg, system, n, driver);
        compress_expanded(st, index_reg, system, n, driver);
    }
    for (QubitId q : index_reg) {
        st.recycle(q);
    }
    return st;
}

// --- Dicke, small k --------------------------------------------------------------

std::pair<uint64_t, uint64_t> dicke_filter_fraction(uint32_t n, uint32_t k) {
    // n! / ((n-k)! n^k), computed exactly with big integers and reduced.
    mpz_class num = factorial(n) / factorial(n - k);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), n, k);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    num /= g;
    den /= g;
    if (!num.fits_ulong_p() || !den.fits_ulong_p()) {
        throw ValidationError("dicke_filter_fraction: reduced fraction exceeds 64 bits");
    }
    return {num.get_ui(), den.get_ui()};
}

namespace {

/// Flip `flag` iff value(a) > value(b); ideal Greaterthan.
void greaterthan_flag(QuantumState &st, const std::vector<QubitId> &a,
                      const std::vector<QubitId> &b, QubitId flag) {
    std::vector<QubitId> qs = a;
    qs.insert(qs.end(), b.begin(), b.end());
    qs.push_back(flag);
    const size_t w = a.size();
    st.apply_permutation(qs, [w](uint64_t v) {
        uint64_t va = v & ((uint64_t{1} << w) - 1);
        uint64_t vb = (v >> w) & ((uint64_t{1} << w) - 1);
        return va > vb ? v ^ (uint64_t{1} << (2 * w)) : v;
    });
}

void swap_registers(QuantumState &st, const std::vector<QubitId> &a,
                    const std::vector<QubitId> &b) {
    for (size_t i = 0; i < a.size(); i++) {
        st.apply(gate(GateKind::SWAP, {a[i], b[i]}));
    }
}

}  // namespace

QuantumState prepare_dicke_small_k(uint32_t n, uint32_t k, PrimitiveMode mode,
                                   MeasureDriver &driver) {
    if (k < 1 || k > n) {
        throw ValidationError("prepare_dicke_small_k: need 1 <= k <= n");
    }
    if (k * k > 4 * n) {
        throw ValidationError("prepare_dicke_small_k: requires k^2 <= 4n");
    }
    if (mode == PrimitiveMode::Expanded && n > 6) {
        throw CapacityError("prepare_dicke_small_k: expanded mode supported for n <= 6");
    }
    QuantumState st;
    const uint32_t kbits = std::max(1u, bits_for(n));

    // Filling: k index registers in uniform superposition over [0, n), each
    // flipping its one-hot target in the system register.
    std::vector<std::vector<QubitId>> regs;
    auto fill = [&](QuantumState &s) {
        for (uint32_t m = 0; m < k; m++) {
            hadamard_all(s, regs[m]);
        }
    };
    for (uint32_t m = 0; m < k; m++) {
        regs.push_back(uniform_q_register(st, n, mode, driver));
    }
    std::vector<QubitId> system = st.alloc(n);
    for (uint32_t m = 0; m < k; m++) {
        if (mode == PrimitiveMode::Expanded) {
            for (uint32_t i = 0; i < n; i++) {
                equal_gate(st, regs[m], i, system[i], PrimitiveMode::Expanded, driver);
            }
        } else {
            uncompress_ideal(st, regs[m], system, n);
        }
    }

    // Filtering: amplify the all-distinct-index component, flagged by the
    // system register having Hamming weight exactly k.
    if (k >= 2) {
        auto [num, den] = dicke_filter_fraction(n, k);
        std::vector<QubitId> working;
        for (const auto &r : regs) {
            working.insert(working.end(), r.begin(), r.end());
        }
        working.insert(working.end(), system.begin(), system.end());
        const size_t reg_bits = k * kbits;
        auto good = [reg_bits, k, n](uint64_t v) {
            uint64_t sys = v >> reg_bits;
            return static_cast<uint32_t>(__builtin_popcountll(sys)) == k;
        };
        const bool pow2 = (uint64_t{1} << kbits) == n;
        auto prepare_all = [&](QuantumState &s) {
            if (pow2) {
                fill(s);
            } else {
                for (uint32_t m = 0; m < k; m++) {
                    hadamard_all(s, regs[m]);
                    amplify_uniform(s, regs[m], n, false);
                }
            }
            for (uint32_t m = 0; m < k; m++) {
                uncompress_ideal(s, regs[m], system, n);
            }
        };
        auto unprepare_all = [&](QuantumState &s) {
            for (uint32_t m = k; m-- > 0;) {
                uncompress_ideal(s, regs[m], system, n);  // involution
            }
            if (pow2) {
                fill(s);
            } else {
                for (uint32_t m = k; m-- > 0;) {
                    amplify_uniform(s, regs[m], n, true);
                    hadamard_all(s, regs[m]);
                }
            }
        };
        exact_amplify(st, working, good, num, den, prepare_all, unprepare_all);
    }

    // Ordering: measure pairwise Greaterthan comparisons, derive the sort
    // permutation classically, and apply SWAP networks. Ties cannot occur
    // after filtering (all indices distinct).
    if (k >= 2) {
        std::vector<std::vector<int>> greater(k, std::vector<int>(k, 0));
        for (uint32_t a = 0; a < k; a++) {
            for (uint32_t b = a + 1; b < k; b++) {
                QubitId flag = st.alloc(1)[0];
                greaterthan_flag(st, regs[a], regs[b], flag);
                int bit = driver.measure(st, flag).outcome;
                st.recycle(flag);
                greater[a][b] = bit;
                greater[b][a] = 1 - bit;
            }
        }
        // rank of register a = number of registers holding smaller values
        std::vector<uint32_t> rank(k, 0);
        for (uint32_t a = 0; a < k; a++) {
            for (uint32_t b = 0; b < k; b++) {
                if (b != a && greater[a][b]) {
                    rank[a]++;
                }
            }
        }
        // permute registers so register m ends up holding the m-th smallest
        std::vector<uint32_t> holder(k);
        for (uint32_t a = 0; a < k; a++) {
            holder[rank[a]] = a;
        }
        std::vector<uint32_t> pos_of_reg(k);
        for (uint32_t a = 0; a < k; a++) {
            pos_of_reg[a] = a;
        }
        std::vector<std::vector<QubitId>> slot = regs;
        for (uint32_t m = 0; m < k; m++) {
            uint32_t want = holder[m];
            uint32_t cur = pos_of_reg[want];
            if (cur != m) {
                swap_registers(st, slot[m], slot[cur]);
                for (uint32_t a = 0; a < k; a++) {
                    if (pos_of_reg[a] == m) {
                        pos_of_reg[a] = cur;
                    }
                }
                pos_of_reg[want] = m;
            }
        }
    }

    // Cleaning: for each system position, the prefix Hamming weight names
    // the index register to uncompute; an ideal Hammingweight gate fills a
    // weight register (most significant bit first) and an Equal-on-weight
    // condition keys the XOR.
    const uint32_t wbits = bits_for(k + 1);
    for (uint32_t i = 0; i < n; i++) {
        std::vector<QubitId> wreg = st.alloc(wbits);
        if (i > 0) {
            std::vector<QubitId> qs(system.begin(), system.begin() + i);
            size_t prefix = qs.size();
            qs.insert(qs.end(), wreg.begin(), wreg.end());
            st.apply_permutation(qs, [prefix, wbits](uint64_t v) {
                uint64_t w = static_cast<uint64_t>(
                    __builtin_popcountll(v & ((uint64_t{1} << prefix) - 1)));
                // weight register stores MSB-first: bit b of the register
                // (qubit wreg[b]) holds weight bit (wbits-1-b)
                uint64_t enc = 0;
                for (uint32_t b = 0; b < wbits; b++) {
                    enc |= ((w >> (wbits - 1 - b)) & 1) << b;
                }
                return v ^ (enc << prefix);
            });
        }
        for (uint32_t m = 0; m < k; m++) {
            // conditioned on S_i = 1 and weight == m, XOR binary(i) into R_m
            std::vector<QubitId> qs{system[i]};
            qs.insert(qs.end(), wreg.begin(), wreg.end());
            qs.insert(qs.end(), regs[m].begin(), regs[m].end());
            uint64_t enc_m = 0;
            for (uint32_t b = 0; b < wbits; b++) {
                enc_m |= ((uint64_t{m} >> (wbits - 1 - b)) & 1) << b;
            }
            st.apply_permutation(qs, [enc_m, wbits, i](uint64_t v) {
                bool si = v & 1;
                uint64_t w = (v >> 1) & ((uint64_t{1} << wbits) - 1);
                if (si && w == enc_m) {
                    return v ^ (uint64_t{i} << (1 + wbits));
                }
                return v;
            });
        }
        if (i > 0) {
            std::vector<QubitId> qs(system.begin(), system.begin() + i);
            size_t prefix = qs.size();
            qs.insert(qs.end(), wreg.begin(), wreg.end());
            st.apply_permutation(qs, [prefix, wbits](uint64_t v) {
                uint64_t w = static_cast<uint64_t>(
                    __builtin_popcountll(v & ((uint64_t{1} << prefix) - 1)));
                uint64_t enc = 0;
                for (uint32_t b = 0; b < wbits; b++) {
                    enc |= ((w >> (wbits - 1 - b)) & 1) << b;
                }
                return v ^ (enc << prefix);
            });
        }
        for (QubitId q : wreg) {
            st.recycle(q);
        }
    }
    for (auto &r : regs) {
        for (QubitId q : r) {
            st.recycle(q);
        }
    }
    return st;
}

// --- Dicke via factoradics ---------------------------------------------------------

QuantumState prepare_dicke_factoradic(uint32_t n, uint32_t k, PrimitiveMode mode,
                                      MeasureDriver &driver) {
    if (k < 1 || k > n) {
        throw ValidationError("prepare_dicke_factoradic: need 1 <= k <= n");
    }
    QuantumState st;
    // Digit sub-registers for y_{n-1}..y_1 (y_0 is always 0): digit j uses
    // ceil(log2(j+1)) qubits holding a uniform value in [0, j].
    std::vector<std::vector<QubitId>> digit_reg(n);  // index j, 1..n-1
    std::vector<uint32_t> digit_bits(n, 0);
    uint32_t total_bits = 0;
    for (uint32_t j = 1; j < n; j++) {
        digit_bits[j] = bits_for(j + 1);
        total_bits += digit_bits[j];
    }
    if (total_bits + n > st.max_width()) {
        throw CapacityError("prepare_dicke_factoradic: register too wide for the engine");
    }
    for (uint32_t j = 1; j < n; j++) {
        digit_reg[j] = uniform_q_register(st, j + 1, mode, driver);
    }
    std::vector<QubitId> system = st.alloc(n);

    std::vector<QubitId> all_digit_qubits;
    for (uint32_t j = 1; j < n; j++) {
        all_digit_qubits.insert(all_digit_qubits.end(), digit_reg[j].begin(),
                                digit_reg[j].end());
    }
    auto digits_of = [&](uint64_t v) {
        // digits (y_{n-1},..,y_0) from the packed register value
        std::vector<int> d(n, 0);
        uint32_t off = 0;
        for (uint32_t j = 1; j < n; j++) {
            d[n - 1 - j] = static_cast<int>((v >> off) & ((uint64_t{1} << digit_bits[j]) - 1));
            off += digit_bits[j];
        }
        return d;
    };

    // Coherent evaluation of the conversion algorithm into the system
    // register (basis permutation: XOR the produced string).
    {
        std::vector<QubitId> qs = all_digit_qubits;
        qs.insert(qs.end(), system.begin(), system.end());
        st.apply_permutation(qs, [&](uint64_t v) {
            uint64_t y = v & ((uint64_t{1} << total_bits) - 1);
            uint64_t bits = fact_to_comb_bits(digits_of(y), n, k);
            return v ^ (bits << total_bits);
        });
    }

    // Uncompute the factoradic register through the bijection
    // y <-> (string, Z, X): within each string sector, valid factoradics map
    // to packed (Z, X) digit encodings; leftover register values are mapped
    // bijectively onto leftover slots (they carry no amplitude).
    const uint32_t nk = n - k;
    // target sub-register of Z digit j is j; of X digit j is n-k+j
    auto encode_zx = [&](const Factoradic &Z, const Factoradic &X) {
        uint64_t enc = 0;
        uint32_t off = 0;
        for (uint32_t j = 1; j < n; j++) {
            uint64_t val = 0;
            if (j <= nk - 1 && nk >= 2) {
                val = static_cast<uint64_t>(Z.digit(j));
            } else if (j >= nk + 1 && j - nk <= k - 1) {
                val = static_cast<uint64_t>(X.digit(j - nk));
            }
            enc |= val << off;
            off += digit_bits[j];
        }
        return enc;
    };
    {
        // Build the permutation table over (digits, system) jointly.
        const uint32_t joint_bits = total_bits + n;
        std::vector<uint64_t> table(uint64_t{1} << joint_bits);
        std::vector<uint64_t> fill_cursor;  // per-sector cursor for leftovers
        // First pass: map valid factoradics of every sector.
        std::vector<char> target_used(uint64_t{1} << joint_bits, 0);
        std::vector<char> source_mapped(uint64_t{1} << joint_bits, 0);
        for (uint64_t y_val = 0; y_val < (uint64_t{1} << total_bits); y_val++) {
            std::vector<int> d = digits_of(y_val);
            bool valid = true;
            for (uint32_t j = 1; j < n && valid; j++) {
                valid = d[n - 1 - j] <= static_cast<int>(j);
            }
            if (!valid) {
                continue;
            }
            Factoradic y;
            y.n = static_cast<int>(n);
            y.digits = d;
            WeightKString s;
            Factoradic X, Z;
            fact_decompose(y, static_cast<int>(k), &s, &X, &Z);
            uint64_t src = y_val | (s.bits << total_bits);
            uint64_t dst = encode_zx(Z, X) | (s.bits << total_bits);
            table[src] = dst;
            source_mapped[src] = 1;
            target_used[dst] = 1;
        }
        // Second pass: route unmapped sources to unused targets per sector.
        for (uint64_t sys = 0; sys < (uint64_t{1} << n); sys++) {
            uint64_t free_target = 0;
            for (uint64_t y_val = 0; y_val < (uint64_t{1} << total_bits); y_val++) {
                uint64_t src = y_val | (sys << total_bits);
                if (source_mapped[src]) {
                    continue;
                }
                while (target_used[free_target | (sys << total_bits)]) {
                    free_target++;
                }
                table[src] = free_target | (sys << total_bits);
                target_used[free_target | (sys << total_bits)] = 1;
            }
        }
        std::vector<QubitId> qs = all_digit_qubits;
        qs.insert(qs.end(), system.begin(), system.end());
        st.apply_permutation(qs, [&table](uint64_t v) { return table[v]; });
        (void)fill_cursor;
    }

    // The digit registers now hold independent uniform superpositions: Z
    // digit j over [0, j] in sub-register j, X digit j over [0, j] in
    // sub-register n-k+j. Invert each uniform preparation and recycle.
    for (uint32_t j = 1; j < n; j++) {
        uint64_t q_radix = 0;
        uint32_t used_bits = 0;
        if (j <= nk - 1 && nk >= 2) {
            q_radix = j + 1;
        } else if (j >= nk + 1 && j - nk <= k - 1) {
            q_radix = (j - nk) + 1;
        } else {
            q_radix = 1;  // unused sub-register, already |0...0>
        }
        used_bits = q_radix > 1 ? bits_for(q_radix) : 0;
        if (used_bits > 0) {
            std::vector<QubitId> sub(digit_reg[j].begin(), digit_reg[j].begin() + used_bits);
            if (q_radix != (uint64_t{1} << used_bits)) {
                amplify_uniform(st, sub, q_radix, true);
            }
            hadamard_all(st, sub);
        }
        for (QubitId q : digit_reg[j]) {
            st.recycle(q);
        }
    }
    return st;
}

QuantumState prepare(const StateSpec &spec, MeasureDriver &driver) {
    switch (spec.family) {
        case StateSpec::Family::UniformQ:
            return prepare_uniform_q(spec.q, spec.mode, driver);
        case StateSpec::Family::W:
            return prepare_w(spec.n, spec.mode, driver);
        case StateSpec::Family::DickeSmallK:
            return prepare_dicke_small_k(spec.n, spec.k, spec.mode, driver);
        case StateSpec::Family::DickeFactoradic:
            return prepare_dicke_factoradic(spec.n, spec.k, spec.mode, driver);
    }
    throw ValidationError("unknown state family");
}

}  // namespace laqcc
