#pragma once

#include "laqcc/primitives.hpp"

namespace laqcc {

/// Uniform superposition over basis states 0..q-1 on ceil(log2 q) qubits.
/// Powers of two reduce to a single Hadamard layer; other q use a
/// less-than-q flag plus exact amplification of the q/2^n fraction.
QuantumState prepare_uniform_q(uint64_t q, PrimitiveMode mode, MeasureDriver &driver);

/// Prepare the uniform superposition over 0..q-1 on freshly allocated
/// qubits of an existing state; returns the register (little-endian).
std::vector<QubitId> uniform_q_register(QuantumState &st, uint64_t q, PrimitiveMode mode,
                                        MeasureDriver &driver);

/// W state (1/sqrt(n)) sum_i |e_i> via uniform index superposition,
/// Uncompress (index -> one-hot) and Compress (phase-keyed index cleanup).
QuantumState prepare_w(uint32_t n, PrimitiveMode mode, MeasureDriver &driver);

/// Dicke state via Filling / Filtering / Ordering / Cleaning; requires
/// k*k <= 4n so the filtering fraction n!/((n-k)! n^k) stays constant.
QuantumState prepare_dicke_small_k(uint32_t n, uint32_t k, PrimitiveMode mode,
                                   MeasureDriver &driver);

/// Exact filtering fraction n!/((n-k)! n^k) as a (num, den) pair.
std::pair<uint64_t, uint64_t> dicke_filter_fraction(uint32_t n, uint32_t k);

/// Dicke state via a uniform superposition over n-factoradics, coherent
/// evaluation of the factoradic -> weight-k-string map, and uncomputation of
/// the factoradic register through the (string, Z, X) bijection.
QuantumState prepare_dicke_factoradic(uint32_t n, uint32_t k, PrimitiveMode mode,
                                      MeasureDriver &driver);

struct StateSpec {
    enum class Family { UniformQ, W, DickeSmallK, DickeFactoradic } family;
    uint32_t n = 0;
    uint32_t k = 0;
    uint64_t q = 0;
    PrimitiveMode mode = PrimitiveMode::Ideal;
};

QuantumState prepare(const StateSpec &spec, MeasureDriver &driver);

}  // namespace laqcc
