#pragma once

#include <functional>

#include "laqcc/program.hpp"

namespace laqcc {

/// Ideal mode applies a primitive as a black-box unitary on the logical
/// qubits; expanded mode simulates the full measurement-assisted ancilla
/// construction.
enum class PrimitiveMode { Ideal, Expanded };

PrimitiveMode mode_from_name(const std::string &name);

// --- GHZ -------------------------------------------------------------------

/// (|0^n> + |1^n>)/sqrt(2) on a fresh state. Expanded mode runs the
/// cat-state construction on 2n-1 qubits: Hadamards on the odd qubits, two
/// CNOT layers, measurement of the even qubits, prefix-parity X corrections,
/// then ancilla recycling.
QuantumState ghz_laqcc(uint32_t n, PrimitiveMode mode, MeasureDriver &driver);

/// Expanded construction as a program over 2n-1 fresh ids; logical qubits
/// are the even ids 0,2,...,2n-2.
Program ghz_laqcc_program(uint32_t n);

/// Reference circuits for cost comparisons.
Program ghz_direct_all_program(uint32_t n);
Program ghz_direct_linear_program(uint32_t n);
Program w_direct_program(uint32_t n);

// --- Fanout / parity ---------------------------------------------------------

/// |x>|y_1..y_t> -> |x>|y_1^x..y_t^x>. Expanded mode prepares a GHZ resource
/// of t+1 qubits with the cat-state construction (in a scratch register that
/// is absorbed into the state) and runs the teleportation steps: CNOT into
/// the resource, measure, conditional X fanout, CNOTs onto the targets,
/// Hadamard + measure, parity-conditioned Z on the control.
void fanout(QuantumState &st, QubitId control, const std::vector<QubitId> &targets,
            PrimitiveMode mode, MeasureDriver &driver);

Program fanout_program(uint32_t target_count);

/// target ^= parity(sources); fanout conjugated by Hadamards on every qubit.
void parity_gate(QuantumState &st, const std::vector<QubitId> &sources, QubitId target,
                 PrimitiveMode mode, MeasureDriver &driver);

Program parity_program(uint32_t source_count);

// --- Equality / OR machinery --------------------------------------------------

/// |j>|b> -> |j>|b^1> iff j == i.
void equal_gate(QuantumState &st, const std::vector<QubitId> &index_register, uint64_t i,
                QubitId target, PrimitiveMode mode, MeasureDriver &driver);

Program equal_program(uint32_t register_bits, uint64_t i);

/// target ^= OR(inputs). Expanded mode realizes the parity-sum identity
/// OR(x) = 2^{-(t-1)} sum_a PA^a(x): a GHZ resource of 2^t - 1 qubits picks
/// up controlled R_Z(pi/2^{t-1}) phases, one per nonzero subset parity, and
/// a fanout reduction plus Hadamard kicks the OR into the target.
/// Expanded mode requires t <= 4.
void exact_or(QuantumState &st, const std::vector<QubitId> &inputs, QubitId target,
              PrimitiveMode mode, MeasureDriver &driver);

Program exact_or_program(uint32_t input_count);

/// Appends t = ceil(log2(n+1)) fresh qubits; output k in [1..t] holds the
/// state ((1+e^{i phi_k |x|})/2)|0> + ((1-e^{i phi_k |x|})/2)|1> with
/// phi_k = 2 pi / 2^k, so all outputs are |0> iff |x| = 0.
std::vector<QubitId> or_reduction(QuantumState &st, const std::vector<QubitId> &inputs,
                                  PrimitiveMode mode, MeasureDriver &driver);

/// Inputs 0..n-1, mu outputs n..n+t-1, copy register reused per output.
Program or_reduction_program(uint32_t input_count);

// --- Exact amplitude amplification -------------------------------------------

/// Deterministic amplification of the good subspace over `working`.
/// good_num/good_den is the exact good fraction; `prepare` maps |0...0> to
/// the current superposition and `unprepare` is its inverse. Uses iteration
/// count J+1 with J = max(0, ceil((pi/2 - beta)/(2 beta))),
/// beta = asin(sqrt(fraction)), and rotation phase
/// phi = 2 asin(sin(pi/(4J+6)) / sin(beta)) on both reflections.
void exact_amplify(QuantumState &st, const std::vector<QubitId> &working,
                   const std::function<bool(uint64_t)> &good, uint64_t good_num,
                   uint64_t good_den, const std::function<void(QuantumState &)> &prepare,
                   const std::function<void(QuantumState &)> &unprepare,
                   bool inverse = false);

/// Good-subspace mass after exact amplification in the 2x2 {good, bad}
/// rotation picture; independent numeric oracle for the engine path.
double exact_amplify_rotation_mass(uint64_t good_num, uint64_t good_den);

// --- Branch enumeration --------------------------------------------------------

/// Runs `body` once per forced outcome vector of `num_bits` measurements,
/// skipping zero-probability branches. `body` receives the driver and must
/// return the branch probability it observed (driver.branch_probability).
/// Returns the total probability over non-skipped branches.
double for_each_branch(int num_bits,
                       const std::function<double(MeasureDriver &)> &body);

}  // namespace laqcc
