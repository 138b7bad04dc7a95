#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laqcc/random.hpp"

namespace laqcc {

/// Message x in F_p^k; the code evaluates all inner products <x, y>.
struct Message {
    int p = 2;
    int k = 0;
    std::vector<int> coords;

    bool operator==(const Message &o) const = default;
};

/// Codeword of length p^k over F_p; index y is little-endian base-p.
struct Codeword {
    int p = 2;
    int k = 0;
    std::vector<int> values;

    size_t length() const { return values.size(); }
    std::string to_json() const;
    static Codeword from_json(const std::string &text);
};

struct NoiseChannelSpec {
    enum class Model { Symmetric, WorstCaseFraction } model = Model::Symmetric;
    double rho = 1.0;    // symmetric channel bias
    double delta = 0.0;  // worst-case corrupted fraction
};

Codeword encode(const Message &x);

/// Symmetric channel: each coordinate is independently replaced by a
/// uniform element of F_p with probability 1 - rho. Worst case: exactly
/// floor(delta * n) coordinates are changed to different values, positions
/// chosen by the rng.
Codeword corrupt(const Codeword &c, const NoiseChannelSpec &spec, RandomSource &rng);

int hamming_distance(const Codeword &a, const Codeword &b);

/// Decoder output distribution, probs[z] = |sum_y w_p^{c(y) - <y,z>}|^2 / p^{2k},
/// computed by a fast Walsh-Hadamard transform for p = 2 and the radix-p
/// character transform otherwise. For p = 2 this equals
/// (1 - 2 d(c, H(z)) / n)^2 exactly.
std::vector<double> decode_distribution(const Codeword &c);

/// Same distribution by the O(n^2) character sum; test oracle.
std::vector<double> decode_distribution_bruteforce(const Codeword &c);

Message decode_sample(const Codeword &c, RandomSource &rng);

/// Statevector decoder (p = 2, k <= 4): H^k, phase (-1)^{c(y)}, H^k, measure.
Message circuit_decode(const Codeword &c, RandomSource &rng);

/// ceil(C eps^-2 ln(1/eps)) independent decode samples, deduplicated
/// (C = 8). Every x with d(c, H(x)) <= (1/2 - eps) n lands in the list with
/// high probability.
std::vector<Message> list_decode(const Codeword &c, double eps, RandomSource &rng);

size_t list_decode_sample_count(double eps);

}  // namespace laqcc
