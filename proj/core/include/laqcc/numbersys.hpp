#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace laqcc {

/// Combinatorial number system digits (c_k, ..., c_1), strictly decreasing,
/// c_1 >= 0; represents m = sum_i C(c_i, i).
struct CombIndex {
    int k = 0;
    std::vector<int64_t> digits;  // stored (c_k, ..., c_1)
};

/// Factoradic digits (y_{n-1}, ..., y_0) with 0 <= y_j <= j; represents
/// m = sum_j y_j * j! in [0, n!-1].
struct Factoradic {
    int n = 0;
    std::vector<int> digits;  // stored most significant first

    int digit(int j) const { return digits.at(n - 1 - j); }
    void set_digit(int j, int v) { digits.at(n - 1 - j) = v; }
};

/// n-bit string of Hamming weight k; bit i of `bits` is string position i.
/// str() prints most significant position first ("010" has position 1 set).
struct WeightKString {
    int n = 0;
    uint64_t bits = 0;
    int k = 0;

    std::string str() const;
    static WeightKString from_str(const std::string &s);
};

mpz_class binomial(uint64_t n, uint64_t k);
mpz_class factorial(uint64_t n);

/// Greedy decomposition: largest c_k with C(c_k, k) <= m, then recurse.
CombIndex int_to_comb(const mpz_class &m, int k);
mpz_class comb_to_int(const CombIndex &c);

Factoradic int_to_factoradic(const mpz_class &m, int n);  // requires m < n!
mpz_class factoradic_to_int(const Factoradic &y);

/// Algorithm mapping a factoradic to a weight-k string, bit position n-j
/// set iff y_{n-j} < k - (weight emitted so far). Every weight-k string has
/// exactly k!(n-k)! preimages.
WeightKString fact_to_comb(const Factoradic &y, int k);

/// Raw-digit variant used for coherent evaluation: digits (y_{n-1},..,y_0)
/// need not satisfy the factoradic bounds; the comparison rule still
/// produces a weight-<=k string deterministically.
uint64_t fact_to_comb_bits(const std::vector<int> &digits_msd_first, int n, int k);

/// Inverse construction: merges a weight-k string with a k-factoradic X and
/// an (n-k)-factoradic Z into the unique n-factoradic y with
/// fact_to_comb(y, k) == s.
Factoradic comb_to_fact(const WeightKString &s, const Factoradic &X, const Factoradic &Z);

/// Inverse of comb_to_fact: recovers (s, Z, X) from y.
void fact_decompose(const Factoradic &y, int k, WeightKString *s, Factoradic *X, Factoradic *Z);

/// Lexicographic rank of a weight-k string among all weight-k strings.
mpz_class rank_weightk(const WeightKString &s);
WeightKString unrank_weightk(const mpz_class &m, int n, int k);  // m < C(n,k)

}  // namespace laqcc
