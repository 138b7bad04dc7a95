#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "laqcc/random.hpp"

namespace laqcc {

/// f: F_p^n -> unit disc, stored as a dense table indexed by little-endian
/// base-p digits.
struct PhaseFunction {
    int p = 2;
    int n = 0;
    std::vector<std::complex<double>> table;

    size_t size() const { return table.size(); }
    bool unit_modulus(double tol = 1e-9) const;

    std::string to_json() const;  // polynomial phases only
    static PhaseFunction from_json(const std::string &text);
};

struct FourierSpectrum {
    int p = 2;
    int n = 0;
    std::vector<std::complex<double>> coeff;
};

/// Quadratic phase parameters, f(x) = w_p^{<x,Mx> + <x,b> + c} with M upper
/// triangular (strictly upper for p = 2: the diagonal folds into b).
struct QuadraticPhaseParams {
    int p = 2;
    int n = 0;
    std::vector<std::vector<int>> M;
    std::vector<int> b;
    int c = 0;

    bool operator==(const QuadraticPhaseParams &o) const = default;
};

PhaseFunction quadratic_phase(const QuadraticPhaseParams &params);
QuadraticPhaseParams random_quadratic(int p, int n, RandomSource &rng);

/// f_hat(y) = E_x f(x) w^{-<x,y>}, radix-p fast transform.
FourierSpectrum fourier(const PhaseFunction &f);
/// f(x) = sum_y f_hat(y) w^{<x,y>}.
PhaseFunction inverse_fourier(const FourierSpectrum &s);

/// Multiplicative derivative f(x+h) conj(f(x)).
PhaseFunction derivative(const PhaseFunction &f, const std::vector<int> &h);

/// Gowers U^d norm, d in {1,2,3}, via the inductive formula
/// ||f||_{U^{d+1}}^{2^{d+1}} = E_h ||D_h f||_{U^d}^{2^d}; the inner U^2
/// values use exact spectra.
double gowers_norm(const PhaseFunction &f, int d);

/// probs[a] = |hat(D_h f)(a)|^2; requires unit modulus.
std::vector<double> fourier_sample_dist(const PhaseFunction &f, const std::vector<int> &h);

/// Oracle wrapper counting quantum-query equivalents: a Fourier-sampling
/// draw costs p queries, a Bernstein-Vazirani draw 1, a point evaluation 1.
struct CountingOracle {
    PhaseFunction f;
    int64_t queries = 0;

    std::vector<double> sample_dist(const std::vector<int> &h);
    /// Spectrum sampling of x -> f(x) * extra(x); one query.
    std::vector<double> bv_dist(const std::vector<std::complex<double>> &extra);
    std::complex<double> eval(size_t x);
};

/// Exact recovery of a quadratic phase with pn + 2 queries: n sampling calls
/// at standard-basis directions for the columns of M + M^T, one
/// Bernstein-Vazirani pass for b, one evaluation at 0 for c.
QuadraticPhaseParams learn_quadratic_noiseless(CountingOracle &oracle);

/// Noise-tolerant variant for p = 2: per direction, the most frequent of
/// m = ceil(eps^-2 log2 n) sampling draws (ties broken by one extra draw);
/// b by the same vote over Bernstein-Vazirani draws; c by maximizing the
/// real correlation over all p values.
QuadraticPhaseParams learn_quadratic_unique_radius(CountingOracle &oracle, double eps,
                                                   RandomSource &rng);

/// Number of additive quadruples a + b = c + d in a subset of F_p^n
/// (elements packed little-endian base p); O(|A|^2) by counting pair sums.
uint64_t energy(int p, int n, const std::vector<uint64_t> &elements);

}  // namespace laqcc
