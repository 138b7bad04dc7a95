#include "laqcc/numbersys.hpp"

#include "laqcc/errors.hpp"

namespace laqcc {

std::string WeightKString::str() const {
    std::string out(n, '0');
    for (int i = 0; i < n; i++) {
        if ((bits >> i) & 1) {
            out[n - 1 - i] = '1';
        }
    }
    return out;
}

WeightKString WeightKString::from_str(const std::string &s) {
    WeightKString w;
    w.n = static_cast<int>(s.size());
    for (int i = 0; i < w.n; i++) {
        char c = s[w.n - 1 - i];
        if (c == '1') {
            w.bits |= uint64_t{1} << i;
            w.k++;
        } else if (c != '0') {
            throw ValidationError("weight-k string must be binary");
        }
    }
    return w;
}

mpz_class binomial(uint64_t n, uint64_t k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

mpz_class factorial(uint64_t n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

CombIndex int_to_comb(const mpz_class &m, int k) {
    if (m < 0 || k < 1) {
        throw ValidationError("int_to_comb: m >= 0 and k >= 1 required");
    }
    CombIndex out;
    out.k = k;
    mpz_class rest = m;
    int64_t upper_bound = -1;  // digits must be strictly decreasing
    for (int i = k; i >= 1; i--) {
        // Largest c with C(c, i) <= rest; the strictly-decreasing constraint
        // is automatic for the greedy choice.
        int64_t c = i - 1;  // C(i-1, i) = 0 <= rest always
        while (binomial(c + 1, i) <= rest && (upper_bound < 0 || c + 1 < upper_bound)) {
            c++;
        }
        out.digits.push_back(c);
        rest -= binomial(c, i);
        upper_bound = c;
    }
    return out;
}

mpz_class comb_to_int(const CombIndex &c) {
    mpz_class m = 0;
    for (int i = 0; i < c.k; i++) {
        int level = c.k - i;
        m += binomial(c.digits.at(i), level);
    }
    return m;
}

Factoradic int_to_factoradic(const mpz_class &m, int n) {
    if (m < 0 || m >= factorial(n)) {
        throw ValidationError("int_to_factoradic: m out of [0, n!)");
    }
    Factoradic y;
    y.n = n;
    y.digits.assign(n, 0);
    mpz_class rest = m;
    for (int j = n - 1; j >= 1; j--) {
        mpz_class f = factorial(j);
        mpz_class q = rest / f;
        y.set_digit(j, static_cast<int>(q.get_si()));
        rest -= q * f;
    }
    return y;
}

mpz_class factoradic_to_int(const Factoradic &y) {
    mpz_class m = 0;
    for (int j = 0; j < y.n; j++) {
        if (y.digit(j) < 0 || y.digit(j) > j) {
            throw ValidationError("factoradic digit out of range");
        }
        m += factorial(j) * y.digit(j);
    }
    return m;
}

uint64_t fact_to_comb_bits(const std::vector<int> &digits_msd_first, int n, int k) {
    uint64_t bits = 0;
    int weight = 0;
    for (int j = 1; j <= n; j++) {
        int pos = n - j;
        int digit = digits_msd_first.at(j - 1);
        if (digit < k - weight) {
            bits |= uint64_t{1} << pos;
            weight++;
        }
    }
    return bits;
}

WeightKString fact_to_comb(const Factoradic &y, int k) {
    if (k < 0 || k > y.n) {
        throw ValidationError("fact_to_comb: k out of range");
    }
    WeightKString s;
    s.n = y.n;
    s.k = k;
    s.bits = fact_to_comb_bits(y.digits, y.n, k);
    return s;
}

Factoradic comb_to_fact(const WeightKString &s, const Factoradic &X, const Factoradic &Z) {
    const int n = s.n, k = s.k;
    if (X.n != k || Z.n != n - k) {
        throw ValidationError("comb_to_fact: X must be a k-factoradic and Z an (n-k)-factoradic");
    }
    Factoradic y;
    y.n = n;
    y.digits.assign(n, 0);
    int ones = 0;
    for (int j = 1; j <= n; j++) {
        int pos = n - j;
        if ((s.bits >> pos) & 1) {
            // Uniform digit in [0, k - ones): the (ones+1)-th one uses X's
            // digit of that radix.
            y.set_digit(pos, X.digit(k - ones - 1));
            ones++;
        } else {
            int zeros = (j - 1) - ones;
            int zi = n - k - 1 - zeros;  // Z digit of radix n-k-zeros
            y.set_digit(pos, (k - ones) + Z.digit(zi));
        }
        if (y.digit(pos) < 0 || y.digit(pos) > pos) {
            throw ValidationError("comb_to_fact: digit bound violated");
        }
    }
    return y;
}

void fact_decompose(const Factoradic &y, int k, WeightKString *s, Factoradic *X, Factoradic *Z) {
    const int n = y.n;
    WeightKString str = fact_to_comb(y, k);
    X->n = k;
    X->digits.assign(k, 0);
    Z->n = n - k;
    Z->digits.assign(n - k, 0);
    int ones = 0;
    for (int j = 1; j <= n; j++) {
        int pos = n - j;
        if ((str.bits >> pos) & 1) {
            X->set_digit(k - ones - 1, y.digit(pos));
            ones++;
        } else {
            int zeros = (j - 1) - ones;
            Z->set_digit(n - k - 1 - zeros, y.digit(pos) - (k - ones));
        }
    }
    *s = str;
}

mpz_class rank_weightk(const WeightKString &s) {
    mpz_class m = 0;
    int level = s.k;
    for (int pos = s.n - 1; pos >= 0; pos--) {
        if ((s.bits >> pos) & 1) {
            m += binomial(pos, level);
            level--;
        }
    }
    return m;
}

WeightKString unrank_weightk(const mpz_class &m, int n, int k) {
    if (m < 0 || m >= binomial(n, k)) {
        throw ValidationError("unrank_weightk: rank out of range");
    }
    if (k == 0) {
        WeightKString s;
        s.n = n;
        return s;
    }
    CombIndex c = int_to_comb(m, k);
    WeightKString s;
    s.n = n;
    s.k = k;
    for (int64_t pos : c.digits) {
        if (pos >= n) {
            throw ValidationError("unrank_weightk: rank out of range for n");
        }
        s.bits |= uint64_t{1} << pos;
    }
    return s;
}

}  // namespace laqcc
