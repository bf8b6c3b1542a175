#pragma once

#include <cstdint>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "siftlab/errors.hpp"

namespace siftlab {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Inverse of a mod m (gcd(a, m) must be 1).
inline uint64_t mod_inverse(uint64_t a, uint64_t m) {
    if (m == 1) return 0;
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(m), new_r = static_cast<int64_t>(a % m);
    while (new_r != 0) {
        int64_t quot = r / new_r;
        t = std::exchange(new_t, t - quot * new_t);
        r = std::exchange(new_r, r - quot * new_r);
    }
    if (r != 1) throw domain_error("mod_inverse: arguments are not coprime");
    return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(m) : t);
}

inline uint64_t isqrt(uint64_t n) {
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Prime factorization by trial division, (prime, multiplicity) pairs in ascending order.
inline std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
    std::vector<std::pair<uint64_t, int>> out;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline uint64_t euler_phi(uint64_t n) {
    uint64_t phi = 1;
    for (auto [p, e] : factorize(n)) {
        uint64_t pe = 1;
        for (int i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

inline uint64_t binomial(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    uint64_t r = 1;
    for (uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// tau_m(p^k): number of ordered m-factorizations of a prime power.
inline double tau_m_prime_power(int m, int k) {
    return static_cast<double>(binomial(static_cast<uint64_t>(k + m - 1),
                                        static_cast<uint64_t>(m - 1)));
}

/// Compensated (Kahan) accumulator; summation order fixes the result bit-for-bit.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

} // namespace siftlab
