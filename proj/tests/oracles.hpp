#pragma once

// Test-only oracles: brute-force and series-based reference computations that
// stay independent of the library code paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracles {

inline uint64_t smallest_prime_factor(uint64_t n) {
    if (n < 2) return 0;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return d;
    return n;
}

inline bool is_prime(uint64_t n) { return n >= 2 && smallest_prime_factor(n) == n; }

inline bool is_rough(uint64_t n, double y) {
    if (n == 1) return true;  // P^-(1) = +infinity
    return static_cast<double>(smallest_prime_factor(n)) > y;
}

/// Lambda(n) by direct factorization: log p when n is a prime power.
inline double von_mangoldt(uint64_t n) {
    if (n < 2) return 0.0;
    uint64_t p = smallest_prime_factor(n);
    uint64_t m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

/// Full smallest-prime-factor table 0..x by a direct double loop
/// (independent of the segmented bit sieve).
inline std::vector<uint32_t> spf_table(uint32_t x) {
    std::vector<uint32_t> spf(x + 1, 0);
    for (uint32_t i = 2; i <= x; ++i) {
        if (spf[i] != 0) continue;
        for (uint64_t j = i; j <= x; j += i)
            if (spf[j] == 0) spf[static_cast<size_t>(j)] = i;
    }
    return spf;
}

/// sum_{k>=0} (-1)^k f(k), accelerated by repeated averaging of the partial
/// sums (good to ~1e-12 for smooth monotone f).
template <class F>
double alternating_sum(F&& f, int terms = 400, int averaging_rounds = 60) {
    std::vector<double> partial(static_cast<size_t>(terms));
    double s = 0.0;
    for (int k = 0; k < terms; ++k) {
        s += (k % 2 == 0 ? 1.0 : -1.0) * f(k);
        partial[static_cast<size_t>(k)] = s;
    }
    for (int round = 0; round < averaging_rounds; ++round) {
        for (size_t i = 0; i + 1 < partial.size(); ++i)
            partial[i] = 0.5 * (partial[i] + partial[i + 1]);
        partial.pop_back();
    }
    return partial.front();
}

/// zeta(s) for real s > 1 by direct summation plus the integral tail and the
/// first Euler-Maclaurin correction.
inline double zeta_direct(double s, uint64_t n_terms = 2'000'000) {
    double sum = 0.0;
    for (uint64_t n = n_terms; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    double w = static_cast<double>(n_terms) + 1.0;
    return sum + std::pow(w, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(w, -s) +
           s / 12.0 * std::pow(w, -s - 1.0);
}

/// -zeta'(2) companion: sum log n / n^2 with the same tail treatment.
inline double log_over_square_sum(uint64_t n_terms = 2'000'000) {
    double sum = 0.0;
    for (uint64_t n = n_terms; n >= 2; --n) {
        auto nn = static_cast<double>(n);
        sum += std::log(nn) / (nn * nn);
    }
    double w = static_cast<double>(n_terms) + 1.0;
    double lw = std::log(w);
    // int_w^inf log u / u^2 du = (log w + 1)/w ; trapezoid + first correction
    return sum + (lw + 1.0) / w + 0.5 * lw / (w * w);
}

} // namespace oracles
