#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "siftlab/arith.hpp"
#include "siftlab/errors.hpp"
#include "siftlab/quadrature.hpp"
#include "siftlab/residues.hpp"
#include "siftlab/sieve.hpp"

namespace siftlab {

inline constexpr int default_log_power_cap = 12;  // (log x)^j overflow guard

namespace detail {

inline void check_log_power(int j, int cap = default_log_power_cap) {
    if (j < 0 || j > cap) throw domain_error("sifted sums: j out of range [0, cap]");
}

} // namespace detail

/// sum_{n <= x, P^-(n) > y} chi(n) (log n)^j n^{it}, by direct streaming.
inline std::complex<double> sifted_char_sum(const DirichletCharacter& chi, double x, double y,
                                            int j, double t = 0.0, const SieveConfig& cfg = {}) {
    if (!(x >= y && y >= 1.0)) throw domain_error("sifted_char_sum: need x >= y >= 1");
    detail::check_log_power(j);
    KahanSum re, im;
    for_each_rough(static_cast<uint64_t>(x), y, [&](uint64_t n) {
        CharacterValue v = chi(static_cast<int64_t>(n % chi.modulus()));
        if (v.zero) return;
        double ln = std::log(static_cast<double>(n));
        double w = j == 0 ? 1.0 : std::pow(ln, j);
        std::complex<double> term = v.to_complex() * w;
        if (t != 0.0) term *= std::polar(1.0, t * ln);
        re.add(term.real());
        im.add(term.imag());
    }, cfg);
    return {re.value(), im.value()};
}

/// sum_{n <= x, P^-(n) > y, n = a (q)} (log n)^j, by direct streaming.
inline double sifted_ap_sum(double x, double y, uint64_t q, uint64_t a, int j,
                            const SieveConfig& cfg = {}) {
    if (!(x >= y && y >= 1.0)) throw domain_error("sifted_ap_sum: need x >= y >= 1");
    if (q == 0 || std::gcd(a, q) != 1) throw domain_error("sifted_ap_sum: need gcd(a, q) = 1");
    detail::check_log_power(j);
    KahanSum s;
    a %= q;
    for_each_rough(static_cast<uint64_t>(x), y, [&](uint64_t n) {
        if (n % q != a) return;
        s.add(j == 0 ? 1.0 : std::pow(std::log(static_cast<double>(n)), j));
    }, cfg);
    return s.value();
}

enum class SiftedKind { character, ap };

/// A sifted sum next to its predicted main term and a configurable error
/// envelope. The envelope constants stand in for the implicit absolute
/// constants of the underlying estimates; they are measured, never asserted.
struct SiftedSumReport {
    SiftedKind kind;
    uint64_t q = 1;
    uint64_t a = 0;              // ap kind
    int chi_index = -1;          // character kind: index in the lex enumeration
    double x = 0.0, y = 0.0;
    int j = 0;
    std::complex<double> actual;
    double main_term = 0.0;
    double abs_error = 0.0;
    std::optional<double> rel_error;  // only defined when main_term != 0
    double envelope = 0.0;
    double envelope_constant = 1.0;
    double kappa_hat = 0.1;
};

namespace detail {

inline void finish_report(SiftedSumReport& rep) {
    rep.abs_error = std::abs(rep.actual - std::complex<double>{rep.main_term, 0.0});
    if (rep.main_term != 0.0) rep.rel_error = rep.abs_error / std::abs(rep.main_term);
    double denom = rep.kind == SiftedKind::ap ? static_cast<double>(euler_phi(rep.q)) : 1.0;
    rep.envelope = rep.envelope_constant * std::pow(std::log(rep.x), rep.j) *
                   std::pow(rep.x, 1.0 - rep.kappa_hat / std::log(rep.y)) /
                   (std::log(rep.y) * denom);
}

} // namespace detail

/// Character form: main term 1_{chi = chi_0} (int_y^x (log t)^j dt) prod_{p<=y}(1 - 1/p).
inline SiftedSumReport verify_sifted_lemma(const DirichletCharacter& chi, int chi_index,
                                           double x, double y, int j,
                                           double envelope_constant = 1.0, double kappa_hat = 0.1,
                                           const SieveConfig& cfg = {}) {
    SiftedSumReport rep;
    rep.kind = SiftedKind::character;
    rep.q = chi.modulus();
    rep.chi_index = chi_index;
    rep.x = x;
    rep.y = y;
    rep.j = j;
    rep.envelope_constant = envelope_constant;
    rep.kappa_hat = kappa_hat;
    rep.actual = sifted_char_sum(chi, x, y, j, 0.0, cfg);
    rep.main_term = chi.is_principal()
                        ? log_power_integral(y, x, j) * mertens_product(y, cfg)
                        : 0.0;
    detail::finish_report(rep);
    return rep;
}

/// AP form: main term (1/phi(q)) (int_y^x (log t)^j dt) prod_{p<=y}(1 - 1/p);
/// stated for y >= 2q.
inline SiftedSumReport verify_sifted_lemma(double x, double y, uint64_t q, uint64_t a, int j,
                                           double envelope_constant = 1.0, double kappa_hat = 0.1,
                                           const SieveConfig& cfg = {}) {
    if (y < 2.0 * static_cast<double>(q))
        throw domain_error("verify_sifted_lemma: the AP form needs y >= 2q");
    SiftedSumReport rep;
    rep.kind = SiftedKind::ap;
    rep.q = q;
    rep.a = a % q;
    rep.x = x;
    rep.y = y;
    rep.j = j;
    rep.envelope_constant = envelope_constant;
    rep.kappa_hat = kappa_hat;
    rep.actual = sifted_ap_sum(x, y, q, a, j, cfg);
    rep.main_term = log_power_integral(y, x, j) * mertens_product(y, cfg) /
                    static_cast<double>(euler_phi(q));
    detail::finish_report(rep);
    return rep;
}

/// A multiplicative function f with 0 <= f <= tau_m, described on prime powers.
struct ShiuSpec {
    int m = 1;
    std::function<double(uint64_t p, int k)> value_at;
    std::string name = "f";
};

inline ShiuSpec shiu_one() {
    return {1, [](uint64_t, int) { return 1.0; }, "one"};
}

/// Indicator of y-roughness: 0 on p <= y, 1 above.
inline ShiuSpec shiu_rough_indicator(double y) {
    return {1, [y](uint64_t p, int) { return static_cast<double>(p) > y ? 1.0 : 0.0; },
            "rough"};
}

inline ShiuSpec shiu_tau2() {
    return {2, [](uint64_t, int k) { return static_cast<double>(k + 1); }, "tau2"};
}

struct ShiuReport {
    double lhs = 0.0;        // sum of f over the window restricted to the class
    double rhs = 0.0;        // (window/q) exp{ sum_{p<=x, p∤q} (f(p)-1)/p }
    double ratio = 0.0;      // one-sided: the bound claims lhs << rhs
    double prime_sum = 0.0;
    uint64_t terms = 0;
};

/// Brun-Titchmarsch-style ratio for short AP windows (x - window, x].
inline ShiuReport shiu_ratio(const ShiuSpec& spec, double x, double window, uint64_t q,
                             uint64_t a, double epsilon = 0.1, const SieveConfig& cfg = {}) {
    if (q == 0 || std::gcd(a, q) != 1) throw domain_error("shiu_ratio: need gcd(a, q) = 1");
    if (!(x >= 2.0) || !(window >= 1.0) || window > x)
        throw domain_error("shiu_ratio: need 2 <= window <= x");
    if (window / static_cast<double>(q) < std::pow(x, epsilon))
        throw domain_error("shiu_ratio: window below the range condition window/q >= x^eps");
    if (spec.m < 1 || !spec.value_at) throw domain_error("shiu_ratio: malformed spec");
    auto xi = static_cast<uint64_t>(x);
    uint64_t lo = xi - static_cast<uint64_t>(window) + 1;
    if (xi - lo + 1 > 100'000'000ull) throw capacity_error("shiu_ratio: window too large");

    auto checked = [&](uint64_t p, int k) {
        double v = spec.value_at(p, k);
        if (!(v >= 0.0) || v > tau_m_prime_power(spec.m, k) + 1e-9)
            throw domain_error("shiu_ratio: f(p^k) violates 0 <= f <= tau_m");
        return v;
    };

    // factor the window by the primes <= sqrt(x); leftover cofactors are prime
    size_t len = static_cast<size_t>(xi - lo + 1);
    std::vector<uint64_t> cofactor(len);
    std::vector<double> fval(len, 1.0);
    for (size_t i = 0; i < len; ++i) cofactor[i] = lo + i;
    for_each_prime(2, isqrt(xi), [&](uint64_t p) {
        for (uint64_t n = ((lo + p - 1) / p) * p; n <= xi; n += p) {
            size_t i = static_cast<size_t>(n - lo);
            int k = 0;
            while (cofactor[i] % p == 0) { cofactor[i] /= p; ++k; }
            fval[i] *= checked(p, k);
        }
    }, cfg);

    ShiuReport rep;
    KahanSum lhs;
    a %= q;
    for (size_t i = 0; i < len; ++i) {
        if ((lo + i) % q != a) continue;
        double v = fval[i];
        if (cofactor[i] > 1) v *= checked(cofactor[i], 1);
        lhs.add(v);
        ++rep.terms;
    }
    rep.lhs = lhs.value();

    KahanSum psum;
    for_each_prime(2, xi, [&](uint64_t p) {
        if (q % p == 0) return;
        psum.add((checked(p, 1) - 1.0) / static_cast<double>(p));
    }, cfg);
    rep.prime_sum = psum.value();
    rep.rhs = window / static_cast<double>(q) * std::exp(rep.prime_sum);
    rep.ratio = rep.lhs / rep.rhs;
    return rep;
}

} // namespace siftlab
