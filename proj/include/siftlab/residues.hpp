#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "siftlab/arith.hpp"
#include "siftlab/errors.hpp"

namespace siftlab {

struct GroupComponent {
    uint64_t generator;  // residue mod q, lifted so it is 1 on every other factor
    uint64_t order;
};

/// Cyclic decomposition of (Z/qZ)* with a full discrete-log table.
///
/// Components are listed with the 2-part first (C2, then C_{2^{k-2}} when
/// present) followed by one cyclic factor per odd prime power of q, ascending.
/// The table costs O(q) memory and buys O(1) character evaluation.
class UnitGroupStructure {
public:
    static constexpr uint64_t default_modulus_cap = 1'000'000;

    explicit UnitGroupStructure(uint64_t q, uint64_t modulus_cap = default_modulus_cap) : q_(q) {
        if (q == 0 || q > modulus_cap)
            throw capacity_error("build_unit_group: modulus out of range (0 < q <= cap)");
        build_components();
        phi_ = 1;
        exponent_ = 1;
        for (const auto& c : components_) {
            phi_ *= c.order;
            exponent_ = std::lcm(exponent_, c.order);
        }
        fill_dlog_table();
    }

    uint64_t modulus() const noexcept { return q_; }
    uint64_t phi() const noexcept { return phi_; }
    /// lcm of the component orders (the group exponent).
    uint64_t exponent() const noexcept { return exponent_; }
    std::span<const GroupComponent> components() const noexcept { return components_; }

    uint64_t reduce(int64_t n) const noexcept {
        int64_t r = n % static_cast<int64_t>(q_);
        if (r < 0) r += static_cast<int64_t>(q_);
        return static_cast<uint64_t>(r);
    }

    bool is_unit(int64_t n) const noexcept {
        return code_[reduce(n)] != npos_code;
    }

    /// Exponent tuple of n against the component generators.
    std::vector<uint32_t> dlog(int64_t n) const {
        uint32_t code = code_[reduce(n)];
        if (code == npos_code) throw domain_error("dlog: residue not coprime to the modulus");
        return decode(code);
    }

    /// Big-endian mixed-radix code of the dlog tuple, npos_code() for non-units.
    uint32_t dlog_code(int64_t n) const noexcept { return code_[reduce(n)]; }
    static constexpr uint32_t npos_code = UINT32_MAX;

    std::vector<uint32_t> decode(uint32_t code) const {
        std::vector<uint32_t> tuple(components_.size());
        for (size_t i = components_.size(); i-- > 0;) {
            tuple[i] = static_cast<uint32_t>(code % components_[i].order);
            code = static_cast<uint32_t>(code / components_[i].order);
        }
        return tuple;
    }

private:
    void build_components() {
        auto factors = factorize(q_);
        // 2-part first
        for (auto [p, e] : factors) {
            if (p != 2) continue;
            uint64_t pe = 1;
            for (int i = 0; i < e; ++i) pe *= 2;
            if (e == 2) {
                components_.push_back({lift(3, pe), 2});
            } else if (e >= 3) {
                components_.push_back({lift(pe - 1, pe), 2});
                components_.push_back({lift(5, pe), pe / 4});
            }
            // e == 1 contributes the trivial group
        }
        for (auto [p, e] : factors) {
            if (p == 2) continue;
            uint64_t pe = 1;
            for (int i = 0; i < e; ++i) pe *= p;
            uint64_t order = pe / p * (p - 1);
            components_.push_back({lift(smallest_primitive_root(p, pe, order), pe), order});
        }
    }

    /// Smallest g generating (Z/p^e Z)* for odd p.
    static uint64_t smallest_primitive_root(uint64_t p, uint64_t pe, uint64_t order) {
        std::vector<uint64_t> prime_divs;
        for (auto [f, m] : factorize(order)) prime_divs.push_back(f);
        for (uint64_t g = 2; g < pe; ++g) {
            if (g % p == 0) continue;
            bool ok = true;
            for (uint64_t f : prime_divs) {
                if (powmod(g, order / f, pe) == 1) { ok = false; break; }
            }
            if (ok) return g;
        }
        throw precision_error("smallest_primitive_root: no generator found");
    }

    /// CRT-lift g mod pe to the residue mod q that is 1 on the complementary part.
    uint64_t lift(uint64_t g, uint64_t pe) const {
        uint64_t m = q_ / pe;
        if (m == 1) return g % q_;
        // x = 1 + m*k with m*k = g-1 (mod pe)
        uint64_t k = mulmod((g - 1) % pe, mod_inverse(m % pe, pe), pe);
        return (1 + m * k) % q_;
    }

    void fill_dlog_table() {
        code_.assign(q_, npos_code);
        fill_rec(0, 1 % q_, 0);
    }

    void fill_rec(size_t idx, uint64_t residue, uint64_t code) {
        if (idx == components_.size()) {
            code_[residue] = static_cast<uint32_t>(code);
            return;
        }
        const auto& c = components_[idx];
        uint64_t r = residue;
        for (uint64_t d = 0; d < c.order; ++d) {
            fill_rec(idx + 1, r, code * c.order + d);
            r = mulmod(r, c.generator, q_);
        }
    }

    uint64_t q_;
    uint64_t phi_ = 1;
    uint64_t exponent_ = 1;
    std::vector<GroupComponent> components_;
    std::vector<uint32_t> code_;
};

using UnitGroupPtr = std::shared_ptr<const UnitGroupStructure>;

inline UnitGroupPtr build_unit_group(uint64_t q,
                                     uint64_t modulus_cap = UnitGroupStructure::default_modulus_cap) {
    return std::make_shared<const UnitGroupStructure>(q, modulus_cap);
}

/// chi(n) held exactly: zero, or e^{2 pi i num/den} with the fraction reduced.
struct CharacterValue {
    bool zero = true;
    uint64_t num = 0;
    uint64_t den = 1;

    static CharacterValue zero_value() { return {}; }

    static CharacterValue root(uint64_t num, uint64_t den) {
        num %= den;
        uint64_t g = std::gcd(num, den);
        if (num == 0) return {false, 0, 1};
        return {false, num / g, den / g};
    }

    bool is_one() const { return !zero && num == 0; }

    CharacterValue operator*(const CharacterValue& o) const {
        if (zero || o.zero) return zero_value();
        uint64_t d = std::lcm(den, o.den);
        return root(num * (d / den) + o.num * (d / o.den), d);
    }

    CharacterValue conj() const {
        if (zero || num == 0) return *this;
        return {false, den - num, den};
    }

    friend bool operator==(const CharacterValue& a, const CharacterValue& b) = default;

    std::complex<double> to_complex() const {
        if (zero) return {0.0, 0.0};
        switch (den) {
            case 1: return {1.0, 0.0};
            case 2: return {-1.0, 0.0};
            case 4: return num == 1 ? std::complex<double>{0.0, 1.0}
                                    : std::complex<double>{0.0, -1.0};
            default:
                return std::polar(1.0, 2.0 * std::numbers::pi *
                                           static_cast<double>(num) / static_cast<double>(den));
        }
    }
};

/// A Dirichlet character mod q as an exponent tuple against the group generators.
/// Immutable; shares the group structure, safe to copy across threads.
class DirichletCharacter {
public:
    DirichletCharacter(UnitGroupPtr group, std::vector<uint32_t> exponents)
        : group_(std::move(group)), exps_(std::move(exponents)) {
        const auto comps = group_->components();
        if (exps_.size() != comps.size())
            throw domain_error("DirichletCharacter: exponent tuple has wrong arity");
        order_ = 1;
        principal_ = true;
        real_ = true;
        for (size_t i = 0; i < exps_.size(); ++i) {
            uint64_t ord = comps[i].order;
            exps_[i] = static_cast<uint32_t>(exps_[i] % ord);
            if (exps_[i] != 0) principal_ = false;
            if ((2ull * exps_[i]) % ord != 0) real_ = false;
            order_ = std::lcm(order_, ord / std::gcd<uint64_t>(exps_[i], ord));
        }
    }

    uint64_t modulus() const noexcept { return group_->modulus(); }
    const UnitGroupStructure& group() const noexcept { return *group_; }
    UnitGroupPtr group_ptr() const noexcept { return group_; }
    const std::vector<uint32_t>& exponents() const noexcept { return exps_; }
    uint64_t order() const noexcept { return order_; }
    bool is_principal() const noexcept { return principal_; }
    bool is_real() const noexcept { return real_; }

    CharacterValue operator()(int64_t n) const {
        uint32_t code = group_->dlog_code(n);
        if (code == UnitGroupStructure::npos_code) return CharacterValue::zero_value();
        const auto comps = group_->components();
        const uint64_t level = group_->exponent();
        uint64_t num = 0;
        for (size_t i = comps.size(); i-- > 0;) {
            uint64_t ord = comps[i].order;
            uint64_t digit = code % ord;
            code = static_cast<uint32_t>(code / ord);
            num += (static_cast<uint64_t>(exps_[i]) * digit % ord) * (level / ord);
        }
        return CharacterValue::root(num, level);
    }

    DirichletCharacter conjugate() const {
        const auto comps = group_->components();
        std::vector<uint32_t> neg(exps_.size());
        for (size_t i = 0; i < exps_.size(); ++i)
            neg[i] = static_cast<uint32_t>((comps[i].order - exps_[i]) % comps[i].order);
        return {group_, std::move(neg)};
    }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.modulus() == b.modulus() && a.exps_ == b.exps_;
    }

private:
    UnitGroupPtr group_;
    std::vector<uint32_t> exps_;
    uint64_t order_;
    bool principal_;
    bool real_;
};

inline CharacterValue char_eval(const DirichletCharacter& chi, int64_t n) { return chi(n); }

/// All phi(q) characters, exponent tuples in lexicographic order (principal first).
inline std::vector<DirichletCharacter> enumerate_characters(const UnitGroupPtr& group) {
    std::vector<DirichletCharacter> out;
    out.reserve(group->phi());
    for (uint64_t code = 0; code < group->phi(); ++code)
        out.emplace_back(group, group->decode(static_cast<uint32_t>(code)));
    return out;
}

struct CharacterClass {
    bool is_principal;
    bool is_real;
    uint64_t order;
};

inline CharacterClass classify_character(const DirichletCharacter& chi) {
    return {chi.is_principal(), chi.is_real(), chi.order()};
}

/// Coefficients of the n-th cyclotomic polynomial, ascending degree.
inline std::vector<long long> cyclotomic_polynomial(uint64_t n) {
    // x^n - 1 divided by Phi_d for every proper divisor d | n
    std::vector<long long> poly(n + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    auto divide_exact = [](std::vector<long long>& num, const std::vector<long long>& den) {
        std::vector<long long> quot(num.size() - den.size() + 1, 0);
        std::vector<long long> rem = num;
        for (size_t i = quot.size(); i-- > 0;) {
            long long c = rem[i + den.size() - 1];  // den is monic
            quot[i] = c;
            if (c == 0) continue;
            for (size_t j = 0; j < den.size(); ++j) rem[i + j] -= c * den[j];
        }
        num = std::move(quot);
    };
    for (uint64_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        auto phi_d = cyclotomic_polynomial(d);
        divide_exact(poly, phi_d);
    }
    return poly;
}

/// Exact accumulator over roots of unity of a fixed level L; zero is decided by
/// reducing the coefficient polynomial modulo the L-th cyclotomic polynomial.
class RootOfUnitySum {
public:
    explicit RootOfUnitySum(uint64_t level) : level_(level), coeff_(level, 0) {}

    void add(const CharacterValue& v, long long count = 1) {
        if (v.zero) return;
        if (level_ % v.den != 0)
            throw domain_error("RootOfUnitySum: value is not a root of the accumulator level");
        coeff_[v.num * (level_ / v.den)] += count;
    }

    bool is_zero() const {
        auto phi = cyclotomic_polynomial(level_);
        const size_t deg = phi.size() - 1;
        std::vector<long long> rem = coeff_;
        for (size_t i = rem.size(); i-- > deg;) {
            long long c = rem[i];  // phi is monic, so this reduction zeroes rem[i]
            if (c == 0) continue;
            for (size_t j = 0; j <= deg; ++j) rem[i - deg + j] -= c * phi[j];
        }
        return std::all_of(rem.begin(), rem.end(), [](long long c) { return c == 0; });
    }

    std::complex<double> to_complex() const {
        std::complex<double> s{0.0, 0.0};
        for (uint64_t k = 0; k < level_; ++k) {
            if (coeff_[k] == 0) continue;
            s += static_cast<double>(coeff_[k]) *
                 std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(level_));
        }
        return s;
    }

private:
    uint64_t level_;
    std::vector<long long> coeff_;
};

} // namespace siftlab
