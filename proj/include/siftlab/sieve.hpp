#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <thread>
#include <vector>

#include "siftlab/arith.hpp"
#include "siftlab/errors.hpp"

namespace siftlab {

struct SieveConfig {
    uint64_t range_cap = 10'000'000'000ull;
    uint64_t segment_length = 1u << 20;
    int threads = 1;
};

/// Primes up to limit by a plain sieve (base primes for the segmented passes).
inline std::vector<uint32_t> small_primes(uint64_t limit) {
    std::vector<uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> composite(limit + 1, 0);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<uint32_t>(i));
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

namespace detail {

inline void check_range(uint64_t lo, uint64_t hi, const SieveConfig& cfg) {
    if (lo < 1 || lo > hi) throw domain_error("sieve: need 1 <= lo <= hi");
    if (hi > cfg.range_cap) throw capacity_error("sieve: range cap exceeded");
}

/// Bitmap over the odd numbers of [lo, hi]; bit set = composite/marked.
/// mark_from_p marks the primes themselves (rough-number mode, base = primes <= y);
/// otherwise marking starts at p^2 (prime mode).
struct OddSegment {
    uint64_t lo, hi;     // inclusive, both odd
    std::vector<uint64_t> bits;

    OddSegment(uint64_t seg_lo, uint64_t seg_hi,
               const std::vector<uint32_t>& base, bool mark_from_p)
        : lo(seg_lo | 1), hi(seg_hi) {
        if (hi < lo) { bits.clear(); return; }
        uint64_t count = (hi - lo) / 2 + 1;
        bits.assign((count + 63) / 64, 0);
        for (uint32_t p : base) {
            if (p == 2) continue;
            uint64_t p2 = static_cast<uint64_t>(p) * p;
            uint64_t start;
            if (mark_from_p) {
                start = ((lo + p - 1) / p) * p;
            } else {
                if (p2 > hi) break;  // base is ascending
                start = std::max<uint64_t>(p2, ((lo + p - 1) / p) * p);
            }
            if (start % 2 == 0) start += p;
            for (uint64_t m = start; m <= hi; m += 2ull * p) set((m - lo) / 2);
        }
        if (lo == 1) set(0);  // 1 is neither prime nor composite; callers re-add it as needed
    }

    void set(uint64_t i) { bits[i >> 6] |= 1ull << (i & 63); }
    bool marked(uint64_t i) const { return (bits[i >> 6] >> (i & 63)) & 1; }

    template <class Fn>
    void for_each_unmarked(Fn&& fn) const {
        if (hi < lo) return;
        uint64_t count = (hi - lo) / 2 + 1;
        for (uint64_t w = 0; w < bits.size(); ++w) {
            uint64_t word = ~bits[w];
            if (w == bits.size() - 1 && (count & 63) != 0)
                word &= (1ull << (count & 63)) - 1;
            while (word != 0) {
                int b = std::countr_zero(word);
                word &= word - 1;
                fn(lo + 2 * ((w << 6) + static_cast<uint64_t>(b)));
            }
        }
    }
};

/// Runs fn(seg_lo, seg_hi_inclusive, index) over a fixed partition of [lo, hi].
/// Results land in a vector indexed by segment, so the caller's in-order merge
/// is independent of the thread count.
template <class Partial, class Work>
std::vector<Partial> run_segments(uint64_t lo, uint64_t hi, const SieveConfig& cfg, Work&& work) {
    uint64_t seglen = std::max<uint64_t>(cfg.segment_length, 64);
    uint64_t nseg = (hi - lo) / seglen + 1;
    std::vector<Partial> out(nseg);
    auto run_one = [&](uint64_t i) {
        uint64_t s = lo + i * seglen;
        uint64_t e = std::min(hi, s + seglen - 1);
        out[i] = work(s, e, i);
    };
    int threads = std::max(1, cfg.threads);
    if (threads == 1 || nseg == 1) {
        for (uint64_t i = 0; i < nseg; ++i) run_one(i);
    } else {
        std::atomic<uint64_t> next{0};
        std::vector<std::thread> pool;
        int n = static_cast<int>(std::min<uint64_t>(static_cast<uint64_t>(threads), nseg));
        pool.reserve(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) {
            pool.emplace_back([&] {
                for (uint64_t i = next.fetch_add(1); i < nseg; i = next.fetch_add(1)) run_one(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

} // namespace detail

/// Primes of [lo, hi] in ascending order, delivered to fn.
template <class Fn>
void for_each_prime(uint64_t lo, uint64_t hi, Fn&& fn, const SieveConfig& cfg = {}) {
    detail::check_range(lo, hi, cfg);
    auto base = small_primes(isqrt(hi));
    if (lo <= 2 && hi >= 2) fn(2);
    uint64_t seglen = std::max<uint64_t>(cfg.segment_length, 64);
    for (uint64_t s = std::max<uint64_t>(lo, 3); s <= hi; s += seglen) {
        uint64_t e = std::min(hi, s + seglen - 1);
        detail::OddSegment seg(s, e, base, false);
        seg.for_each_unmarked(fn);
    }
}

inline std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi, const SieveConfig& cfg = {}) {
    std::vector<uint64_t> out;
    for_each_prime(lo, hi, [&](uint64_t p) { out.push_back(p); }, cfg);
    return out;
}

inline uint64_t count_primes(uint64_t lo, uint64_t hi, const SieveConfig& cfg = {}) {
    uint64_t n = 0;
    for_each_prime(lo, hi, [&](uint64_t) { ++n; }, cfg);
    return n;
}

/// prod_{p <= y} (1 - 1/p), accumulated as compensated log-sums.
inline double mertens_product(double y, const SieveConfig& cfg = {}) {
    if (y < 2.0) return 1.0;
    KahanSum logs;
    for_each_prime(2, static_cast<uint64_t>(y),
                   [&](uint64_t p) { logs.add(std::log1p(-1.0 / static_cast<double>(p))); }, cfg);
    return std::exp(logs.value());
}

struct WeightedPoint {
    uint64_t n;
    double weight;
};

/// Support of the von Mangoldt function up to x, ascending: (p^k, log p).
template <class Fn>
void for_each_lambda(uint64_t x, Fn&& fn, const SieveConfig& cfg = {}) {
    if (x < 1) throw domain_error("for_each_lambda: need x >= 1");
    if (x < 2) return;
    detail::check_range(1, x, cfg);
    auto base = small_primes(isqrt(x));
    uint64_t seglen = std::max<uint64_t>(cfg.segment_length, 64);
    std::vector<WeightedPoint> powers;
    for (uint64_t s = 1; s <= x; s += seglen) {
        uint64_t e = std::min(x, s + seglen - 1);
        powers.clear();
        if (s <= 2 && e >= 2) powers.push_back({2, std::log(2.0)});
        for (uint32_t p : base) {
            uint64_t pk = static_cast<uint64_t>(p) * p;
            if (pk > e) break;
            double lp = std::log(static_cast<double>(p));
            while (pk <= e) {
                if (pk >= s) powers.push_back({pk, lp});
                if (pk > e / p) break;
                pk *= p;
            }
        }
        std::sort(powers.begin(), powers.end(),
                  [](const WeightedPoint& a, const WeightedPoint& b) { return a.n < b.n; });
        detail::OddSegment seg(std::max<uint64_t>(s, 3), e, base, false);
        size_t i = 0;
        seg.for_each_unmarked([&](uint64_t p) {
            while (i < powers.size() && powers[i].n < p) fn(powers[i++]);
            fn(WeightedPoint{p, std::log(static_cast<double>(p))});
        });
        while (i < powers.size()) fn(powers[i++]);
    }
}

inline std::vector<WeightedPoint> von_mangoldt_points(uint64_t x, const SieveConfig& cfg = {}) {
    std::vector<WeightedPoint> out;
    for_each_lambda(x, [&](const WeightedPoint& w) { out.push_back(w); }, cfg);
    return out;
}

/// y-rough integers n <= x (P^-(n) > y, with n = 1 always included), ascending.
template <class Fn>
void for_each_rough(uint64_t x, double y, Fn&& fn, const SieveConfig& cfg = {}) {
    if (y < 1.0) throw domain_error("for_each_rough: need y >= 1");
    detail::check_range(1, x, cfg);
    if (y < 2.0) {
        for (uint64_t n = 1; n <= x; ++n) fn(n);
        return;
    }
    auto base = small_primes(std::min<uint64_t>(static_cast<uint64_t>(y), x));
    fn(1);
    uint64_t seglen = std::max<uint64_t>(cfg.segment_length, 64);
    for (uint64_t s = 3; s <= x; s += seglen) {
        uint64_t e = std::min(x, s + seglen - 1);
        detail::OddSegment seg(s, e, base, true);
        seg.for_each_unmarked(fn);
    }
}

inline std::vector<uint64_t> rough_values(uint64_t x, double y, const SieveConfig& cfg = {}) {
    if (y < 1.0) throw domain_error("rough_values: need y >= 1");
    // materializing the list needs memory proportional to the rough density
    double expected = static_cast<double>(x) * (y < 2.0 ? 1.0 : mertens_product(y, cfg));
    if (expected > 3e8)
        throw capacity_error("rough_values: too many values to hold; use for_each_rough");
    std::vector<uint64_t> out;
    for_each_rough(x, y, [&](uint64_t n) { out.push_back(n); }, cfg);
    return out;
}

inline uint64_t rough_count(uint64_t x, double y, const SieveConfig& cfg = {}) {
    uint64_t n = 0;
    for_each_rough(x, y, [&](uint64_t) { ++n; }, cfg);
    return n;
}

/// Counts of y-rough n <= x per residue class mod q (deterministic under threading).
namespace detail {

/// The ordered-merge contract stores one partial per segment; refuse runs
/// whose partial storage would not fit rather than switch summation orders.
inline void check_partial_storage(uint64_t lo, uint64_t hi, uint64_t q,
                                  const SieveConfig& cfg) {
    uint64_t seglen = std::max<uint64_t>(cfg.segment_length, 64);
    uint64_t nseg = (hi - lo) / seglen + 1;
    if (nseg > 4'000'000'000ull / (8 * std::max<uint64_t>(q, 1)))
        throw capacity_error("sieve: per-segment partials would exceed memory; "
                             "raise segment_length or lower q");
}

} // namespace detail

inline std::vector<uint64_t> rough_class_counts(uint64_t x, double y, uint64_t q,
                                                const SieveConfig& cfg = {}) {
    if (q == 0) throw domain_error("rough_class_counts: q must be positive");
    detail::check_range(1, x, cfg);
    detail::check_partial_storage(1, x, q, cfg);
    if (y < 2.0) {
        std::vector<uint64_t> counts(q, 0);
        for (uint64_t n = 1; n <= x; ++n) ++counts[n % q];
        return counts;
    }
    auto base = small_primes(std::min<uint64_t>(static_cast<uint64_t>(y), x));
    using Partial = std::vector<uint64_t>;
    auto partials = detail::run_segments<Partial>(
        3, std::max<uint64_t>(x, 3), cfg, [&](uint64_t s, uint64_t e, uint64_t) {
            Partial counts(q, 0);
            if (s > x) return counts;
            detail::OddSegment seg(s, std::min(e, x), base, true);
            seg.for_each_unmarked([&](uint64_t n) { ++counts[n % q]; });
            return counts;
        });
    std::vector<uint64_t> counts(q, 0);
    counts[1 % q] += 1;  // n = 1
    for (const auto& part : partials)
        for (uint64_t r = 0; r < q; ++r) counts[r] += part[r];
    return counts;
}

/// psi(x; q, b) for every residue class b mod q in one streaming pass.
/// Per-segment partials are combined in ascending segment order with
/// compensated summation, so the result is independent of the thread count.
struct LambdaProfile {
    uint64_t x = 0;
    uint64_t q = 1;
    std::vector<double> psi_by_class;

    double total() const {
        KahanSum s;
        for (double v : psi_by_class) s.add(v);
        return s.value();
    }
};

inline LambdaProfile lambda_profile(uint64_t x, uint64_t q, const SieveConfig& cfg = {}) {
    if (q == 0) throw domain_error("lambda_profile: q must be positive");
    detail::check_range(1, std::max<uint64_t>(x, 1), cfg);
    detail::check_partial_storage(1, std::max<uint64_t>(x, 1), q, cfg);
    LambdaProfile prof{x, q, std::vector<double>(q, 0.0)};
    if (x < 2) return prof;
    auto base = small_primes(isqrt(x));
    using Partial = std::vector<double>;
    auto partials = detail::run_segments<Partial>(
        1, x, cfg, [&](uint64_t s, uint64_t e, uint64_t) {
            Partial acc(q, 0.0);
            detail::OddSegment seg(std::max<uint64_t>(s, 3), e, base, false);
            seg.for_each_unmarked([&](uint64_t p) {
                acc[p % q] += std::log(static_cast<double>(p));
            });
            if (s <= 2 && e >= 2) acc[2 % q] += std::log(2.0);
            for (uint32_t p : base) {
                uint64_t pk = static_cast<uint64_t>(p) * p;
                if (pk > e) break;
                double lp = std::log(static_cast<double>(p));
                while (pk <= e) {
                    if (pk >= s) acc[pk % q] += lp;
                    if (pk > e / p) break;
                    pk *= p;
                }
            }
            return acc;
        });
    std::vector<KahanSum> sums(q);
    for (const auto& part : partials)
        for (uint64_t r = 0; r < q; ++r) sums[r].add(part[r]);
    for (uint64_t r = 0; r < q; ++r) prof.psi_by_class[r] = sums[r].value();
    return prof;
}

/// Chebyshev psi(x; q, a) = sum of Lambda(n) over n <= x, n = a (mod q).
inline double psi_ap(uint64_t x, uint64_t q, uint64_t a, const SieveConfig& cfg = {}) {
    if (q == 0 || std::gcd(a, q) != 1) throw domain_error("psi_ap: need gcd(a, q) = 1");
    if (x < 1) throw domain_error("psi_ap: need x >= 1");
    return lambda_profile(x, q, cfg).psi_by_class[a % q];
}

inline double chebyshev_psi(uint64_t x, const SieveConfig& cfg = {}) {
    if (x < 1) throw domain_error("chebyshev_psi: need x >= 1");
    return lambda_profile(x, 1, cfg).psi_by_class[0];
}

/// Support of Lambda restricted to y-rough n <= x, i.e. n = p^k with p > y, ascending.
inline std::vector<WeightedPoint> rough_lambda_points(uint64_t x, double y,
                                                      const SieveConfig& cfg = {}) {
    std::vector<WeightedPoint> pts;
    if (x < 2) return pts;
    uint64_t yfloor = y < 1.0 ? 0 : static_cast<uint64_t>(y);
    if (yfloor >= x) return pts;
    for_each_prime(yfloor + 1, x, [&](uint64_t p) {
        pts.push_back({p, std::log(static_cast<double>(p))});
    }, cfg);
    uint64_t root = isqrt(x);
    size_t nprimes = pts.size();
    for (size_t i = 0; i < nprimes; ++i) {
        uint64_t p = pts[i].n;
        double w = pts[i].weight;
        if (p > root) break;
        uint64_t pk = p * p;
        while (pk <= x) {
            pts.push_back({pk, w});
            if (pk > x / p) break;
            pk *= p;
        }
    }
    std::sort(pts.begin(), pts.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) { return a.n < b.n; });
    return pts;
}

} // namespace siftlab
