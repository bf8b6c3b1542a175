#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "siftlab/arith.hpp"
#include "siftlab/errors.hpp"
#include "siftlab/lseries.hpp"
#include "siftlab/residues.hpp"
#include "siftlab/sieve.hpp"

namespace siftlab {

/// Arguments of the discrepancy functionals. The module-wide range choice is
/// y >= 16 q^2 (the strictest hypothesis among the inputs they feed).
struct DeltaInput {
    double u = 1.0;
    double y = 16.0;
    uint64_t q = 1;
    uint64_t b = 1;
    std::optional<DirichletCharacter> psi;  // resolved once per q, injected
};

namespace detail {

inline void check_delta_range(double y, uint64_t q, uint64_t b) {
    if (q == 0 || std::gcd(b, q) != 1) throw domain_error("delta: need gcd(b, q) = 1");
    if (y < 16.0 * static_cast<double>(q) * static_cast<double>(q))
        throw domain_error("delta: module range requires y >= 16 q^2");
}

/// +-1 values of a real character on the residue classes, 0 off the units.
inline std::vector<double> real_char_table(const std::optional<DirichletCharacter>& psi,
                                           uint64_t q) {
    std::vector<double> vals(q, 0.0);
    if (!psi) return vals;
    for (uint64_t r = 0; r < q; ++r) {
        CharacterValue v = (*psi)(static_cast<int64_t>(r));
        if (!v.zero) vals[r] = v.to_complex().real();
    }
    return vals;
}

/// Sorted weighted points with per-class prefix sums; supports the O(log n)
/// partial sums the recursion needs at many cut points u.
class PrefixTable {
public:
    PrefixTable(std::vector<WeightedPoint> pts, uint64_t q, std::span<const double> psi_vals)
        : q_(q), pts_(std::move(pts)) {
        cum_total_.reserve(pts_.size());
        cum_psi_.reserve(pts_.size());
        class_n_.assign(q, {});
        class_cum_.assign(q, {});
        KahanSum total, psi_sum;
        std::vector<KahanSum> per_class(q);
        for (const auto& pt : pts_) {
            uint64_t r = pt.n % q;
            total.add(pt.weight);
            if (!psi_vals.empty()) psi_sum.add(pt.weight * psi_vals[r]);
            per_class[r].add(pt.weight);
            cum_total_.push_back(total.value());
            cum_psi_.push_back(psi_sum.value());
            class_n_[r].push_back(pt.n);
            class_cum_[r].push_back(per_class[r].value());
        }
    }

    double total(double u) const { return at(cum_total_, pts_binary(u)); }
    double psi_weighted(double u) const { return at(cum_psi_, pts_binary(u)); }

    double class_sum(uint64_t b, double u) const {
        const auto& ns = class_n_[b % q_];
        const auto& cums = class_cum_[b % q_];
        size_t idx = static_cast<size_t>(
            std::upper_bound(ns.begin(), ns.end(), floor_u(u)) - ns.begin());
        return at(cums, idx);
    }

    const std::vector<WeightedPoint>& points() const { return pts_; }

private:
    static uint64_t floor_u(double u) {
        return u < 0.0 ? 0 : static_cast<uint64_t>(u);
    }
    size_t pts_binary(double u) const {
        uint64_t uu = floor_u(u);
        return static_cast<size_t>(
            std::upper_bound(pts_.begin(), pts_.end(), uu,
                             [](uint64_t v, const WeightedPoint& p) { return v < p.n; }) -
            pts_.begin());
    }
    static double at(const std::vector<double>& cum, size_t idx) {
        return idx == 0 ? 0.0 : cum[idx - 1];
    }

    uint64_t q_;
    std::vector<WeightedPoint> pts_;
    std::vector<double> cum_total_;
    std::vector<double> cum_psi_;
    std::vector<std::vector<uint64_t>> class_n_;
    std::vector<std::vector<double>> class_cum_;
};

inline PrefixTable lambda_prefix_table(double u, double y, uint64_t q,
                                       std::span<const double> psi_vals,
                                       const SieveConfig& cfg) {
    return {rough_lambda_points(static_cast<uint64_t>(u), y, cfg), q, psi_vals};
}

inline PrefixTable unit_prefix_table(double u, double y, uint64_t q,
                                     std::span<const double> psi_vals, const SieveConfig& cfg) {
    std::vector<WeightedPoint> pts;
    for_each_rough(static_cast<uint64_t>(u), y,
                   [&](uint64_t n) { pts.push_back({n, 1.0}); }, cfg);
    return {std::move(pts), q, psi_vals};
}

inline double delta_from_table(const PrefixTable& table, double u, uint64_t q, uint64_t b,
                               std::span<const double> psi_vals) {
    double phi = static_cast<double>(euler_phi(q));
    double val = table.class_sum(b, u) - table.total(u) / phi;
    if (!psi_vals.empty()) val -= psi_vals[b % q] * table.psi_weighted(u) / phi;
    return val;
}

} // namespace detail

/// Delta(u, y; q, b): the Lambda-weighted sifted AP sum minus its chi_0 and psi
/// projections. Every sum is streamed directly; the psi term is omitted when
/// psi is absent.
inline double delta(const DeltaInput& in, const SieveConfig& cfg = {}) {
    detail::check_delta_range(in.y, in.q, in.b);
    if (in.u < 1.0) return 0.0;
    auto psi_vals = detail::real_char_table(in.psi, in.q);
    std::span<const double> span_vals = in.psi ? std::span<const double>(psi_vals)
                                               : std::span<const double>();
    auto table = detail::lambda_prefix_table(in.u, in.y, in.q, span_vals, cfg);
    return detail::delta_from_table(table, in.u, in.q, in.b, span_vals);
}

/// Delta*(u, y; q, b): same shape with unit weights over the y-rough integers.
inline double delta_star(const DeltaInput& in, const SieveConfig& cfg = {}) {
    detail::check_delta_range(in.y, in.q, in.b);
    if (in.u < 1.0) return 0.0;
    auto psi_vals = detail::real_char_table(in.psi, in.q);
    std::span<const double> span_vals = in.psi ? std::span<const double>(psi_vals)
                                               : std::span<const double>();
    auto table = detail::unit_prefix_table(in.u, in.y, in.q, span_vals, cfg);
    return detail::delta_from_table(table, in.u, in.q, in.b, span_vals);
}

struct IdentityResidual {
    double x = 0.0, y = 0.0;
    uint64_t q = 1, a = 1;
    double lhs = 0.0;       // sum over rough n <= x, n = a (q), of log n
    double rhs = 0.0;       // the bilinear split m <= sqrt(x) against sqrt(x) < m
    double residual = 0.0;  // exact identity: pure floating-point noise
    double relative = 0.0;
};

/// Both sides of the log = Lambda * 1 decomposition restricted to y-rough
/// integers in the progression, computed independently.
inline IdentityResidual hybrid_identity_residual(double x, uint64_t q, uint64_t a, double y,
                                                 const SieveConfig& cfg = {}) {
    detail::check_delta_range(y, q, a);
    double root = std::sqrt(x);
    if (!(root >= y)) throw domain_error("hybrid_identity_residual: need sqrt(x) >= y");
    IdentityResidual res;
    res.x = x;
    res.y = y;
    res.q = q;
    res.a = a % q;

    auto xi = static_cast<uint64_t>(x);
    auto rough = rough_values(xi, y, cfg);
    auto lambda_table = detail::lambda_prefix_table(x, y, q, {}, cfg);

    KahanSum lhs;
    for (uint64_t n : rough)
        if (n % q == res.a) lhs.add(std::log(static_cast<double>(n)));
    res.lhs = lhs.value();

    // term 1: m <= sqrt(x) rough, inner Lambda-sum over l <= x/m, l = a m^{-1} (q)
    KahanSum rhs;
    for (uint64_t m : rough) {
        if (static_cast<double>(m) > root) break;
        uint64_t target = mulmod(res.a, mod_inverse(m % q, q), q);
        rhs.add(lambda_table.class_sum(target, x / static_cast<double>(m)));
    }
    // term 2: Lambda-points l <= sqrt(x), counting rough m in (sqrt(x), x/l]
    std::vector<std::vector<uint64_t>> rough_by_class(q);
    for (uint64_t n : rough) rough_by_class[n % q].push_back(n);
    for (const auto& pt : lambda_table.points()) {
        if (static_cast<double>(pt.n) > root) break;
        uint64_t target = mulmod(res.a, mod_inverse(pt.n % q, q), q);
        const auto& ns = rough_by_class[target];
        auto hi_it = std::upper_bound(ns.begin(), ns.end(),
                                      static_cast<uint64_t>(x / static_cast<double>(pt.n)));
        auto lo_it = std::upper_bound(ns.begin(), ns.end(), static_cast<uint64_t>(root));
        rhs.add(pt.weight * static_cast<double>(hi_it - lo_it));
    }
    res.rhs = rhs.value();
    res.residual = std::abs(res.lhs - res.rhs);
    res.relative = res.lhs != 0.0 ? res.residual / std::abs(res.lhs) : res.residual;
    return res;
}

struct RecursionResidual {
    double x = 0.0, y = 0.0;
    uint64_t q = 1, a = 1;
    double c2_hat = 0.1;
    double delta_x = 0.0;
    double neighbor_sum = 0.0;  // sum over 1 < m <= sqrt(x) rough of Delta(x/m, b = a m^{-1})
    double residual = 0.0;      // delta_x + neighbor_sum
    double normalized = 0.0;    // |residual| phi(q) / x^{1 - c2_hat/log y}
};

/// Residual of the recursion Delta(x) = -sum_m Delta(x/m) + (error term),
/// with psi resolved once per q.
inline RecursionResidual recursion_residual(double x, uint64_t q, uint64_t a, double y,
                                            double c2_hat = 0.1, const SieveConfig& cfg = {}) {
    detail::check_delta_range(y, q, a);
    double root = std::sqrt(x);
    if (!(root >= y)) throw domain_error("recursion_residual: need sqrt(x) >= y");
    RecursionResidual res;
    res.x = x;
    res.y = y;
    res.q = q;
    res.a = a % q;
    res.c2_hat = c2_hat;

    auto exc = find_exceptional(q, {}, cfg);
    auto psi_vals = detail::real_char_table(exc.psi, q);
    std::span<const double> span_vals = exc.psi ? std::span<const double>(psi_vals)
                                                : std::span<const double>();
    auto table = detail::lambda_prefix_table(x, y, q, span_vals, cfg);
    res.delta_x = detail::delta_from_table(table, x, q, res.a, span_vals);

    KahanSum neighbors;
    for_each_rough(static_cast<uint64_t>(root), y, [&](uint64_t m) {
        if (m == 1) return;
        uint64_t target = mulmod(res.a, mod_inverse(m % q, q), q);
        neighbors.add(detail::delta_from_table(table, x / static_cast<double>(m), q, target,
                                               span_vals));
    }, cfg);
    res.neighbor_sum = neighbors.value();
    res.residual = res.delta_x + res.neighbor_sum;
    res.normalized = std::abs(res.residual) * static_cast<double>(euler_phi(q)) /
                     std::pow(x, 1.0 - c2_hat / std::log(y));
    return res;
}

/// The closing parameter bundle: every quantity the final optimization pins
/// down, evaluated at configurable constants. The prescribed y is astronomical
/// for any desk-scale x, so schedules normally carry an override plus a flag.
struct TheoremSchedule {
    double x = 0.0;
    uint64_t q = 1;
    double L_const = 1.0;
    double M_prime = 4.0;
    double delta = 0.0;       // 1 / (5 e M')
    double T = 0.0;           // exp{2 L (log x)^{3/5} (loglog x)^{2/5}}
    double log_V_T = 0.0;
    double V_T = 0.0;         // +inf when it overflows a double
    double log_y_paper = 0.0; // log of (10q)^{100} V_T
    bool paper_y_feasible = false;
    double y = 0.0;           // the y actually in force (override when infeasible)
    double D = 0.0;           // x^{1 - delta/log y}
    uint64_t ell = 1;         // floor(log x / (e M' log y)), floored at 1
    double c = 0.0;           // 1 + 1/log x
};

inline TheoremSchedule parameter_schedule(double x, uint64_t q, double L_const = 1.0,
                                          double M_prime = 4.0,
                                          std::optional<double> y_override = std::nullopt,
                                          double sieve_cap = 10'000'000'000.0) {
    if (q == 0 || !(x >= static_cast<double>(q) * static_cast<double>(q)))
        throw domain_error("parameter_schedule: need x >= q^2 >= 1");
    if (!(x >= 16.0)) throw domain_error("parameter_schedule: need x >= 16");
    if (!(L_const > 0.0) || !(M_prime > 0.0))
        throw domain_error("parameter_schedule: constants must be positive");
    TheoremSchedule s;
    s.x = x;
    s.q = q;
    s.L_const = L_const;
    s.M_prime = M_prime;
    double logx = std::log(x);
    s.T = std::exp(2.0 * L_const * std::pow(logx, 0.6) * std::pow(std::log(logx), 0.4));
    s.log_V_T = log_v_cutoff(s.T);
    s.V_T = s.log_V_T > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(s.log_V_T);
    s.log_y_paper = 100.0 * std::log(10.0 * static_cast<double>(q)) + s.log_V_T;
    s.paper_y_feasible = s.log_y_paper <= std::log(sieve_cap);
    if (s.paper_y_feasible) {
        s.y = std::exp(s.log_y_paper);
    } else {
        if (!y_override)
            throw config_error("parameter_schedule: prescribed y is infeasible; y_override required");
        s.y = *y_override;
    }
    s.delta = 1.0 / (5.0 * std::numbers::e * M_prime);
    double logy = std::log(s.y);
    s.D = std::pow(x, 1.0 - s.delta / logy);
    s.ell = std::max<uint64_t>(
        1, static_cast<uint64_t>(logx / (std::numbers::e * M_prime * logy)));
    s.c = 1.0 + 1.0 / logx;
    return s;
}

struct ProbeConstants {
    double C1_hat = 0.1;
    double C2_hat = 0.1;
    double c_prime_hat = 0.1;   // bound shape for the psi character sum
    double c_dprime_hat = 0.1;
    double L_const = 1.0;
    double M_prime = 4.0;
    double B_range = 4.0;       // the "x >= q^B" range exponent, reported not enforced
};

/// Main-term probe: the unsifted Lambda-sum on the progression against
/// x/phi(q) plus the psi-character correction, with configurable envelopes.
struct TheoremProbeReport {
    double x = 0.0;
    uint64_t q = 1, a = 1;
    bool psi_present = false;
    double psi_ap_value = 0.0;
    double main = 0.0;           // x / phi(q)
    double psi_term = 0.0;       // psi(a)/phi(q) sum_{n<=x} Lambda(n) psi(n)
    double E = 0.0;              // psi_ap_value - main - psi_term (exact by construction)
    double normalized = 0.0;     // phi(q) |E| / x
    double psi_char_sum = 0.0;   // sum_{n<=x} Lambda(n) psi(n)
    double envelope1 = 0.0;      // x^{1 - C1_hat/log 2q} / phi(q)
    double envelope2 = 0.0;      // x exp{-C2_hat (log x)^{3/5} (loglog x)^{-3/5}} / phi(q)
    double bound_shape1 = 0.0;   // x^{1 - c'_hat L_q(1,psi)/log 2q}; NaN when psi absent
    double bound_shape2 = 0.0;   // x exp{-c''_hat sqrt(log x)}; NaN when psi absent
    bool in_range_qB = false;    // x >= q^{B_range}; x >= q^2 is what is enforced
    ProbeConstants constants;
    TheoremSchedule schedule;
};

/// All coprime residues in one streaming pass; the per-a reports share the
/// same profile and exceptional character.
inline std::vector<TheoremProbeReport> theorem_probe_all(double x, uint64_t q,
                                                         std::optional<double> y_override,
                                                         const ProbeConstants& pc = {},
                                                         const SieveConfig& cfg = {}) {
    if (q == 0 || !(x >= static_cast<double>(q) * static_cast<double>(q)))
        throw domain_error("theorem_probe: need x >= q^2");
    auto xi = static_cast<uint64_t>(x);
    auto prof = lambda_profile(xi, q, cfg);
    auto exc = find_exceptional(q, {}, cfg);
    auto psi_vals = detail::real_char_table(exc.psi, q);
    double phi = static_cast<double>(euler_phi(q));
    double logx = std::log(x);

    KahanSum char_sum;
    if (exc.psi)
        for (uint64_t r = 0; r < q; ++r) char_sum.add(psi_vals[r] * prof.psi_by_class[r]);

    TheoremSchedule sched = parameter_schedule(x, q, pc.L_const, pc.M_prime,
                                               y_override.has_value()
                                                   ? y_override
                                                   : std::optional<double>(
                                                         16.0 * static_cast<double>(q) *
                                                         static_cast<double>(q)),
                                               static_cast<double>(cfg.range_cap));

    std::vector<TheoremProbeReport> out;
    for (uint64_t a = 1; a <= q; ++a) {
        if (std::gcd(a % q, q) != 1) continue;
        TheoremProbeReport rep;
        rep.x = x;
        rep.q = q;
        rep.a = a % q;
        rep.constants = pc;
        rep.schedule = sched;
        rep.psi_present = exc.psi.has_value();
        rep.psi_ap_value = prof.psi_by_class[rep.a];
        rep.main = x / phi;
        rep.psi_char_sum = char_sum.value();
        rep.psi_term = exc.psi ? psi_vals[rep.a] * rep.psi_char_sum / phi : 0.0;
        rep.E = rep.psi_ap_value - rep.main - rep.psi_term;
        rep.normalized = phi * std::abs(rep.E) / x;
        rep.in_range_qB = x >= std::pow(static_cast<double>(q), pc.B_range);
        rep.envelope1 = std::pow(x, 1.0 - pc.C1_hat / std::log(2.0 * static_cast<double>(q))) / phi;
        rep.envelope2 = x * std::exp(-pc.C2_hat * std::pow(logx, 0.6) /
                                     std::pow(std::log(logx), 0.6)) / phi;
        if (exc.psi) {
            rep.bound_shape1 = std::pow(
                x, 1.0 - pc.c_prime_hat * exc.value / std::log(2.0 * static_cast<double>(q)));
            rep.bound_shape2 = x * std::exp(-pc.c_dprime_hat * std::sqrt(logx));
        } else {
            rep.bound_shape1 = std::numeric_limits<double>::quiet_NaN();
            rep.bound_shape2 = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(std::move(rep));
    }
    return out;
}

inline TheoremProbeReport theorem_probe(double x, uint64_t q, uint64_t a,
                                        std::optional<double> y_override = std::nullopt,
                                        const ProbeConstants& pc = {},
                                        const SieveConfig& cfg = {}) {
    if (q == 0 || std::gcd(a % q, q) != 1) throw domain_error("theorem_probe: need gcd(a, q) = 1");
    for (auto& rep : theorem_probe_all(x, q, y_override, pc, cfg))
        if (rep.a == a % q) return rep;
    throw domain_error("theorem_probe: residue not found");  // unreachable
}

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::pair<double, double>> points;   // (x, |E|) pairs kept
    std::vector<double> dropped;                     // x with |E| = 0
};

/// Least-squares fit of log|E| against log x over the provided points.
inline ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& xs_and_abs_e) {
    ExponentFit fit;
    for (const auto& [x, e] : xs_and_abs_e) {
        if (e == 0.0) fit.dropped.push_back(x);
        else fit.points.emplace_back(x, e);
    }
    if (fit.points.size() < 3)
        throw domain_error("exponent_fit: need at least 3 usable points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    auto n = static_cast<double>(fit.points.size());
    for (const auto& [x, e] : fit.points) {
        double lx = std::log(x), ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

inline ExponentFit exponent_fit(const std::vector<double>& xs, uint64_t q, uint64_t a,
                                std::optional<double> y_override = std::nullopt,
                                const ProbeConstants& pc = {}, const SieveConfig& cfg = {}) {
    if (xs.size() < 3) throw domain_error("exponent_fit: need at least 3 values of x");
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw domain_error("exponent_fit: x values must be increasing");
    std::vector<std::pair<double, double>> pts;
    for (double x : xs) {
        auto rep = theorem_probe(x, q, a, y_override, pc, cfg);
        pts.emplace_back(x, std::abs(rep.E));
    }
    return fit_loglog(pts);
}

} // namespace siftlab
