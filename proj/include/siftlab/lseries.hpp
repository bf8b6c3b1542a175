#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "siftlab/errors.hpp"
#include "siftlab/residues.hpp"
#include "siftlab/sieve.hpp"

namespace siftlab {

using Complex = std::complex<double>;

/// x^{-s} for real x > 0.
inline Complex cpow_neg(double x, Complex s) {
    double lx = std::log(x);
    return std::polar(std::exp(-s.real() * lx), -s.imag() * lx);
}

struct EulerMaclaurinParams {
    int n_min = 50;
    double n_per_t = 10.0;      // direct terms scale with |Im s|
    int bernoulli_terms = 12;   // correction terms, at most 12
    double tolerance = 1e-12;   // target for the a-posteriori tail estimate
    double pole_window = 1e-13;
};

namespace detail {

// B_{2k} / (2k)! for k = 1..12
inline constexpr double bernoulli_over_factorial[12] = {
    8.3333333333333333e-02,  -1.3888888888888889e-03, 3.3068783068783069e-05,
    -8.2671957671957672e-07, 2.0876756987868099e-08,  -5.2841901386874932e-10,
    1.3382536530684679e-11,  -3.3896802963225829e-13, 8.5860620562778446e-15,
    -2.1748686985580619e-16, 5.5090028283602295e-18,  -1.3954464685812522e-19,
};

} // namespace detail

namespace detail {

/// (e^z - 1)/z, stable near z = 0.
inline Complex expm1_over_z(Complex z) {
    if (std::abs(z) > 0.5) return (std::exp(z) - 1.0) / z;
    Complex sum{1.0, 0.0};
    Complex term{1.0, 0.0};
    for (int k = 2; k <= 24; ++k) {
        term *= z / static_cast<double>(k);
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

} // namespace detail

/// zeta(s, alpha) - 1/(s-1): the pole subtracted off, so the expression is
/// regular across s = 1. Direct summation to N plus the Euler-Maclaurin tail;
/// needs Re(s) > 0 and 0 < alpha <= 1.
inline Complex hurwitz_zeta_regularized(Complex s, double alpha,
                                        const EulerMaclaurinParams& em = {}) {
    if (alpha <= 0.0 || alpha > 1.0)
        throw domain_error("hurwitz_zeta: need 0 < alpha <= 1");
    if (s.real() <= 0.0) throw domain_error("hurwitz_zeta: need Re(s) > 0");
    int n_terms = std::max(em.n_min,
                           static_cast<int>(em.n_per_t * (std::abs(s.imag()) + 1.0)));
    KahanSum re, im;
    for (int n = 0; n < n_terms; ++n) {
        Complex t = cpow_neg(n + alpha, s);
        re.add(t.real());
        im.add(t.imag());
    }
    double w = n_terms + alpha;
    double lw = std::log(w);
    Complex ws = cpow_neg(w, s);  // w^{-s}
    // (w^{1-s} - 1)/(s-1) = -log(w) (e^z - 1)/z  with  z = (1-s) log w
    Complex tail = -lw * detail::expm1_over_z((1.0 - s) * lw) + 0.5 * ws;
    int m = std::clamp(em.bernoulli_terms, 0, 12);
    Complex poch = s;     // s (s+1) ... (s+2k-2)
    Complex wp = ws / w;  // w^{-s-(2k-1)}
    double last_term = 0.0;
    for (int k = 1; k <= m; ++k) {
        Complex term = detail::bernoulli_over_factorial[k - 1] * poch * wp;
        tail += term;
        last_term = std::abs(term);
        poch *= (s + Complex(2.0 * k - 1.0)) * (s + Complex(2.0 * k));
        wp /= w * w;
    }
    Complex result = Complex{re.value(), im.value()} + tail;
    // a-posteriori tail estimate: the remainder is comparable to the last
    // correction term, which must sit below the requested tolerance
    if (last_term > em.tolerance * (1.0 + std::abs(result)))
        throw precision_error("hurwitz_zeta: Euler-Maclaurin tail did not reach tolerance; "
                              "raise N or the Bernoulli depth");
    return result;
}

/// Hurwitz zeta(s, alpha) = sum_{n>=0} (n+alpha)^{-s}; relative error around
/// 1e-12 at the default parameters. Pole at s = 1.
inline Complex hurwitz_zeta(Complex s, double alpha, const EulerMaclaurinParams& em = {}) {
    if (std::abs(s - Complex{1.0, 0.0}) < em.pole_window)
        throw pole_error("hurwitz_zeta: pole at s = 1");
    return hurwitz_zeta_regularized(s, alpha, em) + 1.0 / (s - 1.0);
}

/// L(s, chi) through the Hurwitz decomposition q^{-s} sum_a chi(a) zeta(s, a/q).
/// The zeta poles at s = 1 cancel for non-principal chi, so the regularized
/// pieces are summed and the pole term enters only with its exact coefficient
/// sum_a chi(a) (phi(q) for the principal character, zero otherwise).
inline Complex dirichlet_l(Complex s, const DirichletCharacter& chi,
                           const EulerMaclaurinParams& em = {}) {
    if (chi.is_principal() && std::abs(s - Complex{1.0, 0.0}) < em.pole_window)
        throw pole_error("dirichlet_l: principal character has a pole at s = 1");
    uint64_t q = chi.modulus();
    KahanSum re, im;
    for (uint64_t a = 1; a <= q; ++a) {
        CharacterValue v = chi(static_cast<int64_t>(a));
        if (v.zero) continue;
        Complex t = v.to_complex() *
                    hurwitz_zeta_regularized(s, static_cast<double>(a) / static_cast<double>(q), em);
        re.add(t.real());
        im.add(t.imag());
    }
    Complex sum{re.value(), im.value()};
    if (chi.is_principal())
        sum += static_cast<double>(chi.group().phi()) / (s - 1.0);
    return cpow_neg(static_cast<double>(q), s) * sum;
}

/// L_y(s, chi) = L(s, chi) prod_{p <= y} (1 - chi(p) p^{-s}): the Dirichlet
/// series over y-rough integers.
inline Complex l_rough(Complex s, const DirichletCharacter& chi, double y,
                       const EulerMaclaurinParams& em = {}, const SieveConfig& cfg = {}) {
    Complex val = dirichlet_l(s, chi, em);
    if (y >= 2.0) {
        for_each_prime(2, static_cast<uint64_t>(y), [&](uint64_t p) {
            CharacterValue v = chi(static_cast<int64_t>(p));
            if (v.zero) return;
            val *= 1.0 - v.to_complex() * cpow_neg(static_cast<double>(p), s);
        }, cfg);
    }
    return val;
}

struct DerivResult {
    Complex value;
    bool precision_warning = false;
    int nodes = 0;
};

/// k-th derivative of L_y at s by Cauchy's formula on a circle of radius
/// min(0.1, (Re s - 1)/2), trapezoid nodes doubled from 256 until the relative
/// change drops below 1e-9. Needs Re(s) > 1.
inline DerivResult l_rough_deriv(Complex s, const DirichletCharacter& chi, double y, int k,
                                 const EulerMaclaurinParams& em = {},
                                 const SieveConfig& cfg = {}) {
    if (k < 0) throw domain_error("l_rough_deriv: order must be >= 0");
    if (k == 0) return {l_rough(s, chi, y, em, cfg), false, 0};
    if (s.real() <= 1.0) throw domain_error("l_rough_deriv: need Re(s) > 1");
    double r = std::min(0.1, 0.5 * (s.real() - 1.0));
    DerivResult res;
    res.precision_warning = r < 1e-2;
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    Complex prev{0.0, 0.0};
    for (int nodes = 256; nodes <= 4096; nodes *= 2) {
        KahanSum re, im;
        for (int m = 0; m < nodes; ++m) {
            double theta = 2.0 * std::numbers::pi * m / nodes;
            Complex z = s + std::polar(r, theta);
            Complex t = l_rough(z, chi, y, em, cfg) * std::polar(1.0, -k * theta);
            re.add(t.real());
            im.add(t.imag());
        }
        Complex val = kfact / (std::pow(r, k) * nodes) * Complex{re.value(), im.value()};
        res.nodes = nodes;
        if (nodes > 256 && std::abs(val - prev) <= 1e-9 * std::max(1e-30, std::abs(val))) {
            res.value = val;
            return res;
        }
        prev = val;
    }
    res.value = prev;
    res.precision_warning = true;
    return res;
}

/// A y-rough series bound to its evaluation parameters: the Euler-Maclaurin
/// cutoff scales with N >= 10 and the tolerance must be positive.
class RoughSeriesHandle {
public:
    RoughSeriesHandle(DirichletCharacter chi, double y, EulerMaclaurinParams em = {},
                      SieveConfig cfg = {})
        : chi_(std::move(chi)), y_(y), em_(em), cfg_(std::move(cfg)) {
        if (y_ < 1.0) throw domain_error("RoughSeriesHandle: need y >= 1");
        if (!(em_.tolerance > 0.0)) throw domain_error("RoughSeriesHandle: tolerance must be > 0");
        if (em_.n_min < 10) throw domain_error("RoughSeriesHandle: need N >= 10");
    }

    const DirichletCharacter& character() const { return chi_; }
    double y() const { return y_; }
    const EulerMaclaurinParams& params() const { return em_; }

    Complex operator()(Complex s) const { return l_rough(s, chi_, y_, em_, cfg_); }
    DerivResult derivative(Complex s, int k) const {
        return l_rough_deriv(s, chi_, y_, k, em_, cfg_);
    }

private:
    DirichletCharacter chi_;
    double y_;
    EulerMaclaurinParams em_;
    SieveConfig cfg_;
};

/// L_q(1, chi) = L(1, chi) prod_{p <= q} (1 - chi(p)/p) for non-principal chi.
/// For real chi the evaluation is exactly real; residual imaginary parts above
/// 1e-12 indicate an evaluation bug and are reported, not hidden.
inline double l_q_one(const DirichletCharacter& chi, const EulerMaclaurinParams& em = {},
                      const SieveConfig& cfg = {}) {
    if (chi.is_principal()) throw pole_error("l_q_one: principal character has a pole at s = 1");
    Complex val = l_rough(Complex{1.0, 0.0}, chi, static_cast<double>(chi.modulus()), em, cfg);
    if (std::abs(val.imag()) > 1e-12 * std::max(1.0, std::abs(val.real())))
        throw precision_error("l_q_one: unexpected imaginary residue");
    return val.real();
}

/// Outcome of the minimum-of-L_q(1, .) selection over the real non-principal
/// characters mod q. psi is absent when that set is empty (q <= 2).
struct ExceptionalReport {
    uint64_t q = 0;
    std::optional<DirichletCharacter> psi;
    double value = 0.0;  // L_q(1, psi) when psi is present
    std::vector<std::pair<DirichletCharacter, double>> all_values;
};

inline ExceptionalReport find_exceptional(uint64_t q,
                                          const EulerMaclaurinParams& em = {},
                                          const SieveConfig& cfg = {}) {
    if (q == 0) throw domain_error("find_exceptional: q must be positive");
    ExceptionalReport rep;
    rep.q = q;
    auto group = build_unit_group(q);
    for (const auto& chi : enumerate_characters(group)) {
        if (chi.is_principal() || !chi.is_real()) continue;
        rep.all_values.emplace_back(chi, l_q_one(chi, em, cfg));
    }
    // enumeration order is lexicographic in the exponent tuple, so the first
    // strict minimum implements the tie-break
    for (const auto& [chi, val] : rep.all_values) {
        if (!rep.psi || val < rep.value) {
            rep.psi = chi;
            rep.value = val;
        }
    }
    return rep;
}

struct SiegelScanReport {
    uint64_t q = 0;
    double window_lo = 0.85;
    double window_hi = 1.0;
    int grid = 512;
    std::vector<double> zeros;       // refined sign-change locations
    std::optional<double> beta;      // first zero, when any
    bool anomaly = false;            // more than one sign change on the grid
    double beta_hat = 0.0;           // beta, or the window's left endpoint
    double l_q_one_psi = 0.0;
    double ratio = 0.0;              // L_q(1, psi) / ((1 - beta_hat) log q)
};

/// Samples L(sigma, psi) over the window and bisection-refines each sign change
/// to 1e-10. psi must exist for q.
inline SiegelScanReport siegel_zero_scan(uint64_t q, double lo = 0.85, double hi = 1.0,
                                         int grid = 512,
                                         const EulerMaclaurinParams& em = {},
                                         const SieveConfig& cfg = {}) {
    auto exc = find_exceptional(q, em, cfg);
    if (!exc.psi) throw domain_error("siegel_zero_scan: no real non-principal character mod q");
    if (!(lo < hi) || grid < 2) throw domain_error("siegel_zero_scan: bad window");
    const auto& psi = *exc.psi;
    auto value_at = [&](double sigma) {
        Complex v = dirichlet_l(Complex{sigma, 0.0}, psi, em);
        return v.real();
    };
    SiegelScanReport rep;
    rep.q = q;
    rep.window_lo = lo;
    rep.window_hi = hi;
    rep.grid = grid;
    rep.l_q_one_psi = exc.value;
    double step = (hi - lo) / grid;
    double prev_sigma = lo;
    double prev_val = value_at(lo);
    for (int i = 1; i < grid; ++i) {
        double sigma = lo + i * step;
        double val = value_at(sigma);
        if ((prev_val < 0.0) != (val < 0.0) && prev_val != 0.0) {
            double a = prev_sigma, b = sigma, fa = prev_val;
            while (b - a > 1e-10) {
                double m = 0.5 * (a + b);
                double fm = value_at(m);
                if ((fa < 0.0) != (fm < 0.0)) b = m;
                else { a = m; fa = fm; }
            }
            rep.zeros.push_back(0.5 * (a + b));
        }
        prev_sigma = sigma;
        prev_val = val;
    }
    if (!rep.zeros.empty()) rep.beta = rep.zeros.front();
    rep.anomaly = rep.zeros.size() > 1;
    rep.beta_hat = rep.beta.value_or(lo);
    rep.ratio = rep.l_q_one_psi /
                ((1.0 - rep.beta_hat) * std::log(static_cast<double>(q)));
    return rep;
}

enum class CharClass { nonreal, real_nonprincipal, exceptional };

inline const char* char_class_name(CharClass c) {
    switch (c) {
        case CharClass::nonreal: return "nonreal";
        case CharClass::real_nonprincipal: return "real";
        case CharClass::exceptional: return "exceptional";
    }
    return "?";
}

struct LBoundsRow {
    CharClass cls;
    int chi_index;   // position in the lexicographic enumeration
    double sigma;
    double t;
    int j;
    double value;    // |L_y^{(j)}(sigma + it, chi)|
};

struct LBoundsSummary {
    std::string cls;            // "nonreal", "real", "C_q"
    double min_abs;             // min over the grid of |L_y|
    double max_deriv_ratio;     // max over 1 <= j <= j_max of |L_y^{(j)}| / (j! (log y)^j)
    std::optional<double> l_y_at_one;  // real characters only: min L_y(1, chi)
};

struct LBoundsTable {
    uint64_t q;
    double y;
    bool hypothesis_met;  // y >= q V_t over the whole t grid (never at desk scale)
    std::vector<LBoundsRow> rows;
    std::vector<LBoundsSummary> summaries;
};

inline double log_v_cutoff(double t) {
    double u = std::log(3.0 + std::abs(t));
    return 100.0 * std::pow(u, 2.0 / 3.0) * std::pow(std::log(u), 1.0 / 3.0);
}

/// Grid measurements of |L_y^{(j)}| per character class: measured constants for
/// the lower/upper bound shapes, not assertions of them.
inline LBoundsTable measure_lseries_bounds(uint64_t q, double y,
                                           const std::vector<double>& sigma_grid,
                                           const std::vector<double>& t_grid, int j_max,
                                           const EulerMaclaurinParams& em = {},
                                           const SieveConfig& cfg = {}) {
    for (double s : sigma_grid)
        if (!(s > 1.0 && s <= 2.0))
            throw domain_error("measure_lseries_bounds: sigma grid must lie in (1, 2]");
    if (y < static_cast<double>(q)) throw domain_error("measure_lseries_bounds: need y >= q");
    LBoundsTable table;
    table.q = q;
    table.y = y;
    double t_hi = 0.0;
    for (double t : t_grid) t_hi = std::max(t_hi, std::abs(t));
    table.hypothesis_met = y >= static_cast<double>(q) * std::exp(log_v_cutoff(t_hi));

    auto exc = find_exceptional(q, em, cfg);
    auto chars = enumerate_characters(build_unit_group(q));
    double logy = std::log(std::max(y, 2.0));
    struct Acc {
        double min_abs = std::numeric_limits<double>::infinity();
        double max_ratio = 0.0;
        double min_at_one = std::numeric_limits<double>::infinity();
        bool any = false;
    };
    Acc acc_nonreal, acc_real, acc_cq;
    for (size_t idx = 0; idx < chars.size(); ++idx) {
        const auto& chi = chars[idx];
        if (chi.is_principal()) continue;  // pole: excluded from the table
        CharClass cls = !chi.is_real() ? CharClass::nonreal
                        : (exc.psi && chi == *exc.psi) ? CharClass::exceptional
                                                       : CharClass::real_nonprincipal;
        bool in_cq = !(exc.psi && chi == *exc.psi);
        for (double sigma : sigma_grid) {
            for (double t : t_grid) {
                Complex s{sigma, t};
                for (int j = 0; j <= j_max; ++j) {
                    double v = std::abs(j == 0 ? l_rough(s, chi, y, em, cfg)
                                               : l_rough_deriv(s, chi, y, j, em, cfg).value);
                    table.rows.push_back({cls, static_cast<int>(idx), sigma, t, j, v});
                    auto feed = [&](Acc& a) {
                        a.any = true;
                        if (j == 0) a.min_abs = std::min(a.min_abs, v);
                        else {
                            double jf = 1.0;
                            for (int i = 2; i <= j; ++i) jf *= i;
                            a.max_ratio = std::max(a.max_ratio, v / (jf * std::pow(logy, j)));
                        }
                    };
                    if (cls == CharClass::nonreal) feed(acc_nonreal);
                    else feed(acc_real);
                    if (in_cq) feed(acc_cq);
                }
            }
        }
        if (chi.is_real()) {
            double at_one = std::abs(l_rough(Complex{1.0, 0.0}, chi, y, em, cfg));
            acc_real.min_at_one = std::min(acc_real.min_at_one, at_one);
        }
    }
    auto push = [&](const char* name, const Acc& a, bool with_one) {
        if (!a.any) return;
        LBoundsSummary s{name, a.min_abs, a.max_ratio, std::nullopt};
        if (with_one && std::isfinite(a.min_at_one)) s.l_y_at_one = a.min_at_one;
        table.summaries.push_back(std::move(s));
    };
    push("nonreal", acc_nonreal, false);
    push("real", acc_real, true);
    push("C_q", acc_cq, false);
    return table;
}

} // namespace siftlab
