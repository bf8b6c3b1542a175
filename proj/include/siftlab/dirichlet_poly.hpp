#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "siftlab/arith.hpp"
#include "siftlab/errors.hpp"
#include "siftlab/quadrature.hpp"
#include "siftlab/sieve.hpp"

namespace siftlab {

/// Finite Dirichlet polynomial sum a_n n^{-s}; entire in s.
class DirichletPolynomial {
public:
    DirichletPolynomial() = default;
    explicit DirichletPolynomial(std::string label) : label_(std::move(label)) {}

    void add(uint64_t n, std::complex<double> a) {
        if (n < 1) throw domain_error("DirichletPolynomial: support starts at n = 1");
        auto it = std::lower_bound(n_.begin(), n_.end(), n);
        if (it != n_.end() && *it == n) {
            coeff_[static_cast<size_t>(it - n_.begin())] += a;
            return;
        }
        size_t pos = static_cast<size_t>(it - n_.begin());
        n_.insert(it, n);
        coeff_.insert(coeff_.begin() + static_cast<std::ptrdiff_t>(pos), a);
        logn_.insert(logn_.begin() + static_cast<std::ptrdiff_t>(pos),
                     std::log(static_cast<double>(n)));
    }

    bool empty() const { return n_.empty(); }
    size_t size() const { return n_.size(); }
    uint64_t max_n() const { return n_.empty() ? 1 : n_.back(); }
    const std::string& label() const { return label_; }
    const std::vector<uint64_t>& support() const { return n_; }
    std::complex<double> coefficient(size_t i) const { return coeff_[i]; }
    double log_n(size_t i) const { return logn_[i]; }

    std::complex<double> eval(std::complex<double> s) const { return derivative_eval(s, 0); }

    /// Term-by-term exact derivative: sum a_n (-log n)^k n^{-s}.
    std::complex<double> derivative_eval(std::complex<double> s, int k) const {
        KahanSum re, im;
        for (size_t i = 0; i < n_.size(); ++i) {
            double ln = logn_[i];
            double mag = std::exp(-s.real() * ln);
            std::complex<double> t =
                coeff_[i] * std::polar(mag, -s.imag() * ln) *
                (k == 0 ? 1.0 : std::pow(-ln, k));
            re.add(t.real());
            im.add(t.imag());
        }
        return {re.value(), im.value()};
    }

private:
    std::vector<uint64_t> n_;
    std::vector<std::complex<double>> coeff_;
    std::vector<double> logn_;
    std::string label_;
};

enum class MeanSquareWeight { flat, inverse_t_squared };

namespace detail {

/// |P(sigma + it)|^2 with the sigma-part folded into the coefficients once.
struct ScaledSquare {
    std::vector<double> cre, cim, logn;

    ScaledSquare(const DirichletPolynomial& p, double sigma) {
        cre.reserve(p.size());
        cim.reserve(p.size());
        logn.reserve(p.size());
        for (size_t i = 0; i < p.size(); ++i) {
            double scale = std::exp(-sigma * p.log_n(i));
            cre.push_back(p.coefficient(i).real() * scale);
            cim.push_back(p.coefficient(i).imag() * scale);
            logn.push_back(p.log_n(i));
        }
    }

    double operator()(double t) const {
        double sre = 0.0, sim = 0.0;
        for (size_t i = 0; i < logn.size(); ++i) {
            double ang = -t * logn[i];
            double c = std::cos(ang), s = std::sin(ang);
            sre += cre[i] * c - cim[i] * s;
            sim += cre[i] * s + cim[i] * c;
        }
        return sre * sre + sim * sim;
    }
};

} // namespace detail

/// int_{T1}^{T2} |P(sigma + it)|^2 w(t) dt. Panels are capped at
/// 2 pi / log(max support) so the fastest oscillation n^{-it} stays resolved.
inline double mean_square_window(const DirichletPolynomial& P, double sigma, double T1, double T2,
                                 MeanSquareWeight weight = MeanSquareWeight::flat,
                                 double rel_tol = 1e-9) {
    if (!(T1 < T2)) throw domain_error("mean_square_window: need T1 < T2");
    if (!(sigma > 0.0)) throw domain_error("mean_square_window: need sigma > 0");
    if (P.empty()) return 0.0;
    if (weight == MeanSquareWeight::inverse_t_squared && T1 <= 0.0 && T2 >= 0.0)
        throw domain_error("mean_square_window: the 1/t^2 weight needs a window away from t = 0");
    detail::ScaledSquare sq(P, sigma);
    double max_log = std::log(static_cast<double>(std::max<uint64_t>(P.max_n(), 2)));
    double panel = 2.0 * std::numbers::pi / max_log;
    if (weight == MeanSquareWeight::flat)
        return integrate_panels(sq, T1, T2, panel, rel_tol);
    auto f = [&](double t) { return sq(t) / (t * t); };
    return integrate_panels(f, T1, T2, panel, rel_tol);
}

struct MontgomeryResult {
    double lhs = 0.0;  // int_{-T}^{T} |A|^2
    double rhs = 0.0;  // 3 int_{-T}^{T} |B|^2
    bool pass = false;
};

/// Majorant mean-value inequality: if |a_n| <= b_n then the A-integral is at
/// most three times the B-integral. The precondition is enforced; the check is
/// meaningless without it.
inline MontgomeryResult montgomery_check(const DirichletPolynomial& A,
                                         const DirichletPolynomial& B, double sigma, double T,
                                         double rel_tol = 1e-9) {
    if (!(sigma > 1.0)) throw domain_error("montgomery_check: need sigma > 1");
    if (!(T > 0.0)) throw domain_error("montgomery_check: need T > 0");
    // b_n must dominate on the union of supports
    for (size_t i = 0; i < B.size(); ++i) {
        auto b = B.coefficient(i);
        if (std::abs(b.imag()) > 1e-12 || b.real() < 0.0)
            throw domain_error("montgomery_check: b_n must be real and nonnegative");
    }
    for (size_t i = 0; i < A.size(); ++i) {
        uint64_t n = A.support()[i];
        auto it = std::lower_bound(B.support().begin(), B.support().end(), n);
        double b = (it != B.support().end() && *it == n)
                       ? B.coefficient(static_cast<size_t>(it - B.support().begin())).real()
                       : 0.0;
        if (std::abs(A.coefficient(i)) > b * (1.0 + 1e-12) + 1e-300)
            throw domain_error("montgomery_check: |a_n| <= b_n violated");
    }
    MontgomeryResult res;
    res.lhs = mean_square_window(A, sigma, -T, T, MeanSquareWeight::flat, rel_tol);
    res.rhs = 3.0 * mean_square_window(B, sigma, -T, T, MeanSquareWeight::flat, rel_tol);
    res.pass = res.lhs <= res.rhs + 1e-9;
    return res;
}

struct MvtProbeResult {
    uint64_t q = 1;
    uint64_t a = 1;
    double y = 0.0, sigma = 0.0;
    int j = 0;
    double T = 1.0, T_max = 10.0;
    uint64_t n_trunc = 0;
    uint64_t n_terms = 0;
    double lhs_truncated = 0.0;  // int_{T<|t|<T_max} |.|^2 dt/t^2, series cut at n_trunc
    double rhs_bound = 0.0;      // (log 4)^j (2j)! / (phi(q)^2 (sigma-1)^{2j+1} T)
    double ratio = 0.0;
    double tail_bound = 0.0;     // analytic bound on the discarded coefficient tail
};

/// Mean-value probe for the sifted Lambda-series on a progression. The series
/// sum_{n = a (q), P^-(n) > y} Lambda(n) (log n)^j n^{-sigma-it} is truncated at
/// n_trunc; the squared modulus is integrated symmetrically (the coefficients
/// are real, so the two half-ranges agree).
inline MvtProbeResult mvt_probe(uint64_t q, uint64_t a, double y, double sigma, int j, double T,
                                double T_max = 0.0, uint64_t n_trunc = 1'000'000,
                                double rel_tol = 1e-7, const SieveConfig& cfg = {}) {
    if (q == 0 || std::gcd(a, q) != 1) throw domain_error("mvt_probe: need gcd(a, q) = 1");
    if (y < 16.0 * static_cast<double>(q) * static_cast<double>(q))
        throw domain_error("mvt_probe: need y >= 16 q^2");
    if (!(sigma > 1.0 && sigma < 2.0)) throw domain_error("mvt_probe: need sigma in (1, 2)");
    if (!(T >= 1.0)) throw domain_error("mvt_probe: need T >= 1");
    if (j < 0) throw domain_error("mvt_probe: need j >= 0");
    if (T_max <= 0.0) T_max = 10.0 * T;
    if (!(T_max > T)) throw domain_error("mvt_probe: need T_max > T");

    MvtProbeResult res;
    res.q = q;
    res.a = a % q;
    res.y = y;
    res.sigma = sigma;
    res.j = j;
    res.T = T;
    res.T_max = T_max;
    res.n_trunc = n_trunc;

    DirichletPolynomial P("mvt");
    for (const auto& pt : rough_lambda_points(n_trunc, y, cfg)) {
        if (pt.n % q != res.a) continue;
        double ln = std::log(static_cast<double>(pt.n));
        P.add(pt.n, pt.weight * (j == 0 ? 1.0 : std::pow(ln, j)));
    }
    res.n_terms = P.size();
    if (!P.empty())
        res.lhs_truncated = 2.0 * mean_square_window(P, sigma, T, T_max,
                                                     MeanSquareWeight::inverse_t_squared, rel_tol);
    double fact2j = 1.0;
    for (int i = 2; i <= 2 * j; ++i) fact2j *= i;
    double phi = static_cast<double>(euler_phi(q));
    res.rhs_bound = std::pow(std::log(4.0), j) * fact2j /
                    (phi * phi * std::pow(sigma - 1.0, 2 * j + 1) * T);
    res.ratio = res.lhs_truncated / res.rhs_bound;
    // sum_{n>N} (log n)^{j+1} n^{-sigma} <= int_N^inf (log u)^{j+1} u^{-sigma} du
    double z = (sigma - 1.0) * std::log(static_cast<double>(n_trunc));
    res.tail_bound = upper_gamma_int(j + 2, z) / std::pow(sigma - 1.0, j + 2);
    return res;
}

/// Normalized Taylor data at s: K from the derivatives of F, N from the
/// derivatives of F'/F computed by power-series division. For analytic F with
/// F(s) != 0 the two maxima sandwich each other within a factor of two.
struct KNRecord {
    int k = 0;
    double K = 0.0;
    double N = 0.0;
    std::vector<std::complex<double>> taylor;  // c_0 .. c_k, c_j = F^{(j)}(s)/j!
};

inline KNRecord taylor_log_deriv_KN(const DirichletPolynomial& F, std::complex<double> s, int k) {
    if (k < 1) throw domain_error("taylor_log_deriv_KN: need k >= 1");
    KNRecord rec;
    rec.k = k;
    rec.taylor.resize(static_cast<size_t>(k) + 1);
    double fact = 1.0;
    for (int j = 0; j <= k; ++j) {
        if (j >= 2) fact *= j;
        rec.taylor[static_cast<size_t>(j)] = F.derivative_eval(s, j) / fact;
    }
    std::complex<double> c0 = rec.taylor[0];
    if (std::abs(c0) < 1e-6)
        throw conditioning_error("taylor_log_deriv_KN: |F(s)| below the conditioning floor");
    for (int j = 1; j <= k; ++j)
        rec.K = std::max(rec.K, std::pow(std::abs(rec.taylor[static_cast<size_t>(j)] / c0),
                                         1.0 / j));
    // g = F'/F as a power series in (z - s): long division by the constant term
    std::vector<std::complex<double>> g(static_cast<size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
        std::complex<double> num = static_cast<double>(j + 1) * rec.taylor[static_cast<size_t>(j) + 1];
        for (int i = 1; i <= j; ++i)
            num -= rec.taylor[static_cast<size_t>(i)] * g[static_cast<size_t>(j - i)];
        g[static_cast<size_t>(j)] = num / c0;
    }
    for (int j = 1; j <= k; ++j)
        rec.N = std::max(rec.N,
                         std::pow(std::abs(g[static_cast<size_t>(j) - 1]) / j, 1.0 / j));
    return rec;
}

} // namespace siftlab
