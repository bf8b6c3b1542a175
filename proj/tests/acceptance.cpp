// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line each. Exit status is the number of failures.
//
// usage: acceptance <path-to-siftlab-cli>
// (the CLI path drives the byte-identical determinism check)

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "siftlab/siftlab.hpp"

using namespace siftlab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const char* name, bool pass, double seconds,
            const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%.1f s%s%s)\n", pass ? "PASS" : "FAIL", criterion, name,
                seconds, detail.empty() ? "" : "; ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

struct Timer {
    Clock::time_point start = Clock::now();
    double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

std::string fmt(double v) { return fmt_sig(v, 6); }

// 1. character orthogonality over a full period, q <= 300, < 10 s
void criterion_orthogonality() {
    Timer timer;
    double worst = 0.0;
    for (uint64_t q = 1; q <= 300; ++q) {
        for (const auto& chi : enumerate_characters(build_unit_group(q))) {
            if (chi.is_principal()) continue;
            std::complex<double> sum{0.0, 0.0};
            for (uint64_t n = 1; n <= q; ++n) sum += chi(static_cast<int64_t>(n)).to_complex();
            worst = std::max(worst, std::abs(sum));
        }
    }
    double secs = timer.seconds();
    report(1, "character orthogonality, q <= 300", worst <= 1e-10 && secs < 10.0, secs,
           "max |sum| = " + fmt(worst));
}

// 2. L-value oracles, < 1 s
void criterion_l_oracles() {
    Timer timer;
    const double pi = std::numbers::pi;
    const double catalan = 0.9159655941772190;  // sum (-1)^k / (2k+1)^2
    auto c4 = enumerate_characters(build_unit_group(4));
    double e1 = std::abs(dirichlet_l({1.0, 0.0}, c4[1]).real() - pi / 4.0);
    double e2 = std::abs(dirichlet_l({2.0, 0.0}, c4[1]).real() - catalan);
    double e3 = std::abs(hurwitz_zeta({2.0, 0.0}, 0.5).real() - pi * pi / 2.0);
    double e4 = std::abs(find_exceptional(4).value - pi / 3.0);
    double secs = timer.seconds();
    bool pass = e1 <= 1e-9 && e2 <= 1e-9 && e3 <= 1e-10 && e4 <= 1e-9 && secs < 1.0;
    report(2, "L-value oracles", pass, secs,
           "errors " + fmt(e1) + ", " + fmt(e2) + ", " + fmt(e3) + ", " + fmt(e4));
}

// 3. exceptional selection for prime q <= 97: the quadratic character exactly
void criterion_exceptional_primes() {
    Timer timer;
    bool pass = true;
    std::string bad;
    for (uint64_t q : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                       73, 79, 83, 89, 97}) {
        auto exc = find_exceptional(q);
        bool ok = exc.psi.has_value() && exc.psi->exponents().size() == 1 &&
                  exc.psi->exponents()[0] == (q - 1) / 2;
        if (!ok) {
            pass = false;
            bad += " q=" + std::to_string(q);
        }
    }
    report(3, "exceptional = quadratic character for prime q <= 97", pass, timer.seconds(),
           pass ? "24 primes checked" : "failures:" + bad);
}

// 4. sifted-AP main term within 5 percent per residue class, < 2 min
void criterion_sifted_ap_main_term() {
    Timer timer;
    bool pass = true;
    double worst = 0.0;
    const std::vector<std::pair<double, double>> cases = {{20.0, 64000000.0},
                                                          {30.0, 24300000.0}};
    for (auto [y, x] : cases) {
        for (uint64_t q : {3ull, 4ull, 5ull}) {
            for (uint64_t a = 1; a < q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                auto rep = verify_sifted_lemma(x, y, q, a, 0);
                double dev = rep.rel_error.value_or(1.0);
                worst = std::max(worst, dev);
                pass = pass && dev <= 0.05;
            }
        }
    }
    double secs = timer.seconds();
    report(4, "sifted-AP main term within 5%", pass && secs < 120.0, secs,
           "worst relative deviation = " + fmt(worst));
}

// 5. majorant mean-value inequality on 500 admissible random instances, < 2 min
void criterion_montgomery() {
    Timer timer;
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool pass = true;
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        DirichletPolynomial a("A"), b("B");
        int support = 1 + static_cast<int>(rng() % 50);
        for (int i = 0; i < support; ++i) {
            uint64_t n = 1 + rng() % 400;
            double bn = 2.0 * unif(rng);
            b.add(n, {bn, 0.0});
            a.add(n, std::polar(bn * unif(rng), 2.0 * std::numbers::pi * unif(rng)));
        }
        double sigma = 1.0 + 1e-3 + 0.998 * unif(rng);
        double T = 1.0 + 9.0 * unif(rng);
        auto res = montgomery_check(a, b, sigma, T);
        pass = pass && res.lhs <= res.rhs + 1e-9;
        ++checked;
    }
    double secs = timer.seconds();
    report(5, "majorant mean-value inequality, 500 instances", pass && secs < 120.0, secs,
           std::to_string(checked) + " instances");
}

// 6. K/N sandwich on 500 admissible random instances, < 1 min
void criterion_kn_sandwich() {
    Timer timer;
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool pass = true;
    int done = 0;
    while (done < 500) {
        DirichletPolynomial f("F");
        int support = 2 + static_cast<int>(rng() % 12);
        for (int i = 0; i < support; ++i)
            f.add(1 + rng() % 60, std::polar(0.05 + unif(rng), 2.0 * std::numbers::pi * unif(rng)));
        std::complex<double> s{1.5 + unif(rng), 3.0 * unif(rng)};
        if (std::abs(f.eval(s)) < 1e-3) continue;
        int k = 1 + static_cast<int>(rng() % 6);
        auto rec = taylor_log_deriv_KN(f, s, k);
        double eps = 1e-9 * std::max(1.0, rec.K);
        pass = pass && rec.K / 2.0 - eps <= rec.N && rec.N <= 2.0 * rec.K + eps;
        ++done;
    }
    double secs = timer.seconds();
    report(6, "K/N sandwich, 500 instances", pass && secs < 60.0, secs, "");
}

// 7. convolution identity residual <= 1e-8 relative, < 30 s
void criterion_identity() {
    Timer timer;
    auto r1 = hybrid_identity_residual(1e6, 3, 1, 144.0);
    auto r2 = hybrid_identity_residual(1e6, 5, 1, 400.0);
    double secs = timer.seconds();
    bool pass = r1.relative <= 1e-8 && r2.relative <= 1e-8 && secs < 30.0;
    report(7, "convolution identity residual", pass, secs,
           "relative " + fmt(r1.relative) + ", " + fmt(r2.relative));
}

// 8. main-term probe: normalized error <= 0.01 at 1e8 and decreasing from 1e5
void criterion_probe() {
    Timer timer;
    bool pass = true;
    double worst_hi = 0.0;
    for (uint64_t q : {3ull, 4ull, 5ull, 7ull}) {
        auto lo = theorem_probe_all(1e5, q, std::nullopt);
        auto hi = theorem_probe_all(1e8, q, std::nullopt);
        for (size_t i = 0; i < lo.size(); ++i) {
            worst_hi = std::max(worst_hi, hi[i].normalized);
            pass = pass && hi[i].normalized <= 0.01 && hi[i].normalized < lo[i].normalized;
        }
    }
    double secs = timer.seconds();
    report(8, "main-term probe at x = 1e8 vs 1e5", pass && secs < 300.0, secs,
           "worst normalized error at 1e8 = " + fmt(worst_hi));
}

// 9. Cauchy-circle derivative vs central differences, 3x3 grid, < 30 s
void criterion_derivative_consistency() {
    Timer timer;
    const double y = 1000.0, h = 1e-5;
    bool pass = true;
    double worst = 0.0;
    auto chars = enumerate_characters(build_unit_group(5));
    for (const auto& chi : chars) {
        if (chi.is_principal()) continue;
        for (double sigma : {1.1, 1.3, 1.5}) {
            for (double t : {0.0, 1.0, 2.0}) {
                std::complex<double> s{sigma, t};
                auto cauchy = l_rough_deriv(s, chi, y, 1).value;
                auto fd = (l_rough(s + std::complex<double>{h, 0.0}, chi, y) -
                           l_rough(s - std::complex<double>{h, 0.0}, chi, y)) /
                          (2.0 * h);
                double rel = std::abs(cauchy - fd) / std::abs(fd);
                worst = std::max(worst, rel);
                pass = pass && rel <= 1e-6;
            }
        }
    }
    double secs = timer.seconds();
    report(9, "derivative consistency on a 3x3 grid", pass && secs < 30.0, secs,
           "worst relative gap = " + fmt(worst));
}

// 10. no real zero of L(sigma, psi) in [0.85, 1) and L_q(1, psi) > 0, q <= 50
void criterion_siegel_sanity() {
    Timer timer;
    bool pass = true;
    int scanned = 0;
    for (uint64_t q = 3; q <= 50; ++q) {
        auto exc = find_exceptional(q);
        if (!exc.psi) continue;
        auto scan = siegel_zero_scan(q);
        pass = pass && scan.zeros.empty() && scan.l_q_one_psi > 0.0;
        ++scanned;
    }
    double secs = timer.seconds();
    report(10, "no Siegel zero in [0.85, 1) for q <= 50", pass && secs < 60.0, secs,
           std::to_string(scanned) + " moduli scanned");
}

// 11. mean-value probe: lhs <= 100 rhs and nonincreasing in T, < 2 min
void criterion_mvt() {
    Timer timer;
    bool pass = true;
    double worst_ratio = 0.0;
    for (double sigma : {1.05, 1.1}) {
        for (int j : {0, 1}) {
            double prev = std::numeric_limits<double>::infinity();
            for (double T : {1.0, 10.0}) {
                auto res = mvt_probe(3, 1, 150.0, sigma, j, T);
                worst_ratio = std::max(worst_ratio, res.ratio);
                pass = pass && res.lhs_truncated <= 100.0 * res.rhs_bound;
                pass = pass && res.lhs_truncated <= prev;
                prev = res.lhs_truncated;
            }
        }
    }
    double secs = timer.seconds();
    report(11, "mean-value probe bound and monotonicity", pass && secs < 120.0, secs,
           "worst lhs/rhs = " + fmt(worst_ratio));
}

// 12. byte-identical CSV between 1 and 8 worker threads on the criterion-8 sweep
void criterion_determinism(const std::string& cli_path) {
    Timer timer;
    if (cli_path.empty()) {
        report(12, "determinism across thread counts", false, 0.0, "no CLI path given");
        return;
    }
    auto run = [&](int threads, const std::string& out) {
        std::string cmd = "\"" + cli_path + "\" sweep probe --q 3,4,5,7 --x 1e5:1e8:x1000" +
                          " --threads " + std::to_string(threads) + " --out " + out;
        return std::system(cmd.c_str());
    };
    int rc1 = run(1, "acceptance_sweep_t1.csv");
    int rc8 = run(8, "acceptance_sweep_t8.csv");
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string a = slurp("acceptance_sweep_t1.csv");
    std::string b = slurp("acceptance_sweep_t8.csv");
    bool pass = rc1 == 0 && rc8 == 0 && !a.empty() && a == b;
    report(12, "determinism across thread counts", pass, timer.seconds(),
           "bytes " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

} // namespace

int main(int argc, char** argv) {
    std::string cli_path = argc > 1 ? argv[1] : "";
    criterion_orthogonality();
    criterion_l_oracles();
    criterion_exceptional_primes();
    criterion_sifted_ap_main_term();
    criterion_montgomery();
    criterion_kn_sandwich();
    criterion_identity();
    criterion_probe();
    criterion_derivative_consistency();
    criterion_siegel_sanity();
    criterion_mvt();
    criterion_determinism(cli_path);
    if (failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria failed\n", failures);
    return failures;
}
