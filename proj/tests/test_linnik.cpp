#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "siftlab/linnik.hpp"

using namespace siftlab;

namespace {

/// Naive Delta: every sum by a direct loop with trial-division roughness.
double naive_delta(double u, double y, uint64_t q, uint64_t b,
                   const std::optional<DirichletCharacter>& psi, bool unit_weights) {
    double ap = 0.0, total = 0.0, psi_sum = 0.0;
    for (uint64_t n = 1; n <= static_cast<uint64_t>(u); ++n) {
        if (!oracles::is_rough(n, y)) continue;
        double w = unit_weights ? 1.0 : oracles::von_mangoldt(n);
        if (w == 0.0) continue;
        if (n % q == b % q) ap += w;
        if (std::gcd(n, q) == 1) total += w;
        if (psi) psi_sum += w * (*psi)(static_cast<int64_t>(n)).to_complex().real();
    }
    double phi = static_cast<double>(euler_phi(q));
    double val = ap - total / phi;
    if (psi) val -= (*psi)(static_cast<int64_t>(b)).to_complex().real() * psi_sum / phi;
    return val;
}

} // namespace

TEST_CASE("delta functional") {
    auto exc5 = find_exceptional(5);

    SECTION("u <= y vanishes (only n = 1 survives and Lambda(1) = 0)") {
        DeltaInput in{400.0, 400.0, 5, 2, exc5.psi};
        CHECK(delta(in) == 0.0);
    }

    SECTION("naive-loop oracle, q = 3 (identically small) and q = 5 (nonzero)") {
        auto exc3 = find_exceptional(3);
        DeltaInput in3{100000.0, 144.0, 3, 1, exc3.psi};
        double naive3 = naive_delta(1e5, 144.0, 3, 1, exc3.psi, false);
        CHECK(delta(in3) == Catch::Approx(naive3).margin(1e-6));

        DeltaInput in5{100000.0, 400.0, 5, 2, exc5.psi};
        double naive5 = naive_delta(1e5, 400.0, 5, 2, exc5.psi, false);
        CHECK(naive5 != 0.0);
        CHECK(delta(in5) == Catch::Approx(naive5).epsilon(1e-9));
    }

    SECTION("summing over the coprime classes telescopes to zero") {
        KahanSum sum;
        double scale = 0.0;
        for (uint64_t b : {1ull, 2ull, 3ull, 4ull}) {
            DeltaInput in{50000.0, 400.0, 5, b, exc5.psi};
            double v = delta(in);
            sum.add(v);
            scale = std::max(scale, std::abs(v));
        }
        CHECK(std::abs(sum.value()) <= 1e-9 * std::max(1.0, scale));
    }

    SECTION("domain errors") {
        DeltaInput bad{1000.0, 400.0, 5, 10, exc5.psi};  // gcd(10, 5) > 1
        CHECK_THROWS_AS(delta(bad), domain_error);
        DeltaInput small_y{1000.0, 100.0, 5, 2, exc5.psi};  // y < 16 q^2
        CHECK_THROWS_AS(delta(small_y), domain_error);
    }
}

TEST_CASE("delta star functional") {
    auto exc5 = find_exceptional(5);

    SECTION("u < 1 vanishes") {
        DeltaInput in{0.5, 400.0, 5, 1, exc5.psi};
        CHECK(delta_star(in) == 0.0);
    }

    SECTION("naive-loop oracle") {
        DeltaInput in{100000.0, 400.0, 5, 3, exc5.psi};
        double naive = naive_delta(1e5, 400.0, 5, 3, exc5.psi, true);
        CHECK(delta_star(in) == Catch::Approx(naive).margin(1e-7));
    }

    SECTION("telescoping over classes") {
        KahanSum sum;
        for (uint64_t b : {1ull, 2ull, 3ull, 4ull}) {
            DeltaInput in{50000.0, 400.0, 5, b, exc5.psi};
            sum.add(delta_star(in));
        }
        CHECK(std::abs(sum.value()) <= 1e-8 * 50000.0);
    }
}

TEST_CASE("convolution identity residual") {
    SECTION("admissible instances are exact up to floating noise") {
        auto r1 = hybrid_identity_residual(1e6, 3, 1, 144.0);
        CHECK(r1.relative <= 1e-8);
        auto r2 = hybrid_identity_residual(1e6, 5, 2, 400.0);
        CHECK(r2.relative <= 1e-8);
        CHECK(r1.lhs > 0.0);
    }

    SECTION("sqrt(x) < y breaks the split") {
        CHECK_THROWS_AS(hybrid_identity_residual(10000.0, 3, 1, 144.0), domain_error);
    }
}

TEST_CASE("recursion residual") {
    SECTION("q = 5 at x = 1e6") {
        auto res = recursion_residual(1e6, 5, 2, 400.0, 0.1);
        CHECK(std::isfinite(res.normalized));
        CHECK(res.normalized >= 0.0);
        CHECK(res.residual == Catch::Approx(res.delta_x + res.neighbor_sum).margin(1e-12));
    }

    SECTION("x just above y^2: cross-checked against naive deltas") {
        const double x = 25000.0, y = 144.0;
        auto exc = find_exceptional(3);
        auto res = recursion_residual(x, 3, 1, y, 0.1);
        double expect = naive_delta(x, y, 3, 1, exc.psi, false);
        double root = std::sqrt(x);
        for (uint64_t m = 2; m <= static_cast<uint64_t>(root); ++m) {
            if (!oracles::is_rough(m, y)) continue;
            uint64_t target = (1 * mod_inverse(m % 3, 3)) % 3;
            expect += naive_delta(x / static_cast<double>(m), y, 3, target, exc.psi, false);
        }
        CHECK(res.residual == Catch::Approx(expect).margin(1e-7));
    }

    SECTION("y >= sqrt(x) is rejected") {
        CHECK_THROWS_AS(recursion_residual(10000.0, 3, 1, 144.0, 0.1), domain_error);
    }
}

TEST_CASE("parameter schedule") {
    SECTION("T formula and magnitude at x = 1e8") {
        auto s = parameter_schedule(1e8, 3, 1.0, 4.0, 144.0);
        double logx = std::log(1e8);
        double expect_T =
            std::exp(2.0 * std::pow(logx, 0.6) * std::pow(std::log(logx), 0.4));
        CHECK(s.T == Catch::Approx(expect_T).epsilon(1e-12));
        CHECK(s.T > 4.4e7);
        CHECK(s.T < 4.6e7);
        CHECK(s.c == Catch::Approx(1.0 + 1.0 / logx).epsilon(1e-15));
        CHECK(s.ell >= 1);
        CHECK(s.delta == Catch::Approx(1.0 / (5.0 * std::numbers::e * 4.0)).epsilon(1e-15));
        CHECK(s.D == Catch::Approx(std::pow(1e8, 1.0 - s.delta / std::log(144.0))).epsilon(1e-12));
    }

    SECTION("the prescribed y is infeasible at desk scale") {
        auto s = parameter_schedule(1e8, 3, 1.0, 4.0, 144.0);
        CHECK_FALSE(s.paper_y_feasible);
        CHECK(s.y == 144.0);
        CHECK(s.log_y_paper > std::log(1e10));
        CHECK_THROWS_AS(parameter_schedule(1e8, 3, 1.0, 4.0, std::nullopt), config_error);
    }

    SECTION("V cutoff at t = 0 is about e^48.5") {
        CHECK(log_v_cutoff(0.0) > 48.0);
        CHECK(log_v_cutoff(0.0) < 49.0);
    }

    SECTION("domain") {
        CHECK_THROWS_AS(parameter_schedule(4.0, 3, 1.0, 4.0, 144.0), domain_error);
        CHECK_THROWS_AS(parameter_schedule(1e6, 3, -1.0, 4.0, 144.0), domain_error);
    }
}

TEST_CASE("theorem probe") {
    SECTION("report identity holds exactly as computed") {
        auto rep = theorem_probe(1e6, 4, 1, std::nullopt);
        CHECK(rep.psi_ap_value - rep.main - rep.psi_term - rep.E == 0.0);
        CHECK(rep.normalized >= 0.0);
        CHECK(rep.psi_present);
        CHECK(rep.schedule.paper_y_feasible == false);
    }

    SECTION("psi absent for q <= 2") {
        auto rep1 = theorem_probe(100.0, 1, 1, std::nullopt);
        CHECK_FALSE(rep1.psi_present);
        CHECK(rep1.psi_term == 0.0);
        CHECK(std::isnan(rep1.bound_shape1));
        auto rep2 = theorem_probe(100.0, 2, 1, std::nullopt);
        CHECK(rep2.psi_term == 0.0);
    }

    SECTION("envelope and bound shapes") {
        ProbeConstants pc;
        pc.C1_hat = 0.2;
        auto rep = theorem_probe(1e6, 3, 1, std::nullopt, pc);
        double phi = 2.0;
        CHECK(rep.envelope1 ==
              Catch::Approx(std::pow(1e6, 1.0 - 0.2 / std::log(6.0)) / phi).epsilon(1e-12));
        CHECK(rep.bound_shape2 ==
              Catch::Approx(1e6 * std::exp(-0.1 * std::sqrt(std::log(1e6)))).epsilon(1e-12));
    }

    SECTION("domain errors") {
        CHECK_THROWS_AS(theorem_probe(8.0, 3, 1, std::nullopt), domain_error);  // x < q^2
        CHECK_THROWS_AS(theorem_probe(1e6, 6, 2, std::nullopt), domain_error);  // gcd
    }
}

TEST_CASE("sifted/unsifted gap bound pi(y) log x") {
    const double x = 100000.0, y = 144.0;
    for (uint64_t q : {3ull, 5ull}) {
        auto prof = lambda_profile(static_cast<uint64_t>(x), q);
        auto pts = rough_lambda_points(static_cast<uint64_t>(x), y);
        double bound = static_cast<double>(count_primes(1, static_cast<uint64_t>(y))) *
                       std::log(x);
        for (uint64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            double sifted = 0.0;
            for (const auto& pt : pts)
                if (pt.n % q == a) sifted += pt.weight;
            CHECK(std::abs(prof.psi_by_class[a] - sifted) <= bound);
        }
    }
}

TEST_CASE("orthogonality bridge for delta") {
    const double u = 100000.0, y = 400.0;
    const uint64_t q = 5;
    auto exc = find_exceptional(q);
    auto chars = enumerate_characters(build_unit_group(q));
    auto pts = rough_lambda_points(static_cast<uint64_t>(u), y);
    for (uint64_t b : {1ull, 2ull, 3ull, 4ull}) {
        DeltaInput in{u, y, q, b, exc.psi};
        double lhs = 4.0 * delta(in);
        std::complex<double> rhs{0.0, 0.0};
        for (const auto& chi : chars) {
            if (chi.is_principal() || (exc.psi && chi == *exc.psi)) continue;
            std::complex<double> inner{0.0, 0.0};
            for (const auto& pt : pts)
                inner += pt.weight * chi(static_cast<int64_t>(pt.n)).to_complex();
            rhs += chi.conjugate()(static_cast<int64_t>(b)).to_complex() * inner;
        }
        CHECK(std::abs(std::complex<double>{lhs, 0.0} - rhs) <=
              1e-8 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("exponent fit") {
    SECTION("synthetic exact power law") {
        std::vector<std::pair<double, double>> pts;
        for (double x : {1e3, 1e4, 1e5, 1e6}) pts.emplace_back(x, std::sqrt(x));
        auto fit = fit_loglog(pts);
        CHECK(fit.slope == Catch::Approx(0.5).margin(1e-9));
    }

    SECTION("zero errors are dropped, too few points is an error") {
        std::vector<std::pair<double, double>> pts = {
            {1e3, 10.0}, {1e4, 0.0}, {1e5, 20.0}, {1e6, 0.0}};
        CHECK_THROWS_AS(fit_loglog(pts), domain_error);
        CHECK_THROWS_AS(exponent_fit({1e3, 1e4}, 3, 1), domain_error);
        CHECK_THROWS_AS(exponent_fit({1e4, 1e3, 1e5}, 3, 1), domain_error);
    }

    SECTION("measured slope stays below 1") {
        auto fit = exponent_fit({1e4, 1e5, 1e6}, 3, 1, std::nullopt);
        CHECK(fit.points.size() == 3);
        CHECK(fit.slope < 1.0);
    }
}
