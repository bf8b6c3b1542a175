#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "siftlab/dirichlet_poly.hpp"

using namespace siftlab;

namespace {

DirichletPolynomial random_majorant(std::mt19937_64& rng, int max_support, uint64_t n_max,
                                    DirichletPolynomial& a_out) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<uint64_t> pick(1, n_max);
    DirichletPolynomial b("B");
    a_out = DirichletPolynomial("A");
    int support = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_support));
    for (int i = 0; i < support; ++i) {
        uint64_t n = pick(rng);
        double bn = 2.0 * unif(rng);
        double scale = unif(rng);  // |a_n| <= b_n strictly when scale < 1
        double phase = 2.0 * std::numbers::pi * unif(rng);
        b.add(n, {bn, 0.0});
        a_out.add(n, std::polar(bn * scale, phase));
    }
    return b;
}

} // namespace

TEST_CASE("mean square window basics") {
    DirichletPolynomial one("one");
    one.add(1, {1.0, 0.0});
    CHECK(mean_square_window(one, 1.0, -3.0, 4.0) == Catch::Approx(7.0).epsilon(1e-12));

    DirichletPolynomial single("n5");
    single.add(5, {1.0, 0.0});
    double sigma = 1.25;
    CHECK(mean_square_window(single, sigma, 0.0, 11.0) ==
          Catch::Approx(std::pow(5.0, -2.0 * sigma) * 11.0).epsilon(1e-12));

    DirichletPolynomial empty;
    CHECK(mean_square_window(empty, 1.0, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(mean_square_window(one, 1.0, 2.0, 1.0), domain_error);
    CHECK_THROWS_AS(
        mean_square_window(one, 1.0, -1.0, 1.0, MeanSquareWeight::inverse_t_squared),
        domain_error);
}

TEST_CASE("cross terms average out over a long window") {
    DirichletPolynomial p("two-term");
    p.add(2, {1.0, 0.0});
    p.add(3, {1.0, 0.0});
    double sigma = 1.0;
    double diag = (std::pow(2.0, -2.0) + std::pow(3.0, -2.0)) * 200.0;
    double v = mean_square_window(p, sigma, 0.0, 200.0);
    CHECK(std::abs(v - diag) <= 0.1 * diag);
}

TEST_CASE("mean square is additive over adjacent windows") {
    DirichletPolynomial p("add");
    p.add(2, {0.7, 0.1});
    p.add(9, {-0.3, 0.4});
    p.add(30, {0.2, 0.0});
    double whole = mean_square_window(p, 1.2, 0.0, 7.0);
    double split = mean_square_window(p, 1.2, 0.0, 3.0) + mean_square_window(p, 1.2, 3.0, 7.0);
    CHECK(whole == Catch::Approx(split).epsilon(1e-9));
}

TEST_CASE("majorant inequality examples") {
    DirichletPolynomial a("A"), b("B");
    for (uint64_t n : {2ull, 5ull, 11ull}) {
        a.add(n, std::polar(1.0 / static_cast<double>(n), 0.4 * static_cast<double>(n)));
        b.add(n, {1.0 / static_cast<double>(n), 0.0});
    }

    SECTION("A = B sits at exactly a third of the bound") {
        auto res = montgomery_check(b, b, 1.5, 4.0);
        CHECK(res.pass);
        CHECK(3.0 * res.lhs == Catch::Approx(res.rhs).epsilon(1e-10));
    }

    SECTION("phase-twisted A passes") {
        auto res = montgomery_check(a, b, 1.5, 4.0);
        CHECK(res.pass);
        CHECK(res.lhs <= res.rhs + 1e-9);
    }

    SECTION("violated precondition is a domain error") {
        DirichletPolynomial big("big");
        big.add(2, {1.0, 0.0});
        DirichletPolynomial small("small");
        small.add(2, {0.5, 0.0});
        CHECK_THROWS_AS(montgomery_check(big, small, 1.5, 4.0), domain_error);
        CHECK_THROWS_AS(montgomery_check(a, b, 0.9, 4.0), domain_error);
        DirichletPolynomial complex_b("cb");
        complex_b.add(2, {1.0, 0.5});
        CHECK_THROWS_AS(montgomery_check(a, complex_b, 1.5, 4.0), domain_error);
    }
}

TEST_CASE("randomized majorant suite") {
    std::mt19937_64 rng(7151);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        DirichletPolynomial a;
        auto b = random_majorant(rng, 50, 400, a);
        double sigma = 1.0 + 0.999 * unif(rng) + 1e-3;
        double T = 1.0 + 9.0 * unif(rng);
        auto res = montgomery_check(a, b, sigma, T);
        REQUIRE(res.pass);
    }
}

TEST_CASE("mean-value probe") {
    SECTION("empty series when y >= the truncation") {
        auto res = mvt_probe(3, 1, 200000.0, 1.3, 0, 1.0, 0.0, 100000);
        CHECK(res.lhs_truncated == 0.0);
        CHECK(res.n_terms == 0);
    }

    SECTION("generous bound at j = 0") {
        auto res = mvt_probe(3, 1, 150.0, 1.1, 0, 1.0, 0.0, 100000);
        CHECK(res.lhs_truncated >= 0.0);
        CHECK(res.ratio <= 100.0);
    }

    SECTION("lhs is nonincreasing in T and the ratio is stable") {
        double prev = std::numeric_limits<double>::infinity();
        std::vector<double> ratios;
        for (double T : {1.0, 2.0, 4.0}) {
            auto res = mvt_probe(3, 1, 150.0, 1.3, 0, T, 0.0, 100000);
            CHECK(res.lhs_truncated <= prev);
            prev = res.lhs_truncated;
            ratios.push_back(res.ratio);
        }
        double lo = *std::min_element(ratios.begin(), ratios.end());
        double hi = *std::max_element(ratios.begin(), ratios.end());
        CHECK(hi / lo < 25.0);  // lhs tracks 1/T only roughly at these sizes
    }

    SECTION("domain checks") {
        CHECK_THROWS_AS(mvt_probe(3, 1, 100.0, 1.3, 0, 1.0), domain_error);   // y < 16 q^2
        CHECK_THROWS_AS(mvt_probe(3, 1, 150.0, 2.5, 0, 1.0), domain_error);   // sigma
        CHECK_THROWS_AS(mvt_probe(3, 1, 150.0, 1.3, 0, 0.5), domain_error);   // T
        CHECK_THROWS_AS(mvt_probe(6, 3, 700.0, 1.3, 0, 1.0), domain_error);   // gcd
    }
}

TEST_CASE("K/N sandwich records") {
    SECTION("constant polynomial: both zero") {
        DirichletPolynomial f("const");
        f.add(1, {3.0, 0.0});
        auto rec = taylor_log_deriv_KN(f, {2.0, 0.0}, 4);
        CHECK(rec.K == 0.0);
        CHECK(rec.N == 0.0);
    }

    SECTION("single term: K = N = log n") {
        DirichletPolynomial f("mono");
        f.add(7, {2.5, 0.0});
        auto rec = taylor_log_deriv_KN(f, {2.0, 0.0}, 6);
        CHECK(rec.K == Catch::Approx(std::log(7.0)).epsilon(1e-12));
        CHECK(rec.N == Catch::Approx(std::log(7.0)).epsilon(1e-12));
    }

    SECTION("randomized sandwich, k <= 6") {
        std::mt19937_64 rng(99021);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        int done = 0;
        while (done < 200) {
            DirichletPolynomial f("rand");
            int support = 10;
            for (int i = 0; i < support; ++i)
                f.add(1 + rng() % 50,
                      std::polar(0.1 + unif(rng), 2.0 * std::numbers::pi * unif(rng)));
            std::complex<double> s{2.0, 4.0 * unif(rng)};
            if (std::abs(f.eval(s)) < 1e-3) continue;  // stay clear of the floor
            int k = 1 + static_cast<int>(rng() % 6);
            auto rec = taylor_log_deriv_KN(f, s, k);
            double eps = 1e-9 * std::max(1.0, rec.K);
            REQUIRE(rec.N >= rec.K / 2.0 - eps);
            REQUIRE(rec.N <= 2.0 * rec.K + eps);
            ++done;
        }
    }

    SECTION("conditioning and domain errors") {
        DirichletPolynomial f("cancel");
        f.add(1, {1.0, 0.0});
        f.add(2, {-4.0, 0.0});  // F(2) = 1 - 4/4 = 0
        CHECK_THROWS_AS(taylor_log_deriv_KN(f, {2.0, 0.0}, 3), conditioning_error);
        DirichletPolynomial g("ok");
        g.add(2, {1.0, 0.0});
        CHECK_THROWS_AS(taylor_log_deriv_KN(g, {2.0, 0.0}, 0), domain_error);
    }
}
