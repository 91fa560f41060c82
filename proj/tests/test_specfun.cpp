#include "rotosense/specfun.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace rotosense;

TEST_CASE("exact binomials")
{
    CHECK(binomial_int(4, 2) == 6);
    CHECK(binomial_int(10, 0) == 1);
    CHECK(binomial_int(10, 11) == 0);
    CHECK(binomial_int(10, -1) == 0);

    SECTION("against a Pascal-triangle oracle")
    {
        // independent construction by the addition rule
        std::vector<std::vector<BigInt>> pascal(60);
        for (int n = 0; n < 60; ++n) {
            pascal[n].assign(n + 1, 1);
            for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
        }
        CHECK(pascal[52][26] == BigInt("495918532948104"));
        for (int n = 0; n < 60; ++n)
            for (int k = 0; k <= n; ++k) REQUIRE(binomial_int(n, k) == pascal[n][k]);
    }
}

TEST_CASE("clebsch_gordan known values")
{
    // trivial coupling <j m; 0 0 | j m> = 1
    CHECK(clebsch_gordan(5, 3, 0, 0, 5, 3) == Catch::Approx(1.0).margin(1e-15));
    // <1 1; 1 0 | 1 1> = 1/sqrt(2), from the ladder construction of |1 1>
    CHECK(clebsch_gordan(2, 2, 2, 0, 2, 2) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
    // singlet: <1/2 1/2; 1/2 -1/2 | 0 0> = 1/sqrt(2)
    CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
    // selection rules
    CHECK(clebsch_gordan(2, 2, 2, 2, 2, 2) == 0.0); // M != m1+m2
    CHECK(clebsch_gordan(2, 0, 2, 0, 8, 0) == 0.0); // triangle violated
    // parity violation is an error, not a zero
    CHECK_THROWS_AS(clebsch_gordan(2, 1, 2, 1, 2, 2), std::invalid_argument);
}

TEST_CASE("clebsch_gordan columns are orthonormal")
{
    // sum_{m1,m2} C(j1 m1; j2 m2|J M) C(j1 m1; j2 m2|J' M') = delta_JJ' delta_MM'
    for (int two_j1 : {1, 2, 3, 5, 8}) {
        for (int two_j2 : {1, 2, 4, 8}) {
            for (int two_J = std::abs(two_j1 - two_j2); two_J <= two_j1 + two_j2; two_J += 2) {
                for (int two_Jp = std::abs(two_j1 - two_j2); two_Jp <= two_J; two_Jp += 2) {
                    for (int two_M = -two_J; two_M <= two_J; two_M += 2) {
                        for (int two_Mp = -two_Jp; two_Mp <= two_Jp; two_Mp += 2) {
                            double acc = 0.0;
                            for (int two_m1 = -two_j1; two_m1 <= two_j1; two_m1 += 2) {
                                const int two_m2  = two_M - two_m1;
                                const int two_m2p = two_Mp - two_m1;
                                if (two_m2 != two_m2p) continue;
                                if (std::abs(two_m2) > two_j2) continue;
                                acc += clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_J, two_M) *
                                       clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_Jp, two_Mp);
                            }
                            const double expect =
                                (two_J == two_Jp && two_M == two_Mp) ? 1.0 : 0.0;
                            REQUIRE(acc == Catch::Approx(expect).margin(1e-12));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("jacobi_poly basics")
{
    CHECK(jacobi_poly(0, 0.7, -0.3, 0.5) == 1.0);
    // P_1^{(a,b)}(x) = (a-b)/2 + (a+b+2)x/2, by hand
    CHECK(jacobi_poly(1, 0.5, 0.5, 0.3) == Catch::Approx(0.45).margin(1e-15));
    // endpoint identity P_n(1) = C(n+alpha, n) as a Gamma ratio
    const double expect = std::exp(std::lgamma(4 + 1.5) - std::lgamma(1.5) - std::lgamma(5.0));
    CHECK(jacobi_poly(4, 0.5, 0.5, 1.0) == Catch::Approx(expect).epsilon(1e-13));
}

TEST_CASE("jacobi_poly satisfies the recurrence at random points")
{
    std::mt19937_64 rng(42);
    auto uniform = [&] { return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0; };
    for (int trial = 0; trial < 200; ++trial) {
        const double x     = uniform();
        const double alpha = 0.5 + 2.0 * ((rng() >> 11) * 0x1.0p-53);
        const double beta  = 0.5 + 2.0 * ((rng() >> 11) * 0x1.0p-53);
        const int n        = 2 + (int)(rng() % 15);
        const double ab = alpha + beta;
        const double c1 = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0);
        const double c2 = (2.0 * n + ab - 1.0) * (alpha * alpha - beta * beta);
        const double c3 = (2.0 * n + ab - 2.0) * (2.0 * n + ab - 1.0) * (2.0 * n + ab);
        const double c4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + ab);
        const double resid = c1 * jacobi_poly(n, alpha, beta, x) -
                             (c2 + c3 * x) * jacobi_poly(n - 1, alpha, beta, x) +
                             c4 * jacobi_poly(n - 2, alpha, beta, x);
        REQUIRE(std::fabs(resid) < 1e-10);
    }
}

TEST_CASE("character equals the closed sine ratio")
{
    CHECK(character(Spin(3), 0.0) == Catch::Approx(4.0)); // 2j+1 at eta=0
    CHECK(character(Spin(1), M_PI) == Catch::Approx(2.0 * std::cos(M_PI / 2)).margin(1e-14));
    CHECK(character(Spin(2), M_PI / 2) ==
          Catch::Approx(1.0 + 2.0 * std::cos(M_PI / 2)).margin(1e-14));

    for (int two_j = 1; two_j <= 52; ++two_j) {
        for (int i = 1; i < 100; ++i) {
            const double eta = 2.0 * M_PI * i / 100.0;
            const double ref = std::sin((two_j + 1) * eta / 2.0) / std::sin(eta / 2.0);
            REQUIRE(character(Spin(two_j), eta) == Catch::Approx(ref).margin(1e-10));
        }
    }
}

TEST_CASE("generalized characters")
{
    // lambda = 0 collapses to the plain character
    for (double eta : {0.3, 1.1, 2.9})
        CHECK(generalized_character(Spin(4), 0, eta) ==
              Catch::Approx(character(Spin(4), eta)).margin(1e-14));

    // sin^lambda prefactor kills eta = 0 for lambda >= 1
    CHECK(generalized_character(Spin(5), 1, 0.0) == 0.0);
    CHECK(generalized_character(Spin(5), 3, 0.0) == 0.0);

    CHECK_THROWS_AS(generalized_character(Spin(3), 4, 1.0), std::domain_error);

    SECTION("finite-difference oracle for the derivative rule")
    {
        // chi_lambda = pref(lambda) sin^lambda(eta/2) (d/du)^lambda chi(u), u = cos(eta/2);
        // central differences in u on the plain character as the independent check.
        auto chi_of_u = [](Spin j, double u) {
            return detail::character_prefactor(j.two_j()) * jacobi_poly(j.two_j(), 0.5, 0.5, u);
        };
        struct Case { int two_j, lambda; double eta, tol; };
        for (const auto& c : {Case{1, 1, M_PI / 2, 1e-8}, Case{4, 2, 1.2, 1e-6},
                              Case{7, 3, 2.0, 1e-4}}) {
            const Spin j(c.two_j);
            const double u = std::cos(0.5 * c.eta);
            const double h = 1e-4;
            // lambda-th derivative by iterated central differences on a
            // (2 lambda + 1)-point stencil; each pass consumes two points.
            std::vector<double> vals;
            for (int i = -c.lambda; i <= c.lambda; ++i) vals.push_back(chi_of_u(j, u + i * h));
            for (int d = 0; d < c.lambda; ++d) {
                std::vector<double> next;
                for (size_t i = 1; i + 1 < vals.size(); ++i)
                    next.push_back((vals[i + 1] - vals[i - 1]) / (2.0 * h));
                vals = next;
            }
            const double deriv = vals[vals.size() / 2];

            Rational under(j.two_j() + 1);
            under *= Rational(factorial_int(j.two_j() - c.lambda));
            under /= Rational(factorial_int(j.two_j() + c.lambda + 1));
            const double expect =
                std::sqrt(to_double(under)) * std::pow(std::sin(0.5 * c.eta), c.lambda) * deriv;

            REQUIRE(generalized_character(j, c.lambda, c.eta) ==
                    Catch::Approx(expect).margin(c.tol));
        }
    }
}
