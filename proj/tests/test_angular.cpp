#include "rotosense/angular.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace rotosense;

TEST_CASE("coeff_a")
{
    const Spin half(1);
    // t > k vanishes
    CHECK(AngularTable::coeff_a(Spin(4), 2, 1) == Rational(0));
    // j = 1/2, t = 0, k = 0: C(2,0)C(0,0)C(2,1)/(1*C(2,1)) = 1
    CHECK(AngularTable::coeff_a(half, 0, 0) == Rational(1));
    // j = 1 values computed by hand from the closed form
    CHECK(AngularTable::coeff_a(Spin(2), 1, 1) == Rational(8, 3));
    CHECK(AngularTable::coeff_a(Spin(2), 1, 2) == Rational(-8, 15));
    CHECK_THROWS_AS(AngularTable::coeff_a(Spin(2), 3, 0), std::domain_error);
}

TEST_CASE("b table structure")
{
    SECTION("t = 0 row is C(N,k)/(2k+1)")
    {
        for (int two_j : {1, 2, 5, 9}) {
            const AngularTable table((Spin(two_j)));
            for (int k = 0; k <= two_j; ++k)
                REQUIRE(table.b(0, k) == binomial_exact(two_j, k) / (2 * k + 1));
        }
    }

    SECTION("b_{t,k} = 0 for k < t")
    {
        const AngularTable table((Spin(9)));
        for (int t = 1; t <= table.max_t(); ++t)
            for (int k = 0; k < t; ++k) REQUIRE(table.b(t, k) == Rational(0));
    }

    SECTION("b_{t,t} < 0 for all t >= 1 up to j = 26")
    {
        for (int two_j = 2; two_j <= 52; ++two_j) {
            const AngularTable& table = angular_table(Spin(two_j));
            for (int t = 1; t <= table.max_t(); ++t) REQUIRE(table.b(t, t) < 0);
        }
    }

    SECTION("hand values for j = 1")
    {
        const AngularTable table((Spin(2)));
        CHECK(table.b(1, 1) == Rational(-4, 3));
        CHECK(table.b(1, 2) == Rational(4, 15));
    }
}

TEST_CASE("phi at eta = 0 is the Kronecker delta in t")
{
    for (int two_j : {1, 3, 8, 13}) {
        const AngularTable table((Spin(two_j)));
        CHECK(table.phi(0, 0.0) == 1.0);
        for (int t = 1; t <= table.max_t(); ++t) CHECK(table.phi(t, 0.0) == 0.0);
    }
}

TEST_CASE("closed forms for the smallest spins")
{
    SECTION("j = 1/2: phi_0 = 1 - (2/3) sin^2(eta/2)")
    {
        const AngularTable table((Spin(1)));
        for (int i = 0; i <= 50; ++i) {
            const double eta = 2.0 * M_PI * i / 50.0;
            const double s   = std::sin(0.5 * eta) * std::sin(0.5 * eta);
            REQUIRE(table.phi(0, eta) == Catch::Approx(1.0 - 2.0 * s / 3.0).margin(1e-15));
        }
    }

    SECTION("j = 1: phi_1 = -(2cos eta - 3cos 2eta + 1)/15")
    {
        const AngularTable table((Spin(2)));
        for (int i = 0; i <= 50; ++i) {
            const double eta = 2.0 * M_PI * i / 50.0;
            const double ref = -(2.0 * std::cos(eta) - 3.0 * std::cos(2.0 * eta) + 1.0) / 15.0;
            REQUIRE(table.phi(1, eta) == Catch::Approx(ref).margin(1e-14));
        }
    }

    SECTION("j = 2 trig polynomials at eta = pi")
    {
        const AngularTable table((Spin(4)));
        // phi_2^{(2)}(pi) = -(64/105)(10 cos pi + 5 cos 2pi + 6)
        CHECK(table.phi(2, M_PI) == Catch::Approx(-64.0 / 105.0).margin(1e-13));
        // phi_0^{(2)}(pi) = (128 - 130 + 46 - 10 + 1)/315 = 1/9
        CHECK(table.phi(0, M_PI) == Catch::Approx(1.0 / 9.0).margin(1e-13));
    }
}

TEST_CASE("small-angle law phi_t ~ (b_tt/4^t) eta^{2t}")
{
    const double eta = 1e-3;
    for (int two_j : {2, 4, 7, 10}) {
        const AngularTable table((Spin(two_j)));
        for (int t = 1; t <= table.max_t(); ++t) {
            const double lead = to_double(table.b(t, t)) * std::pow(0.5 * eta, 2 * t);
            REQUIRE(table.phi(t, eta) == Catch::Approx(lead).epsilon(1e-4));
        }
    }
}

TEST_CASE("reflection symmetry and periodicity are inherited from sin^2")
{
    const AngularTable table((Spin(7)));
    for (int i = 1; i < 20; ++i) {
        const double eta = M_PI * i / 20.0;
        for (int t = 0; t <= table.max_t(); ++t) {
            REQUIRE(table.phi(t, eta) == Catch::Approx(table.phi(t, 2.0 * M_PI - eta)).margin(1e-12));
            REQUIRE(table.phi(t, eta) == Catch::Approx(table.phi(t, eta + 2.0 * M_PI)).margin(1e-12));
        }
    }
}

TEST_CASE("csv export carries the exact rationals")
{
    const AngularTable table((Spin(2)));
    std::ostringstream os;
    table.write_csv(os);
    const std::string csv = os.str();
    CHECK(csv.rfind("t,k,numerator,denominator\n", 0) == 0);
    CHECK(csv.find("1,1,-4,3") != std::string::npos);
    CHECK(csv.find("1,2,4,15") != std::string::npos);
    CHECK(csv.find("0,2,1,5") != std::string::npos);
}

TEST_CASE("spin below 1/2 is rejected")
{
    CHECK_THROWS_AS(AngularTable(Spin(0)), std::invalid_argument);
}
