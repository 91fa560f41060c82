#pragma once

// Scalar special functions: Clebsch-Gordan coefficients, Jacobi polynomials,
// and the (generalized) characters of the spin-j representations. Angular
// momenta are passed as doubled integers (two_j, two_m) so half-integer
// arguments stay exact.

#include "rotosense/rational.hpp"
#include "rotosense/spin.hpp"

#include <cmath>
#include <stdexcept>

namespace rotosense {

namespace detail {

// (a/2)! for even a >= 0.
inline const BigInt& half_factorial(int two_a)
{
    if (two_a < 0 || two_a % 2 != 0)
        throw std::invalid_argument("half_factorial: argument must be an even non-negative integer");
    return factorial_int(two_a / 2);
}

} // namespace detail

/// Condon-Shortley Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.
/// Racah closed form, evaluated with exact rationals under the square root
/// and rounded once at the end.
inline double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2,
                             int two_J, int two_M)
{
    if ((two_j1 + two_m1) % 2 != 0 || (two_j2 + two_m2) % 2 != 0 || (two_J + two_M) % 2 != 0)
        throw std::invalid_argument("clebsch_gordan: m must differ from j by an integer");
    if (two_j1 < 0 || two_j2 < 0 || two_J < 0)
        throw std::invalid_argument("clebsch_gordan: negative angular momentum");

    if (two_m1 + two_m2 != two_M) return 0.0;
    if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 || std::abs(two_M) > two_J)
        return 0.0;
    if (two_J < std::abs(two_j1 - two_j2) || two_J > two_j1 + two_j2) return 0.0;
    if ((two_j1 + two_j2 + two_J) % 2 != 0) return 0.0;

    using detail::half_factorial;
    // prefactor (2J+1) (j1+j2-J)! (j1-j2+J)! (-j1+j2+J)! / (j1+j2+J+1)!
    //           * (J+M)!(J-M)!(j1-m1)!(j1+m1)!(j2-m2)!(j2+m2)!
    Rational pre(two_J + 1);
    pre *= Rational(half_factorial(two_j1 + two_j2 - two_J));
    pre *= Rational(half_factorial(two_j1 - two_j2 + two_J));
    pre *= Rational(half_factorial(-two_j1 + two_j2 + two_J));
    pre /= Rational(half_factorial(two_j1 + two_j2 + two_J + 2));
    pre *= Rational(half_factorial(two_J + two_M));
    pre *= Rational(half_factorial(two_J - two_M));
    pre *= Rational(half_factorial(two_j1 - two_m1));
    pre *= Rational(half_factorial(two_j1 + two_m1));
    pre *= Rational(half_factorial(two_j2 - two_m2));
    pre *= Rational(half_factorial(two_j2 + two_m2));

    Rational sum(0);
    for (int k = 0;; ++k) {
        const int a1 = (two_j1 + two_j2 - two_J) / 2 - k;
        const int a2 = (two_j1 - two_m1) / 2 - k;
        const int a3 = (two_j2 + two_m2) / 2 - k;
        const int a4 = (two_J - two_j2 + two_m1) / 2 + k;
        const int a5 = (two_J - two_j1 - two_m2) / 2 + k;
        if (a1 < 0 || a2 < 0 || a3 < 0) break;
        if (a4 < 0 || a5 < 0) continue;
        Rational term(1);
        term /= Rational(factorial_int(k));
        term /= Rational(factorial_int(a1));
        term /= Rational(factorial_int(a2));
        term /= Rational(factorial_int(a3));
        term /= Rational(factorial_int(a4));
        term /= Rational(factorial_int(a5));
        sum += (k % 2 == 0) ? term : -term;
    }

    if (sum == 0) return 0.0;
    const Rational square = pre * sum * sum;
    const double mag      = std::sqrt(to_double(square));
    return sum > 0 ? mag : -mag;
}

/// Jacobi polynomial P_n^{(alpha,beta)}(x) via the three-term recurrence.
inline double jacobi_poly(int n, double alpha, double beta, double x)
{
    if (n < 0) throw std::invalid_argument("jacobi_poly: n must be >= 0");
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x;
    for (int m = 2; m <= n; ++m) {
        const double ab = alpha + beta;
        const double c1 = 2.0 * m * (m + ab) * (2.0 * m + ab - 2.0);
        const double c2 = (2.0 * m + ab - 1.0) * (alpha * alpha - beta * beta);
        const double c3 = (2.0 * m + ab - 2.0) * (2.0 * m + ab - 1.0) * (2.0 * m + ab);
        const double c4 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * (2.0 * m + ab);
        const double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

namespace detail {

// (4j+2)!! / (2 (4j+1)!!) = prod_{i=1}^{N+1} 2i/(2i-1) / 2, with N = 2j.
inline double character_prefactor(int N)
{
    double r = 0.5;
    for (int i = 1; i <= N + 1; ++i) r *= (2.0 * i) / (2.0 * i - 1.0);
    return r;
}

} // namespace detail

/// Character chi^j(eta) of the spin-j representation,
/// (4j+2)!!/(2(4j+1)!!) P_{2j}^{(1/2,1/2)}(cos(eta/2)).
/// Equals sin((2j+1)eta/2)/sin(eta/2).
inline double character(Spin j, double eta)
{
    const int N = j.two_j();
    return detail::character_prefactor(N) * jacobi_poly(N, 0.5, 0.5, std::cos(0.5 * eta));
}

/// Generalized character chi_lambda^j(eta) of order lambda, 0 <= lambda <= 2j.
/// The lambda-fold derivative with respect to cos(eta/2) is taken analytically:
/// each derivative of P_n^{(a,b)} raises both indices by one and multiplies by
/// (n+a+b+1)/2, so no numerical differentiation is involved.
inline double generalized_character(Spin j, int lambda, double eta)
{
    const int N = j.two_j();
    if (lambda < 0 || lambda > N)
        throw std::domain_error("generalized_character: lambda out of range 0..2j");

    // sqrt((2j+1)(2j-lambda)!/(2j+lambda+1)!)
    Rational under(N + 1);
    under *= Rational(factorial_int(N - lambda));
    under /= Rational(factorial_int(N + lambda + 1));
    double pref = std::sqrt(to_double(under));

    // lambda-fold derivative of P_N^{(1/2,1/2)}: (N+1+lambda)!/((N+1)! 2^lambda)
    Rational dpre(factorial_int(N + 1 + lambda));
    dpre /= Rational(factorial_int(N + 1));
    dpre /= Rational(BigInt(1) << lambda);
    pref *= to_double(dpre);

    pref *= detail::character_prefactor(N);

    const double s = std::sin(0.5 * eta);
    return pref * std::pow(s, lambda) *
           jacobi_poly(N - lambda, lambda + 0.5, lambda + 0.5, std::cos(0.5 * eta));
}

} // namespace rotosense
