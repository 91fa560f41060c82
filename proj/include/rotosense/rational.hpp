#pragma once

// Exact integer/rational arithmetic used for all coefficient assembly.
// Results are converted to floating point only at final evaluation;
// intermediate binomials reach C(4j, 2j), which overflows 64-bit integers
// already at j = 17.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace rotosense {

using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// 50 decimal digits; enough headroom to evaluate alternating sums whose
// terms exceed the result by ~15 orders of magnitude and still hand back
// a full double.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigFloat& f) { return f.convert_to<double>(); }

inline BigFloat to_bigfloat(const Rational& r)
{
    return BigFloat(boost::multiprecision::numerator(r)) /
           BigFloat(boost::multiprecision::denominator(r));
}

/// n! as an exact integer; memoized, thread safe.
inline const BigInt& factorial_int(int n)
{
    if (n < 0) throw std::invalid_argument("factorial_int: negative argument");
    static std::mutex mtx;
    static std::vector<BigInt> cache{1, 1};
    std::lock_guard<std::mutex> lock(mtx);
    while ((int)cache.size() <= n) cache.push_back(cache.back() * (int)cache.size());
    return cache[n];
}

/// C(n, k) as an exact integer; zero when k < 0 or k > n.
inline BigInt binomial_int(long n, long k)
{
    if (n < 0) throw std::invalid_argument("binomial_int: negative n");
    if (k < 0 || k > n) return BigInt(0);
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i; // always divides exactly
    }
    return r;
}

/// C(n, k) as an exact rational; zero when k < 0 or k > n.
inline Rational binomial_exact(long n, long k) { return Rational(binomial_int(n, k)); }

} // namespace rotosense
