#pragma once

// The angular functions phi_t^{(j)}(eta) of the average-fidelity expansion
//   F(eta) = phi_0(eta) + sum_t phi_t(eta) A_t,
// assembled from exact rational coefficients
//   a_{t,k} = 4^t(-1)^{k+t} C(2N,2k)C(k,t)C(2N-2t,N-t) / ((2k+1)C(2N,N)),
//   b_{t,k} = -t/(t+1)(a_{t,k}+a_{N-t,k})(1-delta_{jt}/2)  (t>=1),
//   b_{0,k} = C(N,k)/(2k+1),
// and evaluated as sum_k b_{t,k} sin^{2k}(eta/2) cos^{2(N-k)}(eta/2).
//
// The b_{t,k} alternate in sign and grow like C(4j,2j); at j = 26 the largest
// terms exceed the O(1) result by ~15 decimal digits, so the accumulation is
// done in 50-digit floats and rounded to double once at the end.

#include "rotosense/rational.hpp"
#include "rotosense/spin.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace rotosense {

class AngularTable {
public:
    explicit AngularTable(Spin j) : j_(j)
    {
        if (j.two_j() < 1) throw std::invalid_argument("AngularTable: requires j >= 1/2");
        const int N  = j.two_j();
        const int fl = j.floor_j();
        b_.resize(fl + 1);
        bf_.resize(fl + 1);
        for (int t = 0; t <= fl; ++t) {
            b_[t].resize(N + 1);
            bf_[t].resize(N + 1);
            for (int k = 0; k <= N; ++k) {
                if (t == 0) {
                    b_[t][k] = binomial_exact(N, k) / (2 * k + 1);
                } else {
                    Rational sum = coeff_a(j, t, k) + coeff_a(j, N - t, k);
                    if (2 * t == N) sum /= 2; // t = j (integer j only)
                    b_[t][k] = -Rational(t, t + 1) * sum;
                }
                bf_[t][k] = to_bigfloat(b_[t][k]);
            }
        }
    }

    /// a_{t,k}^{(j)}, exact; zero for t > k.
    static Rational coeff_a(Spin j, int t, int k)
    {
        const int N = j.two_j();
        if (t < 0 || t > N || k < 0 || k > N)
            throw std::domain_error("coeff_a: t, k must lie in 0..2j");
        if (t > k) return Rational(0);
        Rational r(binomial_int(2 * N, 2 * k) * binomial_int(k, t) *
                       binomial_int(2 * N - 2 * t, N - t),
                   BigInt(2 * k + 1) * binomial_int(2 * N, N));
        r *= Rational(BigInt(1) << (2 * t)); // 4^t
        if ((k + t) % 2 != 0) r = -r;
        return r;
    }

    Spin spin() const { return j_; }
    int max_t() const { return j_.floor_j(); }

    const Rational& b(int t, int k) const
    {
        if (t < 0 || t > max_t() || k < 0 || k > j_.two_j())
            throw std::domain_error("AngularTable::b: index out of range");
        return b_[t][k];
    }

    /// phi_t^{(j)}(eta), t = 0..floor(j).
    double phi(int t, double eta) const
    {
        if (t < 0 || t > max_t()) throw std::domain_error("AngularTable::phi: t out of range");
        const auto pw = powers(eta);
        return eval(t, pw);
    }

    /// All phi_t(eta) for t = 0..floor(j) in one pass.
    std::vector<double> phi_all(double eta) const
    {
        const auto pw = powers(eta);
        std::vector<double> out(max_t() + 1);
        for (int t = 0; t <= max_t(); ++t) out[t] = eval(t, pw);
        return out;
    }

    /// CSV export: t,k,numerator,denominator (all rows, zeros included).
    void write_csv(std::ostream& os) const
    {
        os << "t,k,numerator,denominator\n";
        for (int t = 0; t <= max_t(); ++t)
            for (int k = 0; k <= j_.two_j(); ++k)
                os << t << ',' << k << ',' << boost::multiprecision::numerator(b_[t][k]) << ','
                   << boost::multiprecision::denominator(b_[t][k]) << '\n';
    }

private:
    struct Powers {
        std::vector<BigFloat> s; // s^k
        std::vector<BigFloat> c; // c^k
    };

    Powers powers(double eta) const
    {
        const int N     = j_.two_j();
        const double sd = std::sin(0.5 * eta);
        const BigFloat s = BigFloat(sd) * sd;
        const BigFloat c = 1 - s;
        Powers pw;
        pw.s.resize(N + 1);
        pw.c.resize(N + 1);
        pw.s[0] = 1;
        pw.c[0] = 1;
        for (int k = 1; k <= N; ++k) {
            pw.s[k] = pw.s[k - 1] * s;
            pw.c[k] = pw.c[k - 1] * c;
        }
        return pw;
    }

    double eval(int t, const Powers& pw) const
    {
        const int N = j_.two_j();
        BigFloat acc = 0;
        for (int k = t; k <= N; ++k) acc += bf_[t][k] * pw.s[k] * pw.c[N - k];
        return to_double(acc);
    }

    Spin j_;
    std::vector<std::vector<Rational>> b_;
    std::vector<std::vector<BigFloat>> bf_;
};

/// Shared per-j table; built once, never evicted.
inline const AngularTable& angular_table(Spin j)
{
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<const AngularTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[j.two_j()];
    if (!slot) slot = std::make_unique<const AngularTable>(j);
    return *slot;
}

} // namespace rotosense
