#pragma once

// Spin-j pure states in the Dicke basis, their reduced-state purities and
// anticoherence measures, the SU(2) invariants kappa_r, and the catalog of
// named states. Amplitude ordering is fixed as descending m: amps[0] = c_j,
// amps[N] = c_{-j}; the purity formula below indexes from the top.

#include "rotosense/rational.hpp"
#include "rotosense/rotation.hpp"
#include "rotosense/spin.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotosense {

namespace detail {

/// C(n,k) in double precision from a cached Pascal triangle.
inline double binomial_d(int n, int k)
{
    constexpr int kMaxN = 128;
    struct Table {
        std::vector<double> c;
        Table() : c((kMaxN + 1) * (kMaxN + 2) / 2)
        {
            auto at = [this](int n_, int k_) -> double& { return c[n_ * (n_ + 1) / 2 + k_]; };
            for (int n_ = 0; n_ <= kMaxN; ++n_) {
                at(n_, 0) = at(n_, n_) = 1.0;
                for (int k_ = 1; k_ < n_; ++k_) at(n_, k_) = at(n_ - 1, k_ - 1) + at(n_ - 1, k_);
            }
        }
    };
    static const Table table;
    if (k < 0 || k > n) return 0.0;
    if (n > kMaxN) throw std::invalid_argument("binomial_d: n too large for cached table");
    return table.c[n * (n + 1) / 2 + k];
}

} // namespace detail

class SpinState {
public:
    SpinState(Spin j, Eigen::VectorXcd amps) : j_(j), amps_(std::move(amps))
    {
        if (amps_.size() != j_.dimension())
            throw std::invalid_argument("SpinState: amplitude vector must have 2j+1 entries");
        const double norm = amps_.norm();
        if (norm < 1e-10)
            throw invariant_error("SpinState: vector norm below 1e-10, refusing to normalize");
        amps_ /= norm;
    }

    /// Dicke state |j, m>, m given as two_m.
    static SpinState dicke(Spin j, int two_m)
    {
        if (std::abs(two_m) > j.two_j() || (two_m + j.two_j()) % 2 != 0)
            throw std::invalid_argument("SpinState::dicke: invalid m for given j");
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(j.dimension());
        a((j.two_j() - two_m) / 2) = 1.0;
        return SpinState(j, std::move(a));
    }

    /// Haar-random pure state; deterministic per seed (Box-Muller on the
    /// raw 53-bit output of mt19937_64, independent of libstdc++ details).
    static SpinState haar_random(Spin j, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        auto uniform = [&rng] { return ((rng() >> 11) + 1) * 0x1.0p-53; }; // (0, 1]
        auto gauss_pair = [&](double& a, double& b) {
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double t = 2.0 * M_PI * uniform();
            a = r * std::cos(t);
            b = r * std::sin(t);
        };
        Eigen::VectorXcd a(j.dimension());
        for (int i = 0; i < a.size(); ++i) {
            double re, im;
            gauss_pair(re, im);
            a(i) = std::complex<double>(re, im);
        }
        return SpinState(j, std::move(a));
    }

    Spin spin() const { return j_; }
    const Eigen::VectorXcd& amps() const { return amps_; }
    /// c_m for m = j - i.
    std::complex<double> amp(int i) const { return amps_(i); }

private:
    Spin j_;
    Eigen::VectorXcd amps_;
};

namespace detail {

// Precomputed Gamma_k^{lq} weights of the reduced-purity triple sum,
// one flat array per t.
class MeasureEvaluator {
public:
    explicit MeasureEvaluator(Spin j) : j_(j), gamma_(j.two_j() + 1)
    {
        const int N = j_.two_j();
        for (int t = 0; t <= N; ++t) {
            const int nk = N - t + 1;
            auto& g     = gamma_[t];
            g.resize((t + 1) * (t + 1) * nk);
            const double norm = binomial_d(N, t);
            for (int q = 0; q <= t; ++q)
                for (int l = 0; l <= t; ++l)
                    for (int k = 0; k < nk; ++k)
                        g[(q * (t + 1) + l) * nk + k] =
                            std::sqrt(binomial_d(N - k - q, t - q) * binomial_d(N - k - l, t - l) *
                                      binomial_d(k + q, k) * binomial_d(k + l, k)) /
                            norm;
        }
    }

    double purity(const Eigen::VectorXcd& amps, int t) const
    {
        const int N  = j_.two_j();
        const int nk = N - t + 1;
        const auto& g = gamma_[t];
        double tot = 0.0;
        for (int q = 0; q <= t; ++q) {
            { // diagonal l = q
                std::complex<double> s(0.0, 0.0);
                const double* gk = &g[(q * (t + 1) + q) * nk];
                for (int k = 0; k < nk; ++k) s += std::conj(amps(k + q)) * amps(k + q) * gk[k];
                tot += std::norm(s);
            }
            for (int l = q + 1; l <= t; ++l) { // off-diagonal pairs are conjugates
                std::complex<double> s(0.0, 0.0);
                const double* gk = &g[(q * (t + 1) + l) * nk];
                for (int k = 0; k < nk; ++k) s += std::conj(amps(k + l)) * amps(k + q) * gk[k];
                tot += 2.0 * std::norm(s);
            }
        }
        return tot;
    }

private:
    Spin j_;
    std::vector<std::vector<double>> gamma_;
};

inline std::shared_ptr<const MeasureEvaluator> measure_evaluator(Spin j)
{
    static std::mutex mtx;
    static std::map<int, std::shared_ptr<const MeasureEvaluator>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[j.two_j()];
    if (!slot) slot = std::make_shared<const MeasureEvaluator>(j);
    return slot;
}

} // namespace detail

/// Purity tr[rho_t^2] of the t-qubit reduction of the symmetrized N-qubit
/// state, t = 0..N.
inline double purity(const SpinState& state, int t)
{
    if (t < 0 || t > state.spin().two_j())
        throw std::domain_error("purity: t out of range 0..2j");
    return detail::measure_evaluator(state.spin())->purity(state.amps(), t);
}

/// Anticoherence measure A_t = (t+1)/t (1 - tr[rho_t^2]), t = 1..floor(j).
inline double anticoherence_measure(const SpinState& state, int t)
{
    if (t < 1 || t > state.spin().floor_j())
        throw std::domain_error("anticoherence_measure: t out of range 1..floor(j)");
    return (t + 1.0) / t * (1.0 - purity(state, t));
}

struct AnticoherenceProfile {
    Spin j{0};
    std::vector<double> purities; // t = 0..N
    std::vector<double> measures; // t = 1..floor(j); measures[t-1] = A_t
};

inline AnticoherenceProfile profile(const SpinState& state)
{
    const Spin j = state.spin();
    const auto ev = detail::measure_evaluator(j);
    AnticoherenceProfile p;
    p.j = j;
    p.purities.resize(j.two_j() + 1);
    for (int t = 0; t <= j.two_j(); ++t) p.purities[t] = ev->purity(state.amps(), t);
    p.measures.resize(j.floor_j());
    for (int t = 1; t <= j.floor_j(); ++t)
        p.measures[t - 1] = (t + 1.0) / t * (1.0 - p.purities[t]);
    return p;
}

/// Closed-form anticoherence measure of the Dicke state |j, m>, exact.
inline Rational dicke_measure_exact(Spin j, int two_m, int t)
{
    const int N = j.two_j();
    if (std::abs(two_m) > N || (two_m + N) % 2 != 0)
        throw std::invalid_argument("dicke_measure: invalid m for given j");
    if (t < 1 || t > N) throw std::domain_error("dicke_measure: t out of range 1..2j");
    const int jm  = (N + two_m) / 2; // j + m
    const int jmm = (N - two_m) / 2; // j - m
    BigInt s = 0;
    for (int l = 0; l <= t; ++l) {
        const BigInt b1 = binomial_int(jm, t - l);
        const BigInt b2 = binomial_int(jmm, l);
        s += b1 * b1 * b2 * b2;
    }
    const BigInt c = binomial_int(N, t);
    Rational r(s, c * c);
    return Rational(t + 1, t) * (1 - r);
}

inline double dicke_measure(Spin j, int two_m, int t)
{
    return to_double(dicke_measure_exact(j, two_m, t));
}

struct KappaInvariants {
    std::vector<double> values; // r = 0..N, values[0] = 1
};

/// SU(2) invariants kappa_r from the purities by binomial inversion:
/// kappa_r = sum_{t=0}^r (-1)^{t+r} 2^t C(r,t) tr[rho_t^2].
inline KappaInvariants kappa(const AnticoherenceProfile& p)
{
    const int N = p.j.two_j();
    KappaInvariants k;
    k.values.resize(N + 1);
    for (int r = 0; r <= N; ++r) {
        double acc  = 0.0;
        double pow2 = 1.0;
        for (int t = 0; t <= r; ++t) {
            const double term = pow2 * detail::binomial_d(r, t) * p.purities[t];
            acc += ((t + r) % 2 == 0) ? term : -term;
            pow2 *= 2.0;
        }
        k.values[r] = acc;
    }
    return k;
}

/// Inverse direction: tr[rho_t^2] = 2^{-t} sum_{r=0}^t C(t,r) kappa_r.
inline std::vector<double> purities_from_kappa(const KappaInvariants& k)
{
    const int N = (int)k.values.size() - 1;
    std::vector<double> p(N + 1);
    for (int t = 0; t <= N; ++t) {
        double acc = 0.0;
        for (int r = 0; r <= t; ++r) acc += detail::binomial_d(t, r) * k.values[r];
        p[t] = std::ldexp(acc, -t);
    }
    return p;
}

inline SpinState rotate(const SpinState& state, double eta, const Eigen::Vector3d& axis)
{
    return SpinState(state.spin(), rotation_matrix(state.spin(), eta, axis) * state.amps());
}

/// Catalog of named states. Ids:
///   coherent     |j,j>, any j
///   cat          (|j,-j> + |j,j>)/sqrt(2), any j
///   bipyramid    (|j,-(j-1)> + |j,j-1>)/sqrt(2), j >= 3/2
///   tetrahedron  j = 2
///   octahedron   j = 3 (same as bipyramid there)
///   optimal      best known small-angle rotosensor for
///                j in {1, 3/2, 2, 5/2, 3, 7/2, 4, 9/2, 5};
///                chi parametrizes the j = 9/2 family (default 0).
inline SpinState named_state(std::string_view id, Spin j, double chi = 0.0)
{
    const int N         = j.two_j();
    const double isqrt2 = 1.0 / std::sqrt(2.0);
    auto zeros = [&] { return Eigen::VectorXcd(Eigen::VectorXcd::Zero(N + 1)); };
    auto mismatch = [&](const char* need) {
        return std::invalid_argument("named_state: '" + std::string(id) + "' requires j = " +
                                     std::string(need) + ", got j = " + j.str());
    };

    if (id == "coherent") {
        auto a = zeros();
        a(0)   = 1.0;
        return SpinState(j, std::move(a));
    }
    if (id == "cat") {
        if (N < 1) throw mismatch(">= 1/2");
        auto a = zeros();
        a(0) = a(N) = isqrt2;
        return SpinState(j, std::move(a));
    }
    if (id == "bipyramid") {
        if (N < 3) throw mismatch(">= 3/2");
        auto a = zeros();
        a(1) = a(N - 1) = isqrt2;
        return SpinState(j, std::move(a));
    }
    if (id == "tetrahedron") {
        if (N != 4) throw mismatch("2");
        auto a = zeros();
        a(0) = a(4) = 0.5;
        a(2)        = std::complex<double>(0.0, isqrt2);
        return SpinState(j, std::move(a));
    }
    if (id == "octahedron") {
        if (N != 6) throw mismatch("3");
        return named_state("bipyramid", j);
    }
    if (id == "optimal") {
        switch (N) {
        case 2:
        case 3: return named_state("cat", j);
        case 4: return named_state("tetrahedron", j);
        case 5:
        case 6: return named_state("bipyramid", j);
        case 7: { // anticoherent to order 2, maximal A_3
            auto a = zeros();
            a(1) = a(4) = -std::sqrt(7.0 / 18.0);
            a(7)        = std::sqrt(2.0 / 9.0);
            return SpinState(j, std::move(a));
        }
        case 8: { // anticoherent to order 3
            auto a = zeros();
            a(0) = -std::sqrt(5.0 / 24.0);
            a(4) = -std::sqrt(7.0 / 12.0);
            a(8) = std::sqrt(5.0 / 24.0);
            return SpinState(j, std::move(a));
        }
        case 9: { // anticoherent to order 2, one-parameter family in chi
            auto a = zeros();
            a(1) = -std::sqrt(21.0) / 8.0;
            a(5) = std::polar(std::sqrt(15.0 / 32.0), chi);
            a(9) = std::sqrt(13.0) / 8.0;
            return SpinState(j, std::move(a));
        }
        case 10: { // anticoherent to order 3
            auto a = zeros();
            a(1) = -std::sqrt(5.0 / 16.0);
            a(5) = std::sqrt(3.0 / 8.0);
            a(9) = std::sqrt(5.0 / 16.0);
            return SpinState(j, std::move(a));
        }
        default:
            throw std::invalid_argument("named_state: no catalogued optimal state for j = " + j.str());
        }
    }
    throw std::invalid_argument("named_state: unknown id '" + std::string(id) + "'");
}

} // namespace rotosense
