#pragma once

// Critical angles between optimality regimes: roots of
//   g(eta) = sum_{t>=1} phi_t(eta) (A_t(psi_1) - A_t(psi_2)),
// located by sign scan + TOMS748 bracketing refinement, plus the first zero
// eta_0 of phi_1 and the negativity window (all phi_{t>=1} <= 0 on (0, eta_0)).

#include "rotosense/angular.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rotosense {

struct CriticalAngle {
    double eta_star = 0.0;
    std::vector<double> left_profile, right_profile; // A_t, t = 1..floor(j)
    std::pair<double, double> bracket{0.0, 0.0};     // refined, width < 1e-10
    double residual = 0.0;                           // |g(eta_star)|
};

namespace detail {

template <class F> inline std::pair<double, double> refine_root(F&& g, double lo, double hi)
{
    const double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) return {lo, lo};
    if (ghi == 0.0) return {hi, hi};
    if ((glo < 0) == (ghi < 0))
        throw std::invalid_argument("refine_root: no sign change over bracket");
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(
        g, lo, hi, glo, ghi,
        [](double a, double b) { return std::fabs(b - a) < 1e-10; }, iters);
    return r;
}

// All roots of f in (0, upper], scanned with the given step; stops after
// max_count roots when max_count > 0.
template <class F>
inline std::vector<double> positive_zeros_of(F&& f, double step, double upper, int max_count = 0)
{
    std::vector<double> zeros;
    double x_prev = 1e-3 * step;
    double f_prev = f(x_prev);
    for (double x = step; x <= upper + 0.5 * step; x += step) {
        const double fx = f(x);
        if ((f_prev < 0 && fx >= 0) || (f_prev > 0 && fx <= 0)) {
            const auto b = refine_root(f, x_prev, x);
            zeros.push_back(0.5 * (b.first + b.second));
            if (max_count > 0 && (int)zeros.size() >= max_count) break;
        }
        x_prev = x;
        f_prev = fx;
    }
    return zeros;
}

} // namespace detail

/// Root of sum_t phi_t (A_t^1 - A_t^2) inside the bracket. The profiles are
/// the measures vectors (t = 1..floor(j)); a bracket without sign change is
/// an error.
inline CriticalAngle critical_angle(const AngularTable& table, const std::vector<double>& a1,
                                    const std::vector<double>& a2,
                                    std::pair<double, double> bracket)
{
    const size_t fl = (size_t)table.max_t();
    if (a1.size() != fl || a2.size() != fl)
        throw std::invalid_argument("critical_angle: profiles must have floor(j) measures");

    auto g = [&](double eta) {
        const auto phi = table.phi_all(eta);
        double v = 0.0;
        for (size_t t = 1; t <= fl; ++t) v += phi[t] * (a1[t - 1] - a2[t - 1]);
        return v;
    };

    const auto b = detail::refine_root(g, bracket.first, bracket.second);
    CriticalAngle out;
    out.eta_star      = 0.5 * (b.first + b.second);
    out.left_profile  = a1;
    out.right_profile = a2;
    out.bracket       = b;
    out.residual      = std::fabs(g(out.eta_star));
    if (out.residual >= 1e-9)
        throw std::runtime_error("critical_angle: residual above 1e-9 at located root");
    return out;
}

/// Roots of a weighted combination sum_{t>=1} w_t phi_t on (0, upper].
inline std::vector<double> phi_combination_zeros(const AngularTable& table,
                                                 const std::vector<double>& weights,
                                                 double upper = 2.0 * M_PI, int max_count = 0)
{
    const size_t fl = (size_t)table.max_t();
    if (weights.size() != fl)
        throw std::invalid_argument("phi_combination_zeros: need floor(j) weights");
    auto g = [&](double eta) {
        const auto phi = table.phi_all(eta);
        double v = 0.0;
        for (size_t t = 1; t <= fl; ++t) v += phi[t] * weights[t - 1];
        return v;
    };
    const double step = M_PI / (20.0 * table.spin().two_j());
    return detail::positive_zeros_of(g, step, upper, max_count);
}

/// Smallest eta > 0 with phi_1(eta) = 0; sign scan with step pi/(40 j),
/// then bracketing refinement to width 1e-10.
inline double first_zero_phi1(const AngularTable& table)
{
    if (table.max_t() < 1) throw std::invalid_argument("first_zero_phi1: requires j >= 1");
    auto f = [&](double eta) { return table.phi(1, eta); };
    const double step = M_PI / (20.0 * table.spin().two_j()); // = pi/(40 j)
    const auto zeros  = detail::positive_zeros_of(f, step, 2.0 * M_PI, 1);
    if (zeros.empty()) throw std::runtime_error("first_zero_phi1: no sign change found");
    return zeros.front();
}

/// True iff every phi_t, t >= 1, is <= 0 on a dense 1000-point grid over
/// (0, eta_0).
inline bool negativity_window(const AngularTable& table)
{
    if (table.max_t() < 1) return true;
    const double eta0 = first_zero_phi1(table);
    constexpr int kPoints = 1000;
    for (int i = 1; i <= kPoints; ++i) {
        const double eta = eta0 * i / (kPoints + 1);
        const auto phi   = table.phi_all(eta);
        for (int t = 1; t <= table.max_t(); ++t)
            if (phi[t] > 1e-14) return false;
    }
    return true;
}

} // namespace rotosense
