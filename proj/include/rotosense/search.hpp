#pragma once

// Multi-start derivative-free minimization of the average fidelity over
// states at fixed eta. The objective is the closed-form expansion evaluated
// on 2(N+1) real parameters (re/im of the Dicke amplitudes), projected to
// the unit sphere after every simplex proposal. Optima are compared by
// anticoherence profile, never by amplitudes: the optimum is a manifold
// (rotations + global phase).

#include "rotosense/angular.hpp"
#include "rotosense/critical.hpp"
#include "rotosense/fidelity.hpp"
#include "rotosense/state.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rotosense {

struct SearchConfig {
    int restarts             = 64;
    int max_iterations       = 2000; // simplex iterations per restart
    double function_tolerance = 1e-12;
    double simplex_scale     = 0.3;
    std::uint64_t seed       = 0;
    int threads              = 0; // 0 = hardware concurrency
    bool warm_start          = true;

    void validate() const
    {
        if (restarts < 1) throw std::invalid_argument("SearchConfig: restarts must be >= 1");
        if (function_tolerance <= 0)
            throw std::invalid_argument("SearchConfig: tolerance must be > 0");
    }
};

struct SweepRecord {
    double eta;
    double best_value;
    SpinState best_state;
    AnticoherenceProfile profile;
    int restarts_hitting_best;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Per-restart seed derived from (seed, eta-index, restart-index).
inline std::uint64_t restart_seed(std::uint64_t seed, int eta_index, int restart)
{
    std::uint64_t h = splitmix64(seed ^ 0x8BADF00Dull);
    h = splitmix64(h ^ (0x9E3779B97F4A7C15ull * (std::uint64_t)(eta_index + 1)));
    h = splitmix64(h ^ (0xC2B2AE3D27D4EB4Full * (std::uint64_t)(restart + 1)));
    return h;
}

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
};

// Classic simplex with projection to the unit sphere after each proposal.
template <class F>
inline NelderMeadResult nelder_mead_sphere(F&& f, Eigen::VectorXd x0, double scale, double ftol,
                                           int max_iter)
{
    const int n = (int)x0.size();
    std::vector<Eigen::VectorXd> v(n + 1);
    std::vector<double> fv(n + 1);
    v[0] = x0.normalized();
    fv[0] = f(v[0]);
    for (int i = 1; i <= n; ++i) {
        v[i] = v[0];
        v[i](i - 1) += scale;
        v[i].normalize();
        fv[i] = f(v[i]);
    }

    std::vector<int> idx(n + 1);
    for (int it = 0; it < max_iter; ++it) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = idx[0], second = idx[n - 1], worst = idx[n];
        if (fv[worst] - fv[best] < ftol) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += v[i];
        centroid /= n;

        auto propose = [&](double coeff) {
            Eigen::VectorXd p = centroid + coeff * (centroid - v[worst]);
            const double norm = p.norm();
            if (norm < 1e-12) p = v[best]; else p /= norm;
            return p;
        };

        const Eigen::VectorXd xr = propose(1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const Eigen::VectorXd xe = propose(2.0);
            const double fe = f(xe);
            if (fe < fr) { v[worst] = xe; fv[worst] = fe; }
            else         { v[worst] = xr; fv[worst] = fr; }
        } else if (fr < fv[second]) {
            v[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const Eigen::VectorXd xc = propose(outside ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                v[worst] = xc;
                fv[worst] = fc;
            } else { // shrink toward the best vertex
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    v[i] = (v[best] + 0.5 * (v[i] - v[best])).normalized();
                    fv[i] = f(v[i]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return {v[best], fv[best]};
}

// One restart: simplex rounds at shrinking scales within the iteration budget.
template <class F>
inline NelderMeadResult polish(F&& f, Eigen::VectorXd x0, const SearchConfig& cfg)
{
    const int budgets[3] = {cfg.max_iterations / 2, (3 * cfg.max_iterations) / 10,
                            cfg.max_iterations / 5};
    double scale = cfg.simplex_scale;
    NelderMeadResult r{x0.normalized(), 0.0};
    bool first = true;
    for (int round = 0; round < 3; ++round) {
        NelderMeadResult next =
            nelder_mead_sphere(f, r.x, scale, cfg.function_tolerance, budgets[round]);
        if (!first && next.f > r.f) { scale *= 0.1; continue; }
        if (!first && r.f - next.f < cfg.function_tolerance) { r = next; break; }
        r = next;
        first = false;
        scale *= 0.1;
    }
    return r;
}

inline Eigen::VectorXd random_start(Spin j, std::uint64_t seed)
{
    const SpinState s = SpinState::haar_random(j, seed);
    Eigen::VectorXd x(2 * j.dimension());
    for (int i = 0; i < j.dimension(); ++i) {
        x(2 * i)     = s.amps()(i).real();
        x(2 * i + 1) = s.amps()(i).imag();
    }
    return x;
}

template <class Fn> inline void run_indexed(int count, int threads, Fn&& fn)
{
    int t = threads > 0 ? threads : (int)std::thread::hardware_concurrency();
    t = std::max(1, std::min(t, count));
    if (t == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += t) fn(i);
        });
    for (auto& th : pool) th.join();
}

inline SweepRecord optimize_fidelity(const AngularTable& table, double eta,
                                     const SearchConfig& cfg, bool maximize, int eta_index,
                                     const std::optional<Eigen::VectorXd>& warm)
{
    cfg.validate();
    const Spin j = table.spin();
    if (j.two_j() < 2)
        throw std::invalid_argument("optimize_fidelity: requires j >= 1 (nontrivial profile)");

    const std::vector<double> phiv = table.phi_all(eta);
    const auto evaluator = measure_evaluator(j);
    const int dim = j.dimension();

    auto objective = [&, evaluator](const Eigen::VectorXd& x) {
        Eigen::VectorXcd amps(dim);
        for (int i = 0; i < dim; ++i) amps(i) = std::complex<double>(x(2 * i), x(2 * i + 1));
        double fidelity = phiv[0];
        for (int t = 1; t <= table.max_t(); ++t) {
            const double a = (t + 1.0) / t * (1.0 - evaluator->purity(amps, t));
            fidelity += phiv[t] * a;
        }
        return maximize ? -fidelity : fidelity;
    };

    const int total = cfg.restarts + (warm ? 1 : 0);
    std::vector<NelderMeadResult> results(total);
    run_indexed(total, cfg.threads, [&](int r) {
        const Eigen::VectorXd x0 = (r < cfg.restarts)
                                       ? random_start(j, restart_seed(cfg.seed, eta_index, r))
                                       : *warm;
        results[r] = polish(objective, x0, cfg);
    });

    int best = 0;
    for (int r = 1; r < total; ++r)
        if (results[r].f < results[best].f) best = r;
    int hits = 0;
    for (const auto& r : results)
        if (r.f - results[best].f <= 1e-9) ++hits;

    Eigen::VectorXcd amps(dim);
    for (int i = 0; i < dim; ++i)
        amps(i) = std::complex<double>(results[best].x(2 * i), results[best].x(2 * i + 1));
    SpinState state(j, std::move(amps));
    AnticoherenceProfile prof = profile(state);
    const double value        = fidelity_from_measures(phiv, prof.measures);
    return SweepRecord{eta, value, std::move(state), std::move(prof), hits};
}

} // namespace detail

/// Minimize the average fidelity over states at fixed eta (the optimal
/// rotosensor problem); deterministic per (cfg.seed, restart index).
inline SweepRecord minimize_fidelity(const AngularTable& table, double eta,
                                     const SearchConfig& cfg = {})
{
    return detail::optimize_fidelity(table, eta, cfg, false, 0, std::nullopt);
}

inline SweepRecord minimize_fidelity(Spin j, double eta, const SearchConfig& cfg = {})
{
    return minimize_fidelity(angular_table(j), eta, cfg);
}

/// Maximize instead (coherent states for small eta, cat states near pi).
inline SweepRecord maximize_fidelity(const AngularTable& table, double eta,
                                     const SearchConfig& cfg = {})
{
    return detail::optimize_fidelity(table, eta, cfg, true, 0, std::nullopt);
}

inline SweepRecord maximize_fidelity(Spin j, double eta, const SearchConfig& cfg = {})
{
    return maximize_fidelity(angular_table(j), eta, cfg);
}

/// Per-eta minimization along a strictly increasing grid inside (0, pi].
/// Each point warm-starts from the previous optimum (when enabled) on top of
/// the always-run cold multi-start batch, so a branch is never tracked past
/// its crossing.
inline std::vector<SweepRecord> sweep(const AngularTable& table, const std::vector<double>& grid,
                                      const SearchConfig& cfg = {}, bool maximize = false)
{
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= 0.0 || grid[i] > M_PI + 1e-9)
            throw std::invalid_argument("sweep: grid points must lie in (0, pi]");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument("sweep: grid must be strictly increasing");
    }

    std::vector<SweepRecord> records;
    records.reserve(grid.size());
    std::optional<Eigen::VectorXd> warm;
    for (size_t i = 0; i < grid.size(); ++i) {
        SweepRecord rec =
            detail::optimize_fidelity(table, grid[i], cfg, maximize, (int)i, warm);
        if (cfg.warm_start) {
            Eigen::VectorXd x(2 * table.spin().dimension());
            for (int k = 0; k < table.spin().dimension(); ++k) {
                x(2 * k)     = rec.best_state.amps()(k).real();
                x(2 * k + 1) = rec.best_state.amps()(k).imag();
            }
            warm = std::move(x);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<SweepRecord> sweep(Spin j, const std::vector<double>& grid,
                                      const SearchConfig& cfg = {}, bool maximize = false)
{
    return sweep(angular_table(j), grid, cfg, maximize);
}

struct SweepTransition {
    double lo = 0.0, hi = 0.0; // bracketing grid points
    bool solved = false;
    double eta_star = 0.0;
    std::vector<double> left_profile, right_profile;
};

/// Flag adjacent sweep records whose profiles differ by more than
/// profile_tol in any component and solve the bracketed critical angle
/// when the profile-difference combination changes sign there.
inline std::vector<SweepTransition> detect_transitions(const AngularTable& table,
                                                       const std::vector<SweepRecord>& records,
                                                       double profile_tol = 1e-3)
{
    std::vector<SweepTransition> out;
    for (size_t i = 0; i + 1 < records.size(); ++i) {
        const auto& a = records[i].profile.measures;
        const auto& b = records[i + 1].profile.measures;
        double dmax   = 0.0;
        for (size_t t = 0; t < a.size(); ++t) dmax = std::max(dmax, std::fabs(a[t] - b[t]));
        if (dmax <= profile_tol) continue;
        SweepTransition tr;
        tr.lo            = records[i].eta;
        tr.hi            = records[i + 1].eta;
        tr.left_profile  = a;
        tr.right_profile = b;
        try {
            const CriticalAngle ca = critical_angle(table, a, b, {tr.lo, tr.hi});
            tr.solved   = true;
            tr.eta_star = ca.eta_star;
        } catch (const std::invalid_argument&) {
            tr.solved = false; // profiles drift without a fidelity crossing here
        }
        out.push_back(std::move(tr));
    }
    return out;
}

} // namespace rotosense
