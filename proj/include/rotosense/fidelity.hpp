#pragma once

// The rotation-averaged fidelity F(eta) = (1/4pi) \oint |<psi|R_n(eta)|psi>|^2 dn
// by three independent routes:
//   1. closed form            F = phi_0 + sum_t phi_t A_t          (AngularTable)
//   2. Dicke linear system    phi_t from Dicke-state fidelities
//   3. direct quadrature      product integration over the sphere
// plus the generalized fidelity with f(J.n) in the exponent, the direction-
// averaged variance of J.n, and the exact combinatorial identity used to
// derive the closed form.

#include "rotosense/angular.hpp"
#include "rotosense/quadrature.hpp"
#include "rotosense/rational.hpp"
#include "rotosense/rotation.hpp"
#include "rotosense/specfun.hpp"
#include "rotosense/spin.hpp"
#include "rotosense/state.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rotosense {

/// F from the profile and precomputed phi values (single accumulation path,
/// shared by the closed-form route and the optimizer records).
inline double fidelity_from_measures(const std::vector<double>& phi_values,
                                     const std::vector<double>& measures)
{
    double f = phi_values[0];
    for (size_t t = 1; t < phi_values.size(); ++t) f += phi_values[t] * measures[t - 1];
    return f;
}

/// Closed-form average fidelity F(eta) = phi_0(eta) + sum_t phi_t(eta) A_t.
inline double average_fidelity(const AngularTable& table, const SpinState& state, double eta)
{
    const AnticoherenceProfile p = profile(state);
    return fidelity_from_measures(table.phi_all(eta), p.measures);
}

inline double average_fidelity(const SpinState& state, double eta)
{
    return average_fidelity(angular_table(state.spin()), state, eta);
}

namespace detail {

// <j m; l 0 | j m> for l = 0..2j, cached per (two_j, two_m).
inline const std::vector<double>& dicke_cg_row(Spin j, int two_m)
{
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& row = cache[{j.two_j(), two_m}];
    if (row.empty()) {
        row.resize(j.two_j() + 1);
        for (int l = 0; l <= j.two_j(); ++l)
            row[l] = clebsch_gordan(j.two_j(), two_m, 2 * l, 0, j.two_j(), two_m);
    }
    return row;
}

} // namespace detail

/// Average fidelity of the Dicke state |j, m>:
/// (2j+1)^{-2} sum_l (2l+1) (<j m; l 0|j m> chi_l^j(eta))^2.
inline double dicke_average_fidelity(Spin j, int two_m, double eta)
{
    if (std::abs(two_m) > j.two_j() || (two_m + j.two_j()) % 2 != 0)
        throw std::invalid_argument("dicke_average_fidelity: invalid m for given j");
    const auto& cg = detail::dicke_cg_row(j, two_m);
    double total = 0.0;
    for (int l = 0; l <= j.two_j(); ++l) {
        const double term = cg[l] * generalized_character(j, l, eta);
        total += (2.0 * l + 1.0) * term * term;
    }
    const double dim = j.dimension();
    return total / (dim * dim);
}

namespace detail {

// Exact inverse of the (floor(j)+1)-square system matrix
// rows m = j, j-1, ..., j-floor(j); columns [1 | A_t(|j,m>)].
// Inverted once per j in rational arithmetic (Gauss-Jordan), then rounded.
inline const std::vector<std::vector<double>>& dicke_system_inverse(Spin j)
{
    static std::mutex mtx;
    static std::map<int, std::vector<std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& inv = cache[j.two_j()];
    if (!inv.empty()) return inv;

    const int n = j.floor_j() + 1;
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n, Rational(0)));
    for (int i = 0; i < n; ++i) {
        const int two_m = j.two_j() - 2 * i;
        m[i][0] = 1;
        for (int t = 1; t < n; ++t) m[i][t] = dicke_measure_exact(j, two_m, t);
        m[i][n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (m[r][col] != 0) { piv = r; break; }
        if (piv < 0) {
            // Genuinely singular: report a double-precision condition estimate.
            Eigen::MatrixXd md(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    md(r, c) = (c == 0) ? 1.0 : dicke_measure(j, j.two_j() - 2 * r, c);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(md);
            std::ostringstream os;
            os << "phi_via_dicke: singular Dicke system for j = " << j.str()
               << " (sigma_max/sigma_min = "
               << svd.singularValues()(0) / svd.singularValues()(n - 1) << ")";
            throw std::runtime_error(os.str());
        }
        std::swap(m[col], m[piv]);
        const Rational d = m[col][col];
        for (int c = 0; c < 2 * n; ++c) m[col][c] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (int c = 0; c < 2 * n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    inv.assign(n, std::vector<double>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv[r][c] = to_double(m[r][n + c]);
    return inv;
}

} // namespace detail

/// phi_t(eta), t = 0..floor(j), obtained by solving the linear system built
/// from Dicke-state fidelities and Dicke-state anticoherence measures.
inline std::vector<double> phi_via_dicke(Spin j, double eta)
{
    if (j.two_j() < 1) throw std::invalid_argument("phi_via_dicke: requires j >= 1/2");
    const auto& inv = detail::dicke_system_inverse(j);
    const int n     = (int)inv.size();
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = dicke_average_fidelity(j, j.two_j() - 2 * i, eta);
    std::vector<double> out(n, 0.0);
    for (int t = 0; t < n; ++t)
        for (int i = 0; i < n; ++i) out[t] += inv[t][i] * rhs[i];
    return out;
}

namespace detail {

// <psi| exp(-i eta f(J.n)) |psi> at one grid node, via
// v = d(theta)^T (e^{i phi m} . psi) and phases on the Jz eigenvalues.
class SphereOverlap {
public:
    SphereOverlap(const SpinState& state, const QuadratureGrid& grid)
        : state_(state), dim_(state.spin().dimension())
    {
        const int N = state_.spin().two_j();
        m_.resize(dim_);
        for (int i = 0; i < dim_; ++i) m_[i] = 0.5 * (N - 2 * i);
        d_.reserve(grid.n_theta());
        for (double x : grid.nodes_cos_theta())
            d_.push_back(wigner_small_d(state_.spin(), std::acos(x)));
    }

    std::complex<double> value(int itheta, double phi, const std::vector<double>& exp_phase_arg) const
    {
        const std::complex<double> I(0.0, 1.0);
        Eigen::VectorXcd w(dim_);
        for (int i = 0; i < dim_; ++i) w(i) = std::exp(I * phi * m_[i]) * state_.amps()(i);
        const Eigen::VectorXcd v = d_[itheta].transpose() * w;
        std::complex<double> amp(0.0, 0.0);
        for (int i = 0; i < dim_; ++i)
            amp += std::complex<double>(std::cos(exp_phase_arg[i]), -std::sin(exp_phase_arg[i])) *
                   std::norm(v(i));
        return amp;
    }

    const std::vector<double>& m() const { return m_; }

private:
    SpinState state_;
    int dim_;
    std::vector<double> m_;
    std::vector<Eigen::MatrixXd> d_;
};

} // namespace detail

/// Direct spherical average of |<psi|R_n(eta)|psi>|^2 on the given grid.
/// The integrand is a spherical polynomial of degree 2N; undersized grids
/// are rejected.
inline double quadrature_fidelity(const SpinState& state, double eta, const QuadratureGrid& grid)
{
    const int N = state.spin().two_j();
    if (!grid.exact_for_degree(2 * N))
        throw std::invalid_argument("quadrature_fidelity: grid too small for degree 2N integrand");

    detail::SphereOverlap ov(state, grid);
    std::vector<double> args(state.spin().dimension());
    for (size_t i = 0; i < args.size(); ++i) args[i] = eta * ov.m()[i];

    const auto& ws = grid.weights_cos_theta();
    double total = 0.0;
    for (int it = 0; it < grid.n_theta(); ++it) {
        double ring = 0.0;
        for (int p = 0; p < grid.n_phi(); ++p)
            ring += std::norm(ov.value(it, 2.0 * M_PI * p / grid.n_phi(), args));
        total += 0.5 * ws[it] * ring / grid.n_phi();
    }
    return total;
}

inline double quadrature_fidelity(const SpinState& state, double eta)
{
    return quadrature_fidelity(state, eta, QuadratureGrid::for_spin_two_j(state.spin().two_j()));
}

enum class AxisFunction { identity, square };

/// Generalized average fidelity (1/4pi) \oint |<psi|e^{-i eta f(J.n)}|psi>|^{2p} dn
/// with f the identity (plain rotations) or the square (spin squeezing).
/// The grid is auto-sized for the degree-2Np integrand.
inline double generalized_quadrature_fidelity(const SpinState& state, double eta, int p,
                                              AxisFunction f)
{
    if (p < 1) throw std::invalid_argument("generalized_quadrature_fidelity: p must be >= 1");
    const int N = state.spin().two_j();
    const QuadratureGrid grid = QuadratureGrid::for_degree(2 * N * p);

    detail::SphereOverlap ov(state, grid);
    std::vector<double> args(state.spin().dimension());
    for (size_t i = 0; i < args.size(); ++i) {
        const double m = ov.m()[i];
        switch (f) {
        case AxisFunction::identity: args[i] = eta * m; break;
        case AxisFunction::square: args[i] = eta * m * m; break;
        default: throw std::invalid_argument("generalized_quadrature_fidelity: unsupported f");
        }
    }

    const auto& ws = grid.weights_cos_theta();
    double total = 0.0;
    for (int it = 0; it < grid.n_theta(); ++it) {
        double ring = 0.0;
        for (int ip = 0; ip < grid.n_phi(); ++ip) {
            const double a2 = std::norm(ov.value(it, 2.0 * M_PI * ip / grid.n_phi(), args));
            double v = a2;
            for (int q = 1; q < p; ++q) v *= a2;
            ring += v;
        }
        total += 0.5 * ws[it] * ring / grid.n_phi();
    }
    return total;
}

namespace detail {

inline std::array<Eigen::MatrixXcd, 3> angular_momentum_matrices(Spin j)
{
    const int dim = j.dimension();
    const int N   = j.two_j();
    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(dim, dim); // J+
    for (int i = 1; i < dim; ++i) {
        const double m = 0.5 * (N - 2 * i); // column m = j - i
        const double jv = 0.5 * N;
        jp(i - 1, i) = std::sqrt((jv - m) * (jv + m + 1.0));
    }
    const Eigen::MatrixXcd jm = jp.adjoint();
    std::array<Eigen::MatrixXcd, 3> out;
    out[0] = 0.5 * (jp + jm);                            // Jx
    out[1] = std::complex<double>(0, -0.5) * (jp - jm);  // Jy
    out[2] = Eigen::MatrixXcd::Zero(dim, dim);           // Jz
    for (int i = 0; i < dim; ++i) out[2](i, i) = 0.5 * (N - 2 * i);
    return out;
}

} // namespace detail

/// Direction-averaged variance V = (1/4pi) \oint (<Jn^2> - <Jn>^2) dn,
/// computed by quadrature (the integrand has degree 2).
inline double averaged_variance(const SpinState& state)
{
    const auto J = detail::angular_momentum_matrices(state.spin());
    const QuadratureGrid grid = QuadratureGrid::for_degree(2);
    const Eigen::VectorXcd& a = state.amps();
    return grid.average([&](double x, double phi) {
        const double st = std::sqrt(std::max(0.0, 1.0 - x * x));
        const Eigen::Vector3d n(st * std::cos(phi), st * std::sin(phi), x);
        const Eigen::MatrixXcd Jn = n.x() * J[0] + n.y() * J[1] + n.z() * J[2];
        const Eigen::VectorXcd Ja = Jn * a;
        const double mean = std::real(a.dot(Ja)); // <psi|Jn|psi>
        return Ja.squaredNorm() - mean * mean;
    });
}

/// Exact verification of
/// sum_{s,q} 2^s C(k,s) C(k-s,q) C(2N-2k, N-s-2q) = C(2N,N).
inline bool combinatorial_identity_check(int N, int k)
{
    if (N < 0 || k < 0 || k > N)
        throw std::invalid_argument("combinatorial_identity_check: need 0 <= k <= N");
    BigInt sum = 0;
    for (int s = 0; s <= k; ++s)
        for (int q = 0; q <= k - s; ++q)
            sum += (BigInt(1) << s) * binomial_int(k, s) * binomial_int(k - s, q) *
                   binomial_int(2 * N - 2 * k, N - s - 2 * q);
    return sum == binomial_int(2 * N, N);
}

} // namespace rotosense
