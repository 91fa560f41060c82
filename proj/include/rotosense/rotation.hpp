#pragma once

// Spin-j rotation matrices in the Dicke basis. Row/column index i
// corresponds to m = j - i (descending m), matching SpinState ordering.

#include "rotosense/spin.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rotosense {

/// Wigner small-d matrix d^j_{m'm}(theta) = <j m'|exp(-i theta Jy)|j m>,
/// real orthogonal, via the standard factorial sum.
inline Eigen::MatrixXd wigner_small_d(Spin j, double theta)
{
    const int N   = j.two_j();
    const int dim = j.dimension();
    const double ch = std::cos(0.5 * theta);
    const double sh = std::sin(0.5 * theta);

    // factorials up to N fit comfortably in double for any j handled here
    std::vector<double> fact(N + 1);
    fact[0] = 1.0;
    for (int i = 1; i <= N; ++i) fact[i] = fact[i - 1] * i;

    Eigen::MatrixXd d(dim, dim);
    for (int ip = 0; ip < dim; ++ip) {
        const int jp_plus  = N - ip; // j + m'
        const int jp_minus = ip;     // j - m'
        for (int im = 0; im < dim; ++im) {
            const int jm_plus  = N - im; // j + m
            const int jm_minus = im;     // j - m
            const double pre =
                std::sqrt(fact[jp_plus] * fact[jp_minus] * fact[jm_plus] * fact[jm_minus]);
            const int mp_minus_m = im - ip; // m' - m
            double sum = 0.0;
            for (int s = 0; s <= N; ++s) {
                const int a1 = jm_plus - s;      // j + m - s
                const int a3 = mp_minus_m + s;   // m' - m + s
                const int a4 = jp_minus - s;     // j - m' - s
                if (a1 < 0 || a3 < 0 || a4 < 0) continue;
                const double term = std::pow(ch, a1 + a4) * std::pow(sh, s + a3) /
                                    (fact[a1] * fact[s] * fact[a3] * fact[a4]);
                sum += (a3 % 2 == 0) ? term : -term;
            }
            d(ip, im) = pre * sum;
        }
    }
    return d;
}

/// Axis-angle rotation exp(-i eta J.n), built as D diag(e^{-i eta m}) D^dagger
/// with D = exp(-i phi Jz) exp(-i theta Jy) and (theta, phi) the polar angles
/// of the axis. Unitary by construction.
inline Eigen::MatrixXcd rotation_matrix(Spin j, double eta, const Eigen::Vector3d& axis)
{
    if (std::abs(axis.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("rotation_matrix: axis must be a unit vector");

    const int dim = j.dimension();
    const int N   = j.two_j();
    const double theta = std::atan2(std::hypot(axis.x(), axis.y()), axis.z());
    const double phi   = std::atan2(axis.y(), axis.x());

    const Eigen::MatrixXd d = wigner_small_d(j, theta);

    Eigen::VectorXcd zphase(dim), eig(dim);
    const std::complex<double> I(0.0, 1.0);
    for (int i = 0; i < dim; ++i) {
        const double m = 0.5 * (N - 2 * i); // m = j - i
        zphase(i) = std::exp(-I * phi * m);
        eig(i)    = std::exp(-I * eta * m);
    }

    // D = diag(zphase) * d
    const Eigen::MatrixXcd D = zphase.asDiagonal() * d.cast<std::complex<double>>();
    return D * eig.asDiagonal() * D.adjoint();
}

} // namespace rotosense
