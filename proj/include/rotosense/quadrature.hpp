#pragma once

// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta),
// uniform (trapezoidal) in phi. Exact for spherical polynomials of degree
// <= 2N once n_theta >= N+1 and n_phi >= 2N+1.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rotosense {

class QuadratureGrid {
public:
    QuadratureGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi)
    {
        if (n_theta < 1 || n_phi < 1)
            throw std::invalid_argument("QuadratureGrid: node counts must be positive");
        gauss_legendre(n_theta_, x_, w_);
    }

    /// Default sizing for spin j: one node above the degree-2N exactness bound.
    static QuadratureGrid for_spin_two_j(int two_j)
    {
        return QuadratureGrid(two_j + 2, 2 * two_j + 2);
    }

    /// Smallest grid exact for integrands of polynomial degree <= deg.
    static QuadratureGrid for_degree(int deg)
    {
        return QuadratureGrid(deg / 2 + 1, deg + 1);
    }

    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }

    bool exact_for_degree(int deg) const
    {
        return 2 * n_theta_ - 1 >= deg && n_phi_ >= deg + 1;
    }

    const std::vector<double>& nodes_cos_theta() const { return x_; }
    const std::vector<double>& weights_cos_theta() const { return w_; }

    /// (1/4pi) * integral of f(cos_theta, phi) over the sphere.
    template <class F> double average(F&& f) const
    {
        double total = 0.0;
        for (int i = 0; i < n_theta_; ++i) {
            double ring = 0.0;
            for (int p = 0; p < n_phi_; ++p) ring += f(x_[i], 2.0 * M_PI * p / n_phi_);
            total += 0.5 * w_[i] * ring / n_phi_;
        }
        return total;
    }

private:
    // Nodes/weights by Newton iteration on P_n; accurate to ~1e-15.
    static void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
    {
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            // Chebyshev-like initial guess for the i-th root
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }

    int n_theta_, n_phi_;
    std::vector<double> x_, w_;
};

} // namespace rotosense
