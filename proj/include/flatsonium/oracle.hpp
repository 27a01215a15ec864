#pragma once

// Brute-force reference solver: the circuit Hamiltonian on a uniform phase grid
// with a three-point Laplacian and hard walls. It shares no code with the Fock
// basis path (no Eigen, no matrix functions) so the two can check each other.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "flatsonium/circuit.hpp"
#include "flatsonium/error.hpp"

namespace flatsonium {

struct PhaseGridSpec {
    double half_width = 8.0 * std::numbers::pi;  ///< grid spans [-W, W], radians
    std::size_t n_points = 2001;

    double spacing() const { return 2.0 * half_width / static_cast<double>(n_points - 1); }

    /// Same window, spacing halved.
    PhaseGridSpec refined() const { return {half_width, 2 * n_points - 1}; }
};

namespace oracle_detail {

/// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const { return diag.size(); }

    /// Number of eigenvalues strictly below x (Sturm count from the LDL^T pivots).
    std::size_t count_below(double x) const {
        std::size_t count = 0;
        double d = 1.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            const double coupling = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
            d = diag[i] - x - (i == 0 ? 0.0 : coupling / d);
            if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + std::abs(x) + 1.0);
            if (d < 0.0) ++count;
        }
        return count;
    }

    std::pair<double, double> gershgorin() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            double radius = 0.0;
            if (i > 0) radius += std::abs(off[i - 1]);
            if (i + 1 < diag.size()) radius += std::abs(off[i]);
            lo = std::min(lo, diag[i] - radius);
            hi = std::max(hi, diag[i] + radius);
        }
        return {lo, hi};
    }

    /// j-th eigenvalue (0-based, ascending) by bisection on the Sturm count.
    double eigenvalue(std::size_t j, double lo, double hi) const {
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (count_below(mid) > j)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// Eigenvector for an accurate eigenvalue by inverse iteration with
    /// partially pivoted tridiagonal elimination.
    std::vector<double> eigenvector(double lambda) const {
        const std::size_t n = size();
        const double scale = std::max(std::abs(lambda), 1.0);
        const double shift = lambda + 1e-10 * scale;

        std::vector<double> x(n, 1.0);
        for (int sweep = 0; sweep < 3; ++sweep) {
            // Rows hold up to three nonzeros after pivoting: u0 (diag), u1, u2.
            std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), mult(n, 0.0);
            std::vector<char> swapped(n, 0);
            std::vector<double> b = x;

            double cur0 = diag[0] - shift;
            double cur1 = n > 1 ? off[0] : 0.0;
            double cur2 = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double next_sub = off[i];
                double nxt0 = diag[i + 1] - shift;
                double nxt1 = i + 2 < n ? off[i + 1] : 0.0;
                if (std::abs(next_sub) > std::abs(cur0)) {
                    swapped[i] = 1;
                    std::swap(b[i], b[i + 1]);
                    const double m = cur0 / next_sub;
                    u0[i] = next_sub;
                    u1[i] = nxt0;
                    u2[i] = nxt1;
                    mult[i] = m;
                    cur0 = cur1 - m * nxt0;
                    cur1 = cur2 - m * nxt1;
                    cur2 = 0.0;
                } else {
                    const double pivot = cur0 == 0.0 ? std::numeric_limits<double>::epsilon() * scale : cur0;
                    const double m = next_sub / pivot;
                    u0[i] = pivot;
                    u1[i] = cur1;
                    u2[i] = cur2;
                    mult[i] = m;
                    cur0 = nxt0 - m * cur1;
                    cur1 = nxt1 - m * cur2;
                    cur2 = 0.0;
                }
                b[i + 1] -= mult[i] * b[i];
            }
            u0[n - 1] = cur0 == 0.0 ? std::numeric_limits<double>::epsilon() * scale : cur0;

            for (std::size_t ii = n; ii-- > 0;) {
                double v = b[ii];
                if (ii + 1 < n) v -= u1[ii] * x[ii + 1];
                if (ii + 2 < n) v -= u2[ii] * x[ii + 2];
                x[ii] = v / u0[ii];
            }
            double norm = 0.0;
            for (double v : x) norm += v * v;
            norm = std::sqrt(norm);
            for (double& v : x) v /= norm;
        }
        return x;
    }
};

inline Tridiagonal discretize(const CircuitParams& params, const FluxBias& flux, const PhaseGridSpec& spec) {
    const std::size_t n = spec.n_points;
    const double h = spec.spacing();
    const double kinetic = 4.0 * params.ec_ghz / (h * h);
    const double shift1 = kTwoPi * (flux.phi1_ext + flux.phi2_ext);
    const double shift2 = kTwoPi * flux.phi2_ext;
    const double ej1 = params.ej1_ghz();
    const double ej2 = params.ej2_ghz();

    Tridiagonal t;
    t.diag.resize(n);
    t.off.assign(n - 1, -kinetic);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = -spec.half_width + h * static_cast<double>(i);
        t.diag[i] = 2.0 * kinetic - ej1 * std::cos(phi - shift1) - ej2 * std::cos(phi - shift2) +
                    0.5 * params.el_ghz * phi * phi;
    }
    return t;
}

}  // namespace oracle_detail

inline void validate(const PhaseGridSpec& spec, const CircuitParams& params) {
    if (spec.n_points < 801) throw std::invalid_argument("phase grid needs n_points >= 801");
    const double phi_zpf = std::pow(2.0 * params.ec_ghz / params.el_ghz, 0.25);
    if (!(spec.half_width >= 6.0 * phi_zpf + std::numbers::pi))
        throw std::invalid_argument("phase grid window must be >= 6 phi_zpf + pi");
}

/// Lowest k eigenvalues (GHz) of the phase-grid Hamiltonian, ascending. Throws
/// WindowTooSmallError when the k-th eigenfunction leaks more than 1e-8 of its
/// norm into the outer 5% of the grid on either side.
inline std::vector<double> phase_grid_eigenlevels(const CircuitParams& params, const FluxBias& flux,
                                                  const PhaseGridSpec& spec = {}, std::size_t k = 4) {
    params.validate();
    validate(spec, params);
    if (k < 1 || k > spec.n_points) throw std::invalid_argument("level count out of range");
    if (!flux.finite()) throw std::invalid_argument("flux bias must be finite");

    const auto t = oracle_detail::discretize(params, flux, spec);
    auto [lo, hi] = t.gershgorin();
    std::vector<double> levels(k);
    for (std::size_t j = 0; j < k; ++j) {
        levels[j] = t.eigenvalue(j, j == 0 ? lo : levels[j - 1] - 1e-9 * std::max(1.0, std::abs(levels[j - 1])), hi);
        if (!std::isfinite(levels[j])) throw NumericalError("phase-grid bisection failed", flux.phi2_ext, true);
    }

    const auto psi = t.eigenvector(levels[k - 1]);
    const std::size_t edge = std::max<std::size_t>(1, spec.n_points / 20);
    double outer = 0.0;
    for (std::size_t i = 0; i < edge; ++i) outer += psi[i] * psi[i] + psi[spec.n_points - 1 - i] * psi[spec.n_points - 1 - i];
    if (outer > 1e-8) throw WindowTooSmallError("phase-grid window clips the eigenfunctions", flux.phi2_ext, true);
    return levels;
}

/// Levels extrapolated from spacing h and h/2: (4 E(h/2) - E(h)) / 3.
inline std::vector<double> richardson_phase_grid_eigenlevels(const CircuitParams& params, const FluxBias& flux,
                                                             const PhaseGridSpec& spec = {}, std::size_t k = 4) {
    const auto coarse = phase_grid_eigenlevels(params, flux, spec, k);
    const auto fine = phase_grid_eigenlevels(params, flux, spec.refined(), k);
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) out[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
    return out;
}

}  // namespace flatsonium
