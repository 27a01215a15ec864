#pragma once

// Circuit model: an asymmetric SQUID (junctions E_J1, E_J2) shunted by a
// superinductor E_L, with flux Phi_1 through the SQUID loop and Phi_2 through
// the loop closed by the inductor.
//
// Units: energies are E/h in GHz. External fluxes are in units of Phi_0 at the
// API boundary and become reduced phases (2*pi*Phi/Phi_0) only inside this
// header.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "flatsonium/error.hpp"

namespace flatsonium {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default Fock truncation.
inline constexpr std::size_t kDefaultDim = 50;

struct CircuitParams {
    double ec_ghz = 6.0;
    double el_ghz = 0.5;
    double ej_sum_ghz = 20.0;
    double b = 3.0;  ///< E_J2 / E_J1
    double r = 2.0;  ///< Phi_1 / Phi_2

    double ej1_ghz() const { return ej_sum_ghz / (1.0 + b); }
    double ej2_ghz() const { return b * ej_sum_ghz / (1.0 + b); }

    /// Ratio Phi_d / Phi_s on the constrained line Phi_1 = r Phi_2.
    double beta() const {
        if (r == -1.0) throw std::invalid_argument("beta is undefined for r = -1");
        return (r - 1.0) / (r + 1.0);
    }

    bool integer_r() const { return std::isfinite(r) && r == std::round(r); }

    void validate() const {
        if (!(ec_ghz > 0.0) || !std::isfinite(ec_ghz)) throw std::invalid_argument("ec_ghz must be > 0");
        if (!(el_ghz > 0.0) || !std::isfinite(el_ghz)) throw std::invalid_argument("el_ghz must be > 0");
        if (!(ej_sum_ghz >= 0.0) || !std::isfinite(ej_sum_ghz))
            throw std::invalid_argument("ej_sum_ghz must be >= 0");
        if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("b must be >= 0");
        if (!std::isfinite(r)) throw std::invalid_argument("r must be finite");
    }

    static CircuitParams fluxonium(double ec = 6.0, double el = 0.5, double ej = 20.0) {
        return {ec, el, ej, 0.0, 0.0};
    }

    friend bool operator==(const CircuitParams&, const CircuitParams&) = default;
};

/// External flux pair in units of Phi_0.
struct FluxBias {
    double phi1_ext = 0.0;
    double phi2_ext = 0.0;

    double phi_s() const { return phi1_ext + phi2_ext; }
    double phi_d() const { return phi1_ext - phi2_ext; }

    static FluxBias from_constrained(const CircuitParams& params, double phi2_ext) {
        return {params.r * phi2_ext, phi2_ext};
    }

    static FluxBias from_modes(double phi_s, double phi_d) {
        return {0.5 * (phi_s + phi_d), 0.5 * (phi_s - phi_d)};
    }

    bool finite() const { return std::isfinite(phi1_ext) && std::isfinite(phi2_ext); }

    friend bool operator==(const FluxBias&, const FluxBias&) = default;
};

/// E_J,eff of the SQUID on the constrained line, as a function of phi_2 = 2 pi Phi_2 / Phi_0.
inline double effective_josephson_energy(const CircuitParams& params, double phi2_reduced) {
    const double b = params.b;
    const double radicand = 1.0 + b * b + 2.0 * b * std::cos(params.r * phi2_reduced);
    return params.ej_sum_ghz / (1.0 + b) * std::sqrt(std::max(radicand, 0.0));
}

/// Phase offset of the combined cosine, quadrant-correct in (-pi, pi].
/// Throws DegenerateOffsetError where the two junction phasors cancel.
inline double effective_phase_offset(const CircuitParams& params, double phi2_reduced) {
    const double b = params.b;
    const double y = b * std::sin(phi2_reduced) + std::sin((1.0 + params.r) * phi2_reduced);
    const double x = b * std::cos(phi2_reduced) + std::cos((1.0 + params.r) * phi2_reduced);
    if (std::abs(x) < 1e-12 && std::abs(y) < 1e-12)
        throw DegenerateOffsetError("phase offset undefined: E_J,eff vanishes", phi2_reduced / kTwoPi, true);
    const double angle = std::atan2(y, x);
    return angle == -std::numbers::pi ? std::numbers::pi : angle;
}

/// Inductive energy of the harmonic oscillator whose Fock states span the
/// basis. The circuit Hamiltonian is exact in any frame; the frame only sets
/// how fast the truncation converges.
///
/// bare():    the E_C / E_L oscillator itself, phi_zpf = (2 E_C / E_L)^(1/4).
/// dressed(): E_L + E_JSigma / 8. The bare frame is far wider than the
///            Josephson wells (50 states converge to ~1e-3 GHz); the dressed
///            width still spans the neighbouring wells and converges to ~1e-7 GHz.
///            Reduces to bare() when E_JSigma = 0.
struct OscillatorFrame {
    double el_ghz = 0.0;

    static OscillatorFrame bare(const CircuitParams& params) { return {params.el_ghz}; }
    static OscillatorFrame dressed(const CircuitParams& params) {
        return {params.el_ghz + params.ej_sum_ghz / 8.0};
    }
};

/// Charge and phase quadratures of the frame oscillator, truncated to `dim`
/// Fock states. The spectral decomposition of phi_op is kept so cosines of the
/// phase can be formed without re-diagonalizing.
struct FockOperators {
    std::size_t dim = 0;
    Eigen::MatrixXcd n_op;
    Eigen::MatrixXd phi_op;
    double phi_zpf = 0.0;
    double n_zpf = 0.0;
    Eigen::VectorXd phi_eigenvalues;
    Eigen::MatrixXd phi_eigenvectors;

    /// 4 E_C n^2 + (E_L / 2) phi^2, real symmetric.
    Eigen::MatrixXd quadratic_part;

    /// f(phi) by spectral calculus on the truncated phase operator.
    template <class Fn>
    Eigen::MatrixXd phase_function(Fn&& fn) const {
        Eigen::VectorXd d(static_cast<Eigen::Index>(dim));
        for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = fn(phi_eigenvalues[k]);
        return phi_eigenvectors * d.asDiagonal() * phi_eigenvectors.transpose();
    }
};

inline FockOperators make_fock_operators(const CircuitParams& params, std::size_t dim, OscillatorFrame frame) {
    if (dim < 2) throw std::invalid_argument("Fock truncation must be >= 2");
    params.validate();
    if (!(frame.el_ghz > 0.0) || !std::isfinite(frame.el_ghz))
        throw std::invalid_argument("oscillator frame energy must be > 0");

    FockOperators ops;
    ops.dim = dim;
    ops.phi_zpf = std::pow(2.0 * params.ec_ghz / frame.el_ghz, 0.25);
    ops.n_zpf = 0.5 / ops.phi_zpf;

    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::MatrixXd adag = a.transpose();

    ops.phi_op = ops.phi_zpf * (a + adag);
    ops.n_op = std::complex<double>(0.0, ops.n_zpf) * (adag - a).cast<std::complex<double>>();

    // Squares are projected from one extra Fock state so the top diagonal
    // element keeps its a a^dagger term.
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (Eigen::Index k = 1; k <= n; ++k) big(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::MatrixXd x = big + big.transpose();
    const Eigen::MatrixXd p = big.transpose() - big;
    const Eigen::MatrixXd phi_sq = ops.phi_zpf * ops.phi_zpf * (x * x).topLeftCorner(n, n);
    const Eigen::MatrixXd n_sq = -ops.n_zpf * ops.n_zpf * (p * p).topLeftCorner(n, n);
    ops.quadratic_part = 4.0 * params.ec_ghz * n_sq + 0.5 * params.el_ghz * phi_sq;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ops.phi_op);
    if (solver.info() != Eigen::Success) throw NumericalError("phase operator diagonalization failed");
    ops.phi_eigenvalues = solver.eigenvalues();
    ops.phi_eigenvectors = solver.eigenvectors();
    return ops;
}

inline FockOperators make_fock_operators(const CircuitParams& params, std::size_t dim = kDefaultDim) {
    return make_fock_operators(params, dim, OscillatorFrame::dressed(params));
}

namespace detail {

inline Eigen::MatrixXd symmetrize(Eigen::MatrixXd h) {
    Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
    return sym;
}

}  // namespace detail

/// Two-flux Hamiltonian
///   H = 4 E_C n^2 - E_J1 cos(phi - phi_1 - phi_2) - E_J2 cos(phi - phi_2) + (E_L/2) phi^2
/// in the Fock basis of `ops`. The matrix is real symmetric in this basis.
inline Eigen::MatrixXd build_hamiltonian(const CircuitParams& params, const FluxBias& flux,
                                         const FockOperators& ops) {
    if (!flux.finite()) throw std::invalid_argument("flux bias must be finite");
    const double shift1 = kTwoPi * (flux.phi1_ext + flux.phi2_ext);
    const double shift2 = kTwoPi * flux.phi2_ext;
    const double ej1 = params.ej1_ghz();
    const double ej2 = params.ej2_ghz();
    Eigen::MatrixXd h = ops.quadratic_part + ops.phase_function([&](double p) {
        return -ej1 * std::cos(p - shift1) - ej2 * std::cos(p - shift2);
    });
    return detail::symmetrize(std::move(h));
}

inline Eigen::MatrixXd build_hamiltonian(const CircuitParams& params, const FluxBias& flux,
                                         std::size_t dim = kDefaultDim) {
    return build_hamiltonian(params, flux, make_fock_operators(params, dim));
}

/// Single-cosine form H = 4 E_C n^2 - E_J,eff cos(phi - phi_0) + (E_L/2) phi^2,
/// valid on the constrained line Phi_1 = r Phi_2.
inline Eigen::MatrixXd build_effective_hamiltonian(const CircuitParams& params, double phi2_ext,
                                                   const FockOperators& ops) {
    const double phi2 = kTwoPi * phi2_ext;
    const double ej_eff = effective_josephson_energy(params, phi2);
    const double offset = ej_eff > 0.0 ? effective_phase_offset(params, phi2) : 0.0;
    Eigen::MatrixXd h = ops.quadratic_part +
                        ops.phase_function([&](double p) { return -ej_eff * std::cos(p - offset); });
    return detail::symmetrize(std::move(h));
}

}  // namespace flatsonium
