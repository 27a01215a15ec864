#pragma once

// Pure dephasing of the 0-1 transition from low-frequency 1/f flux noise in
// the common mode (Phi_s = Phi_1 + Phi_2, global field) and the differential
// mode (Phi_d = Phi_1 - Phi_2, local spins), with optional correlation.
//
// Rates are in 1/s. Sensitivities are d f_01 / d Phi in GHz / Phi_0 and are
// converted to Hz / Phi_0 before the 2*pi of the angular frequency is applied.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "flatsonium/circuit.hpp"
#include "flatsonium/error.hpp"
#include "flatsonium/parallel.hpp"
#include "flatsonium/spectrum.hpp"

namespace flatsonium {

inline constexpr double kDefaultLogFactor = 4.0;
inline constexpr double kDefaultFluxStep = 1e-5;  // Phi_0
inline constexpr double kMinFluxStep = 1e-9;      // Phi_0
inline constexpr double kGhzToHz = 1e9;

/// e^(3/2 - gamma_E) / (2 pi), the constant inside the 1/f phase-noise logarithm.
inline const double kZeta = std::exp(1.5 - std::numbers::egamma) / (2.0 * std::numbers::pi);

struct NoiseModel {
    double a_s = 5e-6;  ///< common-mode 1/f amplitude, Phi_0
    double a_d = 0.0;   ///< differential-mode 1/f amplitude, Phi_0
    double c_sd = 1.0;  ///< correlation coefficient A_sd^2 / (A_s A_d)
    double log_factor = kDefaultLogFactor;  ///< sqrt(|ln(zeta / (f_ir t_m))|)
    double alpha = 1.0;  ///< spectral exponent; only alpha = 1 is evaluated
    double f_ir_hz = 1e-2;  ///< infrared cutoff, used only by the self-consistent log factor

    /// Cross-spectrum amplitude A_sd = sqrt(c_sd A_s A_d).
    double cross_amplitude() const { return std::sqrt(c_sd * a_s * a_d); }

    void validate() const {
        if (!(a_s >= 0.0) || !std::isfinite(a_s)) throw std::invalid_argument("a_s must be >= 0");
        if (!(a_d >= 0.0) || !std::isfinite(a_d)) throw std::invalid_argument("a_d must be >= 0");
        if (!(c_sd >= 0.0 && c_sd <= 1.0)) throw std::invalid_argument("c_sd must lie in [0, 1]");
        if (!(log_factor > 0.0) || !std::isfinite(log_factor)) throw std::invalid_argument("log_factor must be > 0");
        if (!(f_ir_hz > 0.0) || !std::isfinite(f_ir_hz)) throw std::invalid_argument("f_ir_hz must be > 0");
    }

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

enum class FluxMode { common, differential };

/// d f_01 / d Phi for one noise mode, central difference of half-width `step`.
///
/// common: derivative in Phi_s along the fixed-beta line through the bias
///         (Phi_1 = r Phi_2 is preserved), the slope global field noise sees.
/// differential: derivative in Phi_d at fixed Phi_s.
inline double flux_sensitivity(const CircuitParams& params, const FluxBias& flux, FluxMode mode,
                               const FockOperators& ops, double step = kDefaultFluxStep) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
    if (!flux.finite()) throw std::invalid_argument("flux bias must be finite");
    // Below this the f_01 difference sinks under the ~1e-12 GHz eigensolver floor.
    if (step < kMinFluxStep)
        throw NumericalError("finite-difference step below the eigensolver noise floor", flux.phi2_ext, true);

    double ds = 0.0;
    double dd = 0.0;
    if (mode == FluxMode::common) {
        ds = step;
        dd = params.beta() * step;
    } else {
        dd = step;
    }
    const double s = flux.phi_s();
    const double d = flux.phi_d();
    const double up = transition_f01(params, FluxBias::from_modes(s + ds, d + dd), ops);
    const double down = transition_f01(params, FluxBias::from_modes(s - ds, d - dd), ops);
    return (up - down) / (2.0 * step);
}

inline double flux_sensitivity(const CircuitParams& params, const FluxBias& flux, FluxMode mode,
                               std::size_t dim = kDefaultDim, double step = kDefaultFluxStep) {
    return flux_sensitivity(params, flux, mode, make_fock_operators(params, dim), step);
}

/// Differential sensitivity recovered from the (Phi_s, beta) parametrization,
/// (1 / Phi_s) d f_01 / d beta at fixed Phi_s. Needs Phi_s != 0.
inline double differential_sensitivity_via_beta(const CircuitParams& params, const FluxBias& flux,
                                                const FockOperators& ops, double beta_step = 1e-5) {
    const double s = flux.phi_s();
    if (s == 0.0) throw std::invalid_argument("beta parametrization is singular at Phi_s = 0");
    const double beta = flux.phi_d() / s;
    const double up = transition_f01(params, FluxBias::from_modes(s, (beta + beta_step) * s), ops);
    const double down = transition_f01(params, FluxBias::from_modes(s, (beta - beta_step) * s), ops);
    return (up - down) / (2.0 * beta_step) / s;
}

/// Gamma = 2 pi A L |df/dPhi|, with df/dPhi in GHz / Phi_0.
inline double mode_dephasing_rate(double amplitude, double sensitivity_ghz, double log_factor) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("noise amplitude must be >= 0");
    if (!(log_factor > 0.0)) throw std::invalid_argument("log factor must be > 0");
    return kTwoPi * amplitude * log_factor * std::abs(sensitivity_ghz) * kGhzToHz;
}

/// Total rate for correlated common/differential noise,
///   Gamma^2 = Gs^2 + Gd^2 + 2 c (2 pi L)^2 A_s A_d S_s S_d.
/// Evaluated as (2 pi L)^2 [c (x + y)^2 + (1 - c)(x^2 + y^2)] with x = A_s S_s,
/// y = A_d S_d, so c = 1 gives |x + y| exactly and c = 0 gives the quadrature sum.
inline double total_dephasing_rate(const NoiseModel& model, double sens_s_ghz, double sens_d_ghz) {
    model.validate();
    const double scale = kTwoPi * model.log_factor * kGhzToHz;
    const double x = model.a_s * sens_s_ghz;
    const double y = model.a_d * sens_d_ghz;
    const double c = model.c_sd;
    if (c == 1.0) return scale * std::abs(x + y);
    if (c == 0.0) return scale * std::hypot(x, y);
    const double radicand = c * (x + y) * (x + y) + (1.0 - c) * (x * x + y * y);
    return scale * std::sqrt(std::max(radicand, 0.0));
}

/// Solves Gamma = G(L) with L = sqrt(|ln(zeta Gamma / f_ir)|), i.e. t_m = 1 / Gamma,
/// by fixed-point iteration starting from model.log_factor.
struct SelfConsistentRate {
    double gamma = 0.0;
    double log_factor = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline SelfConsistentRate self_consistent_dephasing_rate(const NoiseModel& model, double sens_s_ghz,
                                                         double sens_d_ghz, int max_iterations = 20,
                                                         double rel_tol = 1e-3) {
    NoiseModel m = model;
    SelfConsistentRate out;
    out.log_factor = m.log_factor;
    out.gamma = total_dephasing_rate(m, sens_s_ghz, sens_d_ghz);
    if (out.gamma == 0.0) {
        out.converged = true;
        return out;
    }
    for (out.iterations = 1; out.iterations <= max_iterations; ++out.iterations) {
        const double next_log = std::sqrt(std::abs(std::log(kZeta * out.gamma / m.f_ir_hz)));
        if (!(next_log > 0.0)) break;
        m.log_factor = next_log;
        const double next = total_dephasing_rate(m, sens_s_ghz, sens_d_ghz);
        const bool done = std::abs(next - out.gamma) <= rel_tol * out.gamma;
        out.gamma = next;
        out.log_factor = next_log;
        if (done) {
            out.converged = true;
            break;
        }
    }
    return out;
}

struct DephasingProfile {
    std::vector<double> grid;  ///< Phi_2 / Phi_0
    std::vector<double> sens_s, sens_d;  ///< GHz / Phi_0
    std::vector<double> gamma_s, gamma_d, gamma_total;  ///< 1/s
    std::vector<double> t_phi;  ///< s; +inf where gamma_total == 0
};

/// Per-point sensitivities and rates along Phi_1 = r Phi_2.
/// With `self_consistent`, each point solves for its own log factor with t_m = 1 / Gamma.
inline DephasingProfile dephasing_sweep(const CircuitParams& params, const NoiseModel& model,
                                        const std::vector<double>& phi2_grid, double step = kDefaultFluxStep,
                                        std::size_t dim = kDefaultDim, bool self_consistent = false) {
    params.validate();
    model.validate();
    require_increasing_grid(phi2_grid);
    const FockOperators ops = make_fock_operators(params, dim);

    struct Point {
        double s, d;
    };
    const auto sens = parallel_map<Point>(phi2_grid.size(), [&](std::size_t i) {
        const FluxBias bias = FluxBias::from_constrained(params, phi2_grid[i]);
        return Point{flux_sensitivity(params, bias, FluxMode::common, ops, step),
                     flux_sensitivity(params, bias, FluxMode::differential, ops, step)};
    });

    DephasingProfile p;
    p.grid = phi2_grid;
    const std::size_t n = phi2_grid.size();
    p.sens_s.resize(n);
    p.sens_d.resize(n);
    p.gamma_s.resize(n);
    p.gamma_d.resize(n);
    p.gamma_total.resize(n);
    p.t_phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.sens_s[i] = sens[i].s;
        p.sens_d[i] = sens[i].d;
        NoiseModel local = model;
        if (self_consistent) local.log_factor = self_consistent_dephasing_rate(model, sens[i].s, sens[i].d).log_factor;
        p.gamma_s[i] = mode_dephasing_rate(local.a_s, sens[i].s, local.log_factor);
        p.gamma_d[i] = mode_dephasing_rate(local.a_d, sens[i].d, local.log_factor);
        p.gamma_total[i] = total_dephasing_rate(local, sens[i].s, sens[i].d);
        p.t_phi[i] = p.gamma_total[i] > 0.0 ? 1.0 / p.gamma_total[i] : std::numeric_limits<double>::infinity();
    }
    return p;
}

}  // namespace flatsonium
