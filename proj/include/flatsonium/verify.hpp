#pragma once

// Self-consistency checks run by `flatsonium verify`: solver cross-checks,
// truncation convergence, symmetries and analytic limits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "flatsonium/circuit.hpp"
#include "flatsonium/config.hpp"
#include "flatsonium/noise.hpp"
#include "flatsonium/oracle.hpp"
#include "flatsonium/spectrum.hpp"

namespace flatsonium {

struct CheckResult {
    std::string name;
    bool passed = false;
    bool skipped = false;
    double metric = 0.0;  ///< worst observed deviation
    double tolerance = 0.0;
    std::string detail;
};

namespace verify_detail {

inline Eigen::VectorXd all_levels(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(h, Eigen::EigenvaluesOnly);
    if (s.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    return s.eigenvalues();
}

inline CheckResult finish(std::string name, double metric, double tol, std::string detail = {}) {
    return {std::move(name), metric <= tol, false, metric, tol, std::move(detail)};
}

inline CheckResult skip(std::string name, std::string why) { return {std::move(name), true, true, 0.0, 0.0, std::move(why)}; }

template <class Fn>
CheckResult guarded(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {name, false, false, std::nan(""), 0.0, std::string("error: ") + e.what()};
    }
}

}  // namespace verify_detail

/// Fock-basis f01, f12, f23 against the extrapolated phase-grid solver at 11 biases.
inline CheckResult check_oracle_agreement(const CircuitParams& params, std::size_t dim, double tol = 1e-4) {
    using namespace verify_detail;
    return guarded("oracle_agreement", [&] {
        if (dim < 4) return skip("oracle_agreement", "needs dim >= 4");
        const auto ops = make_fock_operators(params, dim);
        double worst = 0.0;
        for (const double x : uniform_grid(11)) {
            const auto bias = FluxBias::from_constrained(params, x);
            const auto fock = eigenlevels(params, bias, ops, 4);
            const auto grid = richardson_phase_grid_eigenlevels(params, bias);
            for (std::size_t k = 0; k < 3; ++k) {
                const double ref = grid[k + 1] - grid[k];
                worst = std::max(worst, std::abs((fock[k + 1] - fock[k]) - ref) / std::abs(ref));
            }
        }
        return finish("oracle_agreement", worst, tol, "relative, f01/f12/f23 at 11 biases");
    });
}

inline CheckResult check_truncation(const CircuitParams& params, std::size_t dim, double tol = 1e-6) {
    using namespace verify_detail;
    return guarded("truncation_convergence", [&] {
        const std::size_t k = std::min<std::size_t>(4, dim);
        const auto small = make_fock_operators(params, dim);
        const auto large = make_fock_operators(params, dim + 20);
        double worst = 0.0;
        for (const double x : uniform_grid(11)) {
            const auto bias = FluxBias::from_constrained(params, x);
            const auto a = eigenlevels(params, bias, small, k);
            const auto b = eigenlevels(params, bias, large, k);
            for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
        }
        return finish("truncation_convergence", worst, tol,
                      "GHz, lowest levels dim " + std::to_string(dim) + " vs " + std::to_string(dim + 20));
    });
}

/// Two-cosine and single-cosine (E_J,eff, phi_0) forms give the same levels.
inline CheckResult check_form_equivalence(const CircuitParams& params, std::size_t dim, double tol = 1e-9) {
    using namespace verify_detail;
    return guarded("form_equivalence", [&] {
        if (!params.integer_r()) return skip("form_equivalence", "asserted for integer r only");
        const auto ops = make_fock_operators(params, dim);
        const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(6, dim));
        double worst = 0.0;
        for (const double x : {0.0, 0.07, 0.13, 0.25, 0.31, 0.5, 0.62, 0.75, 0.88, 1.0}) {
            const auto a = all_levels(build_hamiltonian(params, FluxBias::from_constrained(params, x), ops));
            const auto b = all_levels(build_effective_hamiltonian(params, x, ops));
            worst = std::max(worst, (a.head(k) - b.head(k)).cwiseAbs().maxCoeff());
        }
        return finish("form_equivalence", worst, tol, "GHz, lowest 6 levels");
    });
}

inline CheckResult check_hermiticity(std::size_t dim, std::size_t draws = 200, double tol = 1e-12) {
    using namespace verify_detail;
    return guarded("hermiticity", [&] {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> ec(0.5, 10.0), el(0.1, 3.0), ej(0.0, 40.0), b(0.0, 6.0),
            r(-3.0, 5.0), flux(-2.0, 2.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < draws; ++i) {
            const CircuitParams p{ec(rng), el(rng), ej(rng), b(rng), r(rng)};
            const FluxBias f{flux(rng), flux(rng)};
            const auto h = build_hamiltonian(p, f, dim);
            worst = std::max(worst, (h - h.transpose()).cwiseAbs().maxCoeff());
        }
        return finish("hermiticity", worst, tol, "max |H - H^dagger| over random draws");
    });
}

inline CheckResult check_periodicity(const CircuitParams& params, std::size_t dim, double tol = 1e-9) {
    using namespace verify_detail;
    return guarded("flux_periodicity", [&] {
        if (!params.integer_r()) return skip("flux_periodicity", "asserted for integer r only");
        const auto ops = make_fock_operators(params, dim);
        double worst = 0.0;
        for (const double x : {0.0, 0.1, 0.23, 0.5, 0.77}) {
            const auto a = all_levels(build_hamiltonian(params, FluxBias::from_constrained(params, x), ops));
            const auto b = all_levels(build_hamiltonian(params, FluxBias::from_constrained(params, x + 1.0), ops));
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        }
        return finish("flux_periodicity", worst, tol, "GHz, full spectrum at Phi_2 vs Phi_2 + Phi_0");
    });
}

inline CheckResult check_mirror_symmetry(const CircuitParams& params, std::size_t dim, double tol = 1e-9) {
    using namespace verify_detail;
    return guarded("mirror_symmetry", [&] {
        if (!params.integer_r()) return skip("mirror_symmetry", "asserted for integer r only");
        const auto sweep = sweep_spectrum(params, uniform_grid(401), {{0, 1}}, dim);
        double worst = 0.0;
        for (std::size_t i = 0; i < 401; ++i)
            worst = std::max(worst, std::abs(sweep.frequencies[i][0] - sweep.frequencies[400 - i][0]));
        return finish("mirror_symmetry", worst, tol, "GHz, f01(Phi_2) vs f01(Phi_0 - Phi_2), 401 points");
    });
}

inline CheckResult check_uncorrelated_reduction(std::size_t draws = 200, double tol = 1e-12) {
    using namespace verify_detail;
    return guarded("uncorrelated_reduction", [&] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> amp(0.0, 1e-5), sens(-30.0, 30.0), lf(1.0, 6.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < draws; ++i) {
            NoiseModel m;
            m.a_s = amp(rng);
            m.a_d = amp(rng);
            m.c_sd = 0.0;
            m.log_factor = lf(rng);
            const double ss = sens(rng);
            const double sd = sens(rng);
            const double gs = mode_dephasing_rate(m.a_s, ss, m.log_factor);
            const double gd = mode_dephasing_rate(m.a_d, sd, m.log_factor);
            const double expect = std::sqrt(gs * gs + gd * gd);
            const double got = total_dephasing_rate(m, ss, sd);
            if (expect > 0.0) worst = std::max(worst, std::abs(got - expect) / expect);
        }
        return finish("uncorrelated_reduction", worst, tol, "relative, c_sd = 0 vs quadrature sum");
    });
}

inline CheckResult check_harmonic_fock(const CircuitParams& params, std::size_t dim, double tol = 1e-9) {
    using namespace verify_detail;
    return guarded("harmonic_limit_fock", [&] {
        CircuitParams lc = params;
        lc.ej_sum_ghz = 0.0;
        const std::size_t k = std::min<std::size_t>(4, dim - 1);
        const auto levels = eigenlevels(lc, {}, dim, k);
        const double omega = std::sqrt(8.0 * lc.el_ghz * lc.ec_ghz);
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            worst = std::max(worst, std::abs(levels[j] - omega * (static_cast<double>(j) + 0.5)));
        return finish("harmonic_limit_fock", worst, tol, "GHz, E_JSigma = 0 levels vs sqrt(8 E_L E_C)(k + 1/2)");
    });
}

inline CheckResult check_harmonic_oracle(const CircuitParams& params, double tol = 1e-5) {
    using namespace verify_detail;
    return guarded("harmonic_limit_oracle", [&] {
        CircuitParams lc = params;
        lc.ej_sum_ghz = 0.0;
        const auto levels = richardson_phase_grid_eigenlevels(lc, {});
        const double omega = std::sqrt(8.0 * lc.el_ghz * lc.ec_ghz);
        double worst = 0.0;
        for (std::size_t j = 0; j < levels.size(); ++j)
            worst = std::max(worst, std::abs(levels[j] - omega * (static_cast<double>(j) + 0.5)));
        return finish("harmonic_limit_oracle", worst, tol, "GHz, phase-grid E_JSigma = 0 levels");
    });
}

inline std::vector<CheckResult> run_verification(const RunConfig& config) {
    const auto& p = config.params;
    return {
        check_oracle_agreement(p, config.dim),
        check_truncation(p, config.dim),
        check_form_equivalence(p, config.dim),
        check_hermiticity(config.dim),
        check_periodicity(p, config.dim),
        check_mirror_symmetry(p, config.dim),
        check_uncorrelated_reduction(),
        check_harmonic_fock(p, config.dim),
        check_harmonic_oracle(p),
    };
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace flatsonium
