#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flatsonium/circuit.hpp"
#include "flatsonium/error.hpp"
#include "flatsonium/parallel.hpp"

namespace flatsonium {

inline constexpr std::size_t kDefaultLevels = 4;
inline constexpr double kDefaultSlopeTol = 1e-3;  // GHz / Phi_0
inline constexpr std::size_t kDefaultFigureGrid = 401;
inline constexpr std::size_t kDefaultSeedGrid = 1001;
inline constexpr double kDefaultPlateauGhz = 1e-2;

/// The k lowest eigenvalues (GHz) of the two-flux Hamiltonian, ascending.
inline std::vector<double> eigenlevels(const CircuitParams& params, const FluxBias& flux,
                                       const FockOperators& ops, std::size_t k = kDefaultLevels) {
    if (k < 1 || k > ops.dim) throw std::invalid_argument("level count must satisfy 1 <= k <= dim");
    const Eigen::MatrixXd h = build_hamiltonian(params, flux, ops);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("Hamiltonian eigensolver did not converge", flux.phi2_ext, true);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + k};
}

inline std::vector<double> eigenlevels(const CircuitParams& params, const FluxBias& flux,
                                       std::size_t dim = kDefaultDim, std::size_t k = kDefaultLevels) {
    return eigenlevels(params, flux, make_fock_operators(params, dim), k);
}

/// f_01 in GHz at an arbitrary two-flux bias.
inline double transition_f01(const CircuitParams& params, const FluxBias& flux, const FockOperators& ops) {
    const auto levels = eigenlevels(params, flux, ops, 2);
    return levels[1] - levels[0];
}

/// d f_01 / d Phi_s along the constrained line Phi_1 = r Phi_2 (fixed beta),
/// central difference with step `step` in Phi_s.
inline double constrained_slope(const CircuitParams& params, double phi2_ext, const FockOperators& ops,
                                double step = 1e-5) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
    const double scale = params.r + 1.0;
    if (scale == 0.0) throw std::invalid_argument("Phi_s is identically zero on the line for r = -1");
    const double dphi2 = step / scale;
    const double up = transition_f01(params, FluxBias::from_constrained(params, phi2_ext + dphi2), ops);
    const double down = transition_f01(params, FluxBias::from_constrained(params, phi2_ext - dphi2), ops);
    return (up - down) / (2.0 * step);
}

struct Transition {
    std::size_t lower = 0;
    std::size_t upper = 1;
    friend bool operator==(const Transition&, const Transition&) = default;
};

inline const std::vector<Transition>& default_transitions() {
    static const std::vector<Transition> t{{0, 1}, {1, 2}, {2, 3}};
    return t;
}

struct SpectrumSweep {
    CircuitParams params;
    std::vector<double> grid;  ///< Phi_2 / Phi_0
    std::vector<Transition> transitions;
    /// frequencies[i][t] is transitions[t] at grid[i], in GHz.
    std::vector<std::vector<double>> frequencies;
    std::size_t dim = kDefaultDim;

    /// Column of one transition across the grid.
    std::vector<double> column(std::size_t t) const {
        std::vector<double> out;
        out.reserve(frequencies.size());
        for (const auto& row : frequencies) out.push_back(row.at(t));
        return out;
    }
};

inline void require_increasing_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("flux grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw std::invalid_argument("flux grid must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("flux grid must be strictly increasing");
    }
}

/// n points spanning [lo, hi]; a single point sits at lo.
inline std::vector<double> uniform_grid(std::size_t n, double lo = 0.0, double hi = 1.0) {
    if (n == 0) throw std::invalid_argument("grid size must be >= 1");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

inline SpectrumSweep sweep_spectrum(const CircuitParams& params, const std::vector<double>& phi2_grid,
                                    const std::vector<Transition>& transitions = default_transitions(),
                                    std::size_t dim = kDefaultDim) {
    params.validate();
    require_increasing_grid(phi2_grid);
    if (transitions.empty()) throw std::invalid_argument("at least one transition is required");
    std::size_t top = 0;
    for (const auto& t : transitions) {
        if (t.upper <= t.lower) throw std::invalid_argument("transition upper index must exceed lower index");
        top = std::max(top, t.upper);
    }
    if (top + 1 > dim) throw std::invalid_argument("transition index exceeds Fock truncation");

    const FockOperators ops = make_fock_operators(params, dim);
    SpectrumSweep out{params, phi2_grid, transitions, {}, dim};
    out.frequencies = parallel_map<std::vector<double>>(phi2_grid.size(), [&](std::size_t i) {
        const auto levels = eigenlevels(params, FluxBias::from_constrained(params, phi2_grid[i]), ops, top + 1);
        std::vector<double> row;
        row.reserve(transitions.size());
        for (const auto& t : transitions) row.push_back(levels[t.upper] - levels[t.lower]);
        return row;
    });
    return out;
}

/// Sweet-spot count within one flux quantum, endpoints included; valid for r > 1.
inline int predicted_sweet_spot_count(int r) {
    if (r <= 1) throw std::invalid_argument("sweet-spot count formula holds only for r > 1");
    return r % 2 == 1 ? r + 4 : r + 3;
}

/// Candidates Phi_2 / Phi_0 = m / (2r), m = 0..2r.
inline std::vector<double> analytic_sweet_spot_candidates(int r) {
    if (r < 1) throw std::invalid_argument("candidate set requires r >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * r + 1));
    for (int m = 0; m <= 2 * r; ++m) out.push_back(static_cast<double>(m) / (2.0 * r));
    return out;
}

enum class SweetSpotKind { minimum, maximum };

inline const char* to_string(SweetSpotKind k) { return k == SweetSpotKind::minimum ? "minimum" : "maximum"; }

struct SweetSpot {
    double phi2_over_phi0 = 0.0;
    double f01_ghz = 0.0;
    SweetSpotKind kind = SweetSpotKind::minimum;
    double residual_slope = 0.0;  ///< |d f_01 / d Phi_s| along the constrained line, GHz / Phi_0
};

/// Scans d f_01 / d Phi_s along Phi_1 = r Phi_2 over Phi_2 in [0, Phi_0] and
/// returns the flux-insensitive points.
///
/// Each sign change between grid points is bisected down to |slope| < slope_tol;
/// a run of grid points already under the tolerance (endpoints included) yields
/// its flattest point. Roots closer than 1e-4 Phi_0 are deduplicated. Adjacent
/// extrema whose f_01 values differ by less than plateau_ghz bound a stretch over
/// which f_01 moves by less than plateau_ghz, and are reported as a single spot
/// (the member with the smallest residual slope).
inline std::vector<SweetSpot> find_sweet_spots(const CircuitParams& params, std::size_t dim = kDefaultDim,
                                               std::size_t grid_n = kDefaultSeedGrid,
                                               double slope_tol = kDefaultSlopeTol,
                                               double plateau_ghz = kDefaultPlateauGhz) {
    params.validate();
    if (grid_n < 101) throw std::invalid_argument("sweet-spot scan needs grid_n >= 101");
    if (!(slope_tol > 0.0)) throw std::invalid_argument("slope tolerance must be > 0");
    if (!(plateau_ghz >= 0.0)) throw std::invalid_argument("plateau width must be >= 0");

    const FockOperators ops = make_fock_operators(params, dim);
    const std::vector<double> grid = uniform_grid(grid_n);
    const std::vector<double> slope = parallel_map<double>(
        grid_n, [&](std::size_t i) { return constrained_slope(params, grid[i], ops); });

    auto flat = [&](double s) { return std::abs(s) < slope_tol; };
    auto crossing = [&](std::size_t i) {
        return !flat(slope[i]) && !flat(slope[i + 1]) && std::signbit(slope[i]) != std::signbit(slope[i + 1]);
    };

    for (std::size_t i = 0; i + 2 < grid_n; ++i) {
        if (crossing(i) && crossing(i + 1))
            throw GridTooCoarseError("sweet-spot scan: sign changes in adjacent intervals near phi2/phi0 = " +
                                         std::to_string(grid[i + 1]),
                                     2 * grid_n - 1);
    }

    std::vector<std::pair<double, double>> roots;  // location, residual slope
    for (std::size_t i = 0; i < grid_n;) {
        if (!flat(slope[i])) {
            ++i;
            continue;
        }
        std::size_t best = i;
        for (; i < grid_n && flat(slope[i]); ++i)
            if (std::abs(slope[i]) < std::abs(slope[best])) best = i;
        roots.emplace_back(grid[best], std::abs(slope[best]));
    }
    for (std::size_t i = 0; i + 1 < grid_n; ++i) {
        if (!crossing(i)) continue;
        double lo = grid[i];
        double hi = grid[i + 1];
        const bool lo_negative = std::signbit(slope[i]);
        double mid = 0.5 * (lo + hi);
        double s = constrained_slope(params, mid, ops);
        for (int iter = 0; iter < 200 && !flat(s) && hi - lo > 1e-13; ++iter) {
            if (std::signbit(s) == lo_negative)
                lo = mid;
            else
                hi = mid;
            mid = 0.5 * (lo + hi);
            s = constrained_slope(params, mid, ops);
        }
        // A bracket that closes without flattening is a kink (level crossing), not a sweet spot.
        if (flat(s)) roots.emplace_back(mid, std::abs(s));
    }

    std::sort(roots.begin(), roots.end());
    std::vector<std::pair<double, double>> unique;
    for (const auto& r : roots) {
        if (!unique.empty() && r.first - unique.back().first < 1e-4) {
            if (r.second < unique.back().second) unique.back() = r;
            continue;
        }
        unique.push_back(r);
    }

    const double h2 = 1e-3;
    std::vector<SweetSpot> candidates;
    candidates.reserve(unique.size());
    for (const auto& [x, residual] : unique) {
        const double f0 = transition_f01(params, FluxBias::from_constrained(params, x), ops);
        const double fp = transition_f01(params, FluxBias::from_constrained(params, x + h2), ops);
        const double fm = transition_f01(params, FluxBias::from_constrained(params, x - h2), ops);
        const auto kind = fp + fm - 2.0 * f0 < 0.0 ? SweetSpotKind::maximum : SweetSpotKind::minimum;
        candidates.push_back({x, f0, kind, residual});
    }

    std::vector<SweetSpot> spots;
    double group_lo = 0.0;
    double group_hi = 0.0;
    for (const auto& c : candidates) {
        if (!spots.empty()) {
            const double lo = std::min(group_lo, c.f01_ghz);
            const double hi = std::max(group_hi, c.f01_ghz);
            if (hi - lo < plateau_ghz) {
                group_lo = lo;
                group_hi = hi;
                if (c.residual_slope < spots.back().residual_slope) spots.back() = c;
                continue;
            }
        }
        spots.push_back(c);
        group_lo = group_hi = c.f01_ghz;
    }
    return spots;
}

/// Linear approximation of the fluxonium f_01 away from its sweet spots (b = 0, r = 0).
inline double fluxonium_linear_f01(const CircuitParams& params, double phi2_reduced) {
    const double el = params.el_ghz;
    const double ej = params.ej_sum_ghz;
    const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    return four_pi_sq * el * ej * std::abs(0.5 - phi2_reduced / kTwoPi) / (el + ej);
}

/// |d f_01 / d Phi| of the linear approximation, GHz / Phi_0.
inline double fluxonium_linear_slope(const CircuitParams& params) {
    const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    return four_pi_sq * params.el_ghz * params.ej_sum_ghz / (params.el_ghz + params.ej_sum_ghz);
}

}  // namespace flatsonium
