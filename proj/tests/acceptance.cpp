// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "flatsonium/flatsonium.hpp"

using namespace flatsonium;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double argmax_in(const DephasingProfile& p, double lo, double hi) {
    double best = -1.0;
    double at = NAN;
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        if (p.grid[i] >= lo && p.grid[i] <= hi && p.t_phi[i] > best) {
            best = p.t_phi[i];
            at = p.grid[i];
        }
    return at;
}

Outcome default_spectrum_shape() {
    const CircuitParams p;
    const auto f01 = sweep_spectrum(p, uniform_grid(401), {{0, 1}}, 50).column(0);
    const auto grid = uniform_grid(401);
    const double at_min = grid[std::min_element(f01.begin(), f01.end()) - f01.begin()];
    const auto spots = find_sweet_spots(p, 50);
    auto max_near = [&](double x) {
        return std::any_of(spots.begin(), spots.end(), [&](const SweetSpot& s) {
            return s.kind == SweetSpotKind::maximum && std::abs(s.phi2_over_phi0 - x) <= 0.005;
        });
    };
    const bool ok = std::abs(at_min - 0.5) <= 0.005 && max_near(0.25) && max_near(0.75);
    char buf[200];
    std::snprintf(buf, sizeof buf, "global min at %.4f; maxima near 0.25: %s, near 0.75: %s", at_min,
                  max_near(0.25) ? "yes" : "no", max_near(0.75) ? "yes" : "no");
    return {ok, buf};
}

Outcome sweet_spot_counts() {
    const auto r2 = find_sweet_spots(CircuitParams{});
    const auto r3 = find_sweet_spots(CircuitParams{6, 0.5, 20, 4, 3});
    char buf[120];
    std::snprintf(buf, sizeof buf, "r=2: %zu spots (want 5); r=3,b=4: %zu spots (want 7)", r2.size(), r3.size());
    return {r2.size() == 5 && r3.size() == 7, buf};
}

Outcome fluxonium_plateau() {
    const auto p = CircuitParams::fluxonium();
    NoiseModel m;
    m.a_d = 0.0;
    m.log_factor = 4.0;
    const auto prof = dephasing_sweep(p, m, {0.25});
    const double t = prof.t_phi[0];
    const double slope = std::abs(prof.sens_s[0]);
    const double lin = fluxonium_linear_slope(p);
    char buf[200];
    std::snprintf(buf, sizeof buf, "T_phi(0.25) = %.3e s; |slope| = %.3f vs linear %.3f GHz/Phi0", t, slope, lin);
    return {t >= 0.2e-6 && t <= 2e-6 && std::abs(slope - lin) <= 0.25 * lin, buf};
}

Outcome engineered_spot() {
    NoiseModel m;
    m.a_d = 0.0;
    const auto grid = uniform_grid(501);
    const auto prof = dephasing_sweep(CircuitParams{}, m, grid);
    double best = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::abs(grid[i] - 0.25) <= 0.01) best = std::max(best, prof.t_phi[i]);
    const double plateau = dephasing_sweep(CircuitParams::fluxonium(), m, {0.25}).t_phi[0];
    char buf[160];
    std::snprintf(buf, sizeof buf, "max T_phi near 0.25 = %.3e s (%.1e x fluxonium plateau)", best, best / plateau);
    return {best > 1e-3 && best >= 1e3 * plateau, buf};
}

Outcome correlated_cancellation() {
    NoiseModel m{5e-6, 1e-6, 1.0, 4.0};
    const auto grid = uniform_grid(501);
    const double spacing = grid[1] - grid[0];
    const auto prof = dephasing_sweep(CircuitParams{}, m, grid);
    const double lo = argmax_in(prof, 0.1, 0.4);
    const double hi = argmax_in(prof, 0.6, 0.9);
    const bool shifted = std::abs(lo - 0.25) > spacing && std::abs(hi - 0.75) > spacing;

    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); i += 25) {
        const double ss = prof.sens_s[i];
        if (ss == 0.0) continue;
        const double sd = -m.a_s * ss / m.a_d;
        const double scale = mode_dephasing_rate(m.a_s, ss, m.log_factor) + mode_dephasing_rate(m.a_d, sd, m.log_factor);
        worst = std::max(worst, total_dephasing_rate(m, ss, sd) / scale);
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "T_phi maxima at %.3f and %.3f (spacing %.3f); cancellation residual %.1e", lo,
                  hi, spacing, worst);
    return {shifted && worst <= 1e-12, buf};
}

Outcome oracle_equivalence() {
    const auto c = check_oracle_agreement(CircuitParams{}, 50);
    char buf[120];
    std::snprintf(buf, sizeof buf, "max relative deviation %.2e (tol 1e-4)", c.metric);
    return {c.passed, buf};
}

Outcome property_suites() {
    const auto checks = run_verification(RunConfig{});
    std::string failed;
    for (const auto& c : checks)
        if (!c.passed || c.skipped) failed += " " + c.name;
    return {failed.empty(), failed.empty() ? std::to_string(checks.size()) + " verify checks green"
                                           : "failing:" + failed};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;  // 0: none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "default spectrum shape", 10.0, default_spectrum_shape},
        {2, "sweet-spot counts", 0.0, sweet_spot_counts},
        {3, "fluxonium dephasing plateau", 0.0, fluxonium_plateau},
        {4, "engineered-spot improvement", 0.0, engineered_spot},
        {5, "correlated cancellation", 0.0, correlated_cancellation},
        {6, "oracle equivalence", 60.0, oracle_equivalence},
        {7, "property suites", 0.0, property_suites},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && dt >= c.budget_s) {
            o.pass = false;
            o.detail += "; over time budget";
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), dt);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
