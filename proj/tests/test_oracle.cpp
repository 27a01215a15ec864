#include <gtest/gtest.h>

#include <cmath>

#include "flatsonium/oracle.hpp"
#include "flatsonium/spectrum.hpp"

using namespace flatsonium;

namespace {

const CircuitParams kHarmonic{6, 0.5, 0.0, 3, 2};
const double kOmega = std::sqrt(8.0 * 6.0 * 0.5);

}  // namespace

TEST(Oracle, SpecValidation) {
    EXPECT_THROW(phase_grid_eigenlevels(kHarmonic, {}, {8 * std::numbers::pi, 401}), std::invalid_argument);
    EXPECT_THROW(phase_grid_eigenlevels(kHarmonic, {}, {10.0, 2001}), std::invalid_argument);
}

TEST(Oracle, HarmonicGroundLevelPlainGrid) {
    const auto l = phase_grid_eigenlevels(kHarmonic, {});
    EXPECT_NEAR(l[0], 0.5 * kOmega, 1e-5);
}

TEST(Oracle, HarmonicLevelsExtrapolated) {
    const auto l = richardson_phase_grid_eigenlevels(kHarmonic, {});
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(l[k], kOmega * (k + 0.5), 1e-5);
}

TEST(Oracle, SecondOrderConvergence) {
    const PhaseGridSpec coarse{8 * std::numbers::pi, 1001};
    const auto a = phase_grid_eigenlevels(kHarmonic, {}, coarse);
    const auto b = phase_grid_eigenlevels(kHarmonic, {}, coarse.refined());
    for (int k = 0; k < 4; ++k) {
        const double ratio = std::abs(a[k] - kOmega * (k + 0.5)) / std::abs(b[k] - kOmega * (k + 0.5));
        EXPECT_NEAR(ratio, 4.0, 0.1) << "k=" << k;
    }
}

TEST(Oracle, ExtrapolationStable) {
    const CircuitParams p;
    const auto bias = FluxBias::from_constrained(p, 0.3);
    const auto a = richardson_phase_grid_eigenlevels(p, bias, {8 * std::numbers::pi, 2001});
    const auto b = richardson_phase_grid_eigenlevels(p, bias, {8 * std::numbers::pi, 4001});
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-6);
}

TEST(Oracle, AgreesWithFockAtHalfFlux) {
    const CircuitParams p;
    const auto bias = FluxBias::from_constrained(p, 0.5);
    const auto g = phase_grid_eigenlevels(p, bias);
    const auto f = eigenlevels(p, bias, 50, 4);
    EXPECT_NEAR((g[1] - g[0]) / (f[1] - f[0]), 1.0, 1e-4);
}

TEST(Oracle, AgreesWithFockAcrossFluxQuantum) {
    const CircuitParams p;
    const auto ops = make_fock_operators(p, 50);
    for (double x : uniform_grid(11)) {
        const auto bias = FluxBias::from_constrained(p, x);
        const auto g = richardson_phase_grid_eigenlevels(p, bias);
        const auto f = eigenlevels(p, bias, ops, 4);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(f[k] / g[k], 1.0, 1e-4) << "x=" << x << " k=" << k;
    }
}

TEST(Oracle, WindowTooSmallDetected) {
    const double zpf = std::pow(2.0 * 6.0 / 0.5, 0.25);
    const PhaseGridSpec tight{6.0 * zpf + std::numbers::pi, 2001};
    EXPECT_NO_THROW(phase_grid_eigenlevels(kHarmonic, {}, {}, 4));
    EXPECT_THROW(phase_grid_eigenlevels(kHarmonic, {}, tight, 4), WindowTooSmallError);
    EXPECT_THROW(phase_grid_eigenlevels(kHarmonic, {}, {}, 40), WindowTooSmallError);
}
