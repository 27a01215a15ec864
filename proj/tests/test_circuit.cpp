#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "flatsonium/circuit.hpp"
#include "flatsonium/spectrum.hpp"

using namespace flatsonium;

namespace {

Eigen::VectorXd all_levels(const Eigen::MatrixXd& h) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST(Circuit, JunctionSplit) {
    const CircuitParams p;
    EXPECT_DOUBLE_EQ(p.ej1_ghz(), 5.0);
    EXPECT_DOUBLE_EQ(p.ej2_ghz(), 15.0);
    EXPECT_DOUBLE_EQ(p.beta(), 1.0 / 3.0);
    EXPECT_THROW((CircuitParams{6, 0.5, 20, 3, -1}.beta()), std::invalid_argument);
}

TEST(Circuit, ValidationRejectsNonPhysical) {
    EXPECT_THROW((CircuitParams{0, 0.5, 20, 3, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitParams{6, -1, 20, 3, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitParams{6, 0.5, -1, 3, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitParams{6, 0.5, 20, -0.1, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitParams{6, 0.5, 20, 3, NAN}.validate()), std::invalid_argument);
    EXPECT_NO_THROW(CircuitParams::fluxonium().validate());
}

TEST(Circuit, ModeCoordinates) {
    const CircuitParams p;
    const auto f = FluxBias::from_constrained(p, 0.1);
    EXPECT_DOUBLE_EQ(f.phi1_ext, 0.2);
    EXPECT_NEAR(f.phi_d(), p.beta() * f.phi_s(), 1e-15);
    const auto g = FluxBias::from_modes(f.phi_s(), f.phi_d());
    EXPECT_NEAR(g.phi1_ext, f.phi1_ext, 1e-15);
    EXPECT_NEAR(g.phi2_ext, f.phi2_ext, 1e-15);
}

TEST(Circuit, EffectiveJosephsonEnergyExamples) {
    const CircuitParams p;
    EXPECT_NEAR(effective_josephson_energy(p, 0.0), 20.0, 1e-12);
    EXPECT_NEAR(effective_josephson_energy(p, std::numbers::pi / 2.0), 10.0, 1e-12);
    EXPECT_NEAR(effective_phase_offset(p, 0.0), 0.0, 1e-15);
}

TEST(Circuit, EffectiveJosephsonEnergyBounds) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> b(0.0, 8.0), r(0.0, 6.0), phi(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        const CircuitParams p{6, 0.5, 20, b(rng), std::round(r(rng))};
        const double e = effective_josephson_energy(p, phi(rng));
        const double lo = 20.0 * std::abs(1.0 - p.b) / (1.0 + p.b);
        EXPECT_GE(e, lo - 1e-12);
        EXPECT_LE(e, 20.0 + 1e-12);
    }
}

TEST(Circuit, DegenerateOffsetThrows) {
    // b = 1, r = 1: the phasors cancel at phi_2 = pi.
    const CircuitParams p{6, 0.5, 20, 1.0, 1.0};
    EXPECT_THROW(effective_phase_offset(p, std::numbers::pi), DegenerateOffsetError);
}

TEST(Circuit, BareZeroPointSpread) {
    const CircuitParams p;
    const auto ops = make_fock_operators(p, 10, OscillatorFrame::bare(p));
    EXPECT_NEAR(ops.phi_zpf, 2.2134, 1e-4);
    EXPECT_DOUBLE_EQ(ops.phi_zpf * ops.n_zpf, 0.5);
}

TEST(Circuit, CommutatorOnInterior) {
    const CircuitParams p;
    const auto ops = make_fock_operators(p, 30);
    const Eigen::MatrixXcd phi = ops.phi_op.cast<std::complex<double>>();
    const Eigen::MatrixXcd c = phi * ops.n_op - ops.n_op * phi;
    for (Eigen::Index i = 0; i < 29; ++i)
        for (Eigen::Index j = 0; j < 29; ++j) {
            const std::complex<double> expect = i == j ? std::complex<double>(0.0, 1.0) : 0.0;
            EXPECT_NEAR(std::abs(c(i, j) - expect), 0.0, 1e-12);
        }
}

TEST(Circuit, HermitianOverRandomDraws) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ec(0.5, 10), el(0.1, 3), ej(0, 40), b(0, 6), r(-3, 5), fl(-2, 2);
    for (int i = 0; i < 1000; ++i) {
        const CircuitParams p{ec(rng), el(rng), ej(rng), b(rng), r(rng)};
        const auto h = build_hamiltonian(p, {fl(rng), fl(rng)}, 12);
        EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Circuit, TwoCosineMatchesSingleCosine) {
    for (double r : {0.0, 1.0, 2.0, 3.0}) {
        const CircuitParams p{6, 0.5, 20, r + 1.0, r};
        const auto ops = make_fock_operators(p, 50);
        for (double x : {0.0, 0.05, 0.17, 0.25, 0.4, 0.5, 0.66, 0.9}) {
            const auto a = all_levels(build_hamiltonian(p, FluxBias::from_constrained(p, x), ops));
            const auto e = all_levels(build_effective_hamiltonian(p, x, ops));
            EXPECT_LE((a.head(6) - e.head(6)).cwiseAbs().maxCoeff(), 1e-9) << "r=" << r << " x=" << x;
        }
    }
}

TEST(Circuit, FluxPeriodicityIntegerR) {
    const CircuitParams p;
    const auto ops = make_fock_operators(p, 50);
    for (double x : {0.0, 0.13, 0.5, 0.81}) {
        const auto a = eigenlevels(p, FluxBias::from_constrained(p, x), ops, 6);
        const auto b = eigenlevels(p, FluxBias::from_constrained(p, x + 1.0), ops, 6);
        for (int k = 0; k < 6; ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
    }
}

TEST(Circuit, TruncationConverges50To70) {
    const CircuitParams p;
    const auto small = make_fock_operators(p, 50);
    const auto large = make_fock_operators(p, 70);
    for (double x : uniform_grid(11)) {
        const auto bias = FluxBias::from_constrained(p, x);
        const auto a = eigenlevels(p, bias, small, 4);
        const auto b = eigenlevels(p, bias, large, 4);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-6) << "x=" << x;
    }
}

TEST(Circuit, HarmonicLimitExact) {
    const CircuitParams p{6, 0.5, 0.0, 3, 2};
    const double omega = std::sqrt(8.0 * 0.5 * 6.0);
    for (std::size_t dim : {5u, 20u, 50u}) {
        const auto levels = eigenlevels(p, {0.3, 0.1}, dim, 4);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(levels[k], omega * (k + 0.5), 1e-9);
    }
}

TEST(Circuit, ExampleGroundLevels) {
    const CircuitParams p;
    const auto levels = eigenlevels(p, {}, 50, 4);
    ASSERT_EQ(levels.size(), 4u);
    EXPECT_TRUE(std::is_sorted(levels.begin(), levels.end()));
    EXPECT_NEAR(levels[1] - levels[0], 9.41383, 1e-4);
}

TEST(Circuit, RejectsBadDimensionAndFlux) {
    const CircuitParams p;
    EXPECT_THROW(make_fock_operators(p, 1), std::invalid_argument);
    EXPECT_THROW(build_hamiltonian(p, {NAN, 0.0}, 10), std::invalid_argument);
    EXPECT_THROW(eigenlevels(p, {}, 10, 11), std::invalid_argument);
}
