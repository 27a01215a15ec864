#include <gtest/gtest.h>

#include <random>

#include "flatsonium/config.hpp"

using namespace flatsonium;

namespace {

std::string error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, DefaultsMatchFigureParameters) {
    const RunConfig c;
    EXPECT_EQ(c.params, (CircuitParams{6.0, 0.5, 20.0, 3.0, 2.0}));
    EXPECT_EQ(c.dim, 50u);
    EXPECT_EQ(c.grid_n, 401u);
    EXPECT_DOUBLE_EQ(c.noise.a_s, 5e-6);
    EXPECT_EQ(preset("fig2"), c);
}

TEST(Config, ParsesAllSections) {
    const auto c = parse_config(R"(
# comment
[circuit]
ec_ghz = 5.5   # trailing comment
b = 4
r = 3
[noise]
a_d_phi0 = 1e-6
self_consistent = true
[run]
grid_n = 11
transitions = "0-1,0-2"
mode = "correlated"
output_path = "out/a#b.csv"
)");
    EXPECT_DOUBLE_EQ(c.params.ec_ghz, 5.5);
    EXPECT_DOUBLE_EQ(c.params.b, 4.0);
    EXPECT_DOUBLE_EQ(c.noise.a_d, 1e-6);
    EXPECT_TRUE(c.self_consistent);
    EXPECT_EQ(c.grid_n, 11u);
    EXPECT_EQ(c.transitions, (std::vector<Transition>{{0, 1}, {0, 2}}));
    EXPECT_EQ(c.mode, DephasingMode::correlated);
    EXPECT_EQ(c.output_path, "out/a#b.csv");
}

TEST(Config, RoundTripIsIdentity) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 50; ++i) {
        RunConfig c;
        c.params = {u(rng), u(rng), u(rng), u(rng), u(rng)};
        c.noise.a_s = u(rng) * 1e-6;
        c.noise.a_d = u(rng) * 1e-7;
        c.noise.c_sd = u(rng) / 10.0;
        c.noise.log_factor = u(rng);
        c.grid_min = u(rng) / 100.0;
        c.grid_max = 1.0 + u(rng);
        c.step_phi0 = u(rng) * 1e-6;
        c.mode = static_cast<DephasingMode>(i % 3);
        c.self_consistent = i % 2 == 0;
        c.output_path = "runs/x" + std::to_string(i) + ".csv";
        const auto once = parse_config(serialize_config(c));
        EXPECT_EQ(once, c);
        EXPECT_EQ(parse_config(serialize_config(once)), once);
    }
}

TEST(Config, ErrorsNameLineAndField) {
    EXPECT_NE(error_of("[run]\ngrid_n = abc\n").find("line 2, field run.grid_n"), std::string::npos);
    EXPECT_NE(error_of("[circuit]\nfoo = 1\n").find("field circuit.foo: unknown key"), std::string::npos);
    EXPECT_NE(error_of("[circuit]\nb = 1\nb = 2\n").find("line 3, field circuit.b: duplicate"), std::string::npos);
    EXPECT_NE(error_of("[extra]\n").find("unknown section"), std::string::npos);
    EXPECT_NE(error_of("ec_ghz = 1\n").find("outside of a section"), std::string::npos);
    EXPECT_NE(error_of("[run]\nmode = \"loud\"\n").find("field run.mode"), std::string::npos);
    EXPECT_NE(error_of("[run]\ntransitions = \"0-x\"\n").find("field run.transitions"), std::string::npos);
    EXPECT_NE(error_of("[circuit]\nec_ghz = -1\n").find("ec_ghz"), std::string::npos);
    EXPECT_NE(error_of("[run]\ndim = 3.5\n").find("non-negative integer"), std::string::npos);
}

TEST(Config, ValidationCatchesInconsistentRuns) {
    RunConfig c;
    c.transitions = {{0, 60}};
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.grid_max = c.grid_min;
    EXPECT_THROW(c.validate(), ConfigError);
    c.grid_n = 1;
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, PresetsAndModes) {
    EXPECT_EQ(preset("fluxonium").params, CircuitParams::fluxonium());
    EXPECT_EQ(preset("fig4a").mode, DephasingMode::uncorrelated);
    EXPECT_DOUBLE_EQ(preset("fig4b").noise.a_d, 1e-6);
    EXPECT_THROW(preset("fig9"), ConfigError);
    EXPECT_EQ(effective_noise(NoiseModel{5e-6, 1e-6}, DephasingMode::global_only).a_d, 0.0);
    EXPECT_EQ(effective_noise(NoiseModel{5e-6, 1e-6}, DephasingMode::uncorrelated).c_sd, 0.0);
    EXPECT_EQ(parse_mode(to_string(DephasingMode::global_only)), DephasingMode::global_only);
}

TEST(Config, PresetOverlay) {
    const auto c = parse_config("[run]\ngrid_n = 21\n", preset("fluxonium"));
    EXPECT_EQ(c.params, CircuitParams::fluxonium());
    EXPECT_EQ(c.grid_n, 21u);
}
