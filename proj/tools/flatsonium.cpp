#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "flatsonium/flatsonium.hpp"

namespace fs = flatsonium;

namespace {

enum Exit : int { ok = 0, usage = 1, config_error = 2, numeric_error = 3, verify_failed = 4, io_error = 5 };

struct Options {
    std::string config_path;
    std::string preset;
    std::string out;
    std::optional<std::size_t> grid_n;
    std::optional<std::size_t> dim;
    std::string mode;
};

fs::RunConfig resolve(const Options& o) {
    fs::RunConfig c = o.preset.empty() ? fs::RunConfig{} : fs::preset(o.preset);
    if (!o.config_path.empty()) c = fs::load_config(o.config_path, c);
    if (o.grid_n) c.grid_n = *o.grid_n;
    if (o.dim) c.dim = *o.dim;
    if (!o.mode.empty()) c.mode = fs::parse_mode(o.mode);
    if (!o.out.empty()) c.output_path = o.out;
    c.validate();
    return c;
}

int emit(const fs::Artifact& a, const fs::RunConfig& c, const std::string& command) {
    const std::string path = c.output_path.empty() ? command + ".csv" : c.output_path;
    for (const auto& p : fs::write_artifact(a, path)) std::cerr << "wrote " << p << "\n";
    std::cout << a.report;
    return ok;
}

int run_verify(const fs::RunConfig& c) {
    const auto checks = fs::run_verification(c);
    nlohmann::ordered_json summary;
    summary["tool"] = "flatsonium";
    summary["version"] = fs::kVersion;
    summary["dim"] = c.dim;
    summary["passed"] = fs::all_passed(checks);
    summary["checks"] = nlohmann::ordered_json::array();
    for (const auto& k : checks) {
        std::fprintf(stderr, "%-4s %-24s metric=%.3e tol=%.1e  %s\n",
                     k.skipped ? "SKIP" : (k.passed ? "PASS" : "FAIL"), k.name.c_str(), k.metric, k.tolerance,
                     k.detail.c_str());
        nlohmann::ordered_json j;
        j["name"] = k.name;
        j["status"] = k.skipped ? "skipped" : (k.passed ? "pass" : "fail");
        if (std::isfinite(k.metric))
            j["metric"] = k.metric;
        else
            j["metric"] = nullptr;
        j["tolerance"] = k.tolerance;
        j["detail"] = k.detail;
        summary["checks"].push_back(j);
    }
    const std::string text = summary.dump(2) + "\n";
    std::cout << text;
    if (!c.output_path.empty()) {
        std::ofstream f(c.output_path, std::ios::binary | std::ios::trunc);
        if (!(f << text)) throw fs::OutputError("cannot write '" + c.output_path + "'");
    }
    return fs::all_passed(checks) ? ok : verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flux-qubit spectrum, sweet-spot and dephasing calculator"};
    app.set_version_flag("--version", std::string(fs::kVersion));
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "Config file ([circuit], [noise], [run] sections)");
        sub->add_option("--preset", o.preset, "Parameter preset: fluxonium|fig2|fig3|fig4a|fig4b");
        sub->add_option("--out", o.out, "Output path (CSV; JSON for verify)");
        sub->add_option("--grid-n", o.grid_n, "Number of flux grid points");
        sub->add_option("--dim", o.dim, "Fock-basis truncation");
        sub->add_option("--mode", o.mode, "Noise mode: global-only|uncorrelated|correlated");
    };
    auto* spectrum = app.add_subcommand("spectrum", "Transition frequencies along the constrained flux line");
    auto* sweetspots = app.add_subcommand("sweetspots", "Numeric and analytic flux sweet spots");
    auto* dephasing = app.add_subcommand("dephasing", "1/f flux-noise dephasing profile");
    auto* verify = app.add_subcommand("verify", "Solver cross-checks and invariants");
    for (auto* s : {spectrum, sweetspots, dephasing, verify}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        const fs::RunConfig c = resolve(o);
        if (spectrum->parsed()) return emit(fs::cmd_spectrum(c), c, "spectrum");
        if (sweetspots->parsed()) return emit(fs::cmd_sweetspots(c), c, "sweetspots");
        if (dephasing->parsed()) return emit(fs::cmd_dephasing(c), c, "dephasing");
        return run_verify(c);
    } catch (const fs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const fs::GridTooCoarseError& e) {
        std::cerr << "numeric error: " << e.what() << "; rerun with sweet_grid_n >= " << e.suggested_grid_n()
                  << "\n";
        return numeric_error;
    } catch (const fs::NumericalError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return numeric_error;
    } catch (const fs::OutputError& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return io_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return numeric_error;
    }
}
