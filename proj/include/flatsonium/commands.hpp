#pragma once

// Command bodies behind the CLI. Each returns its artifacts as strings so the
// output is testable without touching the filesystem; write_artifact() puts
// them on disk next to each other.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flatsonium/circuit.hpp"
#include "flatsonium/config.hpp"
#include "flatsonium/error.hpp"
#include "flatsonium/noise.hpp"
#include "flatsonium/spectrum.hpp"

namespace flatsonium {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr double kSpotMatchTol = 1e-3;  // Phi_0

struct Artifact {
    std::string csv;
    std::string gnuplot;  ///< plot script; `@CSV@` is replaced by the CSV file name on write
    std::string report;   ///< human-readable text, printed to stdout
    std::string note;     ///< sidecar note, written only when nonempty
};

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scientific notation with 15 significant digits; infinity becomes an empty cell.
inline std::string csv_number(double v) {
    if (std::isinf(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14e", v);
    return buf;
}

inline std::string metadata_header(const RunConfig& c, const std::string& command) {
    std::ostringstream h;
    h << "# flatsonium " << kVersion << " " << command << "\n"
      << "# ec_ghz=" << csv_number(c.params.ec_ghz) << " el_ghz=" << csv_number(c.params.el_ghz)
      << " ej_sum_ghz=" << csv_number(c.params.ej_sum_ghz) << " b=" << csv_number(c.params.b)
      << " r=" << csv_number(c.params.r) << "\n"
      << "# dim=" << c.dim << " grid_n=" << c.grid_n << " grid_min_phi0=" << csv_number(c.grid_min)
      << " grid_max_phi0=" << csv_number(c.grid_max) << "\n";
    return h.str();
}

namespace commands_detail {

inline std::string noise_header(const NoiseModel& m, DephasingMode mode, bool self_consistent, double step) {
    std::ostringstream h;
    h << "# mode=" << to_string(mode) << " a_s_phi0=" << csv_number(m.a_s) << " a_d_phi0=" << csv_number(m.a_d)
      << " c_sd=" << csv_number(m.c_sd) << " log_factor=" << csv_number(m.log_factor)
      << " self_consistent=" << (self_consistent ? "true" : "false") << " f_ir_hz=" << csv_number(m.f_ir_hz)
      << " step_phi0=" << csv_number(step) << "\n";
    return h.str();
}

inline std::string plot_preamble(const std::string& title, const std::string& ylabel) {
    return "set datafile separator ','\n"
           "set datafile commentschars '#'\n"
           "set key autotitle columnhead\n"
           "set title '" + title + "'\n"
           "set xlabel 'Phi_2 / Phi_0'\n"
           "set ylabel '" + ylabel + "'\n";
}

}  // namespace commands_detail

/// Transition frequencies along Phi_1 = r Phi_2.
inline Artifact cmd_spectrum(const RunConfig& config) {
    config.validate();
    const auto sweep = sweep_spectrum(config.params, config.grid(), config.transitions, config.dim);

    Artifact a;
    std::ostringstream csv;
    csv << metadata_header(config, "spectrum") << "# transitions=" << format_transitions(config.transitions)
        << " units=GHz\n";
    csv << "phi2_over_phi0,phis_over_r1_phi0";
    for (const auto& t : config.transitions) csv << ",f" << t.lower << t.upper;
    csv << "\n";
    for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
        // Phi_s / (r + 1) equals Phi_2 on the constrained line.
        const std::string x = csv_number(sweep.grid[i]);
        csv << x << "," << x;
        for (double f : sweep.frequencies[i]) csv << "," << csv_number(f);
        csv << "\n";
    }
    a.csv = csv.str();

    std::string plot = commands_detail::plot_preamble("Transition frequencies", "f / GHz") + "plot ";
    for (std::size_t t = 0; t < config.transitions.size(); ++t) {
        if (t) plot += ", \\\n     ";
        plot += "'@CSV@' using 1:" + std::to_string(t + 3) + " with lines";
    }
    a.gnuplot = plot + "\n";

    std::ostringstream rep;
    rep << "spectrum: " << sweep.grid.size() << " points, " << config.transitions.size() << " transitions\n";
    a.report = rep.str();
    return a;
}

struct SweetSpotReport {
    std::vector<SweetSpot> spots;
    std::vector<double> candidates;  ///< empty when no closed form applies
    std::optional<int> predicted;
    std::vector<bool> spot_matches;  ///< spot within kSpotMatchTol of a candidate
    bool count_matches = false;
};

/// Closed-form candidates and count: fluxonium (b = 0, r = 0) at {0, 1/2, 1};
/// integer r > 1 at m / (2r) with r + 3 (even) or r + 4 (odd) spots.
inline SweetSpotReport analyze_sweet_spots(const RunConfig& config) {
    config.validate();
    SweetSpotReport rep;
    rep.spots = find_sweet_spots(config.params, config.dim, config.sweet_grid_n, config.slope_tol,
                                 config.plateau_ghz);
    const auto& p = config.params;
    if (p.b == 0.0 && p.r == 0.0) {
        rep.candidates = {0.0, 0.5, 1.0};
        rep.predicted = 3;
    } else if (p.integer_r() && p.r > 1.0) {
        const int r = static_cast<int>(p.r);
        rep.candidates = analytic_sweet_spot_candidates(r);
        rep.predicted = predicted_sweet_spot_count(r);
    }
    for (const auto& s : rep.spots) {
        bool hit = false;
        for (double c : rep.candidates) hit = hit || std::abs(s.phi2_over_phi0 - c) <= kSpotMatchTol;
        rep.spot_matches.push_back(hit);
    }
    rep.count_matches = rep.predicted && static_cast<int>(rep.spots.size()) == *rep.predicted;
    return rep;
}

inline Artifact cmd_sweetspots(const RunConfig& config) {
    const SweetSpotReport rep = analyze_sweet_spots(config);

    Artifact a;
    std::ostringstream csv;
    csv << metadata_header(config, "sweetspots") << "# sweet_grid_n=" << config.sweet_grid_n
        << " slope_tol_ghz_per_phi0=" << csv_number(config.slope_tol)
        << " plateau_ghz=" << csv_number(config.plateau_ghz) << "\n";
    csv << "phi2_over_phi0,f01_ghz,kind,residual_slope_ghz_per_phi0,candidate_match\n";
    for (std::size_t i = 0; i < rep.spots.size(); ++i) {
        const auto& s = rep.spots[i];
        csv << csv_number(s.phi2_over_phi0) << "," << csv_number(s.f01_ghz) << "," << to_string(s.kind) << ","
            << csv_number(s.residual_slope) << "," << (rep.spot_matches[i] ? "match" : "mismatch") << "\n";
    }
    a.csv = csv.str();
    a.gnuplot = commands_detail::plot_preamble("Sweet spots", "f_01 / GHz") +
                "plot '@CSV@' using 1:2 with points pt 7\n";

    std::ostringstream out;
    out << "sweet spots (" << rep.spots.size() << " found):\n";
    for (std::size_t i = 0; i < rep.spots.size(); ++i) {
        const auto& s = rep.spots[i];
        char line[160];
        std::snprintf(line, sizeof line, "  phi2/phi0 = %.6f  f01 = %.6f GHz  %-7s  |slope| = %.3e  %s\n",
                      s.phi2_over_phi0, s.f01_ghz, to_string(s.kind), s.residual_slope,
                      rep.candidates.empty() ? "" : (rep.spot_matches[i] ? "match" : "mismatch"));
        out << line;
    }
    if (rep.candidates.empty()) {
        out << "analytic candidates: none (no closed form for these parameters)\n";
    } else {
        out << "analytic candidates:";
        for (double c : rep.candidates) out << " " << c;
        out << "\npredicted count: " << *rep.predicted << "\n"
            << "verdict: " << (rep.count_matches ? "count matches prediction" : "count MISMATCH") << "\n";
    }
    a.report = out.str();
    return a;
}

inline Artifact cmd_dephasing(const RunConfig& config) {
    config.validate();
    const NoiseModel noise = effective_noise(config.noise, config.mode);
    const auto prof = dephasing_sweep(config.params, noise, config.grid(), config.step_phi0, config.dim,
                                      config.self_consistent);

    Artifact a;
    std::ostringstream csv;
    csv << metadata_header(config, "dephasing")
        << commands_detail::noise_header(noise, config.mode, config.self_consistent, config.step_phi0)
        << "# units: sens GHz/Phi_0, gamma 1/s, t_phi s; empty t_phi_seconds = infinite\n";
    csv << "phi2_over_phi0,sens_s,sens_d,gamma_s,gamma_d,gamma_total,t_phi_seconds\n";
    std::size_t infinite = 0;
    std::ostringstream rows;
    for (std::size_t i = 0; i < prof.grid.size(); ++i) {
        csv << csv_number(prof.grid[i]) << "," << csv_number(prof.sens_s[i]) << "," << csv_number(prof.sens_d[i])
            << "," << csv_number(prof.gamma_s[i]) << "," << csv_number(prof.gamma_d[i]) << ","
            << csv_number(prof.gamma_total[i]) << "," << csv_number(prof.t_phi[i]) << "\n";
        if (std::isinf(prof.t_phi[i])) {
            ++infinite;
            rows << "  phi2_over_phi0 = " << csv_number(prof.grid[i]) << "\n";
        }
    }
    a.csv = csv.str();
    if (infinite > 0)
        a.note = "t_phi_seconds is left empty where gamma_total is exactly 0 (first-order dephasing vanishes;\n"
                 "T_phi is infinite at this order). Affected rows:\n" + rows.str();

    a.gnuplot = commands_detail::plot_preamble("Pure dephasing time", "T_phi / s") +
                "set logscale y\nplot '@CSV@' using 1:7 with lines\n";

    std::ostringstream out;
    out << "dephasing: " << prof.grid.size() << " points, mode " << to_string(config.mode);
    if (infinite) out << ", " << infinite << " infinite T_phi";
    out << "\n";
    a.report = out.str();
    return a;
}

/// Writes the CSV to `path`, the plot script to `path` with a .gp extension and
/// the note (if any) to `path` + ".note". Returns the paths written.
inline std::vector<std::string> write_artifact(const Artifact& a, const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    auto put = [&](const fs::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot open '" + p.string() + "' for writing");
        f << text;
        f.close();
        if (!f) throw OutputError("failed writing '" + p.string() + "'");
        written.push_back(p.string());
    };
    if (path.has_parent_path() && !fs::is_directory(path.parent_path()))
        throw OutputError("output directory '" + path.parent_path().string() + "' does not exist");
    put(path, a.csv);

    std::string script = a.gnuplot;
    const std::string name = path.filename().string();
    for (std::size_t pos; (pos = script.find("@CSV@")) != std::string::npos;) script.replace(pos, 5, name);
    fs::path gp = path;
    gp.replace_extension(".gp");
    put(gp, script);

    if (!a.note.empty()) put(fs::path(path.string() + ".note"), a.note);
    return written;
}

}  // namespace flatsonium
