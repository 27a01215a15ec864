#pragma once

// Run configuration and its key-value file format:
//
//   # comment
//   [circuit]
//   ec_ghz = 6.0
//   [noise]
//   a_s_phi0 = 5e-6
//   [run]
//   mode = "global-only"
//
// Values are numbers, true/false, or double-quoted strings. Every physical key
// carries its unit in the name.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "flatsonium/circuit.hpp"
#include "flatsonium/error.hpp"
#include "flatsonium/noise.hpp"
#include "flatsonium/spectrum.hpp"

namespace flatsonium {

enum class DephasingMode { global_only, uncorrelated, correlated };

inline std::string to_string(DephasingMode m) {
    switch (m) {
        case DephasingMode::global_only: return "global-only";
        case DephasingMode::uncorrelated: return "uncorrelated";
        case DephasingMode::correlated: return "correlated";
    }
    return "correlated";
}

inline DephasingMode parse_mode(std::string_view s) {
    if (s == "global-only") return DephasingMode::global_only;
    if (s == "uncorrelated") return DephasingMode::uncorrelated;
    if (s == "correlated") return DephasingMode::correlated;
    throw ConfigError("unknown dephasing mode '" + std::string(s) + "' (expected global-only|uncorrelated|correlated)");
}

/// Noise model a dephasing run actually uses once the mode is applied.
inline NoiseModel effective_noise(NoiseModel model, DephasingMode mode) {
    switch (mode) {
        case DephasingMode::global_only: model.a_d = 0.0; break;
        case DephasingMode::uncorrelated: model.c_sd = 0.0; break;
        case DephasingMode::correlated: break;
    }
    return model;
}

struct RunConfig {
    CircuitParams params{};
    NoiseModel noise{};
    std::size_t grid_n = kDefaultFigureGrid;
    double grid_min = 0.0;  ///< Phi_2 / Phi_0
    double grid_max = 1.0;
    std::size_t dim = kDefaultDim;
    std::vector<Transition> transitions = default_transitions();
    std::string output_path;
    DephasingMode mode = DephasingMode::global_only;
    bool self_consistent = false;
    double step_phi0 = kDefaultFluxStep;
    double slope_tol = kDefaultSlopeTol;
    double plateau_ghz = kDefaultPlateauGhz;
    std::size_t sweet_grid_n = kDefaultSeedGrid;

    std::vector<double> grid() const { return uniform_grid(grid_n, grid_min, grid_max); }

    void validate() const {
        try {
            params.validate();
            noise.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (grid_n < 1) throw ConfigError("[run] grid_n must be >= 1");
        if (!(grid_max > grid_min) && grid_n > 1) throw ConfigError("[run] grid_max must exceed grid_min");
        if (dim < 2) throw ConfigError("[run] dim must be >= 2");
        if (transitions.empty()) throw ConfigError("[run] transitions must not be empty");
        for (const auto& t : transitions) {
            if (t.upper <= t.lower) throw ConfigError("[run] transitions: upper level must exceed lower level");
            if (t.upper >= dim) throw ConfigError("[run] transitions: level index exceeds dim");
        }
        if (!(step_phi0 > 0.0)) throw ConfigError("[run] step_phi0 must be > 0");
        if (!(slope_tol > 0.0)) throw ConfigError("[run] slope_tol_ghz_per_phi0 must be > 0");
        if (!(plateau_ghz >= 0.0)) throw ConfigError("[run] plateau_ghz must be >= 0");
        if (sweet_grid_n < 101) throw ConfigError("[run] sweet_grid_n must be >= 101");
    }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline std::string format_transitions(const std::vector<Transition>& ts) {
    std::string out;
    for (const auto& t : ts) {
        if (!out.empty()) out += ',';
        out += std::to_string(t.lower) + "-" + std::to_string(t.upper);
    }
    return out;
}

inline std::vector<Transition> parse_transitions(std::string_view s) {
    std::vector<Transition> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = std::min(s.find(',', pos), s.size());
        const std::string_view item = s.substr(pos, comma - pos);
        const std::size_t dash = item.find('-');
        if (dash == std::string_view::npos) throw ConfigError("transition '" + std::string(item) + "' is not of the form i-j");
        Transition t;
        const auto lhs = item.substr(0, dash);
        const auto rhs = item.substr(dash + 1);
        if (std::from_chars(lhs.data(), lhs.data() + lhs.size(), t.lower).ec != std::errc{} ||
            std::from_chars(rhs.data(), rhs.data() + rhs.size(), t.upper).ec != std::errc{})
            throw ConfigError("transition '" + std::string(item) + "' has non-integer levels");
        out.push_back(t);
        pos = comma + 1;
    }
    return out;
}

namespace config_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Shortest text that parses back to the same double.
inline std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Value {
    std::string text;
    bool quoted = false;
    std::size_t line = 0;
};

inline std::string where(const std::string& key, std::size_t line) {
    return "line " + std::to_string(line) + ", field " + key + ": ";
}

inline double as_double(const std::string& key, const Value& v) {
    if (v.quoted) throw ConfigError(where(key, v.line) + "expected a number, got a string");
    double out = 0.0;
    const auto* first = v.text.data();
    const auto* last = first + v.text.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(out))
        throw ConfigError(where(key, v.line) + "'" + v.text + "' is not a finite number");
    return out;
}

inline std::size_t as_count(const std::string& key, const Value& v) {
    const double d = as_double(key, v);
    if (d < 0.0 || d != std::floor(d) || d > 1e9) throw ConfigError(where(key, v.line) + "expected a non-negative integer");
    return static_cast<std::size_t>(d);
}

inline bool as_bool(const std::string& key, const Value& v) {
    if (!v.quoted && v.text == "true") return true;
    if (!v.quoted && v.text == "false") return false;
    throw ConfigError(where(key, v.line) + "expected true or false");
}

inline std::string as_string(const std::string& key, const Value& v) {
    if (!v.quoted) throw ConfigError(where(key, v.line) + "expected a double-quoted string");
    return v.text;
}

}  // namespace config_detail

/// Applies the keys in `text` on top of `base`. Unknown sections or keys, and
/// malformed values, raise ConfigError naming the line and field.
inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
    using namespace config_detail;
    std::map<std::string, Value> entries;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        // Strip comments outside quotes.
        bool in_quotes = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quotes = !in_quotes;
            if (line[i] == '#' && !in_quotes) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "circuit" && section != "noise" && section != "run")
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside of a section");
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        std::string_view raw = trim(line.substr(eq + 1));
        Value v;
        v.line = line_no;
        if (!raw.empty() && raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"') throw ConfigError(where(key, line_no) + "unterminated string");
            v.text = std::string(raw.substr(1, raw.size() - 2));
            v.quoted = true;
        } else {
            v.text = std::string(raw);
        }
        if (v.text.empty() && !v.quoted) throw ConfigError(where(key, line_no) + "missing value");
        if (entries.count(key)) throw ConfigError(where(key, line_no) + "duplicate key");
        entries.emplace(key, std::move(v));
    }

    RunConfig c = std::move(base);
    for (const auto& [key, v] : entries) {
        if (key == "circuit.ec_ghz") c.params.ec_ghz = as_double(key, v);
        else if (key == "circuit.el_ghz") c.params.el_ghz = as_double(key, v);
        else if (key == "circuit.ej_sum_ghz") c.params.ej_sum_ghz = as_double(key, v);
        else if (key == "circuit.b") c.params.b = as_double(key, v);
        else if (key == "circuit.r") c.params.r = as_double(key, v);
        else if (key == "noise.a_s_phi0") c.noise.a_s = as_double(key, v);
        else if (key == "noise.a_d_phi0") c.noise.a_d = as_double(key, v);
        else if (key == "noise.c_sd") c.noise.c_sd = as_double(key, v);
        else if (key == "noise.log_factor") c.noise.log_factor = as_double(key, v);
        else if (key == "noise.alpha") c.noise.alpha = as_double(key, v);
        else if (key == "noise.f_ir_hz") c.noise.f_ir_hz = as_double(key, v);
        else if (key == "noise.self_consistent") c.self_consistent = as_bool(key, v);
        else if (key == "run.grid_n") c.grid_n = as_count(key, v);
        else if (key == "run.grid_min_phi0") c.grid_min = as_double(key, v);
        else if (key == "run.grid_max_phi0") c.grid_max = as_double(key, v);
        else if (key == "run.dim") c.dim = as_count(key, v);
        else if (key == "run.transitions") {
            try {
                c.transitions = parse_transitions(as_string(key, v));
            } catch (const ConfigError& e) {
                throw ConfigError(where(key, v.line) + e.what());
            }
        }
        else if (key == "run.output_path") c.output_path = as_string(key, v);
        else if (key == "run.mode") {
            try {
                c.mode = parse_mode(as_string(key, v));
            } catch (const ConfigError& e) {
                throw ConfigError(where(key, v.line) + e.what());
            }
        }
        else if (key == "run.step_phi0") c.step_phi0 = as_double(key, v);
        else if (key == "run.slope_tol_ghz_per_phi0") c.slope_tol = as_double(key, v);
        else if (key == "run.plateau_ghz") c.plateau_ghz = as_double(key, v);
        else if (key == "run.sweet_grid_n") c.sweet_grid_n = as_count(key, v);
        else throw ConfigError(where(key, v.line) + "unknown key");
    }
    c.validate();
    return c;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline std::string serialize_config(const RunConfig& c) {
    using config_detail::fmt;
    std::ostringstream out;
    out << "[circuit]\n"
        << "ec_ghz = " << fmt(c.params.ec_ghz) << "\n"
        << "el_ghz = " << fmt(c.params.el_ghz) << "\n"
        << "ej_sum_ghz = " << fmt(c.params.ej_sum_ghz) << "\n"
        << "b = " << fmt(c.params.b) << "\n"
        << "r = " << fmt(c.params.r) << "\n"
        << "\n[noise]\n"
        << "a_s_phi0 = " << fmt(c.noise.a_s) << "\n"
        << "a_d_phi0 = " << fmt(c.noise.a_d) << "\n"
        << "c_sd = " << fmt(c.noise.c_sd) << "\n"
        << "log_factor = " << fmt(c.noise.log_factor) << "\n"
        << "alpha = " << fmt(c.noise.alpha) << "\n"
        << "f_ir_hz = " << fmt(c.noise.f_ir_hz) << "\n"
        << "self_consistent = " << (c.self_consistent ? "true" : "false") << "\n"
        << "\n[run]\n"
        << "grid_n = " << c.grid_n << "\n"
        << "grid_min_phi0 = " << fmt(c.grid_min) << "\n"
        << "grid_max_phi0 = " << fmt(c.grid_max) << "\n"
        << "dim = " << c.dim << "\n"
        << "transitions = \"" << format_transitions(c.transitions) << "\"\n"
        << "output_path = \"" << c.output_path << "\"\n"
        << "mode = \"" << to_string(c.mode) << "\"\n"
        << "step_phi0 = " << fmt(c.step_phi0) << "\n"
        << "slope_tol_ghz_per_phi0 = " << fmt(c.slope_tol) << "\n"
        << "plateau_ghz = " << fmt(c.plateau_ghz) << "\n"
        << "sweet_grid_n = " << c.sweet_grid_n << "\n";
    return out.str();
}

/// Named parameter sets: fluxonium reference, spectrum, and the three noise scenarios.
inline RunConfig preset(std::string_view name) {
    RunConfig c;
    if (name == "fig2") return c;
    if (name == "fluxonium") {
        c.params.b = 0.0;
        c.params.r = 0.0;
        return c;
    }
    if (name == "fig3") {
        c.grid_n = 501;
        c.mode = DephasingMode::global_only;
        return c;
    }
    if (name == "fig4a") {
        c.grid_n = 501;
        c.noise.a_d = 1e-6;
        c.noise.c_sd = 0.0;
        c.mode = DephasingMode::uncorrelated;
        return c;
    }
    if (name == "fig4b") {
        c.grid_n = 501;
        c.noise.a_d = 1e-6;
        c.noise.c_sd = 1.0;
        c.mode = DephasingMode::correlated;
        return c;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected fluxonium|fig2|fig3|fig4a|fig4b)");
}

}  // namespace flatsonium
