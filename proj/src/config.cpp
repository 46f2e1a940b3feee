#include "qdbell/config.hpp"

#include "qdbell/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qdbell::cli {

std::string format_sci(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::scientific, 16);
    if (ec != std::errc{}) throw std::runtime_error("format_sci: conversion failed");
    return std::string(buf, ptr);
}

double unit_scale(const RunConfig& cfg) {
    return cfg.units == UnitsMode::Absolute ? cfg.omega : 1.0;
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Dressed: return "dressed";
        case Scenario::Rabi: return "rabi";
        case Scenario::Bell: return "bell";
        case Scenario::Pulse: return "pulse";
        case Scenario::Decohere: return "decohere";
    }
    throw std::logic_error("scenario_name: bad scenario");
}

Scenario parse_scenario(const std::string& name) {
    if (name == "dressed") return Scenario::Dressed;
    if (name == "rabi") return Scenario::Rabi;
    if (name == "bell") return Scenario::Bell;
    if (name == "pulse") return Scenario::Pulse;
    if (name == "decohere") return Scenario::Decohere;
    throw ConfigError("unknown scenario '" + name +
                      "' (expected dressed|rabi|bell|pulse|decohere)");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + value);
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("config: bad integer value for '" + key + "': " + value);
    }
    return out;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") {
        cfg.scenario = parse_scenario(value);
    } else if (key == "units") {
        if (value == "absolute") {
            cfg.units = UnitsMode::Absolute;
        } else if (value == "omega") {
            cfg.units = UnitsMode::Omega;
        } else {
            throw ConfigError("config: units must be 'absolute' or 'omega', got " + value);
        }
    } else if (key == "alpha") {
        cfg.alpha = parse_double(key, value);
    } else if (key == "omega") {
        cfg.omega = parse_double(key, value);
    } else if (key == "e") {
        cfg.band_gap = parse_double(key, value);
    } else if (key == "w") {
        cfg.interdot = parse_double(key, value);
    } else if (key == "a") {
        cfg.drive = parse_double(key, value);
    } else if (key == "gamma") {
        cfg.dephasing = parse_double(key, value);
    } else if (key == "e0" || key == "e1" || key == "e2") {
        auto levels = cfg.energy_override.value_or(std::array<double, 3>{0.0, 0.0, 0.0});
        levels[static_cast<std::size_t>(key[1] - '0')] = parse_double(key, value);
        cfg.energy_override = levels;
    } else if (key == "n") {
        cfg.sector = parse_int(key, value);
    } else if (key == "nmax") {
        cfg.fock_cutoff = parse_int(key, value);
    } else if (key == "tmax") {
        cfg.t_max = parse_double(key, value);
    } else if (key == "steps") {
        cfg.steps = parse_int(key, value);
    } else if (key == "out") {
        cfg.out_path = value;
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

} // namespace

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not of the form key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config: empty key on line " + std::to_string(lineno));
        }
        apply_key(cfg, key, value);
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(cfg, text.str());
}

RunConfig resolve(const RunConfig& cfg) {
    RunConfig out = cfg;
    const double scale = unit_scale(out);
    if (!(scale > 0.0)) throw ConfigError("config: omega must be positive");
    if (!out.interdot) out.interdot = 0.1 * scale;
    if (!out.drive) out.drive = 0.4 * *out.interdot;
    if (out.alpha < 0.0) throw ConfigError("config: alpha must be >= 0");
    if (out.dephasing < 0.0) throw ConfigError("config: gamma must be >= 0");
    if (out.sector < 0) throw ConfigError("config: n must be >= 0");
    const bool uses_sector = out.scenario == Scenario::Bell || out.scenario == Scenario::Pulse ||
                             out.scenario == Scenario::Decohere;
    if (!out.fock_cutoff) {
        out.fock_cutoff = model::default_fock_truncation(out.alpha);
        if (uses_sector) out.fock_cutoff = std::max(*out.fock_cutoff, out.sector + 2);
    }
    if (*out.fock_cutoff < 1) throw ConfigError("config: nmax must be >= 1");
    if (uses_sector && out.sector >= *out.fock_cutoff) {
        throw ConfigError("config: sector n must satisfy n < nmax");
    }

    // Scenario-dependent time window and sampling density (internal units
    // first, reported back in input units).
    model::ModelParams params = to_model_params(out);
    const auto [e0, e1, e2] = model::energies(params);
    const double detuning = e1 - e0;

    auto sector_splitting = [&](int n) {
        const double omega1 = std::sqrt(2.0 * (n + 1.0)) * params.drive;
        return std::sqrt(8.0 * omega1 * omega1 + detuning * detuning);
    };

    if (!out.t_max) {
        double t_internal = 0.0;
        switch (out.scenario) {
            case Scenario::Dressed:
                t_internal = 1.0; // unused
                break;
            case Scenario::Rabi: {
                // Revival sits near 2*pi / (dOmega/dn); pad by half again.
                const double mean = model::mean_rabi_frequency(params);
                const double slope = 8.0 * params.drive * params.drive / mean;
                t_internal = 1.5 * (2.0 * std::numbers::pi / slope);
                break;
            }
            case Scenario::Bell:
            case Scenario::Pulse:
                t_internal = 3.0 * (2.0 * std::numbers::pi / sector_splitting(out.sector));
                break;
            case Scenario::Decohere:
                t_internal = params.dephasing > 0.0
                                 ? 0.1 / params.dephasing
                                 : 3.0 * (2.0 * std::numbers::pi / sector_splitting(out.sector));
                break;
        }
        if (!std::isfinite(t_internal)) {
            throw ConfigError(
                "config: cannot derive a default tmax (no oscillation scale; set tmax)");
        }
        out.t_max = t_internal / scale;
    }
    if (out.scenario != Scenario::Dressed &&
        !(*out.t_max > 0.0 && std::isfinite(*out.t_max))) {
        throw ConfigError("config: tmax must be positive and finite");
    }

    if (!out.steps) {
        const double t_internal = *out.t_max * scale;
        switch (out.scenario) {
            case Scenario::Dressed:
            case Scenario::Pulse:
                out.steps = 1; // no sampled grid
                break;
            case Scenario::Rabi: {
                // Resolve the fastest populated sector: >= 40 samples per its
                // Rabi period.
                const double fastest = sector_splitting(*out.fock_cutoff - 1);
                const double dt_rule = (2.0 * std::numbers::pi / fastest) / 40.0;
                out.steps = std::max(2000, static_cast<int>(std::ceil(t_internal / dt_rule)));
                break;
            }
            case Scenario::Bell:
                out.steps = 2000;
                break;
            case Scenario::Decohere:
                out.steps = 1000;
                break;
        }
    }
    if (*out.steps < 1) throw ConfigError("config: steps must be >= 1");
    return out;
}

model::ModelParams to_model_params(const RunConfig& cfg) {
    const double scale = unit_scale(cfg);
    if (!(scale > 0.0)) throw ConfigError("config: omega must be positive");

    model::ModelParams params;
    params.laser_freq = 1.0;
    params.band_gap = cfg.band_gap / scale;
    params.interdot = cfg.interdot.value_or(0.1 * scale) / scale;
    params.drive = cfg.drive.value_or(0.4 * cfg.interdot.value_or(0.1 * scale)) / scale;
    params.dephasing = cfg.dephasing / scale;
    params.alpha = cfg.alpha;
    params.fock_cutoff = cfg.fock_cutoff.value_or(
        std::max(model::default_fock_truncation(cfg.alpha), cfg.sector + 2));
    if (cfg.energy_override) {
        const auto& levels = *cfg.energy_override;
        params.energy_override =
            model::EnergyLevels{levels[0] / scale, levels[1] / scale, levels[2] / scale};
    }
    try {
        params.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return params;
}

std::string serialize(const RunConfig& cfg) {
    std::ostringstream out;
    out << "scenario = " << scenario_name(cfg.scenario) << '\n';
    out << "units = " << (cfg.units == UnitsMode::Absolute ? "absolute" : "omega") << '\n';
    out << "alpha = " << format_sci(cfg.alpha) << '\n';
    out << "omega = " << format_sci(cfg.omega) << '\n';
    out << "e = " << format_sci(cfg.band_gap) << '\n';
    if (cfg.interdot) out << "w = " << format_sci(*cfg.interdot) << '\n';
    if (cfg.drive) out << "a = " << format_sci(*cfg.drive) << '\n';
    out << "gamma = " << format_sci(cfg.dephasing) << '\n';
    if (cfg.energy_override) {
        out << "e0 = " << format_sci((*cfg.energy_override)[0]) << '\n';
        out << "e1 = " << format_sci((*cfg.energy_override)[1]) << '\n';
        out << "e2 = " << format_sci((*cfg.energy_override)[2]) << '\n';
    }
    out << "n = " << cfg.sector << '\n';
    if (cfg.fock_cutoff) out << "nmax = " << *cfg.fock_cutoff << '\n';
    if (cfg.t_max) out << "tmax = " << format_sci(*cfg.t_max) << '\n';
    if (cfg.steps) out << "steps = " << *cfg.steps << '\n';
    if (!cfg.out_path.empty()) out << "out = " << cfg.out_path << '\n';
    return out.str();
}

} // namespace qdbell::cli
