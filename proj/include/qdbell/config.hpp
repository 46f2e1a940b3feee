// config.hpp — Run configuration for the CLI scenarios: defaults matching the
// reference operating point (alpha = 5, omega = 1e15, W = 0.1 omega,
// A = 0.4 W), a plain key = value config file, and a canonical serialization
// used both for round-tripping and for the '#' provenance header of every CSV.

#pragma once

#include "qdbell/model.hpp"

#include <array>
#include <optional>
#include <string>

namespace qdbell::cli {

enum class Scenario { Dressed, Rabi, Bell, Pulse, Decohere };

// absolute: inputs are angular frequencies in rad/s and times in seconds;
// omega:    inputs are already in units of the laser frequency (omega = 1).
enum class UnitsMode { Absolute, Omega };

struct RunConfig {
    Scenario scenario = Scenario::Rabi;
    UnitsMode units = UnitsMode::Absolute;

    double alpha = 5.0;
    double omega = 1e15;
    double band_gap = 0.0;                 // key "e"
    std::optional<double> interdot;        // key "w"; default 0.1 * omega scale
    std::optional<double> drive;           // key "a"; default 0.4 * W
    double dephasing = 0.0;                // key "gamma"
    std::optional<std::array<double, 3>> energy_override; // keys e0, e1, e2
    int sector = 10;                       // key "n"
    std::optional<int> fock_cutoff;        // key "nmax"
    std::optional<double> t_max;           // key "tmax"
    std::optional<int> steps;              // key "steps"
    std::string out_path;                  // key "out"; empty = stdout
};

// Copy of the config with every optional resolved (scenario-dependent time
// window, sampling-rule step count, Poisson-tail Fock cutoff).
RunConfig resolve(const RunConfig& cfg);

// Internal model parameters in omega = 1 units.
model::ModelParams to_model_params(const RunConfig& resolved);

// 1 in omega mode, cfg.omega in absolute mode; divides energies and
// multiplies times on the way in.
double unit_scale(const RunConfig& cfg);

const char* scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name); // throws ConfigError

// Applies "key = value" lines ('#' comments, blank lines ignored) on top of
// the current values. Unknown keys and malformed values are ConfigErrors.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);

// Canonical key = value form; parse(serialize(x)) reproduces x exactly.
std::string serialize(const RunConfig& cfg);

// Locale-independent scientific form with 17 significant digits.
std::string format_sci(double value);

} // namespace qdbell::cli
