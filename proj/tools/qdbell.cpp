// qdbell — command-line front end: configures the model, runs one of the five
// study scenarios and writes deterministic CSV.
//
//   qdbell <scenario> [--alpha R] [--omega R] [--w R] [--a R] [--gamma R]
//          [--n N] [--nmax N] [--tmax R] [--steps N] [--config PATH]
//          [--out PATH] [--units absolute|omega]
//
// Precedence: command-line flags > config file > built-in defaults.
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include "qdbell/errors.hpp"
#include "qdbell/scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    using namespace qdbell;

    CLI::App app{"Bell-state preparation in two coupled quantum dots driven by a quantized laser mode"};
    app.name("qdbell");

    std::string scenario_arg;
    app.add_option("scenario", scenario_arg, "dressed|rabi|bell|pulse|decohere")->required();

    double alpha = 0, omega = 0, interdot = 0, drive = 0, gamma = 0, tmax = 0;
    int sector = 0, nmax = 0, steps = 0;
    std::string config_path, out_path, units_arg;

    auto* alpha_opt = app.add_option("--alpha", alpha, "coherent-state amplitude of the field");
    auto* omega_opt = app.add_option("--omega", omega, "laser angular frequency");
    auto* w_opt = app.add_option("--w", interdot, "interdot interaction W");
    auto* a_opt = app.add_option("--a", drive, "drive amplitude A");
    auto* gamma_opt = app.add_option("--gamma", gamma, "pure-dephasing rate");
    auto* n_opt = app.add_option("--n", sector, "photon sector index n");
    auto* nmax_opt = app.add_option("--nmax", nmax, "Fock-space truncation");
    auto* tmax_opt = app.add_option("--tmax", tmax, "time window length");
    auto* steps_opt = app.add_option("--steps", steps, "number of grid steps");
    auto* config_opt = app.add_option("--config", config_path, "key = value config file");
    auto* out_opt = app.add_option("--out", out_path, "output CSV path (default stdout)");
    auto* units_opt =
        app.add_option("--units", units_arg, "absolute (rad/s, s) or omega (units of omega)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help); // prints help, exit 0
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    }

    try {
        cli::RunConfig cfg;
        cfg.scenario = cli::parse_scenario(scenario_arg);
        if (*config_opt) cli::apply_config_file(cfg, config_path);
        cfg.scenario = cli::parse_scenario(scenario_arg); // positional wins over the file

        if (*units_opt) {
            if (units_arg == "absolute") {
                cfg.units = cli::UnitsMode::Absolute;
            } else if (units_arg == "omega") {
                cfg.units = cli::UnitsMode::Omega;
            } else {
                throw ConfigError("--units must be 'absolute' or 'omega'");
            }
        }
        if (*alpha_opt) cfg.alpha = alpha;
        if (*omega_opt) cfg.omega = omega;
        if (*w_opt) cfg.interdot = interdot;
        if (*a_opt) cfg.drive = drive;
        if (*gamma_opt) cfg.dephasing = gamma;
        if (*n_opt) cfg.sector = sector;
        if (*nmax_opt) cfg.fock_cutoff = nmax;
        if (*tmax_opt) cfg.t_max = tmax;
        if (*steps_opt) cfg.steps = steps;
        if (*out_opt) cfg.out_path = out_path;

        if (!cfg.out_path.empty()) {
            std::ofstream file(cfg.out_path, std::ios::binary);
            if (!file) throw ConfigError("cannot open output file '" + cfg.out_path + "'");
            cli::run_scenario(cfg, file, std::cerr);
        } else {
            cli::run_scenario(cfg, std::cout, std::cerr);
        }
        return 0;
    } catch (const ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 2;
    } catch (const NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
