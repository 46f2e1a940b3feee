#include "qdbell/scenarios.hpp"

#include "qdbell/decoherence.hpp"
#include "qdbell/dynamics.hpp"
#include "qdbell/errors.hpp"
#include "qdbell/measurement.hpp"

#include <ostream>
#include <sstream>
#include <vector>

namespace qdbell::cli {

namespace {

void write_provenance(const RunConfig& resolved, std::ostream& out) {
    std::istringstream lines(serialize(resolved));
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
}

std::vector<double> uniform_grid(double t_max, int steps) {
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        grid[static_cast<std::size_t>(k)] = t_max * static_cast<double>(k) / steps;
    }
    return grid;
}

} // namespace

void cmd_dressed(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const RunConfig resolved = resolve(cfg);
    const model::ModelParams params = to_model_params(resolved);
    const double scale = unit_scale(resolved);

    // n = 0 has the tightest E0 = E2 tolerance scale; validate before any
    // output is written
    model::dressed_block(params, 0);

    write_provenance(resolved, out);
    out << "n,theta,Omega,E_d,E_plus,E_minus\n";
    for (int n = 0; n < *resolved.fock_cutoff; ++n) {
        const model::DressedBlock block = model::dressed_block(params, n);
        out << n << ',' << format_sci(block.theta) << ',' << format_sci(block.omega * scale)
            << ',' << format_sci(block.e_dark * scale) << ','
            << format_sci(block.e_plus * scale) << ',' << format_sci(block.e_minus * scale)
            << '\n';
    }
}

void cmd_rabi(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    const RunConfig resolved = resolve(cfg);
    if (!(resolved.alpha > 0.0)) throw ConfigError("rabi: alpha must be positive");
    const model::ModelParams params = to_model_params(resolved);
    const double scale = unit_scale(resolved);

    const auto series = dynamics::exciton_population_series(
        params, *resolved.t_max * scale, *resolved.steps);
    if (series.truncation_tail > 1e-8) {
        diag << "warning: Poisson tail mass beyond nmax is " << format_sci(series.truncation_tail)
             << " (> 1e-8); raise nmax\n";
    }

    write_provenance(resolved, out);
    out << "t,P1\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        out << format_sci(series.times[k] / scale) << ',' << format_sci(series.p1[k]) << '\n';
    }
}

void cmd_bell(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const RunConfig resolved = resolve(cfg);
    const model::ModelParams params = to_model_params(resolved);
    const double scale = unit_scale(resolved);
    const int n = resolved.sector;
    model::dressed_block(params, n); // fail before writing if E0 != E2

    write_provenance(resolved, out);
    out << "t,P_plus,P_minus,ratio\n";
    const auto grid = uniform_grid(*resolved.t_max * scale, *resolved.steps);
    for (double t : grid) {
        const auto bell =
            measure::bell_decompose(measure::post_select(dynamics::psi_components(params, n, t)));
        out << format_sci(t / scale) << ',' << format_sci(bell.p_plus) << ','
            << format_sci(bell.p_minus) << ',' << format_sci(bell.ratio) << '\n';
    }
}

void cmd_pulse(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const RunConfig resolved = resolve(cfg);
    const model::ModelParams params = to_model_params(resolved);
    const double scale = unit_scale(resolved);

    const auto sol =
        measure::solve_pulse_length(params, resolved.sector, 0.0, *resolved.t_max * scale);

    write_provenance(resolved, out);
    out << "T,residual_P_plus,cosine_condition_residual\n";
    out << format_sci(sol.pulse_length / scale) << ',' << format_sci(sol.residual_p_plus) << ','
        << format_sci(sol.cosine_condition_residual) << '\n';
}

void cmd_decohere(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    const RunConfig resolved = resolve(cfg);
    const model::ModelParams params = to_model_params(resolved);
    const double scale = unit_scale(resolved);
    const int n = resolved.sector;
    const double gamma = params.dephasing;

    const auto grid = uniform_grid(*resolved.t_max * scale, *resolved.steps);

    decoherence::DensityMatrix rho0 = decoherence::DensityMatrix::Zero(3, 3);
    rho0(1, 1) = 1.0; // |0,n+1><0,n+1|
    const auto exact = decoherence::integrate_master_block(params, n, rho0, grid);
    if (exact.min_eigenvalue < -1e-8) {
        diag << "warning: positivity monitor tripped (min eigenvalue "
             << format_sci(exact.min_eigenvalue) << ")\n";
    }

    // Perturbative reference: second order when dephasing is on.
    const int order = gamma > 0.0 ? 2 : 0;
    const auto series = decoherence::perturbative_hierarchy_block(params, n, grid, order);

    write_provenance(resolved, out);
    out << "t,P_plus,P_minus,P_minus_perturbative,trace_err\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto exact_out = decoherence::post_selected_output_block(exact.states[k]);

        decoherence::DensityMatrix pert = series.rho_zero[k];
        if (order >= 1) pert += gamma * series.rho_one[k];
        if (order >= 2) pert += 0.5 * gamma * gamma * series.rho_two[k];
        const auto pert_out = decoherence::post_selected_output_block(pert);

        const double trace_err = std::abs(exact.states[k].trace().real() - 1.0);
        out << format_sci(grid[k] / scale) << ',' << format_sci(exact_out.p_plus) << ','
            << format_sci(exact_out.p_minus) << ',' << format_sci(pert_out.p_minus) << ','
            << format_sci(trace_err) << '\n';
    }
}

void run_scenario(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    switch (cfg.scenario) {
        case Scenario::Dressed: cmd_dressed(cfg, out, diag); return;
        case Scenario::Rabi: cmd_rabi(cfg, out, diag); return;
        case Scenario::Bell: cmd_bell(cfg, out, diag); return;
        case Scenario::Pulse: cmd_pulse(cfg, out, diag); return;
        case Scenario::Decohere: cmd_decohere(cfg, out, diag); return;
    }
    throw std::logic_error("run_scenario: bad scenario");
}

} // namespace qdbell::cli
