// scenarios.hpp — The five study scenarios behind the CLI subcommands. Each
// writer emits deterministic CSV: '#'-prefixed provenance lines carrying the
// fully resolved configuration, a header row, then the data rows.

#pragma once

#include "qdbell/config.hpp"

#include <iosfwd>

namespace qdbell::cli {

// Dispatches on cfg.scenario. `out` receives the CSV; `diag` receives
// warnings (truncation tail, positivity monitor). Throws ConfigError /
// NumericalError for the CLI to map onto exit codes 2 / 1.
void run_scenario(const RunConfig& cfg, std::ostream& out, std::ostream& diag);

// (n, theta, Omega, E_d, E_plus, E_minus) per photon sector n in [0, nmax).
void cmd_dressed(const RunConfig& cfg, std::ostream& out, std::ostream& diag);
// (t, P1): coherent-field-averaged one-exciton population.
void cmd_rabi(const RunConfig& cfg, std::ostream& out, std::ostream& diag);
// (t, P_plus, P_minus, ratio) for the post-selected sector state.
void cmd_bell(const RunConfig& cfg, std::ostream& out, std::ostream& diag);
// Single record (T, residual_P_plus, cosine_condition_residual).
void cmd_pulse(const RunConfig& cfg, std::ostream& out, std::ostream& diag);
// (t, P_plus, P_minus, P_minus_perturbative, trace_err) under dephasing.
void cmd_decohere(const RunConfig& cfg, std::ostream& out, std::ostream& diag);

} // namespace qdbell::cli
