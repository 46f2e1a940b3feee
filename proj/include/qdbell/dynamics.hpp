// dynamics.hpp — Closed-system evolution inside a photon sector and the
// coherent-field-averaged exciton population with its collapse/revival
// envelope metrics.

#pragma once

#include "qdbell/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qdbell::dynamics {

using linalg::Complex;
using model::DressedBlock;
using model::ModelParams;

// Amplitudes on one photon sector, basis (|1,n>, |0,n+1>, |2,n+1>).
struct BlockAmplitudes {
    int n = 0;
    Complex c1{}; // |1,n>
    Complex c0{}; // |0,n+1>
    Complex c2{}; // |2,n+1>

    double norm2() const { return std::norm(c1) + std::norm(c0) + std::norm(c2); }
};

// c(t) = sum_a exp(-i E_a t) (B_a . c_init) B_a over the dressed rows.
BlockAmplitudes evolve_block(const DressedBlock& block, const BlockAmplitudes& c_init, double t);

// Closed-form sector amplitudes for the initial state |0,n+1> (E0 = E2):
//   c0 =  s^2/2 e^{-iE+t} + c^2/2 e^{-iE-t} + 1/2 e^{-iEd t}
//   c2 =  same with -1/2 e^{-iEd t}
//   c1 =  (sqrt2/2) s c (e^{-iE+t} - e^{-iE-t}),   s = sin(theta/2), c = cos(theta/2).
BlockAmplitudes psi_components(const ModelParams& params, int n, double t);

// Joint exciton ⊗ field state for sector-diagonal evolutions: one amplitude
// triple per coupled sector plus the uncoupled |0,0> amplitude.
struct JointState {
    Complex vacuum{};                     // |0,0>
    std::vector<BlockAmplitudes> sectors; // n = 0 .. n_max-1

    double norm2() const;
    // Probability of finding one exciton: sum over sectors of |c1|^2.
    double p_one() const;
};

// |0> ⊗ |alpha> with Poisson amplitudes sqrt(P(m)) on the photon ladder.
JointState coherent_initial(const ModelParams& params);

JointState evolve(const ModelParams& params, const JointState& state, double t);

// P1(t) = sum_n P(n+1) |c1^(n)(t)|^2 with Poisson weights P.
double exciton_population(const ModelParams& params, double t);

struct PopulationSeries {
    std::vector<double> times;
    std::vector<double> p1;
    double truncation_tail = 0.0; // Poisson mass beyond the Fock cutoff
};

// Uniform grid with t_steps+1 samples on [0, t_max].
PopulationSeries exciton_population_series(const ModelParams& params, double t_max, int t_steps);

// --------------------------- collapse / revival ------------------------------

struct CollapseMetrics {
    std::optional<double> collapse_time; // envelope < 20% of initial, 3 windows long
    std::optional<double> revival_time;  // first later envelope maximum >= 50%
    double initial_envelope = 0.0;
};

// Envelope analysis of a uniformly sampled P1(t). The window is one Rabi
// period 2*pi/rabi_frequency; the series must resolve the fastest sector
// (>= 40 samples per 2*pi/Omega_max, throws std::invalid_argument otherwise).
CollapseMetrics collapse_metrics(std::span<const double> times, std::span<const double> p1,
                                 double rabi_frequency, double fastest_rabi_frequency);

// Convenience overload: frequencies derived from params (mean and cutoff-edge
// sector Rabi frequencies).
CollapseMetrics collapse_metrics(const ModelParams& params, const PopulationSeries& series);

} // namespace qdbell::dynamics
