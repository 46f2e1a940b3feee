// decoherence.hpp — Pure-dephasing master equation, its small-loss expansion
// in the dephasing rate, and the post-selected mixed output.
//
// The master equation integrated here is
//     d rho / dt = -i [H, rho] - Gamma [Jz, [Jz, rho]],
// i.e. the phonon bath reduced to the single Markovian rate Gamma. In the Jz
// eigenbasis the double commutator multiplies element (m, m') by (m - m')^2,
// so coherences decay at Gamma * (m - m')^2 and populations are untouched.

#pragma once

#include "qdbell/dynamics.hpp"
#include "qdbell/ode.hpp"
#include "qdbell/quadrature.hpp"

#include <span>
#include <vector>

namespace qdbell::decoherence {

using linalg::Complex;
using linalg::ComplexMatrix;
using model::ModelParams;

using DensityMatrix = ComplexMatrix;

// [Jz, [Jz, rho]]
ComplexMatrix dephasing_term(const DensityMatrix& rho, const ComplexMatrix& jz);

// Jz restricted to a photon sector, basis (|1,n>, |0,n+1>, |2,n+1>).
ComplexMatrix block_jz();

// Checks Hermiticity (1e-10), unit trace (1e-9) and positivity (-1e-8).
bool is_physical_density(const DensityMatrix& rho);

// --------------------------- exact integration --------------------------------

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    double max_trace_drift = 0.0;
    // Positivity is monitored, not enforced: most negative eigenvalue seen
    // across the stored samples.
    double min_eigenvalue = 0.0;
};

// Adaptive RK 5(4) integration of the master equation, sampled at t_grid
// (ascending, starting at 0). rho0 must be physical. Trace drift beyond 1e-9
// is treated as an integration failure.
Trajectory integrate_master(const ComplexMatrix& h, const ComplexMatrix& jz, double gamma,
                            const DensityMatrix& rho0, std::span<const double> t_grid,
                            const ode::Options& opt = {});

// Composite-space wrapper: H = full_hamiltonian(params), Jz = jz_full.
Trajectory integrate_master(const ModelParams& params, const DensityMatrix& rho0,
                            std::span<const double> t_grid);

// Sector wrapper on the 3x3 block of photon sector n.
Trajectory integrate_master_block(const ModelParams& params, int n, const DensityMatrix& rho0,
                                  std::span<const double> t_grid);

// --------------------------- small-loss expansion ------------------------------

// rho(t, Gamma) = rho(t,0) + Gamma rho1(t) + (1/2) Gamma^2 rho2(t) + ...
// with rho1 = d rho/d Gamma |_0 and rho2 the second derivative. The orders
// solve
//     i d rho0/dt = [H, rho0]
//     i d rho1/dt = [H, rho1] - i [Jz,[Jz, rho0]]
//     i d rho2/dt = [H, rho2] - 2 i [Jz,[Jz, rho1]]
// (the factor 2 keeps rho2 the genuine second Gamma-derivative) and are
// evaluated by interaction-picture quadrature against the exact unitary flow.
struct PerturbationSeries {
    int order = 0;
    std::vector<double> times;
    std::vector<DensityMatrix> rho_zero;
    std::vector<DensityMatrix> rho_one; // order >= 1
    std::vector<DensityMatrix> rho_two; // order == 2
    double quadrature_error = 0.0;      // accumulated error estimate
};

PerturbationSeries perturbative_hierarchy(const ComplexMatrix& h, const ComplexMatrix& jz,
                                          const DensityMatrix& rho0,
                                          std::span<const double> t_grid, int order,
                                          const quad::Options& opt = {});

// Sector wrapper with rho0 = |0,n+1><0,n+1|.
PerturbationSeries perturbative_hierarchy_block(const ModelParams& params, int n,
                                                std::span<const double> t_grid, int order);

// Tr(rho0 B) + Gamma Tr(rho1 B) (+ 1/2 Gamma^2 Tr(rho2 B) when present) at
// time sample k. B must be Hermitian.
double expectation_expanded(const PerturbationSeries& series, std::size_t k, double gamma,
                            const ComplexMatrix& b);

// --------------------------- dressed-basis first order -------------------------

// First-order correction in the dressed basis {dark, plus, minus} of sector n,
// for the initial state |0,n+1>:
//   rho1^{ab}(t) = -∫_0^t f_ab(tau) e^{-i(E_a - E_b)(t - tau)} d tau.
// The product-form integrand pairs the dressed coefficients with the exciton
// coherence rho^{02}(tau) = <0,n+1| rho(tau,0) |2,n+1> of the unitary flow:
//   cross pairing   f_ab = 4 B_a0 B_b2 rho02 + 4 B_a2 B_b0 rho20
//   parallel pairing f_ab = 4 B_a0 B_b0 rho02 + 4 B_a2 B_b2 rho20.
// Only the cross pairing satisfies f_ab = conj(f_ba); it is the reading kept
// as the primary output. Both are returned next to the numerically
// integrated rho1 projected into the dressed basis so the residual of either
// reading can be reported. The product form is exact for the (dark, dark)
// element; elements touching |1,n> also pick up single-quantum coherences it
// omits, which is what residual_cross measures.
struct DressedFirstOrder {
    Eigen::Matrix3cd rho1;          // cross pairing (primary)
    Eigen::Matrix3cd rho1_parallel; // parallel pairing
    Eigen::Matrix3cd rho1_numeric;  // hierarchy result in the dressed basis
    double residual_cross = 0.0;    // max |rho1 - rho1_numeric|
    double residual_parallel = 0.0;
    // Secular (one-period time average) of f_dd: 2 sin^2(theta/2) cos^2(theta/2).
    // The post-selected Bell probability decays as P- = 1/2 - Gamma f_dd_mean t
    // to first order once many Rabi periods are averaged over.
    double f_dd_mean = 0.0;
};

DressedFirstOrder rho1_dressed_elements(const ModelParams& params, int n, double t);

// --------------------------- post-selection on mixed states --------------------

struct PostSelectedOutput {
    Eigen::Matrix2cd rho_e;    // unnormalized exciton block on {|0>, |2>}
    double p_plus = 0.0;       // <B+| rho_e |B+>, B± = (|0> ± |2>)/sqrt2
    double p_minus = 0.0;
    double residual_one = 0.0; // leakage onto |1> with the selected photon number
};

// Field outcome |m><m| applied to a composite-space density matrix.
PostSelectedOutput post_selected_output(const DensityMatrix& rho_full, int photon_outcome,
                                        int n_max);

// Same on a 3x3 sector block (the |1,n> row carries photon number n, so it is
// discarded and residual_one is structurally zero).
PostSelectedOutput post_selected_output_block(const DensityMatrix& rho_block);

} // namespace qdbell::decoherence
