// measurement.hpp — Photon-number post-selection, Bell-basis decomposition of
// the conditioned exciton state, and pulse-length design for Bell output.

#pragma once

#include "qdbell/dynamics.hpp"

namespace qdbell::measure {

using dynamics::BlockAmplitudes;
using linalg::Complex;
using model::ModelParams;

// Unnormalized exciton state conditioned on finding the field back in |n+1>.
// Keeps the amplitudes attached to photon number n+1 (|0> and |2>); the |1>
// amplitude is attached to photon number n and is discarded, so residual_one
// is zero for sector states and kept as a field for generalized inputs.
struct PostSelected {
    int photon_outcome = 0; // n+1
    Complex on_zero{};
    Complex on_two{};
    Complex residual_one{};
    double success_prob = 0.0; // |on_zero|^2 + |on_two|^2
};

PostSelected post_select(const BlockAmplitudes& state);

// Components along the Bell pair (|00> ± |11>)/sqrt2 = (|0> ± |2>)/sqrt2.
// p_plus/p_minus are joint (unnormalized) probabilities; ratio = p_plus/p_minus
// reported as +infinity when p_minus < 1e-15.
struct BellDecomposition {
    Complex amp_plus{};
    Complex amp_minus{};
    double p_plus = 0.0;
    double p_minus = 0.0;
    double ratio = 0.0;
};

BellDecomposition bell_decompose(const PostSelected& ps);

// Multiplies the amplitudes by exp(+i e_dark t), the reporting convention that
// makes amp_minus real positive for the |0,n+1> initial condition.
PostSelected remove_dark_phase(const PostSelected& ps, double e_dark, double t);

// --------------------------- pulse-length design -----------------------------

struct PulseSolution {
    double pulse_length = 0.0;        // T at the first local minimum of P+
    double residual_p_plus = 0.0;     // P+(T)
    // Residual of the closed-form cosine condition for exact Bell output:
    // cos(E+ T) sin^2(theta/2) + cos(E- T) cos^2(theta/2); zero iff the real
    // part of the bright amplitude cancels at T.
    double cosine_condition_residual = 0.0;
};

// Scans P+(T) over [t_lo, t_hi] at step (2pi/Omega)/200, locates the first
// interior local minimum and refines it by golden-section search to relative
// width 1e-12. The window must span at least two beat periods 2pi/Omega
// (std::invalid_argument otherwise); a window without an interior minimum is
// reported as NumericalError.
PulseSolution solve_pulse_length(const ModelParams& params, int n, double t_lo, double t_hi);

} // namespace qdbell::measure
