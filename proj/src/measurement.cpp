#include "qdbell/measurement.hpp"

#include "qdbell/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdbell::measure {

PostSelected post_select(const BlockAmplitudes& state) {
    PostSelected ps;
    ps.photon_outcome = state.n + 1;
    ps.on_zero = state.c0;
    ps.on_two = state.c2;
    ps.residual_one = Complex(0.0, 0.0); // |1> rides on photon number n, not n+1
    ps.success_prob = std::norm(ps.on_zero) + std::norm(ps.on_two);
    return ps;
}

BellDecomposition bell_decompose(const PostSelected& ps) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    BellDecomposition bell;
    bell.amp_plus = (ps.on_zero + ps.on_two) * inv_sqrt2;
    bell.amp_minus = (ps.on_zero - ps.on_two) * inv_sqrt2;
    bell.p_plus = std::norm(bell.amp_plus);
    bell.p_minus = std::norm(bell.amp_minus);
    bell.ratio = bell.p_minus < 1e-15 ? std::numeric_limits<double>::infinity()
                                      : bell.p_plus / bell.p_minus;
    return bell;
}

PostSelected remove_dark_phase(const PostSelected& ps, double e_dark, double t) {
    const Complex undo = std::exp(Complex(0.0, e_dark * t));
    PostSelected out = ps;
    out.on_zero *= undo;
    out.on_two *= undo;
    out.residual_one *= undo;
    return out;
}

namespace {

double p_plus_at(const ModelParams& params, int n, double t) {
    return bell_decompose(post_select(dynamics::psi_components(params, n, t))).p_plus;
}

} // namespace

PulseSolution solve_pulse_length(const ModelParams& params, int n, double t_lo, double t_hi) {
    const model::DressedBlock block = model::dressed_block(params, n);
    if (!(block.omega > 0.0)) {
        throw std::invalid_argument("solve_pulse_length: vanishing Rabi splitting (A = 0?)");
    }
    const double beat = 2.0 * std::numbers::pi / block.omega;
    if (!(t_lo >= 0.0) || !(t_hi > t_lo) || (t_hi - t_lo) < 2.0 * beat) {
        throw std::invalid_argument(
            "solve_pulse_length: window must be positive and span >= 2 beat periods");
    }

    // Coarse scan, then bracket the first interior local minimum.
    const double step = beat / 200.0;
    const auto samples = static_cast<std::size_t>(std::floor((t_hi - t_lo) / step));
    double prev = p_plus_at(params, n, t_lo);
    double curr = p_plus_at(params, n, t_lo + step);
    std::size_t found = 0;
    for (std::size_t k = 2; k <= samples; ++k) {
        const double next = p_plus_at(params, n, t_lo + static_cast<double>(k) * step);
        if (curr <= prev && curr <= next && (curr < prev || curr < next)) {
            found = k - 1;
            break;
        }
        prev = curr;
        curr = next;
    }
    if (found == 0) {
        throw NumericalError("solve_pulse_length: no interior local minimum in the window");
    }

    double a = t_lo + static_cast<double>(found - 1) * step;
    double b = t_lo + static_cast<double>(found + 1) * step;

    // Golden-section refinement to relative width 1e-12.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = p_plus_at(params, n, x1);
    double f2 = p_plus_at(params, n, x2);
    while ((b - a) > 1e-12 * 0.5 * (a + b)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = p_plus_at(params, n, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = p_plus_at(params, n, x2);
        }
    }

    PulseSolution sol;
    sol.pulse_length = 0.5 * (a + b);
    sol.residual_p_plus = p_plus_at(params, n, sol.pulse_length);
    const double s = std::sin(0.5 * block.theta);
    const double c = std::cos(0.5 * block.theta);
    sol.cosine_condition_residual = std::cos(block.e_plus * sol.pulse_length) * s * s +
                                    std::cos(block.e_minus * sol.pulse_length) * c * c;
    return sol;
}

} // namespace qdbell::measure
