// ode.hpp — Embedded Dormand-Prince 5(4) integrator with adaptive step size,
// for matrix-valued linear ODEs (density operators, wavefunctions).
//
// Follows the RKDP tableau of Dormand & Prince (1980) with the FSAL last
// stage; step control is the standard mixed absolute/relative elementwise
// error with a fifth-root controller, as in Hairer, Norsett & Wanner,
// "Solving Ordinary Differential Equations I".

#pragma once

#include "qdbell/errors.hpp"
#include "qdbell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace qdbell::ode {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::int64_t max_steps = 200'000'000;
};

namespace detail {

inline double error_ratio(const linalg::ComplexMatrix& err,
                          const linalg::ComplexMatrix& y0,
                          const linalg::ComplexMatrix& y1,
                          const Options& opt) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < err.cols(); ++j) {
        for (Eigen::Index i = 0; i < err.rows(); ++i) {
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
            worst = std::max(worst, std::abs(err(i, j)) / scale);
        }
    }
    return worst;
}

} // namespace detail

// Advances y from t0 to t1 (t1 >= t0). rhs(t, y, dydt) writes the derivative.
// Throws NumericalError on step-size underflow, carrying the time reached.
template <class Rhs>
void integrate(Rhs&& rhs, linalg::ComplexMatrix& y, double t0, double t1,
               const Options& opt = {}) {
    if (t1 < t0) throw std::invalid_argument("ode::integrate: t1 must be >= t0");
    if (t1 == t0) return;

    using Matrix = linalg::ComplexMatrix;
    Matrix k1(y.rows(), y.cols()), k2(y.rows(), y.cols()), k3(y.rows(), y.cols()),
        k4(y.rows(), y.cols()), k5(y.rows(), y.cols()), k6(y.rows(), y.cols()),
        k7(y.rows(), y.cols()), ytmp(y.rows(), y.cols()), ynew(y.rows(), y.cols());

    double t = t0;
    rhs(t, y, k1); // invariant: k1 = rhs(t, y) at the top of every iteration

    // First step: conservative guess from the derivative magnitude.
    double h = std::min({t1 - t0, opt.max_step, 1e-2});
    const double d0 = linalg::max_abs(y) + 1.0;
    const double d1 = linalg::max_abs(k1);
    if (d1 > 0.0) h = std::min(h, 1e-2 * d0 / d1);

    std::int64_t steps = 0;

    while (t < t1) {
        if (++steps > opt.max_steps) {
            throw NumericalError("ode::integrate: step budget exhausted", t,
                                 std::numeric_limits<double>::quiet_NaN());
        }
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            throw NumericalError("ode::integrate: step size underflow at t = " + std::to_string(t),
                                 t, std::numeric_limits<double>::quiet_NaN());
        }
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        ytmp = y + h * (1.0 / 5.0) * k1;
        rhs(t + h / 5.0, ytmp, k2);

        ytmp = y + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2);
        rhs(t + 3.0 * h / 10.0, ytmp, k3);

        ytmp = y + h * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3);
        rhs(t + 4.0 * h / 5.0, ytmp, k4);

        ytmp = y + h * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 +
                        (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4);
        rhs(t + 8.0 * h / 9.0, ytmp, k5);

        ytmp = y + h * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 + (46732.0 / 5247.0) * k3 +
                        (49.0 / 176.0) * k4 - (5103.0 / 18656.0) * k5);
        rhs(t + h, ytmp, k6);

        // Fifth-order solution (b-row equals the last a-row: FSAL).
        ynew = y + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 + (125.0 / 192.0) * k4 -
                        (2187.0 / 6784.0) * k5 + (11.0 / 84.0) * k6);
        rhs(t + h, ynew, k7);

        // Difference against the embedded fourth-order solution.
        const Matrix err = h * ((71.0 / 57600.0) * k1 - (71.0 / 16695.0) * k3 +
                                (71.0 / 1920.0) * k4 - (17253.0 / 339200.0) * k5 +
                                (22.0 / 525.0) * k6 - (1.0 / 40.0) * k7);

        const double ratio = detail::error_ratio(err, y, ynew, opt);
        if (ratio <= 1.0) {
            t = last ? t1 : t + h;
            y.swap(ynew);
            k1.swap(k7); // FSAL: k7 is rhs at the accepted point
        }

        const double factor = (ratio > 0.0) ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::min(h, opt.max_step);
    }
}

} // namespace qdbell::ode
