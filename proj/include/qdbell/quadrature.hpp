// quadrature.hpp — Adaptive composite Gauss-Kronrod quadrature (G7, K15) for
// scalar- and matrix-valued integrands. Panels whose embedded error estimate
// exceeds the local budget are bisected; nodes and weights are the QUADPACK
// dqk15 constants.

#pragma once

#include "qdbell/errors.hpp"
#include "qdbell/linalg.hpp"

#include <cmath>
#include <utility>

namespace qdbell::quad {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_depth = 40;
};

struct Info {
    double error_estimate = 0.0;
    long evaluations = 0;
};

namespace detail {

// Kronrod-15 abscissae (positive half) and weights; Gauss-7 weights pair
// with the odd-indexed abscissae.
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

inline double magnitude(const linalg::Complex& v) { return std::abs(v); }
inline double magnitude(const linalg::ComplexMatrix& m) { return linalg::max_abs(m); }

// One K15/G7 panel on [a, b]; returns (kronrod, |kronrod - gauss|).
template <class F, class Value>
std::pair<Value, double> kronrod_panel(F& f, double a, double b, Info& info) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    Value center = f(mid);
    info.evaluations += 1;
    Value kronrod = kWgk[7] * center;
    Value gauss = kWg[3] * center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        Value lo = f(mid - dx);
        Value hi = f(mid + dx);
        info.evaluations += 2;
        Value sum = lo + hi;
        kronrod = kronrod + kWgk[i] * sum;
        if (i % 2 == 1) gauss = gauss + kWg[i / 2] * sum;
    }
    kronrod = half * kronrod;
    gauss = half * gauss;
    return {kronrod, magnitude(Value(kronrod - gauss))};
}

template <class F, class Value>
Value adapt(F& f, double a, double b, double budget, int depth, const Options& opt, Info& info) {
    auto [value, err] = kronrod_panel<F, Value>(f, a, b, info);
    const double local = std::max(budget, opt.rel_tol * magnitude(value));
    if (err <= local || depth >= opt.max_depth) {
        info.error_estimate += err;
        return value;
    }
    const double mid = 0.5 * (a + b);
    Value left = adapt<F, Value>(f, a, mid, 0.5 * budget, depth + 1, opt, info);
    Value right = adapt<F, Value>(f, mid, b, 0.5 * budget, depth + 1, opt, info);
    return Value(left + right);
}

} // namespace detail

// Integrates f over [a, b]. Value is deduced from the integrand's return
// type and must support +, scalar*, and a magnitude (complex or matrix).
// Throws NumericalError when the accumulated error estimate exceeds the
// requested tolerance, reporting the achieved estimate.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}, Info* out_info = nullptr) {
    using Value = std::decay_t<decltype(f(a))>;
    Info info;
    if (a == b) {
        Value zero = Value(0.0 * f(a));
        if (out_info) *out_info = info;
        return zero;
    }
    Value result = detail::adapt<std::decay_t<F>, Value>(f, a, b, opt.abs_tol, 0, opt, info);
    const double allowed =
        std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(result)) * 64.0;
    if (!(info.error_estimate <= allowed)) {
        throw NumericalError("quad::integrate: tolerance not reached (estimate " +
                                 std::to_string(info.error_estimate) + ")",
                             std::numeric_limits<double>::quiet_NaN(), info.error_estimate);
    }
    if (out_info) *out_info = info;
    return result;
}

} // namespace qdbell::quad
