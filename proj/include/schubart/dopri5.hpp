#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control.
// Generic over a fixed-size state; the right-hand side is any callable
// `Vec<N> f(double x, const Vec<N>& y)`.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "schubart/error.hpp"

namespace schubart::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct StepControl
{
    double rel_tol{1e-10};
    double abs_tol{1e-10};
    double initial_step{1e-3};
    double max_step{0.1};
    double min_step{1e-14};
    double safety{0.9};
    double fac_min{0.2};
    double fac_max{10.0};
    double beta{0.04}; ///< PI memory exponent (Hairer & Wanner, DOPRI5 default)
};

namespace detail {

// Butcher tableau.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

} // namespace detail

template <std::size_t N>
struct StepResult
{
    Vec<N> y;       ///< 5th order solution at x + h
    Vec<N> k_end;   ///< f(x + h, y), reusable as the next first stage
    Vec<N> err;     ///< local error estimate
};

/// One Dormand-Prince step of size h from (x, y); k1 = f(x, y).
template <std::size_t N, class Rhs>
StepResult<N> dopri5_step(const Rhs& f, double x, const Vec<N>& y, const Vec<N>& k1, double h)
{
    using namespace detail;
    Vec<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    const Vec<N> k2 = f(x + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const Vec<N> k3 = f(x + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Vec<N> k4 = f(x + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const Vec<N> k5 = f(x + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const Vec<N> k6 = f(x + h, tmp);

    StepResult<N> r;
    for (std::size_t i = 0; i < N; ++i)
        r.y[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    r.k_end = f(x + h, r.y);
    for (std::size_t i = 0; i < N; ++i)
        r.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * r.k_end[i]);
    return r;
}

template <std::size_t N>
double error_norm(const Vec<N>& y0, const Vec<N>& y1, const Vec<N>& err, const StepControl& ctl)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double e = err[i] / sc;
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(N));
}

/// Advance from x0 to x_end with adaptive steps. Steps are shortened so that
/// every abscissa in `landings` (ascending, inside (x0, x_end]) is hit exactly.
/// `on_step(xa, ya, ka, xb, yb)` is called after each accepted step and
/// returns false to stop. Returns the last x reached.
template <std::size_t N, class Rhs, class OnStep>
double drive(const Rhs& f, double x0, const Vec<N>& y0, double x_end, const StepControl& ctl,
             std::span<const double> landings, OnStep&& on_step)
{
    double x = x0;
    Vec<N> y = y0;
    if (!(x_end > x0)) return x;

    Vec<N> k = f(x, y);
    double h = std::min(ctl.initial_step, ctl.max_step);
    double err_old = 1e-4;
    std::size_t next_landing = 0;
    while (next_landing < landings.size() && landings[next_landing] <= x) ++next_landing;

    while (x < x_end) {
        double target = x_end;
        if (next_landing < landings.size()) target = std::min(target, landings[next_landing]);
        bool clipped = false;
        double h_try = h;
        // Snap to the target when the remainder would leave a sliver.
        if (x + h_try >= target || target - (x + h_try) < 1e-3 * h_try) {
            h_try = target - x;
            clipped = true;
        }
        if (h_try < ctl.min_step && !clipped) {
            throw Error(ErrorKind::StepUnderflow, "step size " + std::to_string(h_try) + " at x = " + std::to_string(x));
        }

        const auto r = dopri5_step<N>(f, x, y, k, h_try);
        double err = error_norm<N>(y, r.y, r.err, ctl);
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            const double alpha = 0.2 - 0.75 * ctl.beta;
            double fac = err == 0.0 ? ctl.fac_max
                                    : ctl.safety * std::pow(err, -alpha) * std::pow(std::max(err_old, 1e-4), ctl.beta);
            fac = std::clamp(fac, ctl.fac_min, ctl.fac_max);
            err_old = err;

            const double xa = x;
            const Vec<N> ya = y;
            const Vec<N> ka = k;
            x = clipped ? target : x + h_try;
            y = r.y;
            k = r.k_end;
            if (clipped && next_landing < landings.size() && target == landings[next_landing]) ++next_landing;
            // A clipped step says nothing about how large the next one may be.
            h = std::min(ctl.max_step, clipped ? std::max(h, h_try * fac) : h_try * fac);
            if (!on_step(xa, ya, ka, x, y)) return x;
        } else {
            const double alpha = 0.2 - 0.75 * ctl.beta;
            const double fac = std::max(ctl.fac_min, ctl.safety * std::pow(err, -alpha));
            h = h_try * fac;
            if (h < ctl.min_step) {
                throw Error(ErrorKind::StepUnderflow,
                            "step size " + std::to_string(h) + " below minimum at x = " + std::to_string(x));
            }
        }
    }
    return x;
}

} // namespace schubart::ode
