#pragma once

// Monotonicity threshold for the inner body. Below A0 (A = R^2 is the
// initial outer separation) the inner body x2 moves outward without a
// turning point until the first SBC.

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "schubart/error.hpp"
#include "schubart/integrator.hpp"
#include "schubart/model.hpp"

namespace schubart {

struct TurningPoint
{
    double t_star{0.0};
    double s_star{0.0};
    double x2_at{0.0};
};

struct A0Estimate
{
    double a_root{0.0};
    double analytic_bound{0.0};
    std::optional<double> numeric_threshold;
};

/// a^4 - 2a^2 - 16a/m + 1
inline double turning_quartic(double a, MassRatio m)
{
    const double a2 = a * a;
    return a2 * a2 - 2.0 * a2 - 16.0 * a / m + 1.0;
}

/// Root a > 1 of the turning quartic. The quartic is -16/m at a = 1 and
/// convex beyond, so the root above 1 is unique.
inline double solve_turning_quartic(MassRatio m)
{
    double lo = 1.0;
    double hi = 2.0;
    while (turning_quartic(hi, m) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw Error(ErrorKind::BracketFailure, "turning quartic has no sign change below 1e6");
    }
    double f_lo = turning_quartic(lo, m);
    double f_hi = turning_quartic(hi, m);
    double a = 0.5 * (lo + hi);
    for (int iter = 0; iter < 300; ++iter) {
        // Secant step, falling back to bisection when it leaves the bracket.
        double x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = turning_quartic(x, m);
        a = x;
        if (std::abs(fx) <= 1e-13 || fx == 0.0) break;
        if (fx < 0.0) {
            // Illinois modification keeps the stale end from stalling.
            lo = x;
            f_lo = fx;
            f_hi *= 0.5;
        } else {
            hi = x;
            f_hi = fx;
            f_lo *= 0.5;
        }
        if (std::nextafter(lo, hi) >= hi) break;
    }
    return a;
}

/// Lower bound on A0 evaluated at an arbitrary a > 1.
inline double a0_bound_at(double a, MassRatio m)
{
    const double u = a * a - 1.0;
    return 0.5 + 4.0 * m + 12.0 * m / u + 8.0 * m / (u * u);
}

inline double a0_analytic_bound(MassRatio m) { return a0_bound_at(solve_turning_quartic(m), m); }

namespace detail {

inline std::optional<double> inner_velocity(const RegularizedState& st, MassRatio m)
{
    const auto c = to_cartesian(st, m);
    if (!c) return std::nullopt;
    return c->v2;
}

} // namespace detail

/// First sign change of the inner body's velocity from + to - strictly
/// between the initial BC and the first SBC, or nothing when x2 is monotone.
inline std::optional<TurningPoint> detect_turning_point(double R, MassRatio m, const IntegratorConfig& cfg)
{
    const RegularizedState start = bc_initial_state(R, m);
    const Trajectory traj = integrate(start, m, cfg, StopCondition::first_sbc());
    const auto& smp = traj.samples;

    // Re-integrates from the nearest recorded sample; used only for refinement.
    auto state_at = [&](std::size_t from, double s) {
        if (s == smp[from].s) return smp[from];
        IntegratorConfig c = cfg;
        c.sample_ds = 0.0;
        c.s_horizon = s - smp[from].s;
        c.initial_step = std::min(cfg.initial_step, c.s_horizon);
        c.event_tol_s = std::min(cfg.event_tol_s, 0.5 * c.initial_step);
        return integrate(smp[from], m, c, StopCondition::horizon()).samples.back();
    };
    auto v2_at = [&](std::size_t from, double s) {
        const auto v = detail::inner_velocity(state_at(from, s), m);
        return v ? *v : 0.0;
    };

    auto refine_zero = [&](std::size_t from, double lo, double hi) {
        // v2(lo) > 0 >= v2(hi)
        for (int i = 0; i < 100 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
            const double mid = 0.5 * (lo + hi);
            if (v2_at(from, mid) > 0.0) lo = mid;
            else hi = mid;
        }
        const RegularizedState st = state_at(from, hi);
        return TurningPoint{st.t, st.s, positions(st).second};
    };

    std::vector<std::size_t> idx;
    std::vector<double> v;
    for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
        if (auto vi = detail::inner_velocity(smp[i], m)) {
            idx.push_back(i);
            v.push_back(*vi);
        }
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j > 0 && v[j - 1] > 0.0 && v[j] <= 0.0) return refine_zero(idx[j - 1], smp[idx[j - 1]].s, smp[idx[j]].s);
        // A shallow dip can fall between samples; look inside local minima.
        if (j > 0 && j + 1 < v.size() && v[j] > 0.0 && v[j] <= v[j - 1] && v[j] <= v[j + 1]) {
            const std::size_t from = idx[j - 1];
            double a = smp[from].s;
            double b = smp[idx[j + 1]].s;
            const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = b - golden * (b - a);
            double x2 = a + golden * (b - a);
            double f1 = v2_at(from, x1);
            double f2 = v2_at(from, x2);
            for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
                if (f1 <= 0.0 || f2 <= 0.0) break;
                if (f1 < f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - golden * (b - a);
                    f1 = v2_at(from, x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + golden * (b - a);
                    f2 = v2_at(from, x2);
                }
            }
            if (f1 <= 0.0) return refine_zero(from, smp[from].s, x1);
            if (f2 <= 0.0) return refine_zero(from, smp[from].s, x2);
        }
    }
    return std::nullopt;
}

/// Numerical monotonicity threshold: the largest A (to width 1e-4) for which
/// no turning point occurs, bisected upward from the analytic bound.
inline double numeric_a0(MassRatio m, const IntegratorConfig& cfg, double width = 1e-4)
{
    auto monotone = [&](double A) { return !detect_turning_point(std::sqrt(A), m, cfg).has_value(); };

    double lo = a0_analytic_bound(m);
    if (!monotone(lo)) {
        throw Error(ErrorKind::BracketFailure, "turning point found at the analytic bound A = " + std::to_string(lo));
    }
    double hi = lo;
    do {
        lo = hi;
        hi *= 1.5;
        if (hi > 1e3) throw Error(ErrorKind::BracketFailure, "no turning point found for A up to 1e3");
    } while (monotone(hi));

    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (monotone(mid)) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline A0Estimate estimate_a0(MassRatio m, const IntegratorConfig& cfg, bool numeric)
{
    A0Estimate est;
    est.a_root = solve_turning_quartic(m);
    est.analytic_bound = a0_bound_at(est.a_root, m);
    if (numeric) est.numeric_threshold = numeric_a0(m, cfg);
    return est;
}

} // namespace schubart
