#pragma once

// Shooting on the initial outer separation R for the Schubart-like orbit:
// the residual is the cluster momentum P2 at the first SBC, and its root
// gives an orbit that closes after four quarter-periods.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schubart/bounds.hpp"
#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/integrator.hpp"
#include "schubart/model.hpp"

namespace schubart {

struct ShootingConfig
{
    IntegratorConfig integrator;
    double r_tol{1e-10};             ///< stop when |residual| <= r_tol
    double bracket_width_tol{1e-10}; ///< or when the R bracket is this narrow
    int max_iterations{200};
    double checkpoint_tol{1e-6};
};

struct BracketPoint
{
    double R{0.0};
    double residual{0.0};
};

struct ShootingResult
{
    double m{1.0};
    double R_star{0.0};
    double s1{0.0};
    double t1{0.0};
    RegularizedState sbc_state;
    double residual{0.0};
    int iterations{0};
    std::vector<BracketPoint> bracket_trace;
};

struct Checkpoint
{
    double s{0.0};
    RegularizedState state;
    std::array<double, 4> expected{};
    double deviation{0.0}; ///< infinity norm over (Q1, Q2, P1, P2)
};

struct PeriodicOrbit
{
    ShootingResult result;
    Trajectory samples;
    std::array<Checkpoint, 4> checkpoints; ///< at s1, 2 s1, 3 s1, 4 s1
    double period_s{0.0};
    double period_t{0.0};
};

/// P2 at the first SBC, oriented by the sign of Q2 there so that it always
/// has the sign of the physical momentum p2. Equal to P2 whenever Q2 > 0.
inline double residual_of(const EventHit& hit) { return hit.state.Q2 < 0.0 ? -hit.state.P2 : hit.state.P2; }

inline double residual(double R, MassRatio m, const IntegratorConfig& cfg)
{
    return residual_of(first_sbc(R, m, cfg));
}

/// Lower end sqrt(m/3) has a positive residual; the upper end starts at the
/// square root of the analytic A0 bound and grows by 1.25 until the residual
/// is negative.
inline std::pair<double, double> default_bracket(MassRatio m, const IntegratorConfig& cfg,
                                                 std::vector<BracketPoint>* trace = nullptr)
{
    const double r_lo = std::sqrt(m / 3.0);
    double r_hi = std::sqrt(a0_analytic_bound(m));
    const double f_lo = residual(r_lo, m, cfg);
    if (trace) trace->push_back({r_lo, f_lo});
    if (!(f_lo > 0.0)) {
        throw Error(ErrorKind::BracketFailure, "residual at sqrt(m/3) is not positive: " + std::to_string(f_lo));
    }
    double f_hi = residual(r_hi, m, cfg);
    if (trace) trace->push_back({r_hi, f_hi});
    std::optional<double> limit;
    while (!(f_hi < 0.0)) {
        if (!limit) limit = 4.0 * numeric_a0(m, cfg);
        r_hi *= 1.25;
        if (r_hi * r_hi > *limit) {
            throw Error(ErrorKind::BracketFailure, "no negative residual below R^2 = " + std::to_string(*limit));
        }
        f_hi = residual(r_hi, m, cfg);
        if (trace) trace->push_back({r_hi, f_hi});
    }
    return {r_lo, r_hi};
}

/// Safeguarded secant/bisection on the residual inside [r_lo, r_hi].
inline ShootingResult find_periodic_R(MassRatio m, const ShootingConfig& cfg,
                                      std::optional<std::pair<double, double>> bracket = std::nullopt)
{
    ShootingResult out;
    out.m = m;
    const auto& icfg = cfg.integrator;

    double lo, hi;
    if (bracket) {
        std::tie(lo, hi) = *bracket;
        if (!(lo > 0.0 && hi > lo)) throw Error(ErrorKind::InvalidArgument, "bracket must satisfy 0 < R_lo < R_hi");
    } else {
        std::tie(lo, hi) = default_bracket(m, icfg, &out.bracket_trace);
    }

    EventHit hit_lo = first_sbc(lo, m, icfg);
    EventHit hit_hi = first_sbc(hi, m, icfg);
    double f_lo = residual_of(hit_lo);
    double f_hi = residual_of(hit_hi);
    if (bracket) {
        out.bracket_trace.push_back({lo, f_lo});
        out.bracket_trace.push_back({hi, f_hi});
    }
    if (f_lo * f_hi > 0.0) {
        throw Error(ErrorKind::BracketFailure, "residual has the same sign at both bracket ends");
    }

    auto finish = [&](double R, const EventHit& hit, int iters) {
        out.R_star = R;
        out.s1 = hit.s;
        out.t1 = hit.state.t;
        out.sbc_state = hit.state;
        out.residual = residual_of(hit);
        out.iterations = iters;
        return out;
    };

    if (f_lo == 0.0) return finish(lo, hit_lo, 0);
    if (f_hi == 0.0) return finish(hi, hit_hi, 0);

    double prev_width = hi - lo;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        double R = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        const double width = hi - lo;
        // Bisect when the secant leaves the bracket or progress has stalled.
        if (!(R > lo && R < hi) || width > 0.5 * prev_width) R = 0.5 * (lo + hi);
        prev_width = width;

        const EventHit hit = first_sbc(R, m, icfg);
        const double f = residual_of(hit);
        out.bracket_trace.push_back({R, f});

        if (std::abs(f) <= cfg.r_tol) return finish(R, hit, iter);
        if ((f > 0.0) == (f_lo > 0.0)) {
            lo = R;
            f_lo = f;
            hit_lo = hit;
        } else {
            hi = R;
            f_hi = f;
            hit_hi = hit;
        }
        if (hi - lo <= cfg.bracket_width_tol) {
            return std::abs(f_lo) < std::abs(f_hi) ? finish(lo, hit_lo, iter) : finish(hi, hit_hi, iter);
        }
    }
    throw Error(ErrorKind::NoConvergence,
                "root finder did not converge in " + std::to_string(cfg.max_iterations) + " iterations");
}

/// Integrate the found orbit over [0, 4 s1] and compare the quarter-period
/// states with the values symmetry predicts.
inline PeriodicOrbit build_period(const ShootingResult& res, const ShootingConfig& cfg)
{
    const MassRatio m(res.m);
    PeriodicOrbit orbit;
    orbit.result = res;
    orbit.period_s = 4.0 * res.s1;

    IntegratorConfig icfg = cfg.integrator;
    icfg.s_horizon = orbit.period_s;
    const std::array<double, 4> stations{res.s1, 2.0 * res.s1, 3.0 * res.s1, 4.0 * res.s1};

    const RegularizedState start = bc_initial_state(res.R_star, m);
    orbit.samples = integrate(start, m, icfg, StopCondition::horizon(), stations);

    const double R = res.R_star;
    const double p2_bc = start.P2;
    const double R1 = res.sbc_state.Q2;
    const double P1s = res.sbc_state.P1;
    const std::array<std::array<double, 4>, 4> expected{{
        {0.0, R1, P1s, 0.0},
        {-R, 0.0, 0.0, -p2_bc},
        {0.0, -R1, -P1s, 0.0},
        {R, 0.0, 0.0, p2_bc},
    }};

    for (std::size_t k = 0; k < 4; ++k) {
        const auto it = std::find_if(orbit.samples.samples.begin(), orbit.samples.samples.end(),
                                     [&](const RegularizedState& st) { return st.s == stations[k]; });
        if (it == orbit.samples.samples.end()) {
            throw Error(ErrorKind::CheckpointMismatch, "checkpoint " + std::to_string(k + 1) + " was not sampled");
        }
        Checkpoint& cp = orbit.checkpoints[k];
        cp.s = stations[k];
        cp.state = *it;
        cp.expected = expected[k];
        const std::array<double, 4> got{it->Q1, it->Q2, it->P1, it->P2};
        for (std::size_t i = 0; i < 4; ++i) cp.deviation = std::max(cp.deviation, std::abs(got[i] - expected[k][i]));
    }
    orbit.period_t = orbit.checkpoints[3].state.t;

    for (std::size_t k = 0; k < 4; ++k) {
        if (!(orbit.checkpoints[k].deviation <= cfg.checkpoint_tol)) {
            throw Error(ErrorKind::CheckpointMismatch,
                        "checkpoint at " + std::to_string(k + 1) + " s1 deviates by " +
                            std::to_string(orbit.checkpoints[k].deviation));
        }
    }
    return orbit;
}

} // namespace schubart
