#pragma once

// Adaptive integration of the regularized flow in fictitious time s with
// detection of simultaneous binary collisions (Q1 changes sign) and binary
// collisions (Q2 changes sign).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "schubart/dopri5.hpp"
#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/model.hpp"

namespace schubart {

struct IntegratorConfig
{
    double rel_tol{1e-10};
    double abs_tol{1e-10};
    double initial_step{1e-3};
    double max_step{0.1};
    double s_horizon{50.0};
    double event_tol_s{1e-12};
    /// When positive, samples are also recorded on the grid s = k * sample_ds
    /// (steps are shortened to land on it); otherwise only accepted steps.
    double sample_ds{0.0};

    void validate() const
    {
        auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
        if (!(rel_tol >= 1e-14) || !(abs_tol >= 1e-14)) bad("rel_tol and abs_tol must be >= 1e-14");
        if (!(initial_step > 0.0) || !(max_step > 0.0)) bad("step sizes must be positive");
        if (!(event_tol_s > 0.0) || !(event_tol_s < initial_step)) bad("event_tol_s must be in (0, initial_step)");
        if (!(s_horizon >= 0.0) || !std::isfinite(s_horizon)) bad("s_horizon must be finite and non-negative");
        if (!(sample_ds >= 0.0)) bad("sample_ds must be non-negative");
    }

    ode::StepControl step_control() const
    {
        ode::StepControl c;
        c.rel_tol = rel_tol;
        c.abs_tol = abs_tol;
        c.initial_step = initial_step;
        c.max_step = max_step;
        return c;
    }
};

enum class EventKind { SBC, BC };

inline const char* to_string(EventKind k) noexcept { return k == EventKind::SBC ? "SBC" : "BC"; }

struct EventHit
{
    EventKind kind{EventKind::SBC};
    double s{0.0};
    RegularizedState state;
    double crossing_derivative{0.0}; ///< dQ1/ds at an SBC, dQ2/ds at a BC
};

struct Trajectory
{
    std::vector<RegularizedState> samples;
    std::vector<EventHit> events;
};

struct StopCondition
{
    enum class Kind { Horizon, FirstSBC, FirstBC, KthEvent };
    Kind kind{Kind::Horizon};
    int k{1};

    static StopCondition horizon() { return {Kind::Horizon, 0}; }
    static StopCondition first_sbc() { return {Kind::FirstSBC, 1}; }
    static StopCondition first_bc() { return {Kind::FirstBC, 1}; }
    static StopCondition kth_event(int k) { return {Kind::KthEvent, k}; }
};

namespace detail {

using Vec5 = ode::Vec<5>;

inline Vec5 pack(const RegularizedState& st) { return {st.Q1, st.Q2, st.P1, st.P2, st.t}; }

inline RegularizedState unpack(const Vec5& y, double s) { return {y[0], y[1], y[2], y[3], y[4], s}; }

struct RegularizedRhs
{
    MassRatio m;
    EnergyConstant e;

    Vec5 operator()(double s, const Vec5& y) const
    {
        const auto d = regularized_vector_field(unpack(y, s), m, e);
        return {d.dQ1, d.dQ2, d.dP1, d.dP2, d.dt};
    }
};

inline double monitored(const RegularizedState& st, EventKind kind) { return kind == EventKind::SBC ? st.Q1 : st.Q2; }

inline bool crosses(double a, double b) { return (a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0); }

} // namespace detail

/// Root-localize a collision on [s_lo, s_hi] by bisection of the monitored
/// coordinate, evaluated through `dense_eval` (any continuous s -> state map).
inline EventHit locate_event(double s_lo, double s_hi, const std::function<RegularizedState(double)>& dense_eval,
                             EventKind kind, const IntegratorConfig& cfg, MassRatio m, EnergyConstant e = {})
{
    auto make_hit = [&](const RegularizedState& st) {
        const auto d = regularized_vector_field(st, m, e);
        return EventHit{kind, st.s, st, kind == EventKind::SBC ? d.dQ1 : d.dQ2};
    };

    RegularizedState lo_state = dense_eval(s_lo);
    RegularizedState hi_state = dense_eval(s_hi);
    double c_lo = detail::monitored(lo_state, kind);
    const double c_hi = detail::monitored(hi_state, kind);
    if (c_hi == 0.0 && c_lo != 0.0) return make_hit(hi_state);
    if (!(c_lo * c_hi < 0.0)) {
        throw Error(ErrorKind::NoSignChange, std::string("monitored coordinate for ") + to_string(kind)
                                                 + " has no sign change on the bracket");
    }

    double lo = s_lo;
    double hi = s_hi;
    RegularizedState mid_state = lo_state;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        mid_state = dense_eval(mid);
        const double c_mid = detail::monitored(mid_state, kind);
        const bool narrow = (hi - lo) <= cfg.event_tol_s;
        if (c_mid == 0.0 || (narrow && std::abs(c_mid) <= kCollisionTol) || mid <= lo || mid >= hi) break;
        if ((c_mid > 0.0) == (c_lo > 0.0)) {
            lo = mid;
            c_lo = c_mid;
        } else {
            hi = mid;
        }
    }
    return make_hit(mid_state);
}

/// Integrate from `start` until `stop` is met (or s_horizon for
/// StopCondition::horizon()). If stopped on an event the last sample is the
/// localized event state. `landings` are extra s values to sample exactly.
inline Trajectory integrate(const RegularizedState& start, MassRatio m, const IntegratorConfig& cfg,
                            StopCondition stop, std::span<const double> landings = {}, EnergyConstant e = {})
{
    cfg.validate();
    for (double v : {start.Q1, start.Q2, start.P1, start.P2, start.t, start.s}) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "start state is not finite");
    }
    if (std::abs(start.Q1) <= kCollisionTol && std::abs(start.Q2) <= kCollisionTol) {
        throw Error(ErrorKind::TotalCollapse, "start state has Q1 = Q2 = 0");
    }

    const double s0 = start.s;
    const double s_end = s0 + cfg.s_horizon;

    std::vector<double> stations;
    if (cfg.sample_ds > 0.0) {
        const auto n = static_cast<std::size_t>(std::floor(cfg.s_horizon / cfg.sample_ds));
        stations.reserve(n + landings.size());
        for (std::size_t i = 1; i <= n; ++i) stations.push_back(s0 + static_cast<double>(i) * cfg.sample_ds);
    }
    for (double l : landings) {
        if (l > s0 && l <= s_end) stations.push_back(l);
    }
    std::sort(stations.begin(), stations.end());
    stations.erase(std::unique(stations.begin(), stations.end()), stations.end());

    Trajectory traj;
    traj.samples.push_back(start);

    const detail::RegularizedRhs rhs{m, e};
    const auto ctl = cfg.step_control();
    bool done = false;

    auto wants_stop = [&](const EventHit& hit) {
        switch (stop.kind) {
        case StopCondition::Kind::Horizon: return false;
        case StopCondition::Kind::FirstSBC: return hit.kind == EventKind::SBC;
        case StopCondition::Kind::FirstBC: return hit.kind == EventKind::BC;
        case StopCondition::Kind::KthEvent: return static_cast<int>(traj.events.size()) >= stop.k;
        }
        return false;
    };

    auto on_step = [&](double sa, const detail::Vec5& ya, const detail::Vec5& ka, double sb, const detail::Vec5& yb) {
        const RegularizedState a = detail::unpack(ya, sa);
        const RegularizedState b = detail::unpack(yb, sb);
        if (std::abs(b.Q1) <= kCollisionTol && std::abs(b.Q2) <= kCollisionTol) {
            throw Error(ErrorKind::TotalCollapse, "Q1 = Q2 = 0 reached at s = " + std::to_string(sb));
        }

        // Dense evaluation by re-stepping from the left end of the step.
        const std::function<RegularizedState(double)> dense = [&](double s) {
            if (s == sa) return a;
            const auto r = ode::dopri5_step<5>(rhs, sa, ya, ka, s - sa);
            return detail::unpack(r.y, s);
        };

        std::array<EventHit, 2> hits;
        std::size_t n_hits = 0;
        for (EventKind kind : {EventKind::SBC, EventKind::BC}) {
            if (detail::crosses(detail::monitored(a, kind), detail::monitored(b, kind))) {
                hits[n_hits++] = locate_event(sa, sb, dense, kind, cfg, m, e);
            }
        }
        if (n_hits == 2 && hits[1].s < hits[0].s) std::swap(hits[0], hits[1]);

        for (std::size_t i = 0; i < n_hits; ++i) {
            traj.events.push_back(hits[i]);
            if (hits[i].s > traj.samples.back().s && hits[i].s < sb) traj.samples.push_back(hits[i].state);
            if (wants_stop(hits[i])) {
                if (traj.samples.back().s != hits[i].s) traj.samples.push_back(hits[i].state);
                done = true;
                return false;
            }
        }
        traj.samples.push_back(b);
        return true;
    };

    ode::drive<5>(rhs, s0, detail::pack(start), s_end, ctl, stations, on_step);

    if (!done && stop.kind != StopCondition::Kind::Horizon) {
        throw Error(ErrorKind::HorizonExceeded, "requested event not reached before s = " + std::to_string(s_end));
    }
    return traj;
}

/// First simultaneous binary collision after the binary collision start
/// with outer separation A = R^2.
inline EventHit first_sbc(double R, MassRatio m, const IntegratorConfig& cfg, EnergyConstant e = {})
{
    const auto traj = integrate(bc_initial_state(R, m), m, cfg, StopCondition::first_sbc(), {}, e);
    return traj.events.back();
}

} // namespace schubart
