#pragma once

// Invariant checks on integrated trajectories and the independent Newtonian
// oracle used to cross-validate the regularized flow.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "schubart/dopri5.hpp"
#include "schubart/dynamics.hpp"
#include "schubart/error.hpp"
#include "schubart/integrator.hpp"
#include "schubart/model.hpp"

namespace schubart {

struct CheckResult
{
    std::string name;
    bool passed{false};
    double measured{0.0};
    double threshold{0.0};
};

struct VerifyThresholds
{
    double gamma{1e-8};
    double energy{1e-7};
    double crossval{1e-6};
    double sum_identity{1e-5};
    double energy_min_q{0.1};  ///< energy is only checked where min(|Q1|,|Q2|) exceeds this
    double crossval_min_q{0.2}; ///< safe-arc criterion for the Newtonian oracle
};

struct VerificationReport
{
    std::vector<CheckResult> checks;
    double worst_gamma{0.0};
    double worst_energy{0.0};
    double crossval_max_dev{0.0};

    bool all_passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

/// Drops samples closer than min_ds (in s) to the previously kept one.
inline std::vector<RegularizedState> thin(const std::vector<RegularizedState>& in, double min_ds)
{
    std::vector<RegularizedState> out;
    out.reserve(in.size());
    for (const auto& st : in) {
        if (out.empty() || st.s - out.back().s >= min_ds) out.push_back(st);
    }
    return out;
}

/// Samples from the start through the first SBC (first Q1 zero or sign change).
inline std::vector<RegularizedState> first_quarter(const std::vector<RegularizedState>& in)
{
    std::vector<RegularizedState> out;
    for (std::size_t i = 0; i < in.size(); ++i) {
        out.push_back(in[i]);
        if (i == 0) continue;
        const double prev = in[i - 1].Q1;
        const double cur = in[i].Q1;
        if (std::abs(cur) <= kCollisionTol || (prev > 0.0) != (cur > 0.0)) break;
    }
    return out;
}

inline double min_abs_q(const RegularizedState& st) { return std::min(std::abs(st.Q1), std::abs(st.Q2)); }

} // namespace detail

inline CheckResult check_gamma(const Trajectory& traj, MassRatio m, double threshold)
{
    double worst = 0.0;
    for (const auto& st : traj.samples) worst = std::max(worst, std::abs(gamma(st, m)));
    return {"gamma", worst <= threshold, worst, threshold};
}

inline CheckResult check_energy(const Trajectory& traj, MassRatio m, double threshold, double min_q = 0.1)
{
    double worst = 0.0;
    for (const auto& st : traj.samples) {
        if (detail::min_abs_q(st) <= min_q) continue;
        const auto c = to_cartesian(st, m);
        if (!c) continue;
        worst = std::max(worst, std::abs(hamiltonian_cartesian(*c, m) + 1.0));
    }
    return {"energy", worst <= threshold, worst, threshold};
}

struct CrossValidation
{
    double max_deviation{0.0};
    double t_begin{0.0};
    double t_end{0.0};
    std::size_t compared{0};
};

/// Integrates the Newtonian equations directly over samples [first, last]
/// (in physical time) and returns the largest deviation in (x1, x2).
inline CrossValidation cross_validate_arc(const Trajectory& traj, MassRatio m, const IntegratorConfig& cfg,
                                          std::size_t first, std::size_t last)
{
    const auto& smp = traj.samples;
    if (first > last || last >= smp.size()) throw Error(ErrorKind::InvalidArgument, "arc indices out of range");
    const auto c0 = to_cartesian(smp[first], m);
    if (!c0) throw Error(ErrorKind::NoSafeArc, "arc starts at a collision");

    CrossValidation cv;
    cv.t_begin = smp[first].t;
    cv.t_end = smp[last].t;
    cv.compared = last - first + 1;
    if (first == last) return cv;

    std::vector<double> times;
    for (std::size_t i = first + 1; i <= last; ++i) times.push_back(smp[i].t);

    const auto rhs = [&](double t, const ode::Vec<4>& y) {
        const auto acc = newtonian_accel({y[0], y[1], y[2], y[3], t}, m);
        return ode::Vec<4>{y[2], y[3], acc.a1, acc.a2};
    };
    ode::StepControl ctl = cfg.step_control();
    ctl.initial_step = std::min(ctl.initial_step, cv.t_end - cv.t_begin);

    std::size_t next = first + 1;
    double worst = 0.0;
    auto compare = [&](double t, const ode::Vec<4>& y) {
        while (next <= last && smp[next].t <= t) {
            if (smp[next].t == t) {
                const auto [x1, x2] = positions(smp[next]);
                worst = std::max({worst, std::abs(y[0] - x1), std::abs(y[1] - x2)});
            }
            ++next;
        }
    };
    ode::drive<4>(rhs, cv.t_begin, ode::Vec<4>{c0->x1, c0->x2, c0->v1, c0->v2}, cv.t_end, ctl, times,
                  [&](double, const ode::Vec<4>&, const ode::Vec<4>&, double tb, const ode::Vec<4>& yb) {
                      compare(tb, yb);
                      return true;
                  });
    cv.max_deviation = worst;
    return cv;
}

/// Cross-validation on the longest run of samples with min(|Q1|,|Q2|) >= min_q.
inline CrossValidation cross_validate(const Trajectory& traj, MassRatio m, const IntegratorConfig& cfg,
                                      double min_q = 0.2)
{
    const auto& smp = traj.samples;
    std::size_t best_first = 0, best_len = 0;
    for (std::size_t i = 0; i < smp.size();) {
        if (detail::min_abs_q(smp[i]) < min_q) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < smp.size() && detail::min_abs_q(smp[j + 1]) >= min_q) ++j;
        if (j - i + 1 > best_len) {
            best_first = i;
            best_len = j - i + 1;
        }
        i = j + 1;
    }
    if (best_len == 0) throw Error(ErrorKind::NoSafeArc, "no sample stays away from both collisions");
    return cross_validate_arc(traj, m, cfg, best_first, best_first + best_len - 1);
}

/// x2 strictly increasing from the start up to the first SBC. The measured
/// value is the smallest increment of x2 between kept samples.
inline CheckResult check_monotone_x2(const Trajectory& traj)
{
    const auto seg = detail::thin(detail::first_quarter(traj.samples), 1e-9);
    double min_inc = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < seg.size(); ++i) {
        min_inc = std::min(min_inc, 0.5 * (seg[i].Q2 * seg[i].Q2 - seg[i - 1].Q2 * seg[i - 1].Q2));
    }
    if (seg.size() < 2) return {"monotone_x2", true, 0.0, 0.0};
    return {"monotone_x2", min_inc > 0.0, min_inc, 0.0};
}

/// Central differences of P1 Q1 + P2 Q2 on the sample grid against the
/// closed-form derivative.
inline CheckResult check_sum_identity(const Trajectory& traj, MassRatio m, double threshold)
{
    const auto seg = detail::thin(traj.samples, 1e-6);
    auto g = [](const RegularizedState& st) { return st.P1 * st.Q1 + st.P2 * st.Q2; };
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < seg.size(); ++i) {
        const double h1 = seg[i].s - seg[i - 1].s;
        const double h2 = seg[i + 1].s - seg[i].s;
        const double d = -h2 / (h1 * (h1 + h2)) * g(seg[i - 1]) + (h2 - h1) / (h1 * h2) * g(seg[i])
                         + h1 / (h2 * (h1 + h2)) * g(seg[i + 1]);
        worst = std::max(worst, std::abs(d - sum_identity_rhs(seg[i], m)));
    }
    return {"sum_identity", worst <= threshold, worst, threshold};
}

/// P1 Q1 + P2 Q2 never decreases between consecutive samples up to the first
/// SBC. The measured value is the most negative change.
inline CheckResult check_sum_nondecreasing(const Trajectory& traj)
{
    const auto seg = detail::first_quarter(traj.samples);
    double worst = 0.0;
    for (std::size_t i = 1; i < seg.size(); ++i) {
        const double prev = seg[i - 1].P1 * seg[i - 1].Q1 + seg[i - 1].P2 * seg[i - 1].Q2;
        const double cur = seg[i].P1 * seg[i].Q1 + seg[i].P2 * seg[i].Q2;
        worst = std::min(worst, cur - prev);
    }
    return {"sum_nondecreasing", worst >= 0.0, worst, 0.0};
}

/// Runs every check applicable to a trajectory that starts at a BC.
inline VerificationReport verify_trajectory(const Trajectory& traj, MassRatio m, const IntegratorConfig& cfg,
                                            const VerifyThresholds& thr = {})
{
    VerificationReport rep;
    auto g = check_gamma(traj, m, thr.gamma);
    rep.worst_gamma = g.measured;
    rep.checks.push_back(g);

    auto e = check_energy(traj, m, thr.energy, thr.energy_min_q);
    rep.worst_energy = e.measured;
    rep.checks.push_back(e);

    try {
        const auto cv = cross_validate(traj, m, cfg, thr.crossval_min_q);
        rep.crossval_max_dev = cv.max_deviation;
        rep.checks.push_back({"crossval", cv.max_deviation <= thr.crossval, cv.max_deviation, thr.crossval});
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::NoSafeArc && err.kind() != ErrorKind::StepUnderflow
            && err.kind() != ErrorKind::CollisionSingularity) {
            throw;
        }
        rep.crossval_max_dev = std::numeric_limits<double>::infinity();
        rep.checks.push_back({"crossval", false, rep.crossval_max_dev, thr.crossval});
    }

    rep.checks.push_back(check_monotone_x2(traj));
    rep.checks.push_back(check_sum_identity(traj, m, thr.sum_identity));
    return rep;
}

} // namespace schubart
