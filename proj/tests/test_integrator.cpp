#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "schubart/bounds.hpp"
#include "schubart/integrator.hpp"

using namespace schubart;

TEST(Dopri5, ExponentialGrowth)
{
    const auto f = [](double, const ode::Vec<1>& y) { return ode::Vec<1>{y[0]}; };
    ode::StepControl ctl;
    ctl.rel_tol = ctl.abs_tol = 1e-12;
    double y_end = 0.0;
    const std::vector<double> landing{1.0};
    const double x = ode::drive<1>(f, 0.0, {1.0}, 2.0, ctl, landing,
                                   [&](double, const ode::Vec<1>&, const ode::Vec<1>&, double xb, const ode::Vec<1>& yb) {
                                       if (xb == 1.0) {
                                           EXPECT_NEAR(yb[0], std::exp(1.0), 1e-10);
                                       }
                                       y_end = yb[0];
                                       return true;
                                   });
    EXPECT_EQ(x, 2.0);
    EXPECT_NEAR(y_end, std::exp(2.0), 1e-9);
}

TEST(Dopri5, StepUnderflowNearSingularity)
{
    // y' = 1 / (1 - x)^2 blows up at x = 1.
    const auto f = [](double x, const ode::Vec<1>&) { return ode::Vec<1>{1.0 / ((1.0 - x) * (1.0 - x))}; };
    ode::StepControl ctl;
    ctl.rel_tol = ctl.abs_tol = 1e-12;
    try {
        ode::drive<1>(f, 0.0, {0.0}, 2.0, ctl, {}, [](auto&&...) { return true; });
        FAIL() << "expected StepUnderflow";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::StepUnderflow);
    }
}

TEST(Integrator, ConfigValidation)
{
    IntegratorConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.rel_tol = 1e-15;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.event_tol_s = cfg.initial_step;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.max_step = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(Integrator, ZeroHorizonGivesOneSample)
{
    IntegratorConfig cfg;
    cfg.s_horizon = 0.0;
    const MassRatio m(1.0);
    const auto traj = integrate(bc_initial_state(1.3, m), m, cfg, StopCondition::horizon());
    ASSERT_EQ(traj.samples.size(), 1u);
    EXPECT_TRUE(traj.events.empty());
    EXPECT_EQ(traj.samples[0], bc_initial_state(1.3, m));
}

TEST(Integrator, FirstSbcOfUnitMassOrbit)
{
    const MassRatio m(1.0);
    const auto hit = first_sbc(2.295, m, IntegratorConfig{});
    EXPECT_EQ(hit.kind, EventKind::SBC);
    EXPECT_GT(hit.state.Q2, 0.0);
    EXPECT_LT(std::abs(hit.state.P2), 0.05);
    EXPECT_NEAR(std::abs(hit.state.P1), 4.0, 1e-8);
    EXPECT_LE(std::abs(hit.state.Q1), kCollisionTol);
    EXPECT_NE(hit.crossing_derivative, 0.0);
    EXPECT_NEAR(hit.crossing_derivative, (1.0 + 1.0) / 8.0 * hit.state.Q2 * hit.state.Q2 * hit.state.P1, 1e-8);
}

TEST(Integrator, FirstSbcResidualSigns)
{
    const MassRatio m(1.0);
    const IntegratorConfig cfg;
    EXPECT_GT(first_sbc(std::sqrt(1.0 / 3.0), m, cfg).state.P2, 0.0);
    EXPECT_LT(first_sbc(std::sqrt(6.485), m, cfg).state.P2, 0.0);
    EXPECT_LT(first_sbc(3.0, m, cfg).state.P2, 0.0);
}

TEST(Integrator, SelfConvergence)
{
    const MassRatio m(1.0);
    IntegratorConfig coarse;
    coarse.rel_tol = coarse.abs_tol = 1e-8;
    IntegratorConfig fine = coarse;
    fine.rel_tol = fine.abs_tol = 0.5e-8;
    const double a = first_sbc(2.295, m, coarse).state.Q2;
    const double b = first_sbc(2.295, m, fine).state.Q2;
    EXPECT_LT(std::abs(a - b), 10.0 * 1e-8);
}

TEST(Integrator, Determinism)
{
    const MassRatio m(0.7);
    IntegratorConfig cfg;
    cfg.s_horizon = 6.0;
    const auto a = integrate(bc_initial_state(1.9, m), m, cfg, StopCondition::horizon());
    const auto b = integrate(bc_initial_state(1.9, m), m, cfg, StopCondition::horizon());
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i], b.samples[i]);
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) EXPECT_EQ(a.events[i].s, b.events[i].s);
}

TEST(Integrator, GammaDriftBounded)
{
    // Bounded orbits near the periodic one; escaping orbits grow |Q| without
    // bound and only conserve gamma relative to its term sizes.
    const std::pair<double, double> cases[] = {{0.5, 1.4}, {1.0, 2.1}, {2.0, 3.3}};
    for (const auto& [m, R] : cases) {
        const MassRatio mr(m);
        IntegratorConfig cfg;
        cfg.s_horizon = 5.0;
        const auto traj = integrate(bc_initial_state(R, mr), mr, cfg, StopCondition::horizon());
        double worst = 0.0;
        for (const auto& st : traj.samples) worst = std::max(worst, std::abs(gamma(st, mr)));
        EXPECT_LE(worst, 100.0 * 1e-10) << "m = " << m;
        for (std::size_t i = 1; i < traj.samples.size(); ++i) EXPECT_LT(traj.samples[i - 1].s, traj.samples[i].s);
    }
}

TEST(Integrator, EventSequenceOverSeveralQuarters)
{
    const MassRatio m(1.0);
    const auto traj = integrate(bc_initial_state(2.2955922587, m), m, IntegratorConfig{}, StopCondition::kth_event(4));
    ASSERT_EQ(traj.events.size(), 4u);
    EXPECT_EQ(traj.events[0].kind, EventKind::SBC);
    EXPECT_EQ(traj.events[1].kind, EventKind::BC);
    EXPECT_EQ(traj.events[2].kind, EventKind::SBC);
    EXPECT_EQ(traj.events[3].kind, EventKind::BC);
    EXPECT_EQ(traj.samples.back().s, traj.events[3].s);
    for (const auto& e : traj.events) {
        const double c = e.kind == EventKind::SBC ? e.state.Q1 : e.state.Q2;
        EXPECT_LE(std::abs(c), kCollisionTol);
        EXPECT_NE(e.crossing_derivative, 0.0);
    }
    // Quarter periods are equal.
    EXPECT_NEAR(traj.events[1].s, 2.0 * traj.events[0].s, 1e-8);
    EXPECT_NEAR(traj.events[3].s, 4.0 * traj.events[0].s, 1e-8);

    const auto bc = integrate(bc_initial_state(2.2955922587, m), m, IntegratorConfig{}, StopCondition::first_bc());
    EXPECT_EQ(bc.events.back().kind, EventKind::BC);
    EXPECT_NEAR(bc.events.back().s, traj.events[1].s, 1e-10);
}

TEST(Integrator, HorizonExceeded)
{
    IntegratorConfig cfg;
    cfg.s_horizon = 0.1;
    try {
        first_sbc(2.0, MassRatio(1.0), cfg);
        FAIL() << "expected HorizonExceeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::HorizonExceeded);
    }
}

TEST(Integrator, TotalCollapseStart)
{
    try {
        integrate({0.0, 0.0, 1.0, 1.0, 0.0, 0.0}, MassRatio(1.0), IntegratorConfig{}, StopCondition::horizon());
        FAIL() << "expected TotalCollapse";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TotalCollapse);
    }
}

TEST(Integrator, Q2MonotoneBeforeFirstSbc)
{
    const MassRatio m(1.0);
    const double bound = a0_analytic_bound(m);
    for (double A : {0.5, 2.0, 4.0, bound}) {
        const auto traj = integrate(bc_initial_state(std::sqrt(A), m), m, IntegratorConfig{}, StopCondition::first_sbc());
        for (std::size_t i = 1; i < traj.samples.size(); ++i) {
            EXPECT_GT(traj.samples[i].Q2, traj.samples[i - 1].Q2) << "A = " << A << " i = " << i;
        }
    }
}

TEST(LocateEvent, BisectionContract)
{
    const MassRatio m(1.0);
    IntegratorConfig cfg;
    const auto dense = [](double s) { return RegularizedState{std::cos(s), 1.0 + s, -4.0, 0.0, 0.0, s}; };
    const auto hit = locate_event(1.0, 2.0, dense, EventKind::SBC, cfg, m);
    EXPECT_LE(std::abs(hit.state.Q1), kCollisionTol);
    EXPECT_NEAR(hit.s, M_PI / 2.0, 1e-10);
    EXPECT_GE(hit.s, 1.0);
    EXPECT_LE(hit.s, 2.0);

    try {
        locate_event(0.0, 1.0, dense, EventKind::SBC, cfg, m);
        FAIL() << "expected NoSignChange";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoSignChange);
    }
}

TEST(LocateEvent, TighterToleranceShrinksResidual)
{
    const MassRatio m(1.0);
    auto worst = [&](double tol) {
        IntegratorConfig cfg;
        cfg.event_tol_s = tol;
        double w = 0.0;
        for (double R : {0.7, 1.0, 1.3, 1.6, 1.9, 2.1, 2.295, 2.5}) w = std::max(w, std::abs(first_sbc(R, m, cfg).state.Q1));
        return w;
    };
    const double loose = worst(1e-11);
    const double tight = worst(1e-12);
    EXPECT_GE(loose, 5.0 * tight) << loose << " vs " << tight;
}
