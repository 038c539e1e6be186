#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "schubart/bounds.hpp"

using namespace schubart;

namespace {

// Root and bound from a 30-digit mpmath evaluation.
struct Frozen
{
    double m, a_root, bound;
};
constexpr Frozen kFrozen[] = {
    {0.25, 4.1617705967547953, 1.6913285850760248},
    {0.5, 3.3753223802133644, 3.1143561964925986},
    {1.0, 2.7664070118270517, 6.4844353317658569},
    {2.0, 2.2998696928637552, 14.964801835770992},
    {4.0, 1.9469653281284046, 37.80910461928553},
};

} // namespace

TEST(Bounds, QuarticRootUnitMass)
{
    const MassRatio m(1.0);
    const double a = solve_turning_quartic(m);
    EXPECT_NEAR(a, 2.766, 1e-3);
    EXPECT_LE(std::abs(turning_quartic(a, m)), 1e-12);
}

TEST(Bounds, QuarticRootMatchesGridScan)
{
    // Brute-force sign-change scan over (1, 10] with step 1e-4.
    const MassRatio m(1.0);
    std::vector<double> roots;
    double prev_a = 1.0;
    double prev_f = turning_quartic(prev_a, m);
    for (int i = 1; i <= 90000; ++i) {
        const double a = 1.0 + i * 1e-4;
        const double f = turning_quartic(a, m);
        if ((prev_f < 0.0) != (f < 0.0)) roots.push_back(0.5 * (prev_a + a));
        prev_a = a;
        prev_f = f;
    }
    ASSERT_EQ(roots.size(), 1u);
    EXPECT_NEAR(roots[0], solve_turning_quartic(m), 1e-4);
}

TEST(Bounds, QuarticRootAndBoundAcrossMassRatios)
{
    for (const auto& f : kFrozen) {
        const MassRatio m(f.m);
        const double a = solve_turning_quartic(m);
        EXPECT_GT(a, 1.0);
        EXPECT_LE(std::abs(turning_quartic(a, m)), 1e-12) << "m = " << f.m;
        EXPECT_NEAR(a, f.a_root, 1e-13 * f.a_root);
        EXPECT_NEAR(a0_analytic_bound(m), f.bound, 1e-12 * f.bound);
    }
}

TEST(Bounds, QuarticBracketFailure)
{
    // The root grows like (16/m)^(1/3); a tiny m pushes it past 1e6.
    EXPECT_THROW(solve_turning_quartic(MassRatio(1e-20)), Error);
}

TEST(Bounds, UnitMassBoundClosedForm)
{
    const MassRatio m(1.0);
    const double a = solve_turning_quartic(m);
    const double a2 = a * a;
    const double closed = 0.5 + 4.0 * a2 * (a2 + 1.0) / ((a2 - 1.0) * (a2 - 1.0));
    EXPECT_NEAR(a0_analytic_bound(m), closed, 1e-10);
}

TEST(Bounds, BoundDecreasesInA)
{
    for (const auto& f : kFrozen) {
        const MassRatio m(f.m);
        double prev = a0_bound_at(f.a_root, m);
        for (double da : {0.01, 0.1, 0.5, 2.0}) {
            const double v = a0_bound_at(f.a_root + da, m);
            EXPECT_LT(v, prev);
            prev = v;
        }
    }
}

TEST(Bounds, NoTurningPointBelowBound)
{
    const IntegratorConfig cfg;
    EXPECT_FALSE(detect_turning_point(2.0, MassRatio(1.0), cfg).has_value()); // A = 4
    for (double m : {0.5, 1.0, 2.0}) {
        const MassRatio mr(m);
        const double bound = a0_analytic_bound(mr);
        for (double frac : {0.1, 0.4, 0.7, 0.9, 1.0}) {
            EXPECT_FALSE(detect_turning_point(std::sqrt(frac * bound), mr, cfg).has_value())
                << "m = " << m << " A = " << frac * bound;
        }
    }
}

TEST(Bounds, TurningPointForLargeSeparation)
{
    const MassRatio m(1.0);
    IntegratorConfig cfg;
    const auto tp = detect_turning_point(std::sqrt(20.0), m, cfg);
    ASSERT_TRUE(tp.has_value());
    EXPECT_GT(tp->t_star, 0.0);
    EXPECT_GT(tp->x2_at, 0.0);

    // Velocity of the inner body just before and just after t*.
    const RegularizedState start = bc_initial_state(std::sqrt(20.0), m);
    auto state_at_time = [&](double t_target) {
        // dt/ds = q1 q2, so step s by the local rate and correct once.
        IntegratorConfig c = cfg;
        c.s_horizon = tp->s_star;
        RegularizedState st = integrate(start, m, c, StopCondition::horizon()).samples.back();
        for (int k = 0; k < 3; ++k) {
            const double rate = st.Q1 * st.Q1 * st.Q2 * st.Q2;
            c.s_horizon = st.s + (t_target - st.t) / rate;
            st = integrate(start, m, c, StopCondition::horizon()).samples.back();
        }
        return st;
    };
    const auto before = to_cartesian(state_at_time(tp->t_star - 1e-4), m);
    const auto after = to_cartesian(state_at_time(tp->t_star + 1e-4), m);
    ASSERT_TRUE(before && after);
    EXPECT_NEAR(before->t, tp->t_star - 1e-4, 1e-9);
    EXPECT_NEAR(after->t, tp->t_star + 1e-4, 1e-9);
    EXPECT_GT(before->v2, 0.0);
    EXPECT_LT(after->v2, 0.0);
}

TEST(Bounds, NumericThresholdUnitMass)
{
    const MassRatio m(1.0);
    const IntegratorConfig cfg;
    const double a0 = numeric_a0(m, cfg);
    EXPECT_GE(a0, a0_analytic_bound(m));
    EXPECT_GE(a0, 6.485);
    EXPECT_FALSE(detect_turning_point(std::sqrt(a0 - 1e-3), m, cfg).has_value());
    EXPECT_TRUE(detect_turning_point(std::sqrt(a0 + 1e-3), m, cfg).has_value());

    IntegratorConfig fine = cfg;
    fine.rel_tol = fine.abs_tol = 0.5e-10;
    EXPECT_NEAR(numeric_a0(m, fine), a0, 1e-3);
}

TEST(Bounds, NumericThresholdAboveAnalyticBound)
{
    const IntegratorConfig cfg;
    for (const auto& f : kFrozen) {
        const MassRatio m(f.m);
        const auto est = estimate_a0(m, cfg, true);
        ASSERT_TRUE(est.numeric_threshold.has_value());
        EXPECT_GE(*est.numeric_threshold, est.analytic_bound) << "m = " << f.m;
    }
}
