#pragma once

#include <cmath>

#include "schubart/error.hpp"
#include "schubart/model.hpp"

namespace schubart {

/// Total energy of the system; every solver path uses E = -1.
struct EnergyConstant
{
    double E{-1.0};
};

/// d/ds of (Q1, Q2, P1, P2, t).
struct Derivative5
{
    double dQ1{0.0};
    double dQ2{0.0};
    double dP1{0.0};
    double dP2{0.0};
    double dt{0.0};
};

inline double hamiltonian_cartesian(const CartesianState& st, MassRatio m)
{
    if (st.x2 == 0.0 || st.x1 == st.x2 || st.x1 + st.x2 == 0.0 || st.x1 == 0.0) {
        throw Error(ErrorKind::CollisionSingularity, "Cartesian Hamiltonian evaluated at a collision");
    }
    const double w1 = 2.0 * st.v1;
    const double w2 = 2.0 * m * st.v2;
    return 0.25 * w1 * w1 + w2 * w2 / (4.0 * m) - 1.0 / (2.0 * st.x1) - m * m / (2.0 * st.x2)
           - 2.0 * m / (st.x1 + st.x2) - 2.0 * m / (st.x1 - st.x2);
}

inline double hamiltonian_canonical(const CanonicalState& st, MassRatio m)
{
    const double q1 = st.q1;
    const double q2 = st.q2;
    if (q1 == 0.0 || q2 == 0.0 || q1 + q2 == 0.0 || 2.0 * q1 + q2 == 0.0) {
        throw Error(ErrorKind::CollisionSingularity, "canonical Hamiltonian evaluated at a collision");
    }
    const double p1 = st.p1;
    const double p2 = st.p2;
    return (1.0 + 1.0 / m) * p1 * p1 / 4.0 - p1 * p2 / m + p2 * p2 / m - 2.0 * m / q1 - m * m / q2
           - 2.0 * m / (q1 + q2) - 1.0 / (2.0 * q1 + q2);
}

/// Regularized Hamiltonian (dt/ds)(H - E). Zero along every trajectory of
/// energy E. The two rational terms are taken as 0 at Q1 = Q2 = 0.
inline double gamma(const RegularizedState& st, MassRatio m, EnergyConstant e = {})
{
    const double Q1 = st.Q1, Q2 = st.Q2, P1 = st.P1, P2 = st.P2;
    const double a = Q1 * Q1;
    const double b = Q2 * Q2;
    const double ab = a * b;
    const double sum = a + b;
    const double sum2 = 2.0 * a + b;
    const double r1 = sum == 0.0 ? 0.0 : 2.0 * m * ab / sum;
    const double r2 = sum2 == 0.0 ? 0.0 : ab / sum2;
    return b * P1 * P1 / 16.0 + (b * P1 * P1 - 4.0 * Q1 * Q2 * P1 * P2 + 4.0 * a * P2 * P2) / (16.0 * m)
           - m * m * a - 2.0 * m * b - r1 - r2 - ab * e.E;
}

/// Hamilton's equations of gamma in fictitious time s, plus dt/ds = Q1^2 Q2^2.
/// Each component is the analytic partial derivative of gamma() above.
inline Derivative5 regularized_vector_field(const RegularizedState& st, MassRatio m, EnergyConstant e = {})
{
    const double Q1 = st.Q1, Q2 = st.Q2, P1 = st.P1, P2 = st.P2;
    if (Q1 == 0.0 && Q2 == 0.0) {
        throw Error(ErrorKind::TotalCollapse, "Q1 = Q2 = 0 reached");
    }
    const double a = Q1 * Q1;
    const double b = Q2 * Q2;
    const double sum = a + b;
    const double sum2 = 2.0 * a + b;
    const double sumsq = sum * sum;
    const double sum2sq = sum2 * sum2;
    const double k = (1.0 + m) / (8.0 * m);

    Derivative5 d;
    d.dQ1 = k * b * P1 - Q1 * Q2 * P2 / (4.0 * m);
    d.dQ2 = a * P2 / (2.0 * m) - Q1 * Q2 * P1 / (4.0 * m);
    d.dP1 = Q2 * P1 * P2 / (4.0 * m) - Q1 * P2 * P2 / (2.0 * m) + 2.0 * m * m * Q1
            + 4.0 * m * Q1 * b * b / sumsq + 2.0 * Q1 * b * b / sum2sq + 2.0 * e.E * Q1 * b;
    d.dP2 = Q1 * P1 * P2 / (4.0 * m) - k * Q2 * P1 * P1 + 4.0 * m * Q2
            + 4.0 * m * a * a * Q2 / sumsq + 4.0 * a * a * Q2 / sum2sq + 2.0 * e.E * a * Q2;
    d.dt = a * b;
    return d;
}

struct Acceleration
{
    double a1{0.0};
    double a2{0.0};
};

inline Acceleration newtonian_accel(const CartesianState& st, MassRatio m)
{
    const double x1 = st.x1, x2 = st.x2;
    if (x1 == 0.0 || x2 == 0.0 || x1 == x2 || x1 + x2 == 0.0) {
        throw Error(ErrorKind::CollisionSingularity, "Newtonian acceleration evaluated at a collision");
    }
    const double sp = (x1 + x2) * (x1 + x2);
    const double sm = (x1 - x2) * (x1 - x2);
    return {-1.0 / (4.0 * x1 * x1) - m / sp - m / sm, -m / (4.0 * x2 * x2) - 1.0 / sp + 1.0 / sm};
}

/// Binary collision of the inner pair at the origin, outer bodies at rest at
/// distance A = R^2. P2 is fixed by gamma = 0.
inline RegularizedState bc_initial_state(double R, MassRatio m)
{
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw Error(ErrorKind::InvalidR, "R must be positive and finite, got " + std::to_string(R));
    }
    return {R, 0.0, 0.0, 2.0 * std::pow(m.value(), 1.5), 0.0, 0.0};
}

/// |P1| forced by gamma = 0 at an SBC with P2 = 0.
inline double sbc_p1_magnitude(MassRatio m)
{
    return 8.0 * m / std::sqrt(2.0 * m + 2.0);
}

/// Closed form of d/ds (P1 Q1 + P2 Q2) along the flow (valid for E = -1).
inline double sum_identity_rhs(const RegularizedState& st, MassRatio m)
{
    const double a = st.Q1 * st.Q1;
    const double b = st.Q2 * st.Q2;
    const double bracket = (a + b == 0.0 ? 0.0 : 2.0 * m / (a + b)) + (2.0 * a + b == 0.0 ? 0.0 : 1.0 / (2.0 * a + b)) - 2.0;
    return 4.0 * m * b + 2.0 * m * m * a + 2.0 * a * b * bracket;
}

} // namespace schubart
