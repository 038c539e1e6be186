#pragma once

// State types for the symmetric collinear four-body problem (masses 1, m, m, 1
// placed at x1, x2, -x2, -x1) and the maps between its three coordinate
// systems:
//
//   Cartesian    (x1, x2, v1, v2)
//   canonical    q1 = x1 - x2, q2 = 2 x2, p1 = 2 v1, p2 = v1 + m v2
//   regularized  Q_i = +-sqrt(q_i), P_i = 2 Q_i p_i   (signed double cover)

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "schubart/error.hpp"

namespace schubart {

/// |Q_i| at or below this value is treated as a collision.
inline constexpr double kCollisionTol = 1e-10;

/// Mass of each inner body; the outer bodies have unit mass.
class MassRatio
{
public:
    explicit MassRatio(double m) : m_(m)
    {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw Error(ErrorKind::InvalidArgument, "mass ratio must be positive and finite, got " + std::to_string(m));
        }
    }

    double value() const noexcept { return m_; }
    operator double() const noexcept { return m_; }

private:
    double m_;
};

struct CartesianState
{
    double x1{0.0};
    double x2{0.0};
    double v1{0.0};
    double v2{0.0};
    double t{0.0};
};

struct CanonicalState
{
    double q1{0.0};
    double q2{0.0};
    double p1{0.0};
    double p2{0.0};
    double t{0.0};
};

/// Flow variable of the regularized system. Q1 and Q2 are signed; the
/// physical configuration only sees their squares.
struct RegularizedState
{
    double Q1{0.0};
    double Q2{0.0};
    double P1{0.0};
    double P2{0.0};
    double t{0.0}; ///< physical time, dt/ds = Q1^2 Q2^2
    double s{0.0}; ///< fictitious time

    bool operator==(const RegularizedState&) const = default;
};

enum class CollisionKind { SBC, BC, Total };

inline const char* to_string(CollisionKind k) noexcept
{
    switch (k) {
    case CollisionKind::SBC: return "SBC";
    case CollisionKind::BC: return "BC";
    case CollisionKind::Total: return "Total";
    }
    return "?";
}

/// Returned instead of a canonical state at a collision. The momentum
/// conjugate to the colliding coordinate diverges there and is left empty.
struct CollisionMarker
{
    CollisionKind kind{CollisionKind::SBC};
    double q1{0.0};
    double q2{0.0};
    std::optional<double> p1;
    std::optional<double> p2;
    double t{0.0};
};

using CanonicalOrCollision = std::variant<CanonicalState, CollisionMarker>;

struct BranchSigns
{
    int q1_sign{+1};
    int q2_sign{+1};
};

inline CanonicalState cartesian_to_canonical(const CartesianState& st, MassRatio m)
{
    const double w1 = 2.0 * st.v1;
    const double w2 = 2.0 * m * st.v2;
    return {st.x1 - st.x2, 2.0 * st.x2, w1, 0.5 * (w1 + w2), st.t};
}

inline CartesianState canonical_to_cartesian(const CanonicalState& st, MassRatio m)
{
    return {st.q1 + 0.5 * st.q2, 0.5 * st.q2, 0.5 * st.p1, (2.0 * st.p2 - st.p1) / (2.0 * m), st.t};
}

inline RegularizedState canonical_to_regularized(const CanonicalState& st, BranchSigns signs = {})
{
    if (st.q1 < 0.0 || st.q2 < 0.0) {
        throw Error(ErrorKind::NegativeCoordinate, "canonical coordinates must be non-negative");
    }
    const double Q1 = (signs.q1_sign < 0 ? -1.0 : 1.0) * std::sqrt(st.q1);
    const double Q2 = (signs.q2_sign < 0 ? -1.0 : 1.0) * std::sqrt(st.q2);
    return {Q1, Q2, 2.0 * Q1 * st.p1, 2.0 * Q2 * st.p2, st.t, 0.0};
}

inline CanonicalOrCollision regularized_to_canonical(const RegularizedState& st)
{
    const bool sbc = std::abs(st.Q1) <= kCollisionTol;
    const bool bc = std::abs(st.Q2) <= kCollisionTol;
    const double q1 = st.Q1 * st.Q1;
    const double q2 = st.Q2 * st.Q2;
    if (sbc && bc) {
        return CollisionMarker{CollisionKind::Total, q1, q2, std::nullopt, std::nullopt, st.t};
    }
    if (sbc) {
        return CollisionMarker{CollisionKind::SBC, q1, q2, std::nullopt, st.P2 / (2.0 * st.Q2), st.t};
    }
    if (bc) {
        return CollisionMarker{CollisionKind::BC, q1, q2, st.P1 / (2.0 * st.Q1), std::nullopt, st.t};
    }
    return CanonicalState{q1, q2, st.P1 / (2.0 * st.Q1), st.P2 / (2.0 * st.Q2), st.t};
}

inline bool is_collision(const RegularizedState& st) noexcept
{
    return std::abs(st.Q1) <= kCollisionTol || std::abs(st.Q2) <= kCollisionTol;
}

/// Cartesian image of a regularized state, or nothing at a collision.
inline std::optional<CartesianState> to_cartesian(const RegularizedState& st, MassRatio m)
{
    const auto c = regularized_to_canonical(st);
    if (const auto* can = std::get_if<CanonicalState>(&c)) {
        return canonical_to_cartesian(*can, m);
    }
    return std::nullopt;
}

/// Positions are defined at collisions too; only velocities diverge.
inline std::pair<double, double> positions(const RegularizedState& st)
{
    const double q1 = st.Q1 * st.Q1;
    const double q2 = st.Q2 * st.Q2;
    return {q1 + 0.5 * q2, 0.5 * q2};
}

} // namespace schubart
