#pragma once

// Kinematic value types for an event moving in (t, x, y, z) with the fifth
// coordinate fixed to x^5 = tau. Metric signature (-, +, +, +); all
// quantities are dimensionless.

#include "offshell/real.hpp"

#include <array>
#include <optional>

namespace offshell {

struct FourVector {
    Real t{0};
    Real x{0};
    Real y{0};
    Real z{0};

    FourVector() = default;
    FourVector(Real t_, Real x_, Real y_, Real z_)
        : t(std::move(t_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

    Real& operator[](int mu);
    const Real& operator[](int mu) const;

    bool is_finite() const;
};

FourVector operator+(const FourVector& a, const FourVector& b);
FourVector operator-(const FourVector& a, const FourVector& b);
FourVector operator*(const Real& s, const FourVector& v);

/// (u, a, j) = first three tau-derivatives of the worldline. The position is
/// optional and only carried for output.
struct WorldlineState {
    FourVector u;
    FourVector a;
    FourVector j;
    std::optional<FourVector> pos;
};

/// Reduced phase-space coordinates (eps, eps', eps'', rho, rho', eta).
struct ScalarState {
    Real eps{0};
    Real deps{0};
    Real ddeps{0};
    Real rho{0};
    Real drho{0};
    Real eta{0};

    static constexpr int kSize = 6;

    std::array<Real, kSize> to_array() const;
    static ScalarState from_array(const std::array<Real, kSize>& v);
};

/// Model coefficient D plus the numeric policy of a run.
struct ModelParams {
    Real D{1};
    int precision_bits = kDefaultPrecisionBits;
    Real eps_floor{"1e-8"};
    Real eps_cap{"1e6"};
    Real abs_tol{"1e-20"};
    Real rel_tol{"1e-20"};
    Real tau_max{50};
    Real h_min{"1e-30"};
    Real h_initial{"1e-4"};

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// -a.t b.t + a.x b.x + a.y b.y + a.z b.z
Real minkowski_dot(const FourVector& a, const FourVector& b);

/// Mass-shell deviation -<u,u> - 1.
Real epsilon_of(const FourVector& u);

/// Scalar invariants of a worldline state; throws DomainError when eps <= 0.
ScalarState scalars_of(const WorldlineState& w);

struct ThreeVelocity {
    Real vx{0};
    Real vy{0};
    Real vz{0};

    Real norm() const;
};

/// dx^i/dt = u^i / u^t; throws DomainError unless u.t > 0.
ThreeVelocity three_velocity(const FourVector& u);

}  // namespace offshell
