#include "offshell/core.hpp"

#include "offshell/errors.hpp"

#include <string>

namespace offshell {

Real& FourVector::operator[](int mu) {
    switch (mu) {
    case 0: return t;
    case 1: return x;
    case 2: return y;
    default: return z;
    }
}

const Real& FourVector::operator[](int mu) const {
    switch (mu) {
    case 0: return t;
    case 1: return x;
    case 2: return y;
    default: return z;
    }
}

bool FourVector::is_finite() const {
    return offshell::is_finite(t) && offshell::is_finite(x) && offshell::is_finite(y) &&
           offshell::is_finite(z);
}

FourVector operator+(const FourVector& a, const FourVector& b) {
    return {a.t + b.t, a.x + b.x, a.y + b.y, a.z + b.z};
}

FourVector operator-(const FourVector& a, const FourVector& b) {
    return {a.t - b.t, a.x - b.x, a.y - b.y, a.z - b.z};
}

FourVector operator*(const Real& s, const FourVector& v) {
    return {s * v.t, s * v.x, s * v.y, s * v.z};
}

std::array<Real, ScalarState::kSize> ScalarState::to_array() const {
    return {eps, deps, ddeps, rho, drho, eta};
}

ScalarState ScalarState::from_array(const std::array<Real, kSize>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

void ModelParams::validate() const {
    if (precision_bits < kMinPrecisionBits) {
        throw ConfigError("precision_bits must be >= 53");
    }
    if (!(D > 0)) throw ConfigError("D must be positive");
    if (!(eps_floor > 0)) throw ConfigError("eps_floor must be positive");
    if (!(eps_cap > 0)) throw ConfigError("eps_cap must be positive");
    if (!(eps_floor < eps_cap)) throw ConfigError("eps_floor must be below eps_cap");
    if (!(abs_tol > 0)) throw ConfigError("abs_tol must be positive");
    if (!(rel_tol > 0)) throw ConfigError("rel_tol must be positive");
    if (!(tau_max > 0)) throw ConfigError("tau_max must be positive");
    if (!(h_min > 0)) throw ConfigError("h_min must be positive");
    if (!(h_initial >= h_min)) throw ConfigError("h_initial must be >= h_min");
}

Real minkowski_dot(const FourVector& a, const FourVector& b) {
    return -a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

Real epsilon_of(const FourVector& u) { return -minkowski_dot(u, u) - 1; }

ScalarState scalars_of(const WorldlineState& w) {
    ScalarState s;
    s.eps = epsilon_of(w.u);
    if (!(s.eps > 0)) {
        throw DomainError("scalars_of: state is not above the mass shell (eps = " +
                          to_decimal(s.eps, 10) + ")");
    }
    s.rho = minkowski_dot(w.a, w.a);
    s.deps = -2 * minkowski_dot(w.u, w.a);
    s.ddeps = -2 * (s.rho + minkowski_dot(w.u, w.j));
    s.drho = 2 * minkowski_dot(w.a, w.j);
    s.eta = minkowski_dot(w.j, w.j);
    return s;
}

Real ThreeVelocity::norm() const { return sqrt(vx * vx + vy * vy + vz * vz); }

ThreeVelocity three_velocity(const FourVector& u) {
    if (!(u.t > 0)) {
        throw DomainError("three_velocity: u.t must be positive");
    }
    return {u.x / u.t, u.y / u.t, u.z / u.t};
}

}  // namespace offshell
