#include "offshell/dynamics.hpp"

#include "offshell/errors.hpp"

#include <algorithm>

namespace offshell {

namespace {

void require_above_shell(const Real& eps, const char* where) {
    if (!(eps > 0)) {
        throw DomainError(std::string(where) + ": eps must be positive (eps = " +
                          to_decimal(eps, 10) + ")");
    }
}

}  // namespace

KPotentials k_potentials(const ScalarState& s, const ModelParams& p) {
    require_above_shell(s.eps, "k_potentials");
    const Real& e = s.eps;
    const Real e2 = e * e;
    const Real e72 = e2 * e * sqrt(e);
    const Real de2 = s.deps * s.deps;

    KPotentials k;
    k.k1 = (2 * s.deps / e2) * (ratio(35, 8) * de2 - 4 * p.D * e72);
    k.k2 = (2 / e2) * (4 * e * s.ddeps + 3 * e * s.rho - ratio(35, 2) * de2 + 8 * p.D * e72);
    k.k3 = 12 * s.deps / e;
    return k;
}

KPotentials k_positive_part(const KPotentials& k) {
    const Real zero(0);
    return {std::max(k.k1, zero), std::max(k.k2, zero), std::max(k.k3, zero)};
}

ScalarDerivative scalar_rhs(const ScalarState& s, const ModelParams& p) {
    const KPotentials k = k_potentials(s, p);
    const Real accel = s.ddeps + 2 * s.rho;

    ScalarDerivative f;
    f[0] = s.deps;
    f[1] = s.ddeps;
    f[2] = -3 * s.drho + 2 * (s.eps + 1) * k.k1 + s.deps * k.k2 + accel * k.k3;
    f[3] = s.drho;
    f[4] = 2 * s.eta - s.deps * k.k1 + 2 * s.rho * k.k2 + s.drho * k.k3;
    f[5] = -accel * k.k1 + s.drho * k.k2 + 2 * s.eta * k.k3;
    return f;
}

FourVector vector_rhs(const WorldlineState& w, const ModelParams& p) {
    const ScalarState s = scalars_of(w);
    const KPotentials k = k_potentials(s, p);
    return k.k1 * w.u + k.k2 * w.a + k.k3 * w.j;
}

Real mass_matrix_contraction_residual(const FourVector& u) {
    const Real eps = epsilon_of(u);
    const Real uu = minkowski_dot(u, u);
    // Lowering the index flips the sign of the time component only; the
    // residual is invariant under that, so work with contravariant parts.
    Real worst(0);
    for (int mu = 0; mu < 4; ++mu) {
        const Real r = abs(eps * u[mu] + uu * u[mu] + u[mu]);
        worst = std::max(worst, r);
    }
    return worst;
}

ScalarState constant_eps_fixed_point(const Real& eps, const Real& rho, const ModelParams& p) {
    require_above_shell(eps, "constant_eps_fixed_point");
    ScalarState s;
    s.eps = eps;
    s.rho = rho;
    s.eta = -rho * (6 * rho / eps + 16 * p.D * eps * sqrt(eps));
    if (s.eta == 0) s.eta = 0;  // no negative zero for uniform motion
    return s;
}

Real d_coefficient_pull(const ScalarState& s, const ModelParams& p) {
    require_above_shell(s.eps, "d_coefficient_pull");
    const Real e52 = s.eps * s.eps * sqrt(s.eps);
    return -16 * p.D * s.deps * e52;
}

WorldlineState worldline_from_scalars(const ScalarState& s) {
    require_above_shell(s.eps, "worldline_from_scalars");
    WorldlineState w;
    w.u = {sqrt(1 + s.eps), Real(0), Real(0), Real(0)};
    const Real& ut = w.u.t;

    // <u,a> = -eps'/2 and <a,a> = rho
    const Real at = s.deps / (2 * ut);
    const Real ax2 = s.rho + at * at;
    if (ax2 < 0) {
        throw DomainError(
            "worldline_from_scalars: rho is below -eps'^2/(4(1+eps)); no real acceleration "
            "four-vector realizes it");
    }
    const Real ax = sqrt(ax2);
    w.a = {at, ax, Real(0), Real(0)};

    // <u,j> = -eps''/2 - rho, <a,j> = rho'/2, <j,j> = eta
    const Real jt = (s.ddeps / 2 + s.rho) / ut;
    const Real mixed = s.drho / 2 + at * jt;
    Real jx(0);
    if (ax > 0) {
        jx = mixed / ax;
    } else if (mixed != 0) {
        throw DomainError(
            "worldline_from_scalars: acceleration is parallel to u but rho' is inconsistent "
            "with it");
    }
    const Real jy2 = s.eta + jt * jt - jx * jx;
    if (jy2 < 0) {
        throw DomainError(
            "worldline_from_scalars: eta is too negative to be realized by a real jerk "
            "four-vector");
    }
    w.j = {jt, jx, sqrt(jy2), Real(0)};
    w.pos = FourVector{};
    return w;
}

}  // namespace offshell
