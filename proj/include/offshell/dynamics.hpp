#pragma once

// Right-hand sides of the renormalized self-interaction equation of motion,
// in the 12-dimensional vector form and the reduced 6-scalar form.
//
// Vector form:
//   x'''' = K1 u + K2 a + K3 j
// Scalar form (state ordering eps, eps', eps'', rho, rho', eta):
//   eps''' = -3 rho' + 2 (eps + 1) K1 + eps' K2 + (eps'' + 2 rho) K3
//   rho''  = 2 eta - eps' K1 + 2 rho K2 + rho' K3
//   eta'   = -(eps'' + 2 rho) K1 + rho' K2 + 2 eta K3
// with the K-potentials
//   K1 = (2 eps' / eps^2) [35/8 eps'^2 - 4 D eps^(7/2)]
//   K2 = (2 / eps^2) [4 eps eps'' + 3 eps rho - 35/2 eps'^2 + 8 D eps^(7/2)]
//   K3 = 12 eps' / eps

#include "offshell/core.hpp"

#include <array>

namespace offshell {

struct KPotentials {
    Real k1{0};
    Real k2{0};
    Real k3{0};
};

/// ds/dtau in the scalar-state ordering.
using ScalarDerivative = std::array<Real, ScalarState::kSize>;

/// Throws DomainError when eps <= 0.
KPotentials k_potentials(const ScalarState& s, const ModelParams& p);

/// Componentwise max(k, 0).
KPotentials k_positive_part(const KPotentials& k);

ScalarDerivative scalar_rhs(const ScalarState& s, const ModelParams& p);

/// Fourth tau-derivative of the worldline.
FourVector vector_rhs(const WorldlineState& w, const ModelParams& p);

/// max_nu |eps u_nu + <u,u> u_nu + u_nu|: residual of M^mu_nu u_mu = -u_nu
/// with M^mu_nu = eps delta^mu_nu + u^mu u_nu.
Real mass_matrix_contraction_residual(const FourVector& u);

/// Accelerated (or, for rho = 0, uniform) motion with constant eps:
/// (eps, 0, 0, rho, 0, eta) with eta = -rho (6 rho / eps + 16 D eps^(3/2)).
ScalarState constant_eps_fixed_point(const Real& eps, const Real& rho, const ModelParams& p);

/// D-proportional part of eps''': -16 D eps' eps^(5/2).
Real d_coefficient_pull(const ScalarState& s, const ModelParams& p);

/// Builds a vector state realizing the given scalar data:
///   u = (sqrt(1 + eps), 0, 0, 0)
///   a = (a_t, a_x, 0, 0)
///   j = (j_t, j_x, j_y, 0)
/// solved from the dot-product relations. Motion stays in the t-x plane
/// whenever j_y = 0. Throws DomainError when the data cannot be realized
/// by real four-vectors, e.g. rho < -eps'^2 / (4 (1 + eps)).
WorldlineState worldline_from_scalars(const ScalarState& s);

}  // namespace offshell
