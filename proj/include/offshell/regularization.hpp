#pragma once

// Analytic continuation of singular pairings (x_+^lambda, phi), their poles
// and residues, truncated power-series arithmetic, and the short-distance
// expansions of the self-interaction kernel along a polynomial worldline.

#include "offshell/core.hpp"

#include <array>
#include <vector>

namespace offshell {

// ===========================================================================
// Truncated power series
// ===========================================================================

/// c_0 + c_1 h + ... + c_N h^N, all arithmetic truncated at order N.
class TaylorPoly {
public:
    explicit TaylorPoly(int order);
    TaylorPoly(std::vector<Real> coeffs, int order);

    int order() const { return order_; }
    const Real& operator[](int k) const { return coeffs_[k]; }
    Real& operator[](int k) { return coeffs_[k]; }
    const std::vector<Real>& coeffs() const { return coeffs_; }

    /// k-th derivative at 0: k! c_k.
    Real derivative_at_zero(int k) const;

    /// Value at x (Horner).
    Real evaluate(const Real& x) const;

    /// Drops the first `shift` coefficients: p(h) / h^shift. The caller
    /// guarantees they vanish (checked).
    TaylorPoly divided_by_power(int shift) const;

    friend TaylorPoly operator+(const TaylorPoly& a, const TaylorPoly& b);
    friend TaylorPoly operator-(const TaylorPoly& a, const TaylorPoly& b);
    friend TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b);
    friend TaylorPoly operator*(const Real& s, const TaylorPoly& a);

    /// log of a series with c_0 > 0.
    TaylorPoly log() const;
    /// exp of a series.
    TaylorPoly exp() const;
    /// p^exponent as exp(exponent * log p); requires c_0 > 0.
    TaylorPoly pow(const Real& exponent) const;

private:
    std::vector<Real> coeffs_;
    int order_;
};

// ===========================================================================
// Second h-derivative of phi = k / T^(5/2) at h = 0
// ===========================================================================

/// k(h) = b0 + b1 h + b2 h^2 / 2,  T(h) = r0 + r1 h + r2 h^2 / 2.
struct ExpansionCoefficients {
    Real b0{0}, b1{0}, b2{0};
    Real r0{1}, r1{0}, r2{0};
};

/// (-10 b0 r0 r2 + 35 b0 r1^2 - 20 b1 r0 r1 + 4 b2 r0^2) / (4 r0^(9/2)).
/// Throws DomainError unless r0 > 0.
Real phi_second_derivative(const ExpansionCoefficients& c);

// ===========================================================================
// Worldline kernels
// ===========================================================================

/// x(tau) = sum_k c_k tau^k with four-vector coefficients.
struct PolyWorldline {
    std::vector<FourVector> coeffs;

    FourVector position(const Real& tau) const;
    FourVector velocity(const Real& tau) const;
    /// d^n x / dtau^n at tau.
    FourVector derivative(const Real& tau, int n) const;
};

/// R = -(x(tau) - x(tau'))^2 - (tau - tau')^2.
Real worldline_R(const PolyWorldline& z, const Real& tau, const Real& tau_prime);

/// Antisymmetric tensor over the index set {t, x, y, z, 5}.
using Tensor5 = std::array<std::array<Real, 5>, 5>;

/// h^{ab} = zdot^a(tau') dR/dx_b(tau) - zdot^b(tau') dR/dx_a(tau) with
/// dR/dx_m(tau) = -2 (x(tau) - x(tau'))^m, zdot^5 = 1 and
/// x^5(tau) - x^5(tau') = tau - tau'.
Tensor5 worldline_h_tensor(const PolyWorldline& z, const Real& tau, const Real& tau_prime);

/// tau-retarded kernel: -(1/4 pi^2) (-x^2 - tau^2)^(-3/2) inside the past 5D
/// cone with tau > 0, zero elsewhere.
Real green_kernel(const FourVector& x, const Real& tau);

// ===========================================================================
// Gel'fand continuation of x_+^lambda
// ===========================================================================

/// phi(x) = polynomial on [0, support], zero beyond.
struct CutoffPolynomial {
    TaylorPoly poly;
    Real support{1};
};

/// Regularized (x_+^lambda, phi) with m + 1 subtracted Taylor terms
/// (j = 0..m), in closed form. Throws PoleError at lambda = -1, ..., -(m+1)
/// and DomainError when lambda <= -(m + 2) (the subtracted integral no
/// longer converges).
Real gelfand_pair(const Real& lambda, const CutoffPolynomial& phi, int m);

/// Residue of (x_+^lambda, phi) at lambda = -n: phi^(n-1)(0) / (n-1)!.
Real gelfand_residue(int n, const TaylorPoly& phi);

/// Residue of (R_+^(-lambda), phi) when m lambda - l = k is a positive
/// integer: b^lambda (-1)^(k-1) q^(k-1)(0), q = psi / T^lambda with
/// T = R / h^m and psi = phi / h^l. Throws DomainError when k is not a
/// positive integer or T(0) <= 0.
Real remainder_residue(const TaylorPoly& r_series, int m, const TaylorPoly& phi_series, int l,
                       const Real& lambda, const Real& b);

}  // namespace offshell
