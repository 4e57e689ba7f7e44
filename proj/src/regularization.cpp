#include "offshell/regularization.hpp"

#include "offshell/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>

namespace offshell {

// ---------------------------------------------------------------------------
// TaylorPoly
// ---------------------------------------------------------------------------

TaylorPoly::TaylorPoly(int order) : coeffs_(static_cast<std::size_t>(order) + 1), order_(order) {
    if (order < 0) throw DomainError("TaylorPoly: order must be non-negative");
    for (auto& c : coeffs_) c = 0;
}

TaylorPoly::TaylorPoly(std::vector<Real> coeffs, int order) : TaylorPoly(order) {
    const std::size_t n = std::min(coeffs.size(), coeffs_.size());
    for (std::size_t k = 0; k < n; ++k) coeffs_[k] = std::move(coeffs[k]);
}

Real TaylorPoly::derivative_at_zero(int k) const {
    if (k < 0 || k > order_) throw DomainError("TaylorPoly: derivative order out of range");
    Real factorial(1);
    for (int i = 2; i <= k; ++i) factorial *= i;
    return factorial * coeffs_[k];
}

Real TaylorPoly::evaluate(const Real& x) const {
    Real acc(0);
    for (int k = order_; k >= 0; --k) acc = acc * x + coeffs_[k];
    return acc;
}

TaylorPoly TaylorPoly::divided_by_power(int shift) const {
    if (shift < 0 || shift > order_) throw DomainError("TaylorPoly: invalid shift");
    for (int k = 0; k < shift; ++k) {
        if (coeffs_[k] != 0) {
            throw DomainError("TaylorPoly: series does not start at the stated order");
        }
    }
    TaylorPoly out(order_ - shift);
    for (int k = shift; k <= order_; ++k) out.coeffs_[k - shift] = coeffs_[k];
    return out;
}

TaylorPoly operator+(const TaylorPoly& a, const TaylorPoly& b) {
    TaylorPoly out(std::min(a.order_, b.order_));
    for (int k = 0; k <= out.order_; ++k) out.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
    return out;
}

TaylorPoly operator-(const TaylorPoly& a, const TaylorPoly& b) {
    TaylorPoly out(std::min(a.order_, b.order_));
    for (int k = 0; k <= out.order_; ++k) out.coeffs_[k] = a.coeffs_[k] - b.coeffs_[k];
    return out;
}

TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b) {
    TaylorPoly out(std::min(a.order_, b.order_));
    for (int k = 0; k <= out.order_; ++k) {
        Real acc(0);
        for (int i = 0; i <= k; ++i) acc += a.coeffs_[i] * b.coeffs_[k - i];
        out.coeffs_[k] = acc;
    }
    return out;
}

TaylorPoly operator*(const Real& s, const TaylorPoly& a) {
    TaylorPoly out(a.order_);
    for (int k = 0; k <= a.order_; ++k) out.coeffs_[k] = s * a.coeffs_[k];
    return out;
}

TaylorPoly TaylorPoly::log() const {
    if (!(coeffs_[0] > 0)) throw DomainError("TaylorPoly::log: constant term must be positive");
    // p q' = p'
    TaylorPoly q(order_);
    q.coeffs_[0] = boost::multiprecision::log(coeffs_[0]);
    for (int k = 1; k <= order_; ++k) {
        Real acc = k * coeffs_[k];
        for (int j = 1; j < k; ++j) acc -= j * q.coeffs_[j] * coeffs_[k - j];
        q.coeffs_[k] = acc / (k * coeffs_[0]);
    }
    return q;
}

TaylorPoly TaylorPoly::exp() const {
    // e' = q' e
    TaylorPoly e(order_);
    e.coeffs_[0] = boost::multiprecision::exp(coeffs_[0]);
    for (int k = 1; k <= order_; ++k) {
        Real acc(0);
        for (int j = 1; j <= k; ++j) acc += j * coeffs_[j] * e.coeffs_[k - j];
        e.coeffs_[k] = acc / k;
    }
    return e;
}

TaylorPoly TaylorPoly::pow(const Real& exponent) const { return (exponent * log()).exp(); }

// ---------------------------------------------------------------------------
// phi''(0)
// ---------------------------------------------------------------------------

Real phi_second_derivative(const ExpansionCoefficients& c) {
    if (!(c.r0 > 0)) throw DomainError("phi_second_derivative: r0 must be positive");
    const Real r0_92 = c.r0 * c.r0 * c.r0 * c.r0 * sqrt(c.r0);
    const Real num = -10 * c.b0 * c.r0 * c.r2 + 35 * c.b0 * c.r1 * c.r1 -
                     20 * c.b1 * c.r0 * c.r1 + 4 * c.b2 * c.r0 * c.r0;
    return num / (4 * r0_92);
}

// ---------------------------------------------------------------------------
// Worldline kernels
// ---------------------------------------------------------------------------

FourVector PolyWorldline::derivative(const Real& tau, int n) const {
    FourVector acc;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= n; --k) {
        Real falling(1);
        for (int i = 0; i < n; ++i) falling *= (k - i);
        acc = tau * acc + falling * coeffs[k];
    }
    return acc;
}

FourVector PolyWorldline::position(const Real& tau) const { return derivative(tau, 0); }

FourVector PolyWorldline::velocity(const Real& tau) const { return derivative(tau, 1); }

Real worldline_R(const PolyWorldline& z, const Real& tau, const Real& tau_prime) {
    const FourVector d = z.position(tau) - z.position(tau_prime);
    const Real dt = tau - tau_prime;
    return -minkowski_dot(d, d) - dt * dt;
}

Tensor5 worldline_h_tensor(const PolyWorldline& z, const Real& tau, const Real& tau_prime) {
    const FourVector d4 = z.position(tau) - z.position(tau_prime);
    const FourVector v4 = z.velocity(tau_prime);
    const std::array<Real, 5> sep{d4.t, d4.x, d4.y, d4.z, tau - tau_prime};
    const std::array<Real, 5> vel{v4.t, v4.x, v4.y, v4.z, Real(1)};

    Tensor5 h;
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            // dR/dx_b = -2 sep^b
            h[a][b] = -2 * (vel[a] * sep[b] - vel[b] * sep[a]);
        }
    }
    return h;
}

Real green_kernel(const FourVector& x, const Real& tau) {
    if (!(tau > 0)) return Real(0);
    const Real interval = -minkowski_dot(x, x) - tau * tau;
    if (!(interval > 0)) return Real(0);
    const Real pi = boost::math::constants::pi<Real>();
    return -1 / (4 * pi * pi * interval * sqrt(interval));
}

// ---------------------------------------------------------------------------
// Gel'fand continuation
// ---------------------------------------------------------------------------

namespace {

bool is_integer(const Real& x) { return x == boost::multiprecision::floor(x); }

}  // namespace

Real gelfand_pair(const Real& lambda, const CutoffPolynomial& phi, int m) {
    if (m < 0) throw DomainError("gelfand_pair: m must be non-negative");
    if (!(phi.support > 0)) throw DomainError("gelfand_pair: support cutoff must be positive");
    if (is_integer(lambda) && lambda <= -1 && lambda >= -(m + 1)) {
        throw PoleError("gelfand_pair: lambda = " + to_decimal(lambda, 6) +
                        " is a pole; use gelfand_residue");
    }
    if (lambda <= -(m + 2)) {
        throw DomainError("gelfand_pair: lambda must exceed -(m + 2) for m subtraction terms");
    }

    const Real& b = phi.support;
    const int top = phi.poly.order();

    // Integral of x^lambda times the Taylor remainder (terms j > m) over [0, b].
    Real remainder(0);
    for (int k = m + 1; k <= top; ++k) {
        const Real e = lambda + k + 1;
        remainder += phi.poly[k] * pow(b, e) / e;
    }
    // Subtracted terms integrated analytically, continued in lambda.
    Real subtracted(0);
    for (int j = 0; j <= std::min(m, top); ++j) {
        const Real e = lambda + j + 1;
        subtracted += phi.poly[j] * pow(b, e) / e;
    }
    return remainder + subtracted;
}

Real gelfand_residue(int n, const TaylorPoly& phi) {
    if (n < 1) throw DomainError("gelfand_residue: n must be a positive integer");
    if (n - 1 > phi.order()) return Real(0);
    Real factorial(1);
    for (int i = 2; i <= n - 1; ++i) factorial *= i;
    return phi.derivative_at_zero(n - 1) / factorial;
}

Real remainder_residue(const TaylorPoly& r_series, int m, const TaylorPoly& phi_series, int l,
                       const Real& lambda, const Real& b) {
    const Real k_real = m * lambda - l;
    if (!is_integer(k_real) || !(k_real >= 1)) {
        throw DomainError("remainder_residue: m*lambda - l must be a positive integer");
    }
    const int k = static_cast<int>(k_real);
    const TaylorPoly T = r_series.divided_by_power(m);
    const TaylorPoly psi = phi_series.divided_by_power(l);
    if (!(T[0] > 0)) throw DomainError("remainder_residue: T(0) must be positive");
    if (std::min(T.order(), psi.order()) < k - 1) {
        throw DomainError("remainder_residue: series too short for the required derivative");
    }
    const TaylorPoly q = psi * T.pow(-lambda);
    const Real sign = ((k - 1) % 2 == 0) ? Real(1) : Real(-1);
    return pow(b, lambda) * sign * q.derivative_at_zero(k - 1);
}

}  // namespace offshell
