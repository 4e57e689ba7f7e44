#include "offshell/errors.hpp"
#include "offshell/regularization.hpp"
#include "offshell/scenario.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <random>

namespace offshell {

namespace {

class Draw {
public:
    explicit Draw(unsigned seed) : gen_(seed) {}
    // Doubles convert exactly, so every draw is reproducible at any precision.
    Real operator()(double lo, double hi) {
        return Real(std::uniform_real_distribution<double>(lo, hi)(gen_));
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

private:
    std::mt19937_64 gen_;
};

Real rel_err(const Real& got, const Real& want) {
    const Real scale = std::max(abs(want), Real(1));
    return abs(got - want) / scale;
}

std::string sci(const Real& x) { return to_decimal(x, 3); }

// Tolerance for identities that only suffer roundoff.
Real roundoff_tol() { return pow2(-(current_precision_bits() - 40)); }

// Neville extrapolation to zero of f sampled at the given abscissae.
Real extrapolate_to_zero(std::vector<Real> x, std::vector<Real> f) {
    const std::size_t n = x.size();
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i) {
            f[i] = (x[i + k] * f[i] - x[i] * f[i + 1]) / (x[i + k] - x[i]);
        }
    }
    return f[0];
}

TaylorPoly random_poly(Draw& draw, int degree, int order) {
    std::vector<Real> c;
    for (int k = 0; k <= degree; ++k) c.push_back(draw(-2, 2));
    return TaylorPoly(c, order);
}

IdentityCheck check_phi_second(Draw& draw) {
    IdentityCheck c{"phi'' closed form vs series arithmetic (200 draws)", false, "", ""};
    const Real tol = roundoff_tol();
    Real worst(0);
    for (int i = 0; i < 200; ++i) {
        ExpansionCoefficients e;
        e.b0 = draw(-2, 2);
        e.b1 = draw(-2, 2);
        e.b2 = draw(-2, 2);
        e.r0 = draw(0.1, 2);
        e.r1 = draw(-2, 2);
        e.r2 = draw(-2, 2);
        const TaylorPoly k({e.b0, e.b1, e.b2 / 2}, 4);
        const TaylorPoly t({e.r0, e.r1, e.r2 / 2}, 4);
        const TaylorPoly phi = k * t.pow(ratio(-5, 2));
        worst = std::max(worst, rel_err(phi_second_derivative(e), phi.derivative_at_zero(2)));
    }
    c.passed = worst <= tol;
    c.tolerance = sci(tol);
    c.detail = "max rel err " + sci(worst);
    return c;
}

IdentityCheck check_residue_limit(Draw& draw) {
    IdentityCheck c{"(lambda + n) pair -> residue at lambda = -1, -2, -3", false, "", ""};
    const Real tol = std::max(Real("1e-15"), Real(1e10) * pow2(-current_precision_bits()));
    Real worst(0);
    for (int n = 1; n <= 3; ++n) {
        CutoffPolynomial phi{random_poly(draw, 5, 5), draw(0.5, 2)};
        std::vector<Real> d, f;
        for (int k : {4, 6, 8}) {
            const Real delta = pow(Real(10), -k);
            d.push_back(delta);
            f.push_back(delta * gelfand_pair(Real(-n) + delta, phi, n - 1));
        }
        worst = std::max(worst, rel_err(extrapolate_to_zero(d, f), gelfand_residue(n, phi.poly)));
    }
    c.passed = worst <= tol;
    c.tolerance = sci(tol);
    c.detail = "max rel err " + sci(worst);
    return c;
}

IdentityCheck check_quadrature(Draw& draw) {
    IdentityCheck c{"closed form vs tanh-sinh quadrature for lambda > -1", false, "", ""};
    // The quadrature runs in a fixed 50-digit binary type; boost's tanh-sinh
    // does not initialize with MPFR backends.
    using Q = boost::multiprecision::cpp_bin_float_50;
    auto to_q = [](const Real& x) { return Q(to_decimal(x, 60)); };
    const Real tol = std::max(Real("1e-30"), pow2(-(current_precision_bits() - 12)));
    boost::math::quadrature::tanh_sinh<Q> integrator;
    Real worst(0);
    for (int i = 0; i < 4; ++i) {
        const Real lambda = draw(-0.9, 1.5);
        CutoffPolynomial phi{random_poly(draw, 4, 4), draw(0.5, 2)};
        const Real closed = gelfand_pair(lambda, phi, 0);
        const Q ql = to_q(lambda);
        std::vector<Q> qc;
        for (int k = 0; k <= phi.poly.order(); ++k) qc.push_back(to_q(phi.poly[k]));
        const Q numeric = integrator.integrate(
            [&](const Q& x) -> Q {
                Q acc = 0;
                for (auto it = qc.rbegin(); it != qc.rend(); ++it) acc = acc * x + *it;
                return pow(x, ql) * acc;
            },
            Q(0), to_q(phi.support), Q("1e-40"));
        worst = std::max(worst, rel_err(closed, parse_real(numeric.str(50, std::ios::scientific))));
    }
    c.passed = worst <= tol;
    c.tolerance = sci(tol);
    c.detail = "max rel err " + sci(worst);
    return c;
}

IdentityCheck check_remainder_residue(Draw& draw) {
    IdentityCheck c{"remainder residue (lambda 5/2, m = l = 2) = b^(5/2) phi''", false, "", ""};
    const Real tol = roundoff_tol();
    Real worst(0);
    for (int i = 0; i < 50; ++i) {
        ExpansionCoefficients e;
        e.b0 = draw(-2, 2);
        e.b1 = draw(-2, 2);
        e.b2 = draw(-2, 2);
        e.r0 = draw(0.1, 2);
        e.r1 = draw(-2, 2);
        e.r2 = draw(-2, 2);
        const Real b = draw(0.5, 2);
        // R = h^2 T, numerator = h^2 k
        const TaylorPoly r({Real(0), Real(0), e.r0, e.r1, e.r2 / 2}, 6);
        const TaylorPoly num({Real(0), Real(0), e.b0, e.b1, e.b2 / 2}, 6);
        const Real got = remainder_residue(r, 2, num, 2, ratio(5, 2), b);
        const Real want = pow(b, ratio(5, 2)) * phi_second_derivative(e);
        worst = std::max(worst, rel_err(got, want));
    }
    c.passed = worst <= tol;
    c.tolerance = sci(tol);
    c.detail = "max rel err " + sci(worst);
    return c;
}

PolyWorldline random_worldline(Draw& draw) {
    PolyWorldline z;
    const Real eps = draw(0.1, 1);
    const Real vx = draw(-0.5, 0.5);
    FourVector u(sqrt(1 + eps + vx * vx), vx, Real(0), Real(0));
    z.coeffs = {FourVector(draw(-1, 1), draw(-1, 1), draw(-1, 1), draw(-1, 1)), u,
                ratio(1, 2) * FourVector(draw(-1, 1), draw(-1, 1), draw(-1, 1), draw(-1, 1)),
                ratio(1, 6) * FourVector(draw(-1, 1), draw(-1, 1), draw(-1, 1), draw(-1, 1))};
    return z;
}

IdentityCheck check_r_expansion(Draw& draw) {
    IdentityCheck c{"R(tau, tau - h) through h^4, remainder O(h^5)", false, "", ""};
    // At double precision the O(h^5) remainder drowns in roundoff unless h is large.
    const bool wide = current_precision_bits() >= 128;
    const Real h = wide ? Real("1e-5") : Real("5e-2");
    const Real tol = wide ? Real("0.01") : Real("0.3");
    Real worst_order(0);
    for (int i = 0; i < 10; ++i) {
        const PolyWorldline z = random_worldline(draw);
        const Real tau = draw(-1, 1);
        const FourVector u = z.derivative(tau, 1), a = z.derivative(tau, 2), j = z.derivative(tau, 3);
        const Real c2 = -minkowski_dot(u, u) - 1;
        const Real c3 = minkowski_dot(u, a);
        const Real c4 = -minkowski_dot(a, a) / 4 - minkowski_dot(u, j) / 3;
        auto rem = [&](const Real& h) {
            return worldline_R(z, tau, tau - h) - (c2 * h * h + c3 * h * h * h + c4 * h * h * h * h);
        };
        const Real order = log(abs(rem(h) / rem(h / 2))) / log(Real(2));
        worst_order = std::max(worst_order, abs(order - 5));
    }
    c.passed = worst_order < tol;
    c.tolerance = "|order - 5| < " + to_decimal(tol, 2);
    c.detail = "max |order - 5| " + sci(worst_order);
    return c;
}

IdentityCheck check_h_leading(Draw& draw) {
    IdentityCheck c{"h^{ab}(tau, tau - h) / h^2 -> a^a u^b - a^b u^a", false, "", ""};
    const Real tol = std::max(Real("1e-10"), Real(1e12) * pow2(-current_precision_bits()));
    Real worst(0);
    for (int i = 0; i < 10; ++i) {
        const PolyWorldline z = random_worldline(draw);
        const Real tau = draw(-1, 1);
        const FourVector u = z.derivative(tau, 1), a = z.derivative(tau, 2);
        std::vector<Real> hs{Real("1e-4"), Real("5e-5"), Real("2.5e-5")};
        for (int al = 0; al < 4; ++al) {
            for (int be = 0; be < 4; ++be) {
                std::vector<Real> f;
                for (const Real& h : hs) f.push_back(worldline_h_tensor(z, tau, tau - h)[al][be] / (h * h));
                const Real got = extrapolate_to_zero(hs, f);
                const Real want = a[al] * u[be] - a[be] * u[al];
                worst = std::max(worst, abs(got - want));
            }
        }
    }
    c.passed = worst <= tol;
    c.tolerance = sci(tol);
    c.detail = "max abs err " + sci(worst);
    return c;
}

IdentityCheck check_green_support(Draw& draw) {
    IdentityCheck c{"green kernel vanishes outside tau > 0 and -x^2 - tau^2 > 0", false, "", ""};
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const FourVector x(draw(-3, 3), draw(-2, 2), draw(-2, 2), draw(-2, 2));
        const Real tau = draw(-2, 2);
        const Real g = green_kernel(x, tau);
        const bool inside = tau > 0 && -minkowski_dot(x, x) - tau * tau > 0;
        if (inside != (g < 0)) ++bad;
    }
    c.passed = bad == 0;
    c.tolerance = "exact";
    c.detail = std::to_string(bad) + " support violations in 200 draws";
    return c;
}

}  // namespace

std::vector<IdentityCheck> regularization_checks(unsigned seed) {
    Draw draw(seed);
    std::vector<IdentityCheck> out;
    auto guarded = [&](IdentityCheck (*fn)(Draw&), const char* name) {
        try {
            out.push_back(fn(draw));
        } catch (const std::exception& e) {
            out.push_back(IdentityCheck{name, false, "", std::string("error: ") + e.what()});
        }
    };
    guarded(check_phi_second, "phi''");
    guarded(check_residue_limit, "residue limit");
    guarded(check_quadrature, "quadrature");
    guarded(check_remainder_residue, "remainder residue");
    guarded(check_r_expansion, "R expansion");
    guarded(check_h_leading, "h expansion");
    guarded(check_green_support, "green kernel");
    return out;
}

}  // namespace offshell
