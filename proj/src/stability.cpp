#include "offshell/stability.hpp"

#include "offshell/dynamics.hpp"
#include "offshell/errors.hpp"

#include <algorithm>
#include <utility>

namespace offshell {

namespace {

using Matrix = std::vector<std::vector<Real>>;

constexpr int kMaxSweepsPerEigenvalue = 200;

Real sign_of(const Real& magnitude, const Real& sign_source) {
    return sign_source >= 0 ? abs(magnitude) : -abs(magnitude);
}

// ---------------------------------------------------------------------------
// Analytic partial derivatives of f.
// ---------------------------------------------------------------------------

JacobianMatrix analytic_jacobian(const ScalarState& s, const ModelParams& p) {
    const KPotentials k = k_potentials(s, p);
    const Real& e = s.eps;
    const Real& de = s.deps;
    const Real& D = p.D;
    const Real e2 = e * e;
    const Real e3 = e2 * e;
    const Real se = sqrt(e);
    const Real e32 = e * se;

    // dK1
    const Real k1_e = -ratio(35, 2) * de * de * de / e3 - 12 * D * de * se;
    const Real k1_de = ratio(105, 4) * de * de / e2 - 8 * D * e32;
    // dK2
    const Real k2_e =
        -8 * s.ddeps / e2 - 6 * s.rho / e2 + 70 * de * de / e3 + 24 * D * se;
    const Real k2_de = -70 * de / e2;
    const Real k2_dde = 8 / e;
    const Real k2_rho = 6 / e;
    // dK3
    const Real k3_e = -12 * de / e2;
    const Real k3_de = 12 / e;

    const Real accel = s.ddeps + 2 * s.rho;

    JacobianMatrix J;
    for (auto& row : J.entries) row.fill(Real(0));

    J(0, 1) = 1;
    J(1, 2) = 1;
    J(3, 4) = 1;

    // eps'''
    J(2, 0) = 2 * k.k1 + 2 * (e + 1) * k1_e + de * k2_e + accel * k3_e;
    J(2, 1) = 2 * (e + 1) * k1_de + k.k2 + de * k2_de + accel * k3_de;
    J(2, 2) = de * k2_dde + k.k3;
    J(2, 3) = de * k2_rho + 2 * k.k3;
    J(2, 4) = -3;

    // rho''
    J(4, 0) = -de * k1_e + 2 * s.rho * k2_e + s.drho * k3_e;
    J(4, 1) = -k.k1 - de * k1_de + 2 * s.rho * k2_de + s.drho * k3_de;
    J(4, 2) = 2 * s.rho * k2_dde;
    J(4, 3) = 2 * k.k2 + 2 * s.rho * k2_rho;
    J(4, 4) = k.k3;
    J(4, 5) = 2;

    // eta'
    J(5, 0) = -accel * k1_e + s.drho * k2_e + 2 * s.eta * k3_e;
    J(5, 1) = -accel * k1_de + s.drho * k2_de + 2 * s.eta * k3_de;
    J(5, 2) = -k.k1 + s.drho * k2_dde;
    J(5, 3) = -2 * k.k1 + s.drho * k2_rho;
    J(5, 4) = k.k2;
    J(5, 5) = 2 * k.k3;
    return J;
}

JacobianMatrix finite_difference_jacobian(const ScalarState& s, const ModelParams& p) {
    const Real rel_step = pow2(-current_precision_bits() / 2);
    const auto base = s.to_array();
    JacobianMatrix J;
    for (int col = 0; col < JacobianMatrix::kDim; ++col) {
        const Real h = rel_step * std::max(abs(base[col]), Real(1));
        auto plus = base;
        auto minus = base;
        plus[col] += h;
        minus[col] -= h;
        const ScalarState sp = ScalarState::from_array(plus);
        const ScalarState sm = ScalarState::from_array(minus);
        if (!(sp.eps > 0) || !(sm.eps > 0)) {
            throw DomainError("jacobian: finite-difference probe leaves eps > 0");
        }
        const ScalarDerivative fp = scalar_rhs(sp, p);
        const ScalarDerivative fm = scalar_rhs(sm, p);
        for (int row = 0; row < JacobianMatrix::kDim; ++row) {
            J(row, col) = (fp[row] - fm[row]) / (2 * h);
        }
    }
    return J;
}

// ---------------------------------------------------------------------------
// Eigenvalues: balance -> elimination to Hessenberg form -> shifted QR.
// ---------------------------------------------------------------------------

void balance(Matrix& a) {
    const int n = static_cast<int>(a.size());
    const Real radix(2);
    const Real radix_sq(4);
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            Real r(0);
            Real c(0);
            for (int j = 0; j < n; ++j) {
                if (j != i) {
                    c += abs(a[j][i]);
                    r += abs(a[i][j]);
                }
            }
            if (c != 0 && r != 0) {
                Real g = r / radix;
                Real f(1);
                const Real s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= radix_sq;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= radix_sq;
                }
                if ((c + r) / f < ratio(95, 100) * s) {
                    done = false;
                    const Real ginv = 1 / f;
                    for (int j = 0; j < n; ++j) a[i][j] *= ginv;
                    for (int j = 0; j < n; ++j) a[j][i] *= f;
                }
            }
        }
    }
}

void reduce_to_hessenberg(Matrix& a) {
    const int n = static_cast<int>(a.size());
    for (int m = 1; m < n - 1; ++m) {
        Real x(0);
        int pivot = m;
        for (int j = m; j < n; ++j) {
            if (abs(a[j][m - 1]) > abs(x)) {
                x = a[j][m - 1];
                pivot = j;
            }
        }
        if (pivot != m) {
            for (int j = m - 1; j < n; ++j) std::swap(a[pivot][j], a[m][j]);
            for (int j = 0; j < n; ++j) std::swap(a[j][pivot], a[j][m]);
        }
        if (x != 0) {
            for (int i = m + 1; i < n; ++i) {
                Real y = a[i][m - 1];
                if (y != 0) {
                    y /= x;
                    a[i][m - 1] = y;
                    for (int j = m; j < n; ++j) a[i][j] -= y * a[m][j];
                    for (int j = 0; j < n; ++j) a[j][m] += y * a[j][i];
                }
            }
        }
    }
    // Drop the stored multipliers below the subdiagonal.
    for (int i = 2; i < n; ++i) {
        for (int j = 0; j < i - 1; ++j) a[i][j] = 0;
    }
}

void hessenberg_qr(Matrix& a, std::vector<ComplexValue>& out) {
    const int n = static_cast<int>(a.size());
    out.assign(n, ComplexValue{});

    Real anorm(0);
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += abs(a[i][j]);
    }

    int nn = n - 1;
    Real t(0);
    Real p, q, r, s, w, x, y, z;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                s = abs(a[l - 1][l - 1]) + abs(a[l][l]);
                if (s == 0) s = anorm;
                if (abs(a[l][l - 1]) + s == s) {
                    a[l][l - 1] = 0;
                    break;
                }
            }
            x = a[nn][nn];
            if (l == nn) {
                out[nn].re = x + t;
                out[nn].im = 0;
                --nn;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if (l == nn - 1) {
                    p = (y - x) / 2;
                    q = p * p + w;
                    z = sqrt(abs(q));
                    x += t;
                    if (q >= 0) {
                        z = p + sign_of(z, p);
                        out[nn - 1].re = out[nn].re = x + z;
                        if (z != 0) out[nn].re = x - w / z;
                        out[nn - 1].im = out[nn].im = 0;
                    } else {
                        out[nn - 1].re = out[nn].re = x + p;
                        out[nn - 1].im = z;
                        out[nn].im = -z;
                    }
                    nn -= 2;
                } else {
                    if (its >= kMaxSweepsPerEigenvalue) {
                        throw ConvergenceError("eigenvalues: QR iteration budget exhausted");
                    }
                    if (its > 0 && its % 10 == 0) {
                        // Exceptional shift to break cycles.
                        t += x;
                        for (int i = 0; i <= nn; ++i) a[i][i] -= x;
                        s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2]);
                        y = x = ratio(3, 4) * s;
                        w = -ratio(7, 16) * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    for (; m >= l; --m) {
                        z = a[m][m];
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        s = abs(p) + abs(q) + abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const Real u = abs(a[m][m - 1]) * (abs(q) + abs(r));
                        const Real v =
                            abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]));
                        if (u + v == v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a[i][i - 2] = 0;
                        if (i != m + 2) a[i][i - 3] = 0;
                    }
                    for (int kk = m; kk <= nn - 1; ++kk) {
                        if (kk != m) {
                            p = a[kk][kk - 1];
                            q = a[kk + 1][kk - 1];
                            r = 0;
                            if (kk != nn - 1) r = a[kk + 2][kk - 1];
                            x = abs(p) + abs(q) + abs(r);
                            if (x != 0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_of(sqrt(p * p + q * q + r * r), p);
                        if (s != 0) {
                            if (kk == m) {
                                if (l != m) a[kk][kk - 1] = -a[kk][kk - 1];
                            } else {
                                a[kk][kk - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = kk; j <= nn; ++j) {
                                p = a[kk][j] + q * a[kk + 1][j];
                                if (kk != nn - 1) {
                                    p += r * a[kk + 2][j];
                                    a[kk + 2][j] -= p * z;
                                }
                                a[kk + 1][j] -= p * y;
                                a[kk][j] -= p * x;
                            }
                            const int mmin = nn < kk + 3 ? nn : kk + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a[i][kk] + y * a[i][kk + 1];
                                if (kk != nn - 1) {
                                    p += z * a[i][kk + 2];
                                    a[i][kk + 2] -= p * r;
                                }
                                a[i][kk + 1] -= p * q;
                                a[i][kk] -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
}

// ---------------------------------------------------------------------------
// Residual confirmation by complex inverse iteration.
// ---------------------------------------------------------------------------

struct Cplx {
    Real re{0};
    Real im{0};
};

Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Cplx operator/(const Cplx& a, const Cplx& b) {
    const Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Real modulus(const Cplx& a) { return sqrt(a.re * a.re + a.im * a.im); }

// Solves (A - shift I) x = b in place with partial pivoting. A zero pivot is
// replaced by a tiny multiple of the norm, the standard inverse-iteration
// treatment of an exactly singular shifted matrix.
std::vector<Cplx> shifted_solve(const Matrix& a, const Cplx& shift, std::vector<Cplx> b,
                                const Real& tiny) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<Cplx>> m(n, std::vector<Cplx>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = {a[i][j], Real(0)};
        m[i][i] = m[i][i] - shift;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i) {
            if (modulus(m[i][col]) > modulus(m[piv][col])) piv = i;
        }
        std::swap(m[piv], m[col]);
        std::swap(b[piv], b[col]);
        if (modulus(m[col][col]) < tiny) m[col][col] = {tiny, Real(0)};
        for (int i = col + 1; i < n; ++i) {
            const Cplx f = m[i][col] / m[col][col];
            for (int j = col; j < n; ++j) m[i][j] = m[i][j] - f * m[col][j];
            b[i] = b[i] - f * b[col];
        }
    }
    std::vector<Cplx> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Cplx acc = b[i];
        for (int j = i + 1; j < n; ++j) acc = acc - m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return x;
}

Real matrix_norm_inf(const Matrix& a) {
    Real worst(0);
    for (const auto& row : a) {
        Real sum(0);
        for (const auto& v : row) sum += abs(v);
        worst = std::max(worst, sum);
    }
    return worst;
}

Real eigen_residual(const Matrix& a, const ComplexValue& lambda) {
    const int n = static_cast<int>(a.size());
    const Real norm = std::max(matrix_norm_inf(a), Real(1));
    const Real tiny = norm * pow2(-current_precision_bits() + 4);
    const Cplx shift{lambda.re, lambda.im};

    std::vector<Cplx> v(n, Cplx{Real(1), Real(0)});
    for (int i = 0; i < n; ++i) v[i].im = ratio(i + 1, 7);
    Real residual(0);
    for (int iter = 0; iter < 3; ++iter) {
        v = shifted_solve(a, shift, v, tiny);
        Real vmax(0);
        for (const auto& c : v) vmax = std::max(vmax, modulus(c));
        if (vmax == 0 || !is_finite(vmax)) return Real(1) / Real(0);
        for (auto& c : v) c = {c.re / vmax, c.im / vmax};

        residual = 0;
        for (int i = 0; i < n; ++i) {
            Cplx acc{Real(0), Real(0)};
            for (int j = 0; j < n; ++j) {
                acc.re += a[i][j] * v[j].re;
                acc.im += a[i][j] * v[j].im;
            }
            acc = acc - shift * v[i];
            residual = std::max(residual, modulus(acc));
        }
    }
    return residual;
}

}  // namespace

Real JacobianMatrix::norm_inf() const {
    Real worst(0);
    for (const auto& row : entries) {
        Real sum(0);
        for (const auto& v : row) sum += abs(v);
        worst = std::max(worst, sum);
    }
    return worst;
}

Real JacobianMatrix::trace() const {
    Real t(0);
    for (int i = 0; i < kDim; ++i) t += entries[i][i];
    return t;
}

int EigenSpectrum::count_nonnegative_real(const Real& tol) const {
    return static_cast<int>(
        std::count_if(values.begin(), values.end(), [&](const auto& v) { return v.re >= -tol; }));
}

int EigenSpectrum::count_positive_real(const Real& tol) const {
    return static_cast<int>(
        std::count_if(values.begin(), values.end(), [&](const auto& v) { return v.re > tol; }));
}

JacobianMatrix jacobian(const ScalarState& s, const ModelParams& p, JacobianMode mode) {
    if (!(s.eps > 0)) throw DomainError("jacobian: eps must be positive");
    return mode == JacobianMode::analytic ? analytic_jacobian(s, p)
                                          : finite_difference_jacobian(s, p);
}

EigenSpectrum eigenvalues(const std::vector<std::vector<Real>>& matrix) {
    const int n = static_cast<int>(matrix.size());
    for (const auto& row : matrix) {
        if (static_cast<int>(row.size()) != n) {
            throw DomainError("eigenvalues: matrix must be square");
        }
        for (const auto& v : row) {
            if (!is_finite(v)) throw DomainError("eigenvalues: non-finite entry");
        }
    }

    EigenSpectrum spec;
    if (n == 0) return spec;

    Matrix work = matrix;
    balance(work);
    reduce_to_hessenberg(work);
    hessenberg_qr(work, spec.values);

    const Real bound = ratio(1, 10000000000LL) * std::max(matrix_norm_inf(matrix), Real(1));
    for (const auto& lambda : spec.values) {
        const Real res = eigen_residual(matrix, lambda);
        if (!(res <= bound)) {
            throw ConvergenceError("eigenvalues: eigenpair residual check failed (" +
                                   to_decimal(res, 6) + ")");
        }
    }

    std::sort(spec.values.begin(), spec.values.end(), [](const auto& a, const auto& b) {
        if (a.re != b.re) return a.re > b.re;
        return a.im > b.im;
    });
    spec.max_real = spec.values.front().re;
    return spec;
}

EigenSpectrum eigenvalues(const JacobianMatrix& J) {
    std::vector<std::vector<Real>> m(JacobianMatrix::kDim);
    for (int i = 0; i < JacobianMatrix::kDim; ++i) {
        m[i].assign(J.entries[i].begin(), J.entries[i].end());
    }
    return eigenvalues(m);
}

LocalStability classify_local(const EigenSpectrum& spectrum, const Real& tol) {
    bool all_negative = true;
    bool all_positive = true;
    for (const auto& v : spectrum.values) {
        if (abs(v.re) <= tol) return LocalStability::marginal;
        if (v.re > 0) all_negative = false;
        if (v.re < 0) all_positive = false;
    }
    if (all_negative) return LocalStability::attracting;
    if (all_positive) return LocalStability::repelling;
    return LocalStability::saddle;
}

std::string_view to_string(LocalStability c) {
    switch (c) {
    case LocalStability::attracting: return "attracting";
    case LocalStability::saddle: return "saddle";
    case LocalStability::repelling: return "repelling";
    case LocalStability::marginal: return "marginal";
    }
    return "unknown";
}

}  // namespace offshell
