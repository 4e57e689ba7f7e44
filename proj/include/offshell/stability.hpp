#pragma once

// Linearization of the scalar system ds/dtau = f(s) and its spectrum.

#include "offshell/core.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace offshell {

/// J[a][b] = d f_a / d s_b in the (eps, eps', eps'', rho, rho', eta) ordering.
struct JacobianMatrix {
    static constexpr int kDim = ScalarState::kSize;
    std::array<std::array<Real, kDim>, kDim> entries{};

    Real& operator()(int row, int col) { return entries[row][col]; }
    const Real& operator()(int row, int col) const { return entries[row][col]; }

    /// Maximum absolute row sum.
    Real norm_inf() const;
    Real trace() const;
};

struct ComplexValue {
    Real re{0};
    Real im{0};
};

struct EigenSpectrum {
    /// Sorted by descending real part, then descending imaginary part.
    std::vector<ComplexValue> values;
    Real max_real{0};

    int count_nonnegative_real(const Real& tol = Real(0)) const;
    int count_positive_real(const Real& tol = Real(0)) const;
};

enum class JacobianMode { analytic, finite_difference };

JacobianMatrix jacobian(const ScalarState& s, const ModelParams& p,
                        JacobianMode mode = JacobianMode::analytic);

/// Balancing, Hessenberg reduction and Francis double-shift QR at working
/// precision. Each eigenvalue is confirmed by inverse iteration:
/// ||(J - lambda I) v|| <= 1e-10 ||J|| ||v||. Throws ConvergenceError when the
/// QR sweeps exceed their budget or the residual check fails.
EigenSpectrum eigenvalues(const JacobianMatrix& J);

/// General square-matrix variant (used for tests with arbitrary sizes).
EigenSpectrum eigenvalues(const std::vector<std::vector<Real>>& matrix);

enum class LocalStability { attracting, saddle, repelling, marginal };

LocalStability classify_local(const EigenSpectrum& spectrum, const Real& tol);

std::string_view to_string(LocalStability c);

}  // namespace offshell
