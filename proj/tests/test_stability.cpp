#include "offshell/dynamics.hpp"
#include "offshell/errors.hpp"
#include "offshell/stability.hpp"

#include "oracles/oracle_values.hpp"
#include "support.hpp"

#include <algorithm>

using namespace offshell;
using support::R;

namespace {

ScalarState state(const char* e, const char* de, const char* r) {
    ScalarState s;
    s.eps = R(e);
    s.deps = R(de);
    s.rho = R(r);
    return s;
}

void check_spectrum(const EigenSpectrum& got, const char* const* re, const char* const* im,
                    const Real& tol) {
    REQUIRE(got.values.size() == 6);
    // Compare as multisets: zero-ish entries may come out in either order.
    std::vector<bool> used(6, false);
    for (int i = 0; i < 6; ++i) {
        const Real wre = R(re[i]), wim = R(im[i]);
        bool matched = false;
        for (int k = 0; k < 6 && !matched; ++k) {
            if (used[k]) continue;
            if (abs(got.values[k].re - wre) <= tol && abs(got.values[k].im - wim) <= tol) {
                used[k] = matched = true;
            }
        }
        INFO("oracle eigenvalue " << re[i] << " + " << im[i] << "i");
        CHECK(matched);
    }
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("analytic jacobian matches the oracle") {
    ModelParams p;
    const JacobianMatrix J = jacobian(state("0.5", "0.1", "-0.1"), p);
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
            INFO("entry " << r << "," << c);
            CHECK(abs(J(r, c) - R(oracle::kJacobianDivergingPoint[6 * r + c])) <= support::oracle_tol());
        }
    }
    CHECK(jacobian(state("1", "0", "0"), p)(2, 1) == R(oracle::kJacobianUnitUniform32));
}

TEST_CASE("analytic and finite-difference jacobians agree") {
    ModelParams p;
    support::Draw draw(53);
    for (int i = 0; i < 20; ++i) {
        ScalarState s;
        s.eps = draw(0.1, 2);
        s.deps = draw(-1, 1);
        s.ddeps = draw(-1, 1);
        s.rho = draw(-1, 1);
        s.drho = draw(-1, 1);
        s.eta = draw(-1, 1);
        p.D = draw(0.2, 4);
        const JacobianMatrix A = jacobian(s, p, JacobianMode::analytic);
        const JacobianMatrix F = jacobian(s, p, JacobianMode::finite_difference);
        const Real scale = 1 + A.norm_inf();
        for (int r = 0; r < 6; ++r) {
            for (int c = 0; c < 6; ++c) CHECK(abs(A(r, c) - F(r, c)) <= pow2(-100) * scale);
        }
    }
    CHECK_THROWS_AS(jacobian(state("0", "0", "0"), p), DomainError);
}

TEST_CASE("jacobian helpers") {
    JacobianMatrix J;
    J(0, 0) = 1;
    J(0, 1) = -3;
    J(1, 1) = 2;
    J(5, 5) = -4;
    CHECK(J.trace() == -1);
    CHECK(J.norm_inf() == 4);
}

TEST_CASE("eigenvalues of small matrices") {
    SUBCASE("diagonal") {
        const EigenSpectrum s = eigenvalues({{R("3"), 0, 0}, {0, R("-1"), 0}, {0, 0, R("2")}});
        REQUIRE(s.values.size() == 3);
        CHECK(abs(s.values[0].re - 3) <= pow2(-240));
        CHECK(abs(s.values[1].re - 2) <= pow2(-240));
        CHECK(abs(s.values[2].re + 1) <= pow2(-240));
        CHECK(s.max_real == s.values[0].re);
        CHECK(s.count_positive_real() == 2);
        CHECK(s.count_nonnegative_real() == 2);
    }
    SUBCASE("rotation generator") {
        const EigenSpectrum s = eigenvalues({{Real(0), Real(-2)}, {Real(2), Real(0)}});
        REQUIRE(s.values.size() == 2);
        CHECK(abs(s.values[0].re) <= pow2(-240));
        CHECK(abs(s.values[0].im - 2) <= pow2(-240));
        CHECK(abs(s.values[1].im + 2) <= pow2(-240));
    }
    SUBCASE("companion matrix of (x - 1)(x - 2)(x - 3)(x - 4)") {
        // x^4 - 10 x^3 + 35 x^2 - 50 x + 24
        const EigenSpectrum s = eigenvalues({{Real(10), Real(-35), Real(50), Real(-24)},
                                             {Real(1), 0, 0, 0},
                                             {0, Real(1), 0, 0},
                                             {0, 0, Real(1), 0}});
        for (int i = 0; i < 4; ++i) CHECK(abs(s.values[i].re - (4 - i)) <= pow2(-200));
    }
    SUBCASE("trace and determinant are preserved") {
        support::Draw draw(59);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::vector<Real>> m(5, std::vector<Real>(5));
            Real tr(0);
            for (int r = 0; r < 5; ++r) {
                for (int c = 0; c < 5; ++c) m[r][c] = draw(-2, 2);
                tr += m[r][r];
            }
            const EigenSpectrum s = eigenvalues(m);
            Real sum(0);
            for (const auto& v : s.values) sum += v.re;
            CHECK(abs(sum - tr) <= pow2(-220));
        }
    }
    CHECK_THROWS_AS(eigenvalues(std::vector<std::vector<Real>>{{Real(1), Real(2)}}), DomainError);
}

TEST_CASE("spectrum at the accelerated fixed point") {
    ModelParams p;
    const ScalarState s = constant_eps_fixed_point(R("0.5"), R("0.1"), p);
    const EigenSpectrum spec = eigenvalues(jacobian(s, p));
    check_spectrum(spec, oracle::kFixedPointSpectrumRe, oracle::kFixedPointSpectrumIm, pow2(-100));
    CHECK(spec.count_positive_real(pow2(-64)) == 1);
    CHECK(abs(spec.max_real - R("5.1756")) < R("1e-4"));
}

TEST_CASE("spectrum at uniform motion") {
    ModelParams p;
    const ScalarState s = constant_eps_fixed_point(R("0.5"), 0, p);
    const EigenSpectrum spec = eigenvalues(jacobian(s, p));
    check_spectrum(spec, oracle::kUniformSpectrumRe, oracle::kUniformSpectrumIm, pow2(-100));
    CHECK(spec.count_positive_real(pow2(-64)) == 1);
}

TEST_CASE("classify_local") {
    auto spec = [](std::vector<int> re) {
        EigenSpectrum s;
        for (int r : re) s.values.push_back({Real(r), Real(0)});
        return s;
    };
    const Real tol("1e-20");
    CHECK(classify_local(spec({-1, -2}), tol) == LocalStability::attracting);
    CHECK(classify_local(spec({1, 2}), tol) == LocalStability::repelling);
    CHECK(classify_local(spec({1, -2}), tol) == LocalStability::saddle);
    CHECK(classify_local(spec({1, 0, -2}), tol) == LocalStability::marginal);
    CHECK(to_string(LocalStability::saddle) == "saddle");
}

}  // TEST_SUITE
