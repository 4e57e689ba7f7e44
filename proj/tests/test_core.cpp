#include "offshell/core.hpp"
#include "offshell/errors.hpp"

#include "oracles/oracle_values.hpp"
#include "support.hpp"

using namespace offshell;
using support::R;

TEST_SUITE("core") {

TEST_CASE("precision scope sets and restores the working width") {
    const int outer = current_precision_bits();
    {
        PrecisionScope s(128);
        CHECK(current_precision_bits() >= 128);
        CHECK(current_precision_bits() < 140);
        CHECK(requested_precision_bits() == 128);
    }
    CHECK(current_precision_bits() == outer);
    CHECK(requested_precision_bits() == kDefaultPrecisionBits);
    CHECK_THROWS_AS(PrecisionScope(52), ConfigError);
}

TEST_CASE("parse_real and to_decimal") {
    CHECK(parse_real("0.5") == ratio(1, 2));
    CHECK(to_decimal(R("1.5"), 3) == "1.50e+00");
    CHECK_THROWS_AS(parse_real("abc"), ConfigError);
    CHECK_THROWS_AS(parse_real("1.0x"), ConfigError);
    CHECK_THROWS_AS(parse_real("inf"), ConfigError);
}

TEST_CASE("minkowski_dot") {
    CHECK(minkowski_dot({1, 0, 0, 0}, {1, 0, 0, 0}) == -1);
    CHECK(minkowski_dot({1, 1, 0, 0}, {1, 1, 0, 0}) == 0);
    CHECK(minkowski_dot({2, 1, 0, 0}, {1, 0, 1, 0}) == -2);
}

TEST_CASE("minkowski_dot is symmetric and bilinear") {
    support::Draw draw(11);
    auto v = [&] { return FourVector(draw(-2, 2), draw(-2, 2), draw(-2, 2), draw(-2, 2)); };
    const Real tol = pow2(-(current_precision_bits() - 8));
    for (int i = 0; i < 100; ++i) {
        const FourVector a = v(), b = v(), c = v();
        const Real s = draw(-3, 3);
        CHECK(minkowski_dot(a, b) == minkowski_dot(b, a));
        CHECK(abs(minkowski_dot(s * a + c, b) - (s * minkowski_dot(a, b) + minkowski_dot(c, b))) <=
              tol);
    }
}

TEST_CASE("epsilon_of") {
    CHECK(epsilon_of({1, 0, 0, 0}) == 0);
    CHECK_REL(epsilon_of({sqrt(R("1.5")), 0, 0, 0}), R("0.5"), pow2(-250));
    CHECK(epsilon_of({R("1.5"), R("0.5"), 0, 0}) == 1);
}

TEST_CASE("scalars_of") {
    const Real ut = sqrt(R("1.5"));
    SUBCASE("uniform motion") {
        const ScalarState s = scalars_of({{ut, 0, 0, 0}, {}, {}, {}});
        CHECK_REL(s.eps, R("0.5"), pow2(-250));
        CHECK(s.deps == 0);
        CHECK(s.ddeps == 0);
        CHECK(s.rho == 0);
        CHECK(s.drho == 0);
        CHECK(s.eta == 0);
    }
    SUBCASE("transverse acceleration") {
        const ScalarState s = scalars_of({{ut, 0, 0, 0}, {0, R("0.1"), 0, 0}, {}, {}});
        CHECK(s.deps == 0);
        CHECK_REL(s.ddeps, R("-0.02"), pow2(-250));
        CHECK_REL(s.rho, R("0.01"), pow2(-250));
    }
    SUBCASE("generic state against the oracle") {
        const ScalarState s =
            scalars_of({{ut, R("0.2"), 0, 0}, {R("0.3"), R("0.1"), 0, 0}, {0, 0, R("0.05"), 0}, {}});
        const auto got = s.to_array();
        for (int i = 0; i < 6; ++i) {
            CHECK(abs(got[i] - R(oracle::kScalarsGeneric[i])) <= support::oracle_tol());
        }
    }
    SUBCASE("below the shell") {
        CHECK_THROWS_AS(scalars_of({{1, 0, 0, 0}, {}, {}, {}}), DomainError);
        CHECK_THROWS_AS(scalars_of({{1, R("0.5"), 0, 0}, {}, {}, {}}), DomainError);
    }
}

TEST_CASE("three_velocity") {
    ThreeVelocity v = three_velocity({2, 1, 0, 0});
    CHECK(v.vx == ratio(1, 2));
    CHECK(v.vy == 0);
    v = three_velocity({1, 0, 0, 0});
    CHECK(v.norm() == 0);
    v = three_velocity({R("1.5"), R("0.5"), R("0.5"), 0});
    CHECK_REL(v.vx, ratio(1, 3), pow2(-250));
    CHECK_REL(v.vy, ratio(1, 3), pow2(-250));
    CHECK_THROWS_AS(three_velocity({0, 1, 0, 0}), DomainError);
    CHECK_THROWS_AS(three_velocity({-1, 0, 0, 0}), DomainError);
}

TEST_CASE("above the shell the 3-speed stays below one") {
    support::Draw draw(5);
    for (int i = 0; i < 200; ++i) {
        const FourVector s(0, draw(-5, 5), draw(-5, 5), draw(-5, 5));
        const Real eps = draw(1e-6, 3);
        const Real ut = sqrt(1 + eps + s.x * s.x + s.y * s.y + s.z * s.z);
        CHECK(three_velocity({ut, s.x, s.y, s.z}).norm() < 1);
    }
}

TEST_CASE("ModelParams validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    ModelParams q = p;
    q.D = 0;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = p;
    q.eps_floor = q.eps_cap;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = p;
    q.abs_tol = 0;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = p;
    q.h_min = -1;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = p;
    q.precision_bits = 32;
    CHECK_THROWS_AS(q.validate(), ConfigError);
}

}  // TEST_SUITE
