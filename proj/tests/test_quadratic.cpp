#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smale/quadratic.hpp"

using namespace smale;

namespace {
QuadNum q5(long an, long ad, long bn, long bd) {
    return QuadNum(Rational(an, ad), Rational(bn, bd), 5);
}
}  // namespace

TEST_CASE("field arithmetic closes") {
    QuadNum gamma = q5(1, 2, 1, 2);  // golden mean
    QuadNum one(1);
    CHECK(gamma * gamma == gamma + one);            // x^2 = x + 1
    CHECK(one / gamma == gamma - one);              // 1/gamma = gamma - 1
    CHECK((gamma - one) * gamma == one);
    QuadNum z = q5(3, 7, -2, 9);
    CHECK(z / z == one);
    CHECK(z - z == QuadNum(0));
}

TEST_CASE("sign is exact near ties") {
    // 161/72 is slightly above sqrt(5) = 2.2360679...; 2889/1292 below
    QuadNum a = QuadNum(Rational(161, 72)) - q5(0, 1, 1, 1);
    CHECK(a.sign() == 1);
    QuadNum b = QuadNum(Rational(2889, 1292)) - q5(0, 1, 1, 1);
    CHECK(b.sign() == -1);
    CHECK(QuadNum(0).sign() == 0);
    CHECK(q5(-1, 1, 1, 2).sign() == 1);   // sqrt5/2 > 1
    CHECK(q5(-3, 1, 1, 1).sign() == -1);  // sqrt5 < 3
}

TEST_CASE("floor and mod_one") {
    QuadNum s5 = q5(0, 1, 1, 1);  // sqrt 5
    CHECK(s5.floor() == 2);
    CHECK((-s5).floor() == -3);
    CHECK(QuadNum(Rational(7, 2)).floor() == 3);
    CHECK(QuadNum(Rational(-7, 2)).floor() == -4);
    QuadNum m = s5.mod_one();
    CHECK(m >= QuadNum(0));
    CHECK(m < QuadNum(1));
    CHECK(s5 - m == QuadNum(Rational(2)));
    CHECK(QuadNum(Rational(-1, 4)).mod_one() == QuadNum(Rational(3, 4)));
}

TEST_CASE("2x2 solve recovers exact coefficients") {
    // columns e_s = (1, -gamma), -e_u = (-1, -1/gamma), golden-mean geometry
    QuadNum gamma = q5(1, 2, 1, 2);
    QuadMat2 t{QuadNum(1), QuadNum(-1), -gamma, QuadNum(0) - (QuadNum(1) / gamma)};
    QuadVec2 rhs{q5(1, 3, 0, 1), q5(-2, 5, 1, 7)};
    QuadVec2 st = t.solve(rhs);
    CHECK(t.a * st.x + t.b * st.y == rhs.x);
    CHECK(t.c * st.x + t.d * st.y == rhs.y);
}
