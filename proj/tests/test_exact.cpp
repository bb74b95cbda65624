#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "weil/errors.hpp"
#include "weil/exact.hpp"

#include <random>

using namespace weil;
using testing::approx;
using testing::near;

TEST_CASE("roots of unity: small examples") {
    CHECK(root_of_unity(0, 1) == ExactScalar(1));
    CHECK(root_of_unity(1, 2) == ExactScalar(-1));
    CHECK(zeta8(1).pow(4) == ExactScalar(-1));
    CHECK(root_of_unity(3, 12) == root_of_unity(1, 4));
    CHECK(root_of_unity(-1, 8) == zeta8(7));
}

TEST_CASE("roots of unity: n-th powers are 1") {
    std::mt19937 g(11);
    for (int n = 1; n <= 120; ++n) {
        std::vector<int> ks;
        if (n <= 24) {
            for (int k = 0; k < n; ++k) ks.push_back(k);
        } else {
            for (int i = 0; i < 3; ++i) ks.push_back(std::uniform_int_distribution<int>(0, n - 1)(g));
        }
        for (int k : ks) CHECK(root_of_unity(k, n).pow(n) == ExactScalar(1));
    }
}

TEST_CASE("vanishing sums and conjugation") {
    CHECK((ExactScalar(1) + root_of_unity(1, 3) + root_of_unity(2, 3)).is_zero());
    ExactScalar s;
    for (int k = 0; k < 15; ++k) s += root_of_unity(k, 15);
    CHECK(s.is_zero());
    CHECK(zeta8(1).conj() == zeta8(-1));
    CHECK(scalar_conj(root_of_unity(2, 9)) == root_of_unity(7, 9));
}

TEST_CASE("sqrt_rat examples") {
    CHECK(sqrt_rat(Rational(4)) == ExactScalar(2));
    CHECK(sqrt_rat(Rational(2)) == zeta8(1) + zeta8(-1));
    CHECK(sqrt_rat(Rational(1, 2)) == (zeta8(1) + zeta8(-1)) * ExactScalar(Rational(1, 2)));
    CHECK(scalar_mul(sqrt_rat(Rational(2)), sqrt_rat(Rational(2))) == ExactScalar(2));
    CHECK_THROWS_AS(sqrt_rat(Rational(-3)), ValidationError);
}

TEST_CASE("sqrt_rat squares back and is positive") {
    std::mt19937 g(5);
    std::uniform_int_distribution<int> u(1, 50);
    for (int i = 0; i < 60; ++i) {
        Rational r(u(g), u(g));
        ExactScalar s = sqrt_rat(r);
        CHECK(s * s == ExactScalar(r));
        auto z = approx(s);
        CHECK(near(z, std::sqrt(static_cast<double>(r))));
    }
}

TEST_CASE("equality is a congruence") {
    std::mt19937 g(9);
    std::uniform_int_distribution<int> k(0, 23), q(-5, 5);
    auto rnd = [&]() {
        ExactScalar x;
        for (int i = 0; i < 3; ++i) x += root_of_unity(k(g), 24) * ExactScalar(q(g));
        return x;
    };
    for (int i = 0; i < 40; ++i) {
        ExactScalar a = rnd(), c = rnd();
        // b is a in a different presentation: embedded in a larger field
        ExactScalar b = a.embed(72), d = c.embed(48);
        REQUIRE(scalar_eq(a, b));
        CHECK(scalar_add(a, c) == scalar_add(b, d));
        CHECK(scalar_mul(a, c) == scalar_mul(b, d));
        CHECK(near(approx(a * c), approx(a) * approx(c), 1e-8));
    }
}

TEST_CASE("norms of root times square root are rational") {
    std::mt19937 g(3);
    std::uniform_int_distribution<int> u(1, 30), k(0, 39);
    for (int i = 0; i < 30; ++i) {
        Rational r(u(g), u(g));
        ExactScalar a = root_of_unity(k(g), 40) * sqrt_rat(r);
        ExactScalar n = a * a.conj();
        REQUIRE(n.is_rational());
        CHECK(n.rational_value() == r);
        ComplexInterval ci = eval_numeric(n, 64);
        CHECK(ci.contains(static_cast<double>(r), 0.0));
    }
}

TEST_CASE("numeric enclosures") {
    const double h = std::sqrt(2.0) / 2;
    CHECK(eval_numeric(zeta8(1), 64).contains(h, h));
    CHECK(eval_numeric(sqrt_rat(Rational(2)), 64).contains(1.4142135623730951, 0));
    CHECK(eval_numeric(root_of_unity(1, 3), 64).contains(-0.5, 0.8660254037844386));
    ComplexInterval wide = eval_numeric(root_of_unity(1, 3), 64), tight = eval_numeric(root_of_unity(1, 3), 256);
    CHECK(tight.width() <= wide.width());
    CHECK(wide.width() < 1e-15);
}

TEST_CASE("cyclotomic polynomials") {
    auto phi12 = cyclotomic_polynomial(12);  // x^4 - x^2 + 1
    REQUIRE(phi12.size() == 5);
    CHECK(phi12[0] == 1);
    CHECK(phi12[1] == 0);
    CHECK(phi12[2] == -1);
    CHECK(phi12[3] == 0);
    CHECK(phi12[4] == 1);
    for (long long n : {1, 2, 7, 8, 30, 105}) CHECK(static_cast<long long>(cyclotomic_polynomial(static_cast<int>(n)).size()) == euler_phi(n) + 1);
}

TEST_CASE("group ring conversion") {
    std::vector<long long> c(12, 0);
    c[0] = 1;
    c[4] = 1;
    c[8] = 1;  // 1 + w + w^2 with w = zeta_3
    CHECK(ExactScalar::from_group_ring(12, c).is_zero());
    c = std::vector<long long>(12, 0);
    c[1] = 3;
    c[7] = -2;
    CHECK(ExactScalar::from_group_ring(12, c) == root_of_unity(1, 12) * ExactScalar(5));
}

TEST_CASE("rational strings round trip") {
    for (const char* s : {"0", "-7", "3/4", "-10/6"}) {
        Rational r = parse_rational(s);
        CHECK(parse_rational(to_string(r)) == r);
    }
    CHECK(to_string(parse_rational("-10/6")) == "-5/3");
    CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_rational("x"), ValidationError);
}

TEST_CASE("exact matrices") {
    ExactMatrix m(2, 2);
    const ExactScalar h = sqrt_rat(Rational(1, 2));
    m << h, h, h, -h;
    CHECK(is_identity(product(m, adjoint(m))));
    CHECK_FALSE(is_identity(m));
}
