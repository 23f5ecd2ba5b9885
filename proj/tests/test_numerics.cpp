#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cuspdist/adaptive.hpp"
#include "cuspdist/bigint.hpp"
#include "cuspdist/embed.hpp"
#include "cuspdist/field.hpp"
#include "cuspdist/polynomial.hpp"
#include "cuspdist/rational.hpp"

using namespace cuspdist;

TEST_CASE("bigint basics") {
    BigInt a("123456789123456789123456789");
    BigInt b(1000000007);
    CHECK((a * b) % b == BigInt(0));
    CHECK(a + (-a) == BigInt(0));
    CHECK(gcd(BigInt(48), BigInt(36)) == BigInt(12));
    auto [q, r] = floor_divmod(BigInt(-7), BigInt(2));
    CHECK(q == BigInt(-4));
    CHECK(r == BigInt(1));
    CHECK(pow2(10) == BigInt(1024));
    auto [g, u, v] = extended_gcd(BigInt(240), BigInt(46));
    CHECK(g == BigInt(2));
    CHECK(u * BigInt(240) + v * BigInt(46) == g);
    CHECK(log2_abs(pow2(100)) == doctest::Approx(100.0));
}

TEST_CASE("rational normalization and arithmetic") {
    BigRational r(BigInt(6), BigInt(-8));
    CHECK(r.num() == BigInt(-3));
    CHECK(r.den() == BigInt(4));
    CHECK(BigRational(2, 5) + BigRational(1, 2) == BigRational(9, 10));
    CHECK(BigRational(2, 5).reciprocal() == BigRational(5, 2));
    CHECK(BigRational(7, 2).floor() == BigInt(3));
    CHECK(BigRational(-7, 2).floor() == BigInt(-4));
    CHECK(BigRational::parse("2/5") == BigRational(2, 5));
    CHECK(BigRational::parse("0.35") == BigRational(7, 20));
    CHECK(to_double(BigRational(1, 3)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rational interval arithmetic") {
    RatInterval a{BigRational(1, 4), BigRational(1, 2)};
    RatInterval b{BigRational(-1, 3), BigRational(1, 3)};
    RatInterval p = a * b;
    CHECK(p.lo == BigRational(-1, 6));
    CHECK(p.hi == BigRational(1, 6));
    CHECK(a.reciprocal().lo == BigRational(2));
    CHECK(a.reciprocal().hi == BigRational(4));
    CHECK(a.certain_sign() == 1);
    CHECK(b.certain_sign() == 0);
    auto [ok, f] = RatInterval{BigRational(7, 2), BigRational(15, 4)}.certain_floor();
    CHECK(ok);
    CHECK(f == BigInt(3));
    RatInterval wide{BigRational(1, 3), BigRational(2, 3)};
    RatInterval rounded = wide.round_out(8);
    CHECK(rounded.lo <= wide.lo);
    CHECK(rounded.hi >= wide.hi);
    CHECK(rounded.width() <= wide.width() + BigRational(1, 128));
}

TEST_CASE("pi interval is certified") {
    RatInterval pi = pi_interval(128);
    CHECK(pi.width() <= dyadic(BigInt(1), 128));
    // 3.14159265358979323846 bracket
    CHECK(pi.lo > BigRational(314159265, 100000000));
    CHECK(pi.hi < BigRational(314159266, 100000000));
}

TEST_CASE("minimal polynomials of 2cos(pi/m)") {
    CHECK_THROWS_AS(minimal_polynomial(2), std::domain_error);

    IntPoly m3 = minimal_polynomial(3);  // x - 1
    REQUIRE(m3.degree() == 1);
    CHECK(m3.c[0] == BigInt(-1));
    CHECK(m3.c[1] == BigInt(1));

    IntPoly m4 = minimal_polynomial(4);  // x^2 - 2
    REQUIRE(m4.degree() == 2);
    CHECK(m4.c[0] == BigInt(-2));
    CHECK(m4.c[1] == BigInt(0));
    CHECK(m4.c[2] == BigInt(1));

    IntPoly m5 = minimal_polynomial(5);  // x^2 - x - 1
    REQUIRE(m5.degree() == 2);
    CHECK(m5.c[0] == BigInt(-1));
    CHECK(m5.c[1] == BigInt(-1));
    CHECK(m5.c[2] == BigInt(1));

    IntPoly m6 = minimal_polynomial(6);  // x^2 - 3
    REQUIRE(m6.degree() == 2);
    CHECK(m6.c[0] == BigInt(-3));

    IntPoly m7 = minimal_polynomial(7);  // x^3 - x^2 - 2x + 1
    REQUIRE(m7.degree() == 3);
    CHECK(m7.c[0] == BigInt(1));
    CHECK(m7.c[1] == BigInt(-2));
    CHECK(m7.c[2] == BigInt(-1));
    CHECK(m7.c[3] == BigInt(1));
}

TEST_CASE("minimal polynomial vanishes at the 100-bit numeric root") {
    for (int m : {3, 4, 5, 6, 7, 12}) {
        IntPoly p = minimal_polynomial(m);
        RatInterval lam = lambda_interval(m, 100);
        RatInterval val = p.eval(lam);
        BigRational bound = dyadic(BigInt(1), 50);
        CHECK(val.lo.abs() < bound);
        CHECK(val.hi.abs() < bound);
    }
}

TEST_CASE("degree of the minimal polynomial is phi(2m)/2") {
    auto phi = [](unsigned long n) {
        unsigned long out = 0;
        for (unsigned long k = 1; k <= n; ++k) {
            unsigned long a = k, b = n;
            while (b) {
                unsigned long t = a % b;
                a = b;
                b = t;
            }
            if (a == 1) ++out;
        }
        return out;
    };
    for (int m : {3, 4, 5, 6, 7, 8, 9, 10}) {
        CHECK(minimal_polynomial(m).degree() ==
              static_cast<int>(phi(2ul * static_cast<unsigned long>(m)) / 2));
    }
}

TEST_CASE("field arithmetic in Q(lambda_5)") {
    AlgebraicReal lam = AlgebraicReal::lambda(5);
    AlgebraicReal one = AlgebraicReal::from_rational(5, BigRational(1));

    // lambda^2 reduces to lambda + 1
    AlgebraicReal sq = lam * lam;
    CHECK(sq == lam + one);

    // invert(lambda) = lambda - 1
    AlgebraicReal inv = lam.invert();
    CHECK(inv == lam - one);
    CHECK(lam * inv == one);

    // a + 0 = a
    AlgebraicReal zero(5);
    CHECK(lam + zero == lam);

    CHECK_THROWS_AS(zero.invert(), std::domain_error);
    AlgebraicReal other = AlgebraicReal::lambda(4);
    CHECK_THROWS_AS(lam + other, std::domain_error);
}

TEST_CASE("inverse property over random coefficient vectors") {
    std::mt19937_64 rng(20260808);
    for (int m : {4, 5, 6, 7}) {
        AlgebraicReal one = AlgebraicReal::from_rational(m, BigRational(1));
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<BigRational> c(NumberField::get(m)->degree());
            bool allzero = true;
            for (auto& x : c) {
                long n = static_cast<long>(rng() % 19) - 9;
                long d = 1 + static_cast<long>(rng() % 7);
                x = BigRational(n, d);
                if (n != 0) allzero = false;
            }
            if (allzero) c[0] = BigRational(1);
            AlgebraicReal a(NumberField::get(m), c);
            CHECK(a * a.invert() == one);
        }
    }
}

TEST_CASE("certified comparisons") {
    AlgebraicReal lam5 = AlgebraicReal::lambda(5);
    // floor(lambda_5) = 1
    CHECK(certified_floor(lam5) == BigInt(1));
    // lambda_4^2 = 2 exactly, floor decided symbolically
    AlgebraicReal lam4 = AlgebraicReal::lambda(4);
    AlgebraicReal two = lam4 * lam4;
    CHECK(two.is_rational());
    CHECK(certified_floor(two) == BigInt(2));
    // rational 7/2
    CHECK(certified_floor(AlgebraicReal::from_rational(5, BigRational(7, 2))) == BigInt(3));

    // lambda_5 vs lambda_5/2
    AlgebraicReal half = lam5 * BigRational(1, 2);
    CHECK(compare(lam5, half) == std::strong_ordering::greater);
    // lambda_5 - 1 == invert(lambda_5), both (sqrt5 - 1)/2
    AlgebraicReal one = AlgebraicReal::from_rational(5, BigRational(1));
    CHECK(compare(lam5 - one, lam5.invert()) == std::strong_ordering::equal);
    // sqrt2 < 3/2
    CHECK(compare(lam4, AlgebraicReal::from_rational(4, BigRational(3, 2))) ==
          std::strong_ordering::less);
}

TEST_CASE("floor bracketing property") {
    std::mt19937_64 rng(7);
    for (int m : {4, 5, 7}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<BigRational> c(NumberField::get(m)->degree());
            for (auto& x : c)
                x = BigRational(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 5));
            AlgebraicReal v(NumberField::get(m), c);
            BigInt f = certified_floor(v);
            AlgebraicReal fv = AlgebraicReal::from_rational(m, BigRational(f));
            AlgebraicReal fv1 = AlgebraicReal::from_rational(m, BigRational(f + BigInt(1)));
            CHECK(compare(fv, v) != std::strong_ordering::greater);
            CHECK(compare(v, fv1) == std::strong_ordering::less);
        }
    }
}

TEST_CASE("adaptive real: nesting, width, floor") {
    auto stream = std::make_shared<BitStream>(42);
    AdaptiveReal u = AdaptiveReal::uniform01(stream);
    RatInterval a = u.at(16);
    RatInterval b = u.at(64);
    RatInterval c = u.at(128);
    CHECK(a.width() <= dyadic(BigInt(1), 16));
    CHECK(b.width() <= dyadic(BigInt(1), 64));
    CHECK(c.width() <= dyadic(BigInt(1), 128));
    CHECK(b.lo >= a.lo);
    CHECK(b.hi <= a.hi);
    CHECK(c.lo >= b.lo);
    CHECK(c.hi <= b.hi);
    CHECK(certified_floor(u) == BigInt(0));

    AdaptiveReal seven_halves = AdaptiveReal::from_rational(BigRational(7, 2));
    CHECK(certified_floor(seven_halves) == BigInt(3));

    // an interval pinned astride an integer can never resolve: loud error
    AdaptiveReal stuck([](unsigned long) {
        return RatInterval{BigRational(1), BigRational(1)};
    });
    AdaptiveReal astride([](unsigned long b) {
        return RatInterval{BigRational(1) - dyadic(BigInt(1), b + 1),
                           BigRational(1) + dyadic(BigInt(1), b + 1)};
    });
    CHECK(certified_floor(stuck) == BigInt(1));
    CHECK_THROWS_AS(certified_floor(astride, 256), undecidable_floor);
}

TEST_CASE("adaptive determinism: same seed, same intervals") {
    AdaptiveReal u1 = AdaptiveReal::uniform01(std::make_shared<BitStream>(99));
    AdaptiveReal u2 = AdaptiveReal::uniform01(std::make_shared<BitStream>(99));
    CHECK(u1.at(256).lo == u2.at(256).lo);
    CHECK(u1.at(256).hi == u2.at(256).hi);
}
