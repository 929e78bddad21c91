#include <gtest/gtest.h>

#include "flagrank/rng.hpp"
#include "flagrank/scalars.hpp"

#include "oracles.hpp"

using namespace flagrank;

TEST(Primes, RecognizesKnownPrimesAndComposites) {
    EXPECT_TRUE(is_prime_u64(2));
    EXPECT_TRUE(is_prime_u64(3));
    EXPECT_TRUE(is_prime_u64(104729));
    EXPECT_TRUE(is_prime_u64(2305843009213693951ULL)); // 2^61 - 1
    EXPECT_FALSE(is_prime_u64(1));
    EXPECT_FALSE(is_prime_u64(0));
    EXPECT_FALSE(is_prime_u64(104729ULL * 104729ULL));
    EXPECT_FALSE(is_prime_u64(2305843009213693953ULL));
}

TEST(Primes, DefaultAndConfirmationPrimesAreDistinctPrimes) {
    EXPECT_TRUE(is_prime_u64(kDefaultPrime));
    std::uint64_t q = confirmation_prime(kDefaultPrime);
    EXPECT_TRUE(is_prime_u64(q));
    EXPECT_NE(q, kDefaultPrime);
    EXPECT_LT(q, kMaxPrime);
}

TEST(Primes, NextAndPrevNavigation) {
    EXPECT_EQ(next_prime_above(7), 11u);
    EXPECT_EQ(prev_prime_below(11), 7u);
    std::uint64_t p = next_prime_above(1000000);
    EXPECT_TRUE(is_prime_u64(p));
    for (std::uint64_t x = 1000001; x < p; ++x) EXPECT_FALSE(is_prime_u64(x));
}

TEST(PrimeField, FieldAxiomsOnRandomElements) {
    PrimeField f(kDefaultPrime);
    Rng rng(42);
    for (int t = 0; t < 200; ++t) {
        auto a = f.random(rng), b = f.random(rng), c = f.random(rng);
        EXPECT_EQ(f.add(a, b), f.add(b, a));
        EXPECT_EQ(f.mul(a, b), f.mul(b, a));
        EXPECT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        EXPECT_EQ(f.add(a, f.neg(a)), f.zero());
        EXPECT_EQ(f.sub(a, b), f.add(a, f.neg(b)));
        if (!f.is_zero(a)) {
            EXPECT_EQ(f.mul(a, f.inv(a)), f.one());
            EXPECT_EQ(f.mul(f.div(b, a), a), b);
        }
    }
}

TEST(PrimeField, FromIntHandlesNegatives) {
    PrimeField f(101);
    EXPECT_EQ(f.from_int(-1), 100u);
    EXPECT_EQ(f.from_int(-101), 0u);
    EXPECT_EQ(f.from_int(205), 3u);
    EXPECT_EQ(f.add(f.from_int(-7), f.from_int(7)), 0u);
}

TEST(PrimeField, AgreesWithSmallModulusArithmetic) {
    PrimeField f(97);
    for (int a = 0; a < 97; a += 13)
        for (int b = 0; b < 97; b += 17) {
            EXPECT_EQ(f.add(a, b), static_cast<std::uint64_t>((a + b) % 97));
            EXPECT_EQ(f.mul(a, b), static_cast<std::uint64_t>((a * b) % 97));
        }
}

TEST(RationalField, ExactArithmetic) {
    RationalField q;
    BigRat a(3, 7), b(-2, 5);
    EXPECT_EQ(q.add(a, b), BigRat(1, 35));
    EXPECT_EQ(q.mul(a, b), BigRat(-6, 35));
    EXPECT_EQ(q.inv(a), BigRat(7, 3));
    EXPECT_EQ(q.mul(a, q.inv(a)), q.one());
    EXPECT_TRUE(q.is_zero(q.sub(a, a)));
}

TEST(PolyRing, ArithmeticAndValuation) {
    RationalField q;
    PolyRing<RationalField> P(q);
    auto t = P.monomial(q.one(), 1);
    auto one = P.one();
    auto a = P.add(one, t);                   // 1 + t
    auto b = P.sub(one, t);                   // 1 - t
    auto prod = P.mul(a, b);                  // 1 - t^2
    EXPECT_EQ(P.degree(prod), 2);
    EXPECT_EQ(P.coeff(prod, 0), q.one());
    EXPECT_TRUE(q.is_zero(P.coeff(prod, 1)));
    EXPECT_EQ(P.coeff(prod, 2), BigRat(-1));

    EXPECT_EQ(P.valuation(P.zero()), PolyRing<RationalField>::kInfiniteValuation);
    auto t3 = P.monomial(BigRat(5), 3);
    EXPECT_EQ(P.valuation(t3), 3);
    auto down = P.shift_down(t3, 3);
    EXPECT_EQ(P.degree(down), 0);
    EXPECT_EQ(P.coeff(down, 0), BigRat(5));
}

TEST(PolyRing, HornerEvaluationMatchesDirectSum) {
    RationalField q;
    PolyRing<RationalField> P(q);
    // p(t) = 2 - 3t + t^3
    auto p = P.add(P.add(P.constant(BigRat(2)), P.monomial(BigRat(-3), 1)),
                   P.monomial(BigRat(1), 3));
    for (int x = -3; x <= 3; ++x) {
        BigRat tv(x);
        BigRat direct = BigRat(2) - BigRat(3) * tv + tv * tv * tv;
        EXPECT_EQ(P.eval(p, tv), direct);
    }
}

TEST(PolyRing, OverPrimeField) {
    PrimeField f(97);
    PolyRing<PrimeField> P(f);
    auto a = P.add(P.one(), P.monomial(96, 1)); // 1 - t mod 97
    auto sq = P.mul(a, a);                      // 1 - 2t + t^2
    EXPECT_EQ(P.coeff(sq, 0), 1u);
    EXPECT_EQ(P.coeff(sq, 1), 95u);
    EXPECT_EQ(P.coeff(sq, 2), 1u);
}

TEST(Jets, ProductRuleAndConstants) {
    PrimeField f(kDefaultPrime);
    JetRing<PrimeField> J(f, 2);
    auto x = J.variable(f.from_int(3), 0);
    auto y = J.variable(f.from_int(5), 1);
    auto xy = J.mul(x, y);
    EXPECT_EQ(xy.v, f.from_int(15));
    EXPECT_EQ(xy.g[0], f.from_int(5)); // d(xy)/dx = y
    EXPECT_EQ(xy.g[1], f.from_int(3)); // d(xy)/dy = x
    auto s = J.add(x, J.constant(f.from_int(10)));
    EXPECT_EQ(s.v, f.from_int(13));
    EXPECT_EQ(s.g[0], f.one());
    EXPECT_EQ(s.g[1], f.zero());
    // (x + y)^2 at (3,5): value 64, gradient (16, 16)
    auto sum = J.add(x, y);
    auto sq = J.mul(sum, sum);
    EXPECT_EQ(sq.v, f.from_int(64));
    EXPECT_EQ(sq.g[0], f.from_int(16));
    EXPECT_EQ(sq.g[1], f.from_int(16));
}
