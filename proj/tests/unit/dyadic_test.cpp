#include <gtest/gtest.h>

#include "fpbasis/dyadic.hpp"
#include "fpbasis/verify/random.hpp"

using fpbasis::BigInt;
using fpbasis::DyadicRational;
using fpbasis::Rational;

namespace {

DyadicRational dy(const char* s) { return DyadicRational::parse(s); }

}  // namespace

TEST(Dyadic, CanonicalForm) {
  DyadicRational a(BigInt(12), 3);  // 12/8 = 3/2
  EXPECT_EQ(a.numerator(), 3);
  EXPECT_EQ(a.exponent(), 1u);
  DyadicRational z(BigInt(0), 7);
  EXPECT_EQ(z.exponent(), 0u);
  EXPECT_EQ(z, DyadicRational());
  DyadicRational n(BigInt(-20), 2);  // -5
  EXPECT_EQ(n.numerator(), -5);
  EXPECT_EQ(n.exponent(), 0u);
}

TEST(Dyadic, ArithmeticStaysCanonical) {
  const auto half = dy("1/2");
  EXPECT_EQ(half + half, DyadicRational(1));
  EXPECT_EQ((half + half).exponent(), 0u);
  EXPECT_EQ(dy("3/4") - dy("1/4"), half);
  EXPECT_EQ(dy("3/4") * dy("2"), dy("3/2"));
  EXPECT_EQ(dy("3/4") * dy("4"), DyadicRational(3));
  EXPECT_EQ(dy("-3/8") * dy("-3/8"), dy("9/64"));
  EXPECT_EQ(-dy("5/16"), dy("-5/16"));
  EXPECT_EQ(abs(dy("-5/16")), dy("5/16"));
}

TEST(Dyadic, Ordering) {
  EXPECT_LT(dy("1/4"), dy("1/2"));
  EXPECT_LT(dy("-1"), dy("-1/2"));
  EXPECT_GT(dy("3"), dy("23/8"));
  EXPECT_EQ(dy("6/4"), dy("3/2"));
}

TEST(Dyadic, Parse) {
  EXPECT_EQ(dy("-0.375"), DyadicRational(BigInt(-3), 3));
  EXPECT_EQ(dy("2.5"), dy("5/2"));
  EXPECT_EQ(dy("+7"), DyadicRational(7));
  EXPECT_EQ(dy(".5"), dy("1/2"));
  EXPECT_EQ(dy("010"), DyadicRational(10));
  EXPECT_EQ(dy("0.0625"), dy("1/16"));
  EXPECT_EQ(dy("-3/2^5"), dy("-3/32"));
  EXPECT_EQ(dy(dy("-12345/2^70").to_string().c_str()), dy("-12345/2^70"));
  EXPECT_THROW(dy("1/2^"), fpbasis::ParseError);
  EXPECT_THROW(dy("0.1"), fpbasis::ParseError);
  EXPECT_THROW(dy("1/3"), fpbasis::ParseError);
  EXPECT_THROW(dy("1/0"), fpbasis::ParseError);
  EXPECT_THROW(dy(""), fpbasis::ParseError);
  EXPECT_THROW(dy("1e3"), fpbasis::ParseError);
}

TEST(Dyadic, FloorCeilLdexp) {
  EXPECT_EQ(dy("5/2").floor(), 2);
  EXPECT_EQ(dy("5/2").ceil(), 3);
  EXPECT_EQ(dy("-5/2").floor(), -3);
  EXPECT_EQ(dy("-5/2").ceil(), -2);
  EXPECT_EQ(DyadicRational(4).floor(), 4);
  EXPECT_EQ(dy("3/8").ldexp(3), DyadicRational(3));
  EXPECT_EQ(DyadicRational(3).ldexp(-3), dy("3/8"));
  EXPECT_EQ(DyadicRational(12).ldexp(-1), DyadicRational(6));
  EXPECT_EQ(DyadicRational::pow2(-4), dy("1/16"));
}

TEST(Dyadic, Log2Exact) {
  EXPECT_EQ(fpbasis::log2_exact(dy("1/8")), -3);
  EXPECT_EQ(fpbasis::log2_exact(dy("16")), 4);
  EXPECT_FALSE(fpbasis::log2_exact(dy("3/8")));
  EXPECT_FALSE(fpbasis::log2_exact(dy("-2")));
}

TEST(Dyadic, Conversions) {
  EXPECT_DOUBLE_EQ(dy("-3/8").to_double(), -0.375);
  EXPECT_EQ(dy("-3/8").to_rational(), Rational(-3, 8));
  EXPECT_EQ(fpbasis::to_dyadic(Rational(5, 32)), dy("5/32"));
  EXPECT_FALSE(fpbasis::to_dyadic(Rational(1, 3)));
  EXPECT_EQ(dy("3/8").to_string(), "3/2^3");
}

TEST(Dyadic, HugeExponentsStayExact) {
  DyadicRational x(1);
  for (int i = 0; i < 200; ++i) x = x * dy("1/2");
  EXPECT_EQ(x.exponent(), 200u);
  EXPECT_EQ(x.ldexp(200), DyadicRational(1));
}

TEST(Dyadic, RandomFieldIdentities) {
  fpbasis::verify::Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto a = fpbasis::verify::random_dyadic(rng, -1000, 1000, -7);
    const auto b = fpbasis::verify::random_dyadic(rng, -1000, 1000, -3);
    const auto c = fpbasis::verify::random_dyadic(rng, -1000, 1000, -5);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ(a - a, DyadicRational());
    EXPECT_EQ((a * b).to_rational(), a.to_rational() * b.to_rational());
    EXPECT_EQ((a + b).to_rational(), a.to_rational() + b.to_rational());
  }
}

TEST(Dyadic, LdexpOfEvenIntegerNormalizes) {
  const auto x = DyadicRational(12).ldexp(-3);  // 12/8 = 3/2
  EXPECT_EQ(x.numerator(), 3);
  EXPECT_EQ(x.exponent(), 1u);
  EXPECT_EQ(DyadicRational(8).ldexp(-3), DyadicRational(1));
}

TEST(Dyadic, InlineAndBigRepresentationsAgree) {
  // Values straddling the inline limit must compare and combine exactly.
  const DyadicRational big = DyadicRational(BigInt(1) << 70);
  const DyadicRational near = DyadicRational((BigInt(1) << 62) - 1);
  EXPECT_TRUE(near.is_small());
  EXPECT_FALSE(big.is_small());
  EXPECT_FALSE((near + DyadicRational(1)).is_small());
  EXPECT_TRUE((near + DyadicRational(1) - DyadicRational(1)).is_small());
  EXPECT_EQ(near + DyadicRational(1) - DyadicRational(1), near);
  EXPECT_EQ(big.ldexp(-70), DyadicRational(1));
  EXPECT_TRUE(big.ldexp(-70).is_small());
  EXPECT_LT(near, big);
  EXPECT_GT(-near, -big);
  EXPECT_EQ((big * DyadicRational::pow2(-71)), DyadicRational::parse("1/2"));
  const DyadicRational tiny = DyadicRational::pow2(-100);
  EXPECT_LT(tiny, DyadicRational::pow2(-99));
  EXPECT_GT(tiny, DyadicRational());
  EXPECT_EQ((tiny + tiny), DyadicRational::pow2(-99));
  EXPECT_EQ(DyadicRational(3).ldexp(61), DyadicRational(BigInt(3) << 61));
  EXPECT_EQ(DyadicRational(-5).floor(), -5);
  EXPECT_EQ(DyadicRational(BigInt(-5) << 80, 81).floor(), -3);
  EXPECT_EQ(DyadicRational(-(BigInt(5) << 80) - 1, 3).floor(), -(BigInt(5) << 77) - 1);
}

TEST(Dyadic, RandomAgreesWithRationalArithmetic) {
  fpbasis::verify::Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const int sa = static_cast<int>(rng.uniform(-90, 90));
    const int sb = static_cast<int>(rng.uniform(-90, 90));
    const auto a = DyadicRational(rng.uniform(-(1LL << 40), 1LL << 40)).ldexp(sa);
    const auto b = DyadicRational(rng.uniform(-(1LL << 40), 1LL << 40)).ldexp(sb);
    const Rational ra = a.to_rational(), rb = b.to_rational();
    EXPECT_EQ((a + b).to_rational(), ra + rb);
    EXPECT_EQ((a - b).to_rational(), ra - rb);
    EXPECT_EQ((a * b).to_rational(), ra * rb);
    EXPECT_EQ(a < b, ra < rb);
    EXPECT_EQ(a == b, ra == rb);
    EXPECT_EQ(fpbasis::to_dyadic(ra + rb), a + b);
  }
}
