#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "scolab/core.hpp"
#include "scolab/radius.hpp"
#include "scolab/rng.hpp"

using namespace scolab;

TEST(Radius, FloorOfIntegerRadiusIsExact) {
    const RadiusSpec r(2.0);
    EXPECT_EQ(r.floor_r().value(), 2);
    EXPECT_EQ(r.floor_r2().value(), 4);
}

TEST(Radius, FloorOfSquareNeverDrifts) {
    // sqrt(5)^2 rounds to 5.000000000000001 in double.
    EXPECT_EQ(RadiusSpec(std::sqrt(5.0)).floor_r2().value(), 5);
    EXPECT_EQ(RadiusSpec(1.8).floor_r2().value(), 3);
    EXPECT_EQ(RadiusSpec(0.9).floor_r().value(), 0);
}

TEST(Radius, RationalIsEvaluatedInIntegers) {
    const auto r = RadiusSpec::rational(7, 2);
    EXPECT_EQ(r.floor_r().value(), 3);
    EXPECT_EQ(r.floor_r2().value(), 12);
    EXPECT_TRUE(r.square_le(13));
    EXPECT_FALSE(r.square_le(12));
    EXPECT_EQ(RadiusSpec::parse("7/2").str(), "7/2");
}

TEST(Radius, InfinityAndParsing) {
    const auto inf = RadiusSpec::parse("inf");
    EXPECT_TRUE(inf.is_inf());
    EXPECT_TRUE(inf.floor_r().is_inf());
    EXPECT_TRUE(inf.floor_r2().is_inf());
    EXPECT_DOUBLE_EQ(RadiusSpec::parse("2.5").value(), 2.5);
    EXPECT_THROW(RadiusSpec::parse("2.5x"), InvalidArgument);
    EXPECT_THROW(RadiusSpec(0.0), InvalidArgument);
    EXPECT_THROW(RadiusSpec(-1.0), InvalidArgument);
    EXPECT_THROW(RadiusSpec::rational(0, 1), InvalidArgument);
}

TEST(Radius, PropertyFloorSquareMatchesSquareLe) {
    RngStream rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double v = 0.01 + 20.0 * rng.uniform01();
        const RadiusSpec r(v);
        const auto k = r.floor_r2().value();
        EXPECT_TRUE(r.square_le(k + 1));
        if (k > 0) {
            EXPECT_FALSE(r.square_le(k - 1));
        }
    }
}

TEST(IntOrInf, ValueOnInfinityThrows) {
    EXPECT_THROW(IntOrInf::infinity().value(), InvalidArgument);
    EXPECT_EQ(IntOrInf(3).value(), 3);
    EXPECT_TRUE(std::isinf(IntOrInf::infinity().as_double()));
}

TEST(RationalArith, ReducesAndCompares) {
    const Rational a(2, 4), b(1, 3);
    EXPECT_EQ(a, Rational(1, 2));
    EXPECT_EQ(a + b, Rational(5, 6));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 6));
    EXPECT_EQ(a / b, Rational(3, 2));
    EXPECT_TRUE(b < a);
    EXPECT_EQ(Rational(3, -6), Rational(-1, 2));
    EXPECT_THROW(a / Rational(0), InvalidArgument);
}

TEST(Rng, SameSeedSameStream) {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DerivedSeedsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 1; m <= 32; ++m)
        for (std::uint64_t t = 0; t < 32; ++t) seen.insert(derive_seed(7, "exp", m, t));
    EXPECT_EQ(seen.size(), 32u * 32u);
    EXPECT_NE(derive_seed(7, "a", 1, 0), derive_seed(7, "b", 1, 0));
    EXPECT_EQ(derive_seed(7, "a", 1, 0), derive_seed(7, "a", 1, 0));
}

TEST(Rng, UniformIntStaysInRange) {
    RngStream rng(3);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 70000; ++i) ++hits[rng.uniform_int(7)];
    for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(Rng, NormalMoments) {
    RngStream rng(5);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(Rng, BernoulliFrequency) {
    RngStream rng(9);
    int k = 0;
    for (int i = 0; i < 100000; ++i) k += rng.bernoulli(0.3);
    EXPECT_NEAR(k / 1e5, 0.3, 0.006);
}
