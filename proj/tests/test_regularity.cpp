#include <gtest/gtest.h>

#include "scolab/regularity.hpp"

using namespace scolab;

namespace probe {

// Quadratic family with a gradient that is off by a factor of two.
struct WrongGradientQuad {
    using Sample = Vec;
    using Summary = GaussianSummary;
    static constexpr const char* tag = "wrong-gradient";
    QuadGaussianFamily base{1.0, 1.0, {0.3, -0.2}};

    int dim() const { return base.dim(); }
    Sample sample(RngStream& rng) const { return base.sample(rng); }
    double loss(const Vec& x, const Sample& z) const { return base.loss(x, z); }
    double population(const Vec& x) const { return base.population(x); }
    Summary summarize(const std::vector<Sample>& zs) const { return base.summarize(zs); }
    double empirical(const Summary& s, const Vec& x) const { return base.empirical(s, x); }
    Minimizer population_minimizer(const Feasible& f) const { return base.population_minimizer(f); }
    Vec gradient(const Vec& x, const Sample& z) const {
        auto g = base.gradient(x, z);
        for (auto& v : g) v *= 2.0;
        return g;
    }
};

inline RegularityProfile regularity_profile(const WrongGradientQuad& f) { return scolab::regularity_profile(f.base); }

// Coin family that under-declares its Lipschitz constant.
struct UnderDeclaredCoin : CoinLinearFamily {
    UnderDeclaredCoin() : CoinLinearFamily(3, 2.0, CoinMode::dimension, 0.25, {1, -1, 1}) {}
};

inline RegularityProfile regularity_profile(const UnderDeclaredCoin& f) {
    auto p = scolab::regularity_profile(static_cast<const CoinLinearFamily&>(f));
    p.lipschitz = 0.5;
    return p;
}

}  // namespace probe

namespace {

RegularityOptions quick() {
    RegularityOptions o;
    o.trials = 100;
    o.increment_draws = 40000;
    return o;
}

}  // namespace

TEST(Regularity, CoinPasses) {
    const auto rep = verify_regularity(CoinLinearFamily(4, 2.0, CoinMode::dimension, 0.25, {1, -1, 1, 1}), 1, quick());
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
    EXPECT_LE(rep.max_lipschitz_ratio, 1.0 + 1e-12);
}

TEST(Regularity, TentPasses) {
    const auto f = TentFamily::from_packing(l2_integer_packing(6, RadiusSpec(2.0), 3), 0, 0.5);
    const auto rep = verify_regularity(f, 2, quick());
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
}

TEST(Regularity, QuadPasses) {
    const auto rep = verify_regularity(QuadGaussianFamily(0.5, 1.5, {1.0, -2.0, 0.0}), 3, quick());
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
    EXPECT_NEAR(rep.min_eigenvalue, 0.5, 1e-9);
    EXPECT_NEAR(rep.max_eigenvalue, 0.5, 1e-9);
    EXPECT_GT(rep.min_variance_ratio, 0.9);
    EXPECT_LT(rep.max_variance_ratio, 1.1);
}

TEST(Regularity, SmallKappaPasses) {
    const auto rep = verify_regularity(SmallKappaQuadFamily(1.0, 1.0 / 72.0, {1, -1, 1}, 1.0), 4, quick());
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
}

TEST(Regularity, GadgetPasses) {
    const auto rep = verify_regularity(BlockGadgetFamily(5, 1.0, 64.0, 2, 1.0 / 24.0, {1, -1}, 1.0), 5, quick());
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
    EXPECT_GE(rep.min_eigenvalue, 1.0 - 1e-9);
    EXPECT_LE(rep.max_eigenvalue, 64.0 + 1e-9);
}

TEST(Regularity, LogisticSmoothnessWithinBound) {
    LogisticFamily f(3, 0.5, 2.0, 0.1);
    const auto rep = verify_regularity(f, 6, quick());
    EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations.front());
    EXPECT_LE(rep.max_eigenvalue, f.smoothness() + 1e-9);
    EXPECT_GE(rep.min_eigenvalue, 0.5 - 1e-9);
}

TEST(Regularity, WrongGradientIsCaught) {
    const auto rep = verify_regularity(probe::WrongGradientQuad{}, 7, quick());
    EXPECT_FALSE(rep.ok());
    EXPECT_GT(rep.max_gradient_rel_error, 0.1);
}

TEST(Regularity, UnderDeclaredLipschitzIsCaught) {
    const auto rep = verify_regularity(probe::UnderDeclaredCoin{}, 8, quick());
    EXPECT_FALSE(rep.ok());
    EXPECT_GT(rep.max_lipschitz_ratio, 0.5);
}

TEST(Regularity, DeterministicGivenSeed) {
    QuadGaussianFamily f(1.0, 1.0, {0.5, 0.5});
    const auto a = verify_regularity(f, 9, quick());
    const auto b = verify_regularity(f, 9, quick());
    EXPECT_EQ(a.max_variance_ratio, b.max_variance_ratio);
    EXPECT_EQ(a.checks, b.checks);
}
