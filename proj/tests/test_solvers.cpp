#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "scolab/solvers.hpp"

using namespace scolab;

namespace {

std::vector<Vec> box_points(int d, std::int64_t F) {
    std::vector<Vec> out;
    for (const auto& p : enumerate_integer_points(d, RadiusSpec(static_cast<double>(F)), Norm::linf).points)
        out.push_back(to_real(p));
    return out;
}

}  // namespace

TEST(ErmEnumerated, SinglePointNeedsNoSamples) {
    QuadGaussianFamily f(1.0, 1.0, {0.0});
    const auto r = erm_enumerated(f, f.summarize({}), std::vector<Vec>{{3.0}});
    EXPECT_EQ(r.x, Vec{3.0});
}

TEST(ErmEnumerated, ThreePointsAndTie) {
    QuadGaussianFamily f(1.0, 1.0, {0.0});
    GaussianSummary s{{0.6}, 1};
    const auto r = erm_enumerated(f, s, std::vector<Vec>{{-1}, {0}, {1}});
    EXPECT_EQ(r.x, Vec{1});
    EXPECT_NEAR(r.value, -0.1, 1e-15);
    GaussianSummary t{{0.5}, 1};
    EXPECT_EQ(erm_enumerated(f, t, std::vector<Vec>{{1}, {0}}).x, Vec{0});
    EXPECT_THROW(erm_enumerated(f, t, std::vector<Vec>{}), InvalidArgument);
}

TEST(ErmEnumerated, RawSamplesMatchSummary) {
    QuadGaussianFamily f(1.0, 1.0, {0.3, -0.4});
    RngStream rng(1);
    const auto zs = draw(f, 25, rng);
    const auto a = erm_enumerated_samples(f, zs, box_points(2, 2));
    const auto b = erm_enumerated(f, f.summarize(zs), enumerate_integer_points(2, RadiusSpec(2.0), Norm::linf));
    EXPECT_EQ(a.x, b.x);
}

TEST(ErmQuadratic, Examples) {
    EXPECT_EQ(erm_quadratic_integer_box({0.4, 2.6}, 1.0, 2), (IVec{0, 2}));
    EXPECT_EQ(erm_quadratic_integer_box({0.5}, 1.0, 1), (IVec{0}));
    EXPECT_EQ(erm_quadratic_integer_box({1.5, -3.0, 0.0}, 1.5, 3), (IVec{1, -2, 0}));
}

TEST(ErmQuadratic, OracleEquivalence) {
    RngStream rng(2);
    for (int t = 0; t < 200; ++t) {
        const int d = 1 + static_cast<int>(rng.uniform_int(3));
        const std::int64_t F = 1 + static_cast<std::int64_t>(rng.uniform_int(3));
        const double mu = 0.5 + rng.uniform01();
        Vec z(static_cast<std::size_t>(d));
        for (auto& v : z) v = 8.0 * rng.uniform01() - 4.0;
        QuadGaussianFamily f(mu, 1.0, Vec(static_cast<std::size_t>(d), 0.0));
        const auto brute = erm_enumerated(f, GaussianSummary{z, 1}, box_points(d, F));
        EXPECT_EQ(to_real(erm_quadratic_integer_box(z, mu, F)), brute.x);
    }
}

TEST(ErmGadget, NoiselessRecoversVertices) {
    for (int b : {-1, 1}) {
        BlockGadgetFamily g(2, 1.0, 64.0, 2, 1.0 / 24.0, {b}, 1.0);
        const auto x = erm_block_gadget(g.mean(), g, 4);
        EXPECT_EQ(x, b == 1 ? (IVec{2, 1}) : (IVec{0, 0}));
    }
}

TEST(ErmGadget, OracleEquivalence) {
    BlockGadgetFamily g(2, 1.0, 64.0, 2, 1.0 / 24.0, {1}, 1.0);
    const auto pts = box_points(2, 4);
    RngStream rng(3);
    for (int t = 0; t < 200; ++t) {
        const Vec z{6.0 * rng.normal(), 6.0 * rng.normal()};
        const auto brute = erm_enumerated(g, GaussianSummary{z, 1}, pts);
        EXPECT_EQ(to_real(erm_block_gadget(z, g, 4)), brute.x) << "z=" << z[0] << "," << z[1];
    }
}

TEST(ErmGadget, OddDimensionLeftover) {
    BlockGadgetFamily g(3, 1.0, 64.0, 2, 1.0 / 24.0, {1}, 1.0);
    const auto pts = box_points(3, 3);
    RngStream rng(4);
    for (int t = 0; t < 50; ++t) {
        const Vec z{3.0 * rng.normal(), 3.0 * rng.normal(), 3.0 * rng.normal()};
        EXPECT_EQ(to_real(erm_block_gadget(z, g, 3)), erm_enumerated(g, GaussianSummary{z, 1}, pts).x);
    }
}

TEST(ErmGadget, BudgetAndBoxPreconditions) {
    BlockGadgetFamily g(2, 1.0, 64.0, 2, 1.0 / 24.0, {1}, 1.0);
    EXPECT_THROW(erm_block_gadget({0, 0}, g, 1), InvalidArgument);
    EXPECT_THROW(erm_gadget_block(g, 1e6, -1e6, IntOrInf::infinity(), 0), BudgetExceeded);
}

TEST(ErmContinuous, Examples) {
    EXPECT_EQ(erm_continuous({0.0, 0.0}, 1.0, AllSpace{}), (Vec{0, 0}));
    EXPECT_EQ(erm_continuous({3.0, -3.0}, 1.0, BoxContinuous{RadiusSpec(2.0)}), (Vec{2, -2}));
    EXPECT_EQ(erm_continuous({0.5}, 2.0, AllSpace{}), (Vec{0.25}));
    EXPECT_THROW(erm_continuous({0.5}, 1.0, BoxInteger{2}), InvalidArgument);
}

TEST(TentErm, ArgmaxAndTies) {
    EXPECT_EQ(tent_erm({6, 3}), 0u);
    EXPECT_EQ(tent_erm({2, 2, 2}), 0u);
    EXPECT_EQ(tent_erm({1, 4, 4}), 1u);
}

TEST(TentErm, FindsHiddenCenterWithHighProbability) {
    const auto W = l2_integer_packing(8, RadiusSpec(3.0), 2);
    ASSERT_EQ(W.size(), 8u);
    const auto f = TentFamily::from_packing(W, 5, 0.5);
    RngStream rng(5);
    int hits = 0;
    for (int rep = 0; rep < 1000; ++rep) hits += tent_erm(f.summarize(draw(f, 200, rng)).counts) == 5;
    EXPECT_GE(hits, 950);
}

TEST(TentErm, MatchesEmpiricalArgminOverCenters) {
    const auto f = TentFamily::from_packing(l2_integer_packing(8, RadiusSpec(3.0), 3), 1, 0.25);
    RngStream rng(6);
    for (int rep = 0; rep < 100; ++rep) {
        const auto s = f.summarize(draw(f, 15, rng));
        const auto k = tent_erm(s.counts);
        for (std::size_t w = 0; w < f.size(); ++w)
            EXPECT_LE(f.empirical(s, f.centers()[k]), f.empirical(s, f.centers()[w]));
    }
}

TEST(Majority, Examples) {
    const std::vector<CoinSample> zs{{0, 1}, {0, 1}, {0, -1}, {1, -1}};
    EXPECT_EQ(coin_majority_decoder(zs, 2, 3.0), (Vec{3, -3}));
    EXPECT_EQ(coin_majority_decoder(std::vector<CoinSample>{}, 2, 1.0), (Vec{1, 1}));
    EXPECT_THROW(coin_majority_decoder(std::vector<CoinSample>{{2, 1}}, 2, 1.0), InvalidArgument);
}

TEST(Majority, IsAnEmpiricalMinimizerOverVertices) {
    CoinLinearFamily f(3, 2.0, CoinMode::dimension, 0.25, {1, -1, 1});
    RngStream rng(7);
    std::vector<Vec> verts;
    for (int mask = 0; mask < 8; ++mask)
        verts.push_back({mask & 1 ? 2.0 : -2.0, mask & 2 ? 2.0 : -2.0, mask & 4 ? 2.0 : -2.0});
    for (int rep = 0; rep < 100; ++rep) {
        const auto zs = draw(f, 9, rng);
        const auto s = f.summarize(zs);
        const auto x = coin_majority_decoder(zs, 3, 2.0);
        EXPECT_NEAR(f.empirical(s, x), erm_enumerated(f, s, verts).value, 1e-12);
    }
}

TEST(Shift, ConstantOffsetLeavesArgminUnchanged) {
    RngStream rng(8);
    QuadGaussianFamily f(1.0, 1.0, {0.2, -0.7});
    const auto pts = box_points(2, 3);
    for (double c : {-5.0, 0.0, 3.25}) {
        OffsetFamily<QuadGaussianFamily> g(f, c);
        for (int t = 0; t < 30; ++t) {
            const auto zs = draw(f, 5, rng);
            const auto a = erm_enumerated(f, f.summarize(zs), pts);
            const auto b = erm_enumerated(g, g.summarize(zs), pts);
            EXPECT_EQ(a.x, b.x);
            EXPECT_NEAR(b.value - a.value, c, 1e-12);
        }
        EXPECT_EQ(g.population_minimizer(BoxInteger{3}).x, f.population_minimizer(BoxInteger{3}).x);
    }
}

TEST(Sgd, NoiselessContracts) {
    QuadGaussianFamily f(1.0, 0.0, {0.0, 0.0});
    RngStream rng(9);
    SgdOptions o;
    o.mu = 1.0;
    const auto x = projected_sgd(f, AllSpace{}, 1000, o, rng);
    EXPECT_LE(std::sqrt(norm2_sq(x)), 1e-3);
}

TEST(Sgd, ApproachesMinimizerUnderNoise) {
    QuadGaussianFamily f(1.0, 1.0, {0.5, -0.25});
    RngStream rng(10);
    SgdOptions o;
    const auto x = projected_sgd(f, BoxContinuous{RadiusSpec(2.0)}, 20000, o, rng);
    EXPECT_NEAR(x[0], 0.5, 0.05);
    EXPECT_NEAR(x[1], -0.25, 0.05);
}

TEST(Sgd, LipschitzRuleStaysFeasible) {
    CoinLinearFamily f(3, 1.0, CoinMode::dimension, 0.5, {1, -1, 1});
    RngStream rng(11);
    SgdOptions o;
    o.rule = StepRule::lipschitz;
    o.G = 1.0;
    o.D = 2.0;
    const auto x = projected_sgd(f, BoxContinuous{RadiusSpec(1.0)}, 5000, o, rng);
    EXPECT_LE(norm_inf(x), 1.0);
    EXPECT_LT(excess(f, BoxContinuous{RadiusSpec(1.0)}, x), 0.1);
}

TEST(Sgd, RejectsNonconvexSets) {
    QuadGaussianFamily f(1.0, 1.0, {0.0});
    RngStream rng(12);
    EXPECT_THROW(projected_sgd(f, BoxInteger{2}, 10, SgdOptions{}, rng), InvalidArgument);
}

TEST(SolverCsv, RowFormat) {
    std::ostringstream os;
    write_solver_csv_header(os, 2);
    write_solver_csv_row(os, "erm", "quad", 4, {1, 0}, -0.5, 0.25);
    EXPECT_EQ(os.str(), "solver,family,m,x1,x2,empirical,excess\nerm,quad,4,1,0,-0.5,0.25\n");
}
