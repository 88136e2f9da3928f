#include <gtest/gtest.h>

#include <sstream>

#include "scolab/io.hpp"

using namespace scolab;

namespace {

template <class F>
void expect_trace_round_trip(const F& f, std::uint64_t seed) {
    RngStream rng(seed);
    const auto zs = draw(f, 25, rng);
    std::stringstream ss;
    write_trace_csv(ss, f, zs);
    const auto back = read_trace_csv(ss, f);
    ASSERT_EQ(back.size(), zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if constexpr (std::is_same_v<typename F::Sample, LogisticSample>) {
            EXPECT_EQ(back[i].b, zs[i].b);
            EXPECT_EQ(back[i].a, zs[i].a);
        } else {
            EXPECT_EQ(back[i], zs[i]);
        }
    }
}

std::vector<AnyFamily> all_families() {
    return {CoinLinearFamily(3, 2.0, CoinMode::dimension, 0.25, {1, -1, 1}),
            TentFamily::from_packing(l2_integer_packing(6, RadiusSpec(2.0), 4), 1, 0.5),
            QuadGaussianFamily(1.5, 0.5, {0.1, -0.7}),
            SmallKappaQuadFamily(1.0, 0.01, {1, -1}, 2.0),
            BlockGadgetFamily(5, 1.0, 64.0, 2, 1.0 / 24.0, {-1, 1}, 1.0),
            LogisticFamily(3, 0.5, 2.0, 0.1, {1.0, 1.0, 0.0})};
}

}  // namespace

TEST(FmtDouble, ShortestRoundTrip) {
    EXPECT_EQ(fmt_double(0.1), "0.1");
    EXPECT_EQ(fmt_double(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(std::stod(fmt_double(2.0 / 3.0)), 2.0 / 3.0);
}

TEST(FamilySpec, RoundTripsEveryFamily) {
    for (const auto& f : all_families()) {
        const json j = family_to_json(f, 17);
        EXPECT_EQ(j["seed"], 17u);
        const AnyFamily g = family_from_json(j);
        EXPECT_EQ(g.index(), f.index());
        EXPECT_EQ(family_to_json(g, 17), j) << j.dump();
    }
}

TEST(FamilySpec, TentFromPackingRecipe) {
    const json spec{{"family", "tent"}, {"params", {{"d", 8}, {"R", 3.0}, {"packing_seed", 5}, {"hidden", 2}, {"rho", 0.5}}}};
    const auto f = std::get<TentFamily>(family_from_json(spec));
    const auto W = l2_integer_packing(8, RadiusSpec(3.0), 5);
    EXPECT_EQ(f.size(), W.size());
    EXPECT_DOUBLE_EQ(f.r(), W.radius());
    EXPECT_EQ(f.hidden(), 2u);
}

TEST(FamilySpec, Errors) {
    EXPECT_THROW(family_from_json(json{{"family", "nope"}}), InvalidArgument);
    EXPECT_THROW(family_from_json(json{{"params", json::object()}}), InvalidArgument);
    EXPECT_THROW(family_from_json(json{{"family", "quad"}, {"params", {{"mu", 1.0}}}}), InvalidArgument);
    EXPECT_THROW(family_from_json(json{{"family", "quad"}, {"params", {{"mu", "x"}, {"sigma", 1}, {"theta", {0}}}}}),
                 InvalidArgument);
}

TEST(Trace, RoundTripsEveryFamily) {
    std::uint64_t seed = 1;
    for (const auto& f : all_families()) std::visit([&](const auto& fam) { expect_trace_round_trip(fam, seed++); }, f);
}

TEST(Trace, CoinUsesOneBasedCoordinates) {
    CoinLinearFamily f(3, 1.0, CoinMode::dimension, 0.5, {1, 1, 1});
    std::ostringstream os;
    write_trace_csv(os, f, {CoinSample{0, 1}, CoinSample{2, -1}});
    EXPECT_EQ(os.str(), "i,j,k\n0,1,1\n1,3,-1\n");
}

TEST(Trace, RejectsMalformedInput) {
    CoinLinearFamily f(3, 1.0, CoinMode::dimension, 0.5, {1, 1, 1});
    {
        std::istringstream is("i,x,k\n0,1,1\n");
        EXPECT_THROW(read_trace_csv(is, f), InvalidArgument);
    }
    {
        std::istringstream is("i,j,k\n0,4,1\n");
        EXPECT_THROW(read_trace_csv(is, f), InvalidArgument);
    }
    {
        std::istringstream is("i,j,k\n1,1,1\n");
        EXPECT_THROW(read_trace_csv(is, f), InvalidArgument);
    }
    QuadGaussianFamily q(1.0, 1.0, {0.0, 0.0});
    std::istringstream is("i,z1,z2\n0,0.5,abc\n");
    EXPECT_THROW(read_trace_csv(is, q), InvalidArgument);
}

TEST(Trace, ReplayGivesSameErmAsLiveSamples) {
    QuadGaussianFamily f(1.0, 1.0, {0.3, -0.6});
    RngStream rng(3);
    const auto zs = draw(f, 40, rng);
    std::stringstream ss;
    write_trace_csv(ss, f, zs);
    const auto back = read_trace_csv(ss, f);
    EXPECT_EQ(f.summarize(back).zbar, f.summarize(zs).zbar);
}
