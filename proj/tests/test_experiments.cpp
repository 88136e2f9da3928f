#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "scolab/experiments.hpp"

using namespace scolab;

namespace {

ExperimentConfig tent_config() {
    ExperimentConfig c;
    c.id = "tent-test";
    c.family = "tent";
    c.rule = "erm";
    c.d = 8;
    c.R = RadiusSpec(3.0);
    c.epsilon = std::sqrt(8.0) / 16.0;
    c.delta = 0.1;
    c.params = {{"rho", 0.5}};
    return c;
}

}  // namespace

TEST(Config, JsonRoundTrip) {
    ExperimentConfig c = tent_config();
    c.mu = 2.0;
    c.m_grid = {3, 9, 27};
    c.master_seed = 99;
    ExperimentConfig d;
    apply_config_json(d, config_to_json(c));
    EXPECT_EQ(config_to_json(d), config_to_json(c));
    EXPECT_EQ(d.R.str(), c.R.str());
    EXPECT_FALSE(d.sigma.has_value());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    ExperimentConfig c;
    EXPECT_THROW(apply_config_json(c, json{{"epsilon", 0.1}}), InvalidArgument);
    EXPECT_THROW(apply_config_json(c, json{{"d", "two"}}), InvalidArgument);
    apply_config_json(c, json{{"R", "7/2"}});
    EXPECT_EQ(c.R.floor_r().value(), 3);
    c.m_grid = {4, 2};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.m_grid = {1};
    c.delta = 1.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Success, VacuousThresholdAlwaysSucceeds) {
    ExperimentConfig c;
    c.family = "coin";
    c.rule = "zero";
    c.d = 3;
    c.R = RadiusSpec(1.0);
    c.epsilon = 10.0;
    c.params = {{"rho", 0.5}};
    c.trials = 50;
    for (long long m : {1, 7}) {
        const auto s = estimate_success(c, m, 1);
        EXPECT_EQ(s.p_hat, 1.0);
        EXPECT_EQ(s.successes, 50);
    }
}

TEST(Success, SingleCoinSampleCannotAlignEightCoordinates) {
    ExperimentConfig c;
    c.family = "coin";
    c.rule = "majority";
    c.d = 8;
    c.R = RadiusSpec(1.0);
    c.epsilon = 0.05;
    c.params = {{"rho", 0.5}};
    c.trials = 2000;
    const auto s = estimate_success(c, 1, 1);
    EXPECT_LT(s.p_hat, 0.1);
    EXPECT_LT(s.ci.hi, 0.75);
}

TEST(Success, TentSeparatesAtTwoHundredSamples) {
    ExperimentConfig c = tent_config();
    c.trials = 500;
    const auto s = estimate_success(c, 200, 1);
    EXPECT_GE(s.p_hat, 0.95);
    EXPECT_LE(s.ci.lo, s.p_hat);
    EXPECT_GE(s.ci.hi, s.p_hat);
}

TEST(MinM, FirstQualifyingPointWithoutSmoothing) {
    std::vector<MSummary> all1{{1, 10, 10, 0, 1.0, {}}, {2, 10, 10, 0, 1.0, {}}};
    EXPECT_EQ(find_min_m(all1, 0.25), 1);
    std::vector<MSummary> all0{{1, 10, 0, 0, 0.0, {}}, {2, 10, 0, 0, 0.0, {}}};
    EXPECT_FALSE(find_min_m(all0, 0.25).has_value());
    std::vector<MSummary> bumpy{{1, 10, 8, 0, 0.8, {}}, {2, 10, 5, 0, 0.5, {}}, {4, 10, 9, 0, 0.9, {}}};
    EXPECT_EQ(find_min_m(bumpy, 0.25), 1);
}

TEST(MinM, CoinBracket) {
    ExperimentConfig c;
    c.id = "coin-bracket";
    c.family = "coin";
    c.rule = "majority";
    c.d = 2;
    c.R = RadiusSpec(1.0);
    c.epsilon = 0.25;
    c.delta = 0.25;
    c.trials = 400;
    c.m_grid.clear();
    for (long long m = 1; m <= (1 << 14); m *= 2) c.m_grid.push_back(m);
    const auto r = run_experiment(c, 1);
    ASSERT_TRUE(r.m_hat.has_value());
    BoundQuery q;
    q.d = 2;
    q.R = RadiusSpec(1.0);
    q.epsilon = 0.25;
    q.delta = 0.25;
    const double lower = linf_lower_bounds(q).combined;
    const double upper_scale = (1.0 / 0.0625) * (2.0 + std::log(4.0));
    EXPECT_GE(static_cast<double>(*r.m_hat), lower);
    EXPECT_LE(static_cast<double>(*r.m_hat), 8.0 * upper_scale);
}

TEST(Runner, DeterministicAcrossThreadCounts) {
    ExperimentConfig c;
    c.id = "threads";
    c.family = "gadget";
    c.d = 4;
    c.R = RadiusSpec(8.0);
    c.epsilon = 0.4 / 1664.0;
    c.m_grid = {64, 1024};
    c.trials = 60;
    const auto a = run_experiment(c, 1);
    const auto b = run_experiment(c, 4);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].seed, b.records[i].seed);
        EXPECT_EQ(a.records[i].excess, b.records[i].excess);
        EXPECT_EQ(a.records[i].instance, b.records[i].instance);
    }
}

TEST(Runner, SeedsAreDerivedFromIdMAndTrial) {
    ExperimentConfig c = tent_config();
    c.trials = 3;
    c.m_grid = {5};
    const auto r = run_experiment(c, 1);
    for (const auto& t : r.records) {
        EXPECT_EQ(t.seed, derive_seed(c.master_seed, c.id, 5, static_cast<std::uint64_t>(t.trial)));
        EXPECT_EQ(t.success, t.excess <= c.epsilon);
    }
}

TEST(Runner, FixedInstanceModeKeepsHiddenInstance) {
    ExperimentConfig c = tent_config();
    c.randomize_instance = false;
    c.trials = 20;
    c.m_grid = {1};
    const auto r = run_experiment(c, 1);
    for (const auto& t : r.records) EXPECT_EQ(t.instance, r.records.front().instance);
}

TEST(Runner, LogisticHasNoExactExcess) {
    ExperimentConfig c;
    c.family = "logistic";
    EXPECT_THROW(make_trial_fn(c), Unsupported);
    c.family = "nope";
    EXPECT_THROW(make_trial_fn(c), InvalidArgument);
}

TEST(Output, TrialsCsvAndSummary) {
    ExperimentConfig c = tent_config();
    c.trials = 2;
    c.m_grid = {1, 2};
    const auto r = run_experiment(c, 1);
    std::ostringstream os;
    write_trials_csv(os, r);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "experiment_id,family,rule,d,R,eps,delta,m,trial,seed,excess,success");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 4);
    const auto j = summary_to_json(r);
    EXPECT_EQ(j["per_m"].size(), 2u);
    EXPECT_TRUE(j.contains("m_hat"));
}

TEST(Rate, ContinuousErmLadderGivesSlopeNearOne) {
    ExperimentConfig c;
    c.id = "rate-small";
    c.family = "quad";
    c.rule = "erm_continuous";
    c.d = 2;
    c.R = RadiusSpec(8.0);
    c.delta = 0.25;
    c.trials = 300;
    c.m_grid.clear();
    for (long long m = 1; m <= (1 << 16); m *= 2) c.m_grid.push_back(m);
    const auto r = run_rate_experiment(c, {0.08, 0.04, 0.02, 0.01, 0.005}, 1.0, 1);
    ASSERT_TRUE(r.fit.has_value());
    EXPECT_NEAR(r.fit->slope, 1.0, 0.3);
    EXPECT_EQ(r.runs.size(), 5u);
    EXPECT_EQ(r.runs[2].config.id, "rate-small-eps2");
}

TEST(UcDeviation, ClosedFormExample) {
    EXPECT_DOUBLE_EQ(uc_sup_closed_form({0.3, -0.5}, {0, 0}, 1), 0.8);
    EXPECT_DOUBLE_EQ(uc_sup_brute_force({0.3, -0.5}, {0, 0}, 1), 0.8);
}

TEST(UcDeviation, NoiselessIsZero) {
    const auto r = uc_deviation_quadratic(2, 2, 1.0, 0.0, {0.5, -0.5}, 10, 20, 3);
    for (double s : r.sup) EXPECT_EQ(s, 0.0);
    EXPECT_TRUE(r.exact_match);
}

TEST(UcDeviation, BruteForceAgreesBitExactly) {
    const auto r = uc_deviation_quadratic(3, 2, 1.0, 1.0, {0.1, 0.2, -0.3}, 7, 100, 4);
    EXPECT_TRUE(r.cross_checked);
    EXPECT_TRUE(r.exact_match);
    EXPECT_EQ(r.sup, r.brute_force);
}

TEST(UcDeviation, CrossCheckSkippedAboveThreeDimensions) {
    const auto r = uc_deviation_quadratic(4, 1, 1.0, 1.0, Vec(4, 0.0), 7, 5, 4);
    EXPECT_FALSE(r.cross_checked);
    EXPECT_TRUE(r.brute_force.empty());
}

TEST(Correlation, ZeroRuleHasNoCorrelation) {
    const auto r = correlation_experiment(16, 1.0, 0.25, 16, 500, 1, "zero");
    EXPECT_EQ(r.mean, 0.0);
}

TEST(Correlation, MajorityUnderCeiling) {
    const auto r = correlation_experiment(16, 1.0, 0.25, 16, 2000, 2);
    EXPECT_NEAR(r.ceiling, 0.25 * std::sqrt(2.0), 1e-12);
    EXPECT_TRUE(r.within_ceiling);
}

TEST(Correlation, MajorityIsConsistent) {
    const auto r = correlation_experiment(16, 1.0, 0.25, 16000, 200, 3);
    EXPECT_GT(r.mean, 0.99);
}

TEST(Necessity, TwoSampleExample) {
    const auto r = adversarial_necessity_demo([](const std::vector<double>&) { return 0.0; }, 1.0, 0.25, 0.2, 2, 10000, 5);
    EXPECT_NEAR(r.p, (std::sqrt(0.2) + 1.0) / 2.0, 1e-15);
    EXPECT_NEAR(r.p * r.p, 0.5236, 1e-4);
    EXPECT_DOUBLE_EQ(r.excess_at_a0, 0.5);
    EXPECT_TRUE(r.exceeds_delta);
    EXPECT_NEAR(r.frequency, r.p * r.p, 4.0 * std::sqrt(0.25 / 10000));
}

TEST(Necessity, MeanRuleAlsoFails) {
    const auto mean_rule = [](const std::vector<double>& z) {
        double s = 0.0;
        for (double v : z) s += v;
        return s / static_cast<double>(z.size());
    };
    for (long long m : {1, 4}) {
        const auto r = adversarial_necessity_demo(mean_rule, 2.0, 0.1, 0.3, m, 5000, 6);
        EXPECT_TRUE(r.exceeds_delta) << m;
    }
}

TEST(Necessity, RejectsDeltaOne) {
    EXPECT_THROW(adversarial_necessity_demo([](const std::vector<double>&) { return 0.0; }, 1, 0.25, 1.0, 2, 10, 1),
                 InvalidArgument);
}
