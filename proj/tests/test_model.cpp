/// @file test_model.cpp
/// @brief Fitness distributions, kernels, derived weights and the hypothesis predicates

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <nsf/benchmarks.hpp>
#include <nsf/model.hpp>

using namespace nsf;

namespace {

/// Three-level class with hand-written kernel rows
ClassModel tiny_model() {
    FitnessDistribution dist({0.2, 0.3, 0.5});
    NeighborKernel kernel({{0.2, 0.4, 0.4}, {0.4, 0.2, 0.4}, {0.1, 0.3, 0.6}});
    return ClassModel(dist, kernel);
}

} // namespace

TEST(FitnessDistribution, RejectsEmptyNegativeAndUnnormalised) {
    EXPECT_THROW(FitnessDistribution(std::vector<double>{}), ConfigError);
    EXPECT_THROW(FitnessDistribution({0.5, -0.1, 0.6}), ConfigError);
    EXPECT_THROW(FitnessDistribution({0.5, 0.6}), ConfigError);
    EXPECT_THROW(FitnessDistribution({0.5, NAN, 0.5}), ConfigError);
}

TEST(FitnessDistribution, OutOfRangeLevelsHaveZeroProbability) {
    FitnessDistribution d({0.25, 0.75});
    EXPECT_EQ(d(-1), 0.0);
    EXPECT_EQ(d(2), 0.0);
    EXPECT_DOUBLE_EQ(d(1), 0.75);
    EXPECT_DOUBLE_EQ(d.pm(1, 1), 0.25);
}

TEST(FitnessDistribution, FromWeightsNormalises) {
    const auto d = FitnessDistribution::from_weights({1, 1, 2});
    EXPECT_DOUBLE_EQ(d(2), 0.5);
    EXPECT_THROW(FitnessDistribution::from_weights({0, 0}), ConfigError);
}

TEST(NeighborKernel, RowsMustBeSquareAndStochastic) {
    EXPECT_THROW(NeighborKernel({{0.5, 0.5}, {1.0}}), ConfigError);
    EXPECT_THROW(NeighborKernel({{0.5, 0.4}, {0.5, 0.5}}), ConfigError);
    EXPECT_NO_THROW(NeighborKernel({{0.5, 0.5}, {0.0, 1.0}}));
}

TEST(DerivedWeights, CombinedSidesOverCombinedProbabilities) {
    const auto m = tiny_model();
    // r(1,1) = (pn(1,2)+pn(1,0)) / (p(2)+p(0)) = 0.8 / 0.7
    ASSERT_TRUE(m.r(1, 1).has_value());
    EXPECT_NEAR(*m.r(1, 1), 0.8 / 0.7, 1e-12);
    EXPECT_NEAR(*m.r(0, 2), 0.4 / 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(*m.r(2, 0), 1.0);
    // no level two steps above or below level 1
    EXPECT_FALSE(m.r(1, 2).has_value());
}

TEST(DerivedWeights, ConsistencyIsCheckedWhenWeightsAreSupplied) {
    const auto m = tiny_model();
    EXPECT_NO_THROW(ClassModel(m.dist(), m.kernel(), m.weights()));
    EXPECT_THROW(ClassModel(m.dist(), m.kernel(), NsfWeightTable::constant(2, 1.0)), ConfigError);
}

TEST(ScalarQuantities, ModalAndGoodEnoughCost) {
    const auto uniform = build_uniform();
    EXPECT_EQ(modal_cost(uniform), 199);
    EXPECT_EQ(good_enough_cost(uniform), 99);
    FitnessDistribution peaked({0.1, 0.2, 0.4, 0.2, 0.1});
    EXPECT_EQ(modal_cost(peaked), 2);
    EXPECT_EQ(good_enough_cost(peaked), 1);
    EXPECT_EQ(good_enough_midpoint(60, 90), 75);
}

TEST(ScalarQuantities, BlindAndNeighbourImprovement) {
    const auto m = tiny_model();
    EXPECT_NEAR(blind_improve_prob(m.dist(), 2), 0.5, 1e-15);
    EXPECT_NEAR(blind_worsen_prob(m.dist(), 0), 0.8, 1e-15);
    EXPECT_NEAR(nbr_improve_prob(m.kernel(), 2), 0.4, 1e-15);
    EXPECT_NEAR(nbr_improve_prob(m.kernel(), 0), 0.0, 1e-15);
}

TEST(ScalarQuantities, AverageWeightNeedsALevelAboveTheOptimum) {
    const auto w = NsfWeightTable::constant(10, 2.0);
    EXPECT_DOUBLE_EQ(avg_nsf_weight(w, 5), 2.0);
    EXPECT_THROW(avg_nsf_weight(w, 0), ConfigError);
}

TEST(SameCostRule, NamesRoundTrip) {
    for (auto r : {SameCostRule::match_p, SameCostRule::zero, SameCostRule::proportional}) {
        EXPECT_EQ(same_cost_rule_from_string(to_string(r)), r);
    }
    EXPECT_THROW(same_cost_rule_from_string("other"), ConfigError);
}

TEST(KernelFromWeights, UnitWeightsGiveBlindRowsUnderMatchP) {
    const auto d = build_uniform(20);
    const auto m = kernel_from_weights(d, 19, SameCostRule::match_p);
    for (Cost k = 0; k <= 19; ++k) {
        for (Cost j = 0; j <= 19; ++j) {
            EXPECT_NEAR(m.pn(k, j), d(j), 1e-12);
        }
    }
}

TEST(KernelFromWeights, ZeroRuleLeavesNoSameCostMass) {
    const auto d = build_uniform(20);
    const auto m = kernel_from_weights(d, 5, SameCostRule::zero);
    EXPECT_EQ(m.pn(10, 10), 0.0);
    double total = 0.0;
    for (Cost j = 0; j <= 19; ++j) {
        total += m.pn(10, j);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Predicates, NormalHoldsForBlindRowsAndFailsWhenImprovingMassIsRemoved) {
    const auto d = build_uniform(20);
    const auto blind = kernel_from_weights(d, 19, SameCostRule::match_p);
    EXPECT_TRUE(check_normal(blind, 10).holds());
    EXPECT_FALSE(check_boosting(blind, 10));
    const auto cx = build_counterexample(CounterexampleId::non_normal);
    EXPECT_FALSE(check_normal(cx.model, cx.level).holds());
}

TEST(Predicates, NsfRejectsIncreasingWeights) {
    const auto good = NsfWeightTable::from_profile(10, {3, 2, 2, 1});
    EXPECT_TRUE(check_nsf(good, 5).holds());
    const auto bad = NsfWeightTable::from_profile(10, {1, 2});
    const auto v = check_nsf(bad, 5);
    EXPECT_FALSE(v.holds());
    EXPECT_LT(v.satisfied(), v.checks.size());
}

TEST(Predicates, FullNsfNeedsWeightsToShrinkAsLevelsWorsen) {
    // rows k with r(k,δ) = k − δ + 1 grow with k, so full NSF fails
    std::vector<std::vector<std::optional<double>>> rows(7);
    for (Cost k = 1; k <= 6; ++k) {
        rows[static_cast<std::size_t>(k)].push_back(1.0);
        for (int d = 1; d <= k; ++d) {
            rows[static_cast<std::size_t>(k)].push_back(static_cast<double>(k - d + 1));
        }
    }
    EXPECT_FALSE(check_full_nsf(NsfWeightTable(6, rows), 6));
    EXPECT_TRUE(check_full_nsf(NsfWeightTable::constant(6, 1.5), 6));
}

TEST(Predicates, MonotoneProbabilityAndSameCostBound) {
    EXPECT_TRUE(check_monotone_p(build_uniform(), 50));
    const auto cx = build_counterexample(CounterexampleId::non_monotone_p);
    EXPECT_FALSE(check_monotone_p(cx.model.dist(), cx.level));
    const auto sc = build_counterexample(CounterexampleId::same_cost_only);
    EXPECT_FALSE(check_same_cost_bound(sc.model, sc.level));
}
