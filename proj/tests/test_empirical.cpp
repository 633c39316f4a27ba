/// @file test_empirical.cpp
/// @brief TSP and SAT instances, their neighbourhoods, exhaustive and sampled censuses, NSF reports

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <nsf/benchmarks.hpp>
#include <nsf/census.hpp>

using namespace nsf;

TEST(TspInstance, GenerationIsDeterministicSymmetricAndInRange) {
    const auto a = gen_tsp(10, 20, 5);
    const auto b = gen_tsp(10, 20, 5);
    EXPECT_EQ(a.dist, b.dist);
    EXPECT_NE(a.dist, gen_tsp(10, 20, 6).dist);
    EXPECT_NO_THROW(a.validate());
    EXPECT_THROW(gen_tsp(3, 20, 1), ConfigError);
    EXPECT_THROW(gen_tsp(10, 0, 1), ConfigError);
}

TEST(TspInstance, PlainTextRoundTrip) {
    const auto a = gen_tsp(9, 50, 77);
    std::stringstream ss;
    write_tsp(ss, a);
    const auto b = read_tsp(ss);
    EXPECT_EQ(a.dist, b.dist);
    EXPECT_EQ(b.seed, 77u);
    std::stringstream truncated("5 10 1\n3\n4 5\n");
    EXPECT_THROW(read_tsp(truncated), ConfigError);
}

TEST(TwoOpt, NeighbourCountsMatchNTimesNMinusThreeOverTwo) {
    EXPECT_EQ(two_opt_moves(10).size(), 35u);
    EXPECT_EQ(two_opt_moves(100).size(), 4850u);
    const auto inst = gen_tsp(10, 20, 1);
    std::vector<int> tour(10);
    std::iota(tour.begin(), tour.end(), 0);
    const auto nbrs = two_opt_neighbors(inst, tour);
    std::set<std::vector<int>> distinct(nbrs.begin(), nbrs.end());
    EXPECT_EQ(distinct.size(), 35u);
}

TEST(TwoOpt, IncrementalDeltaEqualsFullReevaluation) {
    const auto inst = gen_tsp(12, 30, 3);
    const TspLandscape land(inst);
    Rng rng = derive_stream(9, {});
    for (int trial = 0; trial < 50; ++trial) {
        auto t = land.random_point(rng);
        for (std::size_t m = 0; m < land.neighbor_count(); ++m) {
            auto u = t;
            land.apply(u, m);
            ASSERT_EQ(land.cost(t) + land.move_delta(t, m), land.cost(u));
        }
    }
}

TEST(TspCensus, TenCitiesEnumerateEveryCanonicalTourOnce) {
    const auto rep = census_exhaustive(std::vector<TspInstance>{gen_tsp(10, 20, 8)}, 1);
    EXPECT_EQ(rep.points, 181440u);
    EXPECT_EQ(TspLandscape::enumerable_points(10), 181440u);
    EXPECT_EQ(TspLandscape::enumerable_points(11), 0u);
}

TEST(TspCensus, EqualEdgesGiveOneCostLevel) {
    const auto rep = census_exhaustive(std::vector<TspInstance>{gen_tsp(5, 1, 4)}, 1);
    EXPECT_EQ(rep.points, 12u);
    EXPECT_EQ(rep.optimum(), 5);
    EXPECT_EQ(rep.worst(), 5);
    EXPECT_DOUBLE_EQ(rep.p_hat(5), 1.0);
}

TEST(TspCensus, CountsAndNeighbourRowsAreNormalised) {
    const auto rep = census_exhaustive(std::vector<TspInstance>{gen_tsp(8, 20, 2), gen_tsp(8, 20, 3)}, 1);
    double total = 0.0;
    for (long c = 0; c <= rep.max_cost(); ++c) {
        total += rep.p_hat(c);
        if (rep.surveyed(c)) {
            double row = 0.0;
            for (long j = 0; j <= rep.max_cost(); ++j) {
                row += rep.pn_hat(c, j);
            }
            EXPECT_NEAR(row, 1.0, 1e-12) << c;
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(rep.points, 2u * 2520u);
}

TEST(TspCensus, TooLargeForEnumerationIsAResourceError) {
    EXPECT_THROW(census_exhaustive(std::vector<TspInstance>{gen_tsp(11, 20, 1)}), ResourceLimit);
}

TEST(TspCensus, GoodEnoughLevelIsTheMidpointOfOptimumAndModal) {
    const auto rep = census_exhaustive(std::vector<TspInstance>{gen_tsp(9, 20, 12)}, 1);
    EXPECT_EQ(rep.ge_level(), (rep.optimum() + rep.modal()) / 2);
    EXPECT_GE(rep.counts[static_cast<std::size_t>(rep.modal())], rep.counts[static_cast<std::size_t>(rep.optimum())]);
}

TEST(SampledCensus, AgreesWithEnumerationWithinSamplingError) {
    const std::vector<TspInstance> insts{gen_tsp(8, 20, 21)};
    const auto exact = census_exhaustive(insts, 1);
    const auto sampled = census_sampled<TspLandscape>(insts, 200000, std::nullopt, 5, 1);
    for (long c = 0; c <= exact.max_cost(); ++c) {
        const double p = exact.p_hat(c);
        const double se = std::sqrt(p * (1 - p) / static_cast<double>(sampled.points));
        EXPECT_NEAR(sampled.p_hat(c), p, 5 * se + 1e-12) << c;
    }
    const long k = *sampled.target;
    for (long j = 0; j <= exact.max_cost(); ++j) {
        EXPECT_NEAR(sampled.pn_hat(k, j), exact.pn_hat(k, j), 0.02) << j;
    }
}

TEST(SampledCensus, ResultDoesNotDependOnTheWorkerCount) {
    const std::vector<TspInstance> insts{gen_tsp(9, 20, 1), gen_tsp(9, 20, 2)};
    const auto one = census_sampled<TspLandscape>(insts, 150000, std::nullopt, 17, 1);
    const auto three = census_sampled<TspLandscape>(insts, 150000, std::nullopt, 17, 3);
    EXPECT_EQ(one.counts, three.counts);
    EXPECT_EQ(one.nbr_counts, three.nbr_counts);
    EXPECT_EQ(one.target, three.target);
}

TEST(SampledCensus, DoublingSamplesShrinksTheSpread) {
    // spread of p̂ at the modal level across independent seeds, at n and 4n samples
    const std::vector<TspInstance> insts{gen_tsp(8, 20, 30)};
    const auto exact = census_exhaustive(insts, 1);
    const long c = exact.modal();
    auto spread = [&](std::uint64_t n) {
        double ss = 0.0;
        for (std::uint64_t s = 0; s < 40; ++s) {
            const auto r = census_sampled<TspLandscape>(insts, n, c, 100 + s, 1);
            ss += std::pow(r.p_hat(c) - exact.p_hat(c), 2);
        }
        return std::sqrt(ss / 40);
    };
    const double small = spread(2000);
    const double large = spread(8000);
    EXPECT_NEAR(large / small, 0.5, 0.2);
}

TEST(SampledCensus, NoPointAtTheTargetIsReported) {
    const std::vector<TspInstance> insts{gen_tsp(9, 20, 1)};
    EXPECT_THROW(census_sampled<TspLandscape>(insts, 10, 1L, 1, 1), NoPointsAtTarget);
    EXPECT_THROW(census_sampled<TspLandscape>(insts, 0, std::nullopt, 1, 1), ConfigError);
}

TEST(SatInstance, EveryVariableOccursFourTimesInDistinctClauses) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = gen_sat2(seed);
        EXPECT_EQ(inst.clauses.size(), 100u);
        EXPECT_NO_THROW(inst.validate(4));
    }
    EXPECT_EQ(gen_sat2(4).clauses, gen_sat2(4).clauses);
}

TEST(SatInstance, DimacsRoundTrip) {
    const auto a = gen_sat2(12);
    std::stringstream ss;
    write_dimacs(ss, a);
    const auto b = read_dimacs(ss);
    EXPECT_EQ(a.clauses, b.clauses);
    EXPECT_EQ(b.n_vars, 50);
    EXPECT_EQ(b.seed, 12u);
    std::stringstream bad("p cnf 3 2\n1 2 0\n");
    EXPECT_THROW(read_dimacs(bad), ConfigError);
}

TEST(SatInstance, UnluckyPairingIsAResourceError) {
    // two variables, four clauses of two distinct variables: only one variable set exists
    EXPECT_THROW(gen_sat2(1, {2, 4, 2, 4}, 50), ResourceLimit);
}

TEST(FlipNeighbourhood, CostChangesByAtMostFourAndMatchesReevaluation) {
    const auto inst = gen_sat2(3);
    const SatLandscape land(inst);
    Rng rng = derive_stream(1, {});
    for (int trial = 0; trial < 50; ++trial) {
        auto x = land.random_point(rng);
        for (std::size_t v = 0; v < land.neighbor_count(); ++v) {
            const long d = land.move_delta(x, v);
            ASSERT_LE(std::abs(d), 4);
            auto y = x;
            land.apply(y, v);
            ASSERT_EQ(land.cost(x) + d, land.cost(y));
        }
    }
}

TEST(SatCensus, SmallInstancesEnumerateEveryAssignment) {
    const Sat2Spec small{12, 24, 2, 4};
    const auto rep = census_exhaustive(std::vector<Sat2Instance>{gen_sat2(2, small)}, 1);
    EXPECT_EQ(rep.points, 4096u);
    // expected unsatisfied clauses under a uniform assignment is a quarter of them
    double mean = 0.0;
    for (long c = 0; c <= rep.max_cost(); ++c) {
        mean += c * rep.p_hat(c);
    }
    EXPECT_NEAR(mean, 6.0, 1e-9);
}

TEST(SatCensus, SampledCostProbabilityNearTheAnalyticPeak) {
    std::vector<Sat2Instance> insts;
    for (std::uint64_t s = 0; s < 10; ++s) {
        insts.push_back(gen_sat2(500 + s));
    }
    const auto rep = census_sampled<SatLandscape>(insts, 100000, 20L, 42, 1);
    const double analytic = build_sat2_analytic().p(25);
    const double se = std::sqrt(analytic * (1 - analytic) / static_cast<double>(rep.points));
    EXPECT_NEAR(rep.p_hat(25), analytic, 4 * se);
}

TEST(NsfReport, BenchmarkKernelPassesEveryVerdict) {
    const auto m = kernel_from_weights(build_uniform(), 5, SameCostRule::proportional);
    const auto rep = nsf_report(m, 1, 40);
    EXPECT_EQ(rep.normal_fraction(), 1.0);
    EXPECT_EQ(rep.monotone_fraction(), 1.0);
    for (const auto& lvl : rep.levels) {
        EXPECT_TRUE(lvl.pbr_bound_holds) << lvl.k;
    }
}

TEST(NsfReport, CsvOutputsHaveHeaders) {
    const auto census = census_exhaustive(std::vector<TspInstance>{gen_tsp(7, 10, 2)}, 1);
    std::ostringstream a, b;
    write_census_csv(a, census);
    write_nsf_csv(b, nsf_report(census, census.optimum() + 1, census.ge_level()), &census);
    EXPECT_EQ(a.str().rfind("cost,count,p_hat,p_less,pn_less\n", 0), 0u);
    EXPECT_EQ(b.str().rfind("k,delta,r,r_below,r_above,normal,monotone\n", 0), 0u);
}
