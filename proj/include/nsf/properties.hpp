/// @file properties.hpp
/// @brief Randomized property suites for the improvement inequalities and the descent bounds
///
/// Each suite draws random models that satisfy a result's hypotheses, confirms the
/// hypotheses with the library's own predicates, and counts models where the conclusion
/// fails at a relative tolerance of 1e-9.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nsf/analysis.hpp>
#include <nsf/benchmarks.hpp>
#include <nsf/model.hpp>
#include <nsf/rng.hpp>

namespace nsf {

/// Relative tolerance for property conclusions
inline constexpr double kPropertyTolerance = 1e-9;

/// Outcome of one property suite
struct PropertyReport {
    std::string name;
    std::size_t models = 0;      ///< models drawn
    std::size_t checked = 0;     ///< models whose hypotheses held and were checked
    std::size_t violations = 0;
    std::string first_violation; ///< description of the first failing model

    bool passed() const { return violations == 0 && checked > 0; }

    void fail(const std::string& what) {
        if (violations == 0) {
            first_violation = what;
        }
        ++violations;
    }
};

/// A model whose row at level k is the interesting one
struct LevelModel {
    ClassModel model;
    Cost k;
};

namespace detail {

/// Non-increasing random sequence, sometimes with flat runs
inline std::vector<double> decreasing_profile(Rng& rng, int n) {
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) {
        x = ex(rng);
    }
    if (uniform01(rng) < 0.3) {
        for (auto& x : v) {
            x = std::round(x * 2.0) / 2.0;
        }
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

/// Rows that sample blindly from p, used where a level's row does not matter
inline std::vector<std::vector<double>> blind_rows(const FitnessDistribution& dist) {
    return std::vector<std::vector<double>>(static_cast<std::size_t>(dist.k_max()) + 1, dist.probs());
}

/// Fill row k so that pn(k,k±δ) = r(δ)·p(k±δ) on the combined sides, then shift a random
/// share of each worsening neighbour's mass to the improving side
inline void fill_row(Rng& rng, const FitnessDistribution& dist, Cost k, const std::vector<double>& r,
                     double same, bool boost, std::vector<double>& row) {
    std::fill(row.begin(), row.end(), 0.0);
    const Cost k_max = dist.k_max();
    row[static_cast<std::size_t>(k)] = same;
    for (int d = 1; d <= k_max; ++d) {
        const double w = r[static_cast<std::size_t>(d - 1)];
        const long lo = static_cast<long>(k) - d;
        const long hi = static_cast<long>(k) + d;
        double down = lo >= 0 ? w * dist(lo) : 0.0;
        double up = hi <= k_max ? w * dist(hi) : 0.0;
        if (boost && lo >= 0 && hi <= k_max) {
            const double t = uniform01(rng) * up;
            down += t;
            up -= t;
        }
        if (lo >= 0) {
            row[static_cast<std::size_t>(lo)] = down;
        }
        if (hi <= k_max) {
            row[static_cast<std::size_t>(hi)] = up;
        }
    }
}

inline std::string describe(const char* what, Cost k, double lhs, double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at k=" << k << ": " << lhs << " vs " << rhs;
    return os.str();
}

} // namespace detail

/// Random model with p non-decreasing up to its mode, k in 1..k_ge and NSF weights at k
///
/// The row at k is normal (and boosting when a transfer is drawn); its same-cost mass is
/// drawn either below p(k) or freely, so both branches of the improvement argument get exercised.
inline LevelModel random_level_model(Rng& rng) {
    std::uniform_int_distribution<int> kmax_pick(4, 60);
    const Cost k_max = kmax_pick(rng);
    const Cost mode = std::uniform_int_distribution<int>(2, k_max)(rng);
    std::vector<double> w(static_cast<std::size_t>(k_max) + 1);
    for (Cost i = 0; i <= mode; ++i) {
        w[static_cast<std::size_t>(i)] = 0.01 + uniform01(rng);
    }
    if (uniform01(rng) < 0.2) {
        std::fill(w.begin(), w.begin() + mode + 1, 1.0);
    }
    std::sort(w.begin(), w.begin() + mode + 1);
    for (Cost i = mode + 1; i <= k_max; ++i) {
        w[static_cast<std::size_t>(i)] = uniform01(rng) * w[static_cast<std::size_t>(mode)];
    }
    const FitnessDistribution dist = FitnessDistribution::from_weights(w);
    const Cost k_ge = std::max<Cost>(1, good_enough_cost(dist));
    const Cost k = std::uniform_int_distribution<int>(1, k_ge)(rng);

    std::vector<double> r = detail::decreasing_profile(rng, k_max);
    CompensatedSum spread;
    for (int d = 1; d <= k_max; ++d) {
        spread += r[static_cast<std::size_t>(d - 1)] * dist.pm(k, d);
    }
    const double same = uniform01(rng) < 0.5 ? uniform01(rng) * dist(k) : 0.5 * uniform01(rng);
    const double scale = (1.0 - same) / spread.value();
    for (auto& x : r) {
        x *= scale;
    }
    auto rows = detail::blind_rows(dist);
    detail::fill_row(rng, dist, k, r, same, uniform01(rng) < 0.5, rows[static_cast<std::size_t>(k)]);
    return {ClassModel(dist, NeighborKernel(rows)), k};
}

/// Random full-NSF weight rows r(k,δ) for k = 1..k0 and δ = 1..k_max
///
/// Built from k0 downward so that each row is non-increasing in δ and each weight is at
/// least the weight at the same δ one level worse.
inline std::vector<std::vector<double>> random_full_nsf_rows(Rng& rng, Cost k0, Cost k_max) {
    std::vector<std::vector<double>> W(static_cast<std::size_t>(k0) + 1,
                                       std::vector<double>(static_cast<std::size_t>(k_max) + 2, 0.0));
    std::exponential_distribution<double> ex(1.0);
    const double decay = 0.2 + 2.0 * uniform01(rng);
    for (int d = k_max; d >= 1; --d) {
        W[static_cast<std::size_t>(k0)][static_cast<std::size_t>(d)] =
            W[static_cast<std::size_t>(k0)][static_cast<std::size_t>(d + 1)] +
            (uniform01(rng) < 0.7 ? ex(rng) * std::exp(-decay * d) : 0.0);
    }
    if (W[static_cast<std::size_t>(k0)][1] <= 0.0) {
        W[static_cast<std::size_t>(k0)][1] = 1.0;
    }
    for (Cost k = k0 - 1; k >= 1; --k) {
        for (int d = k_max; d >= 1; --d) {
            const double floor = std::max(W[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(d)],
                                          W[static_cast<std::size_t>(k)][static_cast<std::size_t>(d + 1)]);
            W[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] =
                floor + (uniform01(rng) < 0.5 ? 0.3 * ex(rng) * std::exp(-decay * d) : 0.0);
        }
    }
    return W;
}

/// Weight table holding rows 1..k0 of W and undefined weights elsewhere
inline NsfWeightTable table_from_rows(const std::vector<std::vector<double>>& W, Cost k0, Cost k_max,
                                      double scale) {
    std::vector<std::vector<std::optional<double>>> rows(static_cast<std::size_t>(k0) + 1);
    for (Cost k = 1; k <= k0; ++k) {
        rows[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(k_max) + 1, std::nullopt);
        for (int d = 1; d <= k_max; ++d) {
            rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] =
                scale * W[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
        }
    }
    return NsfWeightTable(k_max, rows);
}

/// Random model meeting the descent hypotheses at k0, or nullopt on rejection
///
/// Rows 1..k0 are normal with full NSF weights scaled by one global factor so every row
/// stays stochastic; p(i) >= p(0) for i <= k0. The draw is rejected if r̄(k0) < 1.
inline std::optional<LevelModel> random_descent_model(Rng& rng, bool uniform_p = false) {
    const Cost k0 = std::uniform_int_distribution<int>(1, 12)(rng);
    const Cost k_max = k0 + std::uniform_int_distribution<int>(1, 30)(rng);
    std::vector<double> w(static_cast<std::size_t>(k_max) + 1, 1.0);
    if (!uniform_p) {
        for (auto& x : w) {
            x = 0.05 + uniform01(rng);
        }
        const double floor = *std::min_element(w.begin() + 1, w.begin() + k0 + 1);
        w[0] = floor * (0.02 + 0.98 * uniform01(rng));
    }
    const FitnessDistribution dist = FitnessDistribution::from_weights(w);
    const auto W = random_full_nsf_rows(rng, k0, k_max);

    double max_spread = 0.0;
    for (Cost k = 1; k <= k0; ++k) {
        CompensatedSum spread;
        for (int d = 1; d <= k_max; ++d) {
            spread += W[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] * dist.pm(k, d);
        }
        max_spread = std::max(max_spread, spread.value());
    }
    const double scale = (0.5 + 0.5 * uniform01(rng)) / max_spread;
    CompensatedSum avg;
    for (int d = 1; d <= k0; ++d) {
        avg += scale * W[static_cast<std::size_t>(k0)][static_cast<std::size_t>(d)];
    }
    if (avg.value() / k0 < 1.0) {
        return std::nullopt;
    }
    auto rows = detail::blind_rows(dist);
    const bool boost = uniform01(rng) < 0.5;
    for (Cost k = 1; k <= k0; ++k) {
        std::vector<double> r(static_cast<std::size_t>(k_max));
        CompensatedSum spread;
        for (int d = 1; d <= k_max; ++d) {
            r[static_cast<std::size_t>(d - 1)] = scale * W[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
            spread += r[static_cast<std::size_t>(d - 1)] * dist.pm(k, d);
        }
        detail::fill_row(rng, dist, k, r, std::max(0.0, 1.0 - spread.value()), boost,
                         rows[static_cast<std::size_t>(k)]);
    }
    return LevelModel{ClassModel(dist, NeighborKernel(rows)), k0};
}

/// Draw until a descent model is accepted
inline LevelModel draw_descent_model(Rng& rng, bool uniform_p = false) {
    for (;;) {
        if (auto m = random_descent_model(rng, uniform_p)) {
            return *m;
        }
    }
}

// ---------------------------------------------------------------------------
// Improvement-probability suites
// ---------------------------------------------------------------------------

/// Improvement quantities at one level
struct ImprovementQuantities {
    double p_less, p_more, pbr_less, pbr_more, pn_less, rbar;
};

inline ImprovementQuantities improvement_quantities(const ClassModel& m, Cost k) {
    return {blind_improve_prob(m.dist(), k), blind_worsen_prob(m.dist(), k),
            weighted_improve_prob(m, k, Direction::improving),
            weighted_improve_prob(m, k, Direction::worsening), nbr_improve_prob(m.kernel(), k),
            avg_nsf_weight(m.weights(), k)};
}

/// Monotone p up to 2k and NSF(k), the hypotheses of the weighted-sum bound
inline bool weighted_sum_hypotheses(const ClassModel& m, Cost k) {
    return k <= std::max<Cost>(1, good_enough_cost(m.dist())) && check_monotone_p(m.dist(), k) &&
           check_nsf(m.weights(), k).holds();
}

/// Run the five improvement-probability properties on n random models
inline std::vector<PropertyReport> run_improvement_suites(std::size_t n, std::uint64_t seed) {
    PropertyReport weighted{"weighted-sums-bracket-blind", 0, 0, 0, {}};
    PropertyReport ratio{"improvement-odds-ratio", 0, 0, 0, {}};
    PropertyReport same{"same-cost-bound-improves", 0, 0, 0, {}};
    PropertyReport avg{"average-weight-improves", 0, 0, 0, {}};
    PropertyReport beat{"neighbourhood-beats-blind", 0, 0, 0, {}};
    const double tol = kPropertyTolerance;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = derive_stream(seed, {1, i});
        const LevelModel lm = random_level_model(rng);
        const ClassModel& m = lm.model;
        const Cost k = lm.k;
        const auto q = improvement_quantities(m, k);
        for (auto* r : {&weighted, &ratio, &same, &avg, &beat}) {
            ++r->models;
        }
        if (!weighted_sum_hypotheses(m, k)) {
            continue;
        }
        ++weighted.checked;
        const bool lower = q.pbr_less >= q.rbar * q.p_less * (1 - tol);
        const bool upper = q.pbr_more <= q.rbar * q.p_more * (1 + tol);
        if (!lower) {
            weighted.fail(detail::describe("pbr< >= rbar*p<", k, q.pbr_less, q.rbar * q.p_less));
        }
        if (!upper) {
            weighted.fail(detail::describe("pbr> <= rbar*p>", k, q.pbr_more, q.rbar * q.p_more));
        }
        if (!(lower && upper)) {
            continue;
        }
        if (q.pbr_more > 0.0 && q.p_more > 0.0) {
            ++ratio.checked;
            if (q.pbr_less / q.pbr_more < (q.p_less / q.p_more) * (1 - tol)) {
                ratio.fail(detail::describe("odds ratio", k, q.pbr_less / q.pbr_more, q.p_less / q.p_more));
            }
        }
        const bool same_bound = check_same_cost_bound(m, k);
        if (same_bound) {
            ++same.checked;
            if (q.pbr_less < q.p_less * (1 - tol)) {
                same.fail(detail::describe("pbr< >= p<", k, q.pbr_less, q.p_less));
            }
        }
        if (q.rbar >= 1.0) {
            ++avg.checked;
            if (q.pbr_less < q.p_less * (1 - tol)) {
                avg.fail(detail::describe("pbr< >= p<", k, q.pbr_less, q.p_less));
            }
        }
        if (check_normal(m, k).holds() && (same_bound || q.rbar >= 1.0)) {
            ++beat.checked;
            if (q.pn_less < q.p_less * (1 - tol)) {
                beat.fail(detail::describe("pn< >= p<", k, q.pn_less, q.p_less));
            }
            const auto r1 = m.r(k, 1);
            if (r1 && *r1 > 1.0 + tol && m.k_max() > modal_cost(m.dist()) &&
                !(q.pn_less > q.p_less)) {
                beat.fail(detail::describe("pn< > p< (strict)", k, q.pn_less, q.p_less));
            }
        }
    }
    return {weighted, ratio, same, avg, beat};
}

// ---------------------------------------------------------------------------
// Descent suites
// ---------------------------------------------------------------------------

/// Hypotheses for descent at k0, checked with the library predicates
inline bool descent_hypotheses(const ClassModel& m, Cost k0) {
    if (avg_nsf_weight(m.weights(), k0) < 1.0 || !check_full_nsf(m.weights(), k0)) {
        return false;
    }
    for (Cost i = 0; i <= k0; ++i) {
        if (m.p(i) < m.p(0)) {
            return false;
        }
    }
    for (Cost k = 1; k <= k0; ++k) {
        if (!check_normal(m, k).holds()) {
            return false;
        }
    }
    return true;
}

/// Run the descent properties on n random models and n uniform weight tables
inline std::vector<PropertyReport> run_descent_suites(std::size_t n, std::uint64_t seed) {
    PropertyReport descent{"descent-beats-blind", 0, 0, 0, {}};
    PropertyReport seeded{"seeded-descent-beats-blind", 0, 0, 0, {}};
    PropertyReport uniform_descent{"uniform-descent-beats-blind", 0, 0, 0, {}};
    PropertyReport upper{"steps-upper-bound", 0, 0, 0, {}};
    PropertyReport fixed{"fixed-count-steps", 0, 0, 0, {}};
    PropertyReport mono{"steps-monotone", 0, 0, 0, {}};
    const double tol = kPropertyTolerance;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = derive_stream(seed, {2, i});
        const LevelModel lm = draw_descent_model(rng);
        ++descent.models;
        ++seeded.models;
        if (descent_hypotheses(lm.model, lm.k)) {
            ++descent.checked;
            ++seeded.checked;
            const StepsProfile prof = steps(lm.model, lm.k);
            if (prof.at(lm.k) > prof.blind * (1 + tol)) {
                descent.fail(detail::describe("steps <= blind", lm.k, prof.at(lm.k), prof.blind));
            }
            const double bl = blind_seeded_steps(lm.model, prof, lm.k);
            if (bl > prof.blind * (1 + tol)) {
                seeded.fail(detail::describe("blsteps <= blind", lm.k, bl, prof.blind));
            }
        }

        Rng urng = derive_stream(seed, {3, i});
        const Cost k0 = std::uniform_int_distribution<int>(1, 15)(urng);
        const Cost k_max = k0 + std::uniform_int_distribution<int>(0, 20)(urng);
        const auto W = random_full_nsf_rows(urng, k0, k_max);
        const double scale = 0.1 + 3.0 * uniform01(urng);
        const NsfWeightTable table = table_from_rows(W, k0, k_max, scale);
        const double p = 1e-4 + 0.05 * uniform01(urng);
        for (auto* r : {&uniform_descent, &upper, &fixed, &mono}) {
            ++r->models;
        }
        if (!check_full_nsf(table, k0)) {
            continue;
        }
        const auto s = steps_uniform_profile(table, p, k0);
        ++fixed.checked;
        ++mono.checked;
        for (Cost k = 1; k <= k0; ++k) {
            CompensatedSum rs;
            for (int d = 1; d <= k; ++d) {
                rs += *table.at(k, d);
            }
            const double bound = k / (p * rs.value());
            if (s[static_cast<std::size_t>(k)] > bound * (1 + tol)) {
                fixed.fail(detail::describe("steps_u <= k/pbr<", k, s[static_cast<std::size_t>(k)], bound));
            }
            if (s[static_cast<std::size_t>(k)] < s[static_cast<std::size_t>(k - 1)] * (1 - tol)) {
                mono.fail(detail::describe("steps_u non-decreasing", k, s[static_cast<std::size_t>(k)],
                                           s[static_cast<std::size_t>(k - 1)]));
            }
            if (rs.value() / k >= 1.0) {
                ++upper.checked;
                if (bound > (1.0 / p) * (1 + tol)) {
                    upper.fail(detail::describe("k/pbr< <= 1/p", k, bound, 1.0 / p));
                }
            }
        }
        // Rescale the same rows so that r̄(k0) >= 1, the hypothesis of the uniform bound
        const double unit_avg = avg_nsf_weight(table_from_rows(W, k0, k_max, 1.0), k0);
        const double lifted = (1.0 + 2.0 * uniform01(urng)) / unit_avg;
        const NsfWeightTable strong = table_from_rows(W, k0, k_max, lifted);
        if (avg_nsf_weight(strong, k0) >= 1.0) {
            ++uniform_descent.checked;
            const double su = steps_uniform(strong, p, k0);
            if (su > (1.0 / p) * (1 + tol)) {
                uniform_descent.fail(detail::describe("steps_u <= 1/p", k0, su, 1.0 / p));
            }
        }
    }
    return {descent, seeded, uniform_descent, upper, fixed, mono};
}

/// Each counter-example must break its own hypothesis only, and blind search must win
inline PropertyReport run_counterexample_suite() {
    PropertyReport rep{"counterexamples-break-one-hypothesis", 0, 0, 0, {}};
    for (const auto id : all_counterexamples()) {
        const Counterexample cx = build_counterexample(id);
        ++rep.models;
        ++rep.checked;
        const auto v = evaluate_hypotheses(cx.model, cx.level);
        for (const auto h : {Hypothesis::monotone_p, Hypothesis::nsf, Hypothesis::normal,
                             Hypothesis::same_cost_bound}) {
            const bool should_hold = h != cx.violated;
            if (v.holds(h) != should_hold) {
                rep.fail(to_string(id) + ": hypothesis " + to_string(h) +
                         (should_hold ? " unexpectedly fails" : " unexpectedly holds"));
            }
        }
        const double pl = blind_improve_prob(cx.model.dist(), cx.level);
        const double nl = nbr_improve_prob(cx.model.kernel(), cx.level);
        if (!(nl < pl)) {
            rep.fail(to_string(id) + ": neighbourhood search does not lose to blind search");
        }
    }
    return rep;
}

} // namespace nsf
