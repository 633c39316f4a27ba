/// @file benchmarks.hpp
/// @brief Named problem classes: synthetic benchmarks, counts classes, analytic 2-SAT and
///        the four counter-example fixtures

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nsf/model.hpp>
#include <nsf/numeric.hpp>

namespace nsf {

// ---------------------------------------------------------------------------
// Synthetic benchmark distributions over costs 0..200
// ---------------------------------------------------------------------------

/// Index convention for the linear benchmarks
enum class LinearMode {
    table,           ///< p(i) ∝ 100 − |100 − i|, so p(0) = 0
    positive_optimum ///< p(i) ∝ 101 − |100 − i|, so the optimum has positive mass
};

/// Index convention for the exponential benchmark
enum class ExponentialMode {
    table, ///< p(i) ∝ C(200, i+1), so p(0) = 200·2^−200 before renormalizing
    index0 ///< p(i) = C(200, i)/2^200, so blind search needs 2^200 samples
};

/// The four synthetic benchmark classes
enum class BenchmarkClass { uniform, linear, steep_linear, exponential };

inline std::string to_string(BenchmarkClass c) {
    switch (c) {
    case BenchmarkClass::uniform:
        return "uniform";
    case BenchmarkClass::linear:
        return "linear";
    case BenchmarkClass::steep_linear:
        return "steep-linear";
    case BenchmarkClass::exponential:
        return "exponential";
    }
    return "unknown";
}

/// @throws ConfigError on an unknown name
inline BenchmarkClass benchmark_from_string(const std::string& name) {
    if (name == "uniform") {
        return BenchmarkClass::uniform;
    }
    if (name == "linear") {
        return BenchmarkClass::linear;
    }
    if (name == "steep-linear" || name == "steep_linear") {
        return BenchmarkClass::steep_linear;
    }
    if (name == "exponential") {
        return BenchmarkClass::exponential;
    }
    throw ConfigError("unknown benchmark class '" + name + "'");
}

/// Uniform cost probability 1/levels on 0..levels−1
///
/// The default of 200 levels gives p(k) = 1/200 and blind = 200.
inline FitnessDistribution build_uniform(int levels = 200) {
    if (levels < 1) {
        throw ConfigError("uniform benchmark needs at least one level");
    }
    return FitnessDistribution::from_weights(std::vector<double>(static_cast<std::size_t>(levels), 1.0));
}

/// Tent-shaped distribution slope·(100 − |100 − i|) + offset on 0..200, peaking at 100
inline FitnessDistribution build_tent(double slope, double offset) {
    std::vector<double> w(201);
    for (int i = 0; i <= 200; ++i) {
        w[static_cast<std::size_t>(i)] = slope * (100 - std::abs(100 - i)) + offset;
    }
    return FitnessDistribution::from_weights(w);
}

/// Linear fall toward the optimum with unit slope
inline FitnessDistribution build_linear(LinearMode mode = LinearMode::positive_optimum) {
    return build_tent(1.0, mode == LinearMode::table ? 0.0 : 1.0);
}

/// Linear fall five times steeper relative to the optimum's mass: p(i) ∝ 5·(100−|100−i|) + 1
inline FitnessDistribution build_steep_linear() { return build_tent(5.0, 1.0); }

/// Binomial-shaped fall toward the optimum, peaking at 100
inline FitnessDistribution build_exponential(ExponentialMode mode = ExponentialMode::index0) {
    const int shift = mode == ExponentialMode::table ? 1 : 0;
    std::vector<double> w(201);
    for (int i = 0; i <= 200; ++i) {
        const int j = i + shift;
        // log of C(200, j) / 2^200; C(200, 201) is zero
        w[static_cast<std::size_t>(i)] =
            j > 200 ? 0.0
                    : std::exp(std::lgamma(201.0) - std::lgamma(j + 1.0) - std::lgamma(201.0 - j) -
                               200.0 * std::log(2.0));
    }
    return FitnessDistribution::from_weights(w);
}

/// Dispatch by class with the default modes
inline FitnessDistribution build_benchmark(BenchmarkClass c,
                                           LinearMode linear_mode = LinearMode::positive_optimum,
                                           ExponentialMode exp_mode = ExponentialMode::index0) {
    switch (c) {
    case BenchmarkClass::uniform:
        return build_uniform();
    case BenchmarkClass::linear:
        return build_linear(linear_mode);
    case BenchmarkClass::steep_linear:
        return build_steep_linear();
    case BenchmarkClass::exponential:
        return build_exponential(exp_mode);
    }
    throw ConfigError("unknown benchmark class");
}

// ---------------------------------------------------------------------------
// Counts classes
// ---------------------------------------------------------------------------

/// A class given by point counts per cost level and a δ-only weight profile
struct CountsClassSpec {
    int size = 0;                ///< number of listed cost levels (odd)
    std::vector<double> counts;  ///< points at each listed level, optimum first
    double total = 0.0;          ///< points in the whole search space
    std::vector<double> weights; ///< r(_,δ) for δ = 1..size div 2
    bool require_nsf = false;    ///< reject weight vectors that increase with δ

    /// @throws ConfigError if the fields are inconsistent
    void validate() const {
        if (size < 1 || size % 2 == 0) {
            throw ConfigError("counts class size must be a positive odd number");
        }
        if (counts.size() != static_cast<std::size_t>(size)) {
            throw ConfigError("counts class needs exactly size counts");
        }
        if (weights.size() != static_cast<std::size_t>(size / 2)) {
            throw ConfigError("counts class needs size div 2 weights");
        }
        for (double c : counts) {
            if (!(c >= 1.0)) {
                throw ConfigError("every listed level needs at least one point");
            }
        }
        if (compensated_sum(counts) > total) {
            throw ConfigError("counts exceed the total number of points");
        }
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
                throw ConfigError("counts class weights must be finite and non-negative");
            }
            if (require_nsf && i > 0 && weights[i] > weights[i - 1]) {
                throw ConfigError("counts class weights must be non-increasing");
            }
        }
    }
};

/// A built counts class and the level its expected steps are evaluated at
struct CountsClass {
    ClassModel model;
    Cost eval_level = 0;           ///< size div 2
    double far_weight = 0.0;       ///< weight implied beyond distance size div 2 at eval_level
    std::vector<double> leftovers; ///< unassigned neighbour mass per row 0..eval_level
};

/// Build a counts class and check that its weights leave a feasible kernel
///
/// Levels 0..size−1 carry counts[i]/total and the unlisted points sit on one extra level
/// at index size. Rows 0..size div 2 get pn(k,k) = p(k) and pn(k,k±δ) = r(δ)·p(k±δ) for
/// δ <= size div 2; the leftover is spread over farther levels in proportion to p. Rows
/// above size div 2 are never read by the steps recursion and use blind sampling.
///
/// @throws InfeasibleWeights with reason "total_too_low" if a row's listed mass exceeds 1,
///         or "last_NSFWeight_too_low" if the evaluation row would need a far weight above
///         the last listed weight
inline CountsClass build_counts_class(const CountsClassSpec& spec) {
    spec.validate();
    const int size = spec.size;
    const int half = size / 2;
    std::vector<double> probs(static_cast<std::size_t>(size) + 1);
    for (int i = 0; i < size; ++i) {
        probs[static_cast<std::size_t>(i)] = spec.counts[static_cast<std::size_t>(i)] / spec.total;
    }
    probs[static_cast<std::size_t>(size)] = (spec.total - compensated_sum(spec.counts)) / spec.total;
    const FitnessDistribution dist(probs);

    const auto width = static_cast<std::size_t>(size) + 1;
    std::vector<std::vector<double>> rows(width, std::vector<double>(width, 0.0));
    double eval_far_weight = 0.0;
    std::vector<double> leftovers;
    for (Cost k = 0; k <= half; ++k) {
        auto& row = rows[static_cast<std::size_t>(k)];
        CompensatedSum near;
        row[static_cast<std::size_t>(k)] = dist(k);
        near += dist(k);
        for (int d = 1; d <= half; ++d) {
            const double r = spec.weights[static_cast<std::size_t>(d - 1)];
            for (const long other : {static_cast<long>(k) - d, static_cast<long>(k) + d}) {
                if (other >= 0 && other <= size) {
                    row[static_cast<std::size_t>(other)] = r * dist(other);
                    near += r * dist(other);
                }
            }
        }
        double leftover = 1.0 - near.value();
        if (leftover < -kNormTolerance) {
            throw InfeasibleWeights("total_too_low",
                                    "neighbours within distance " + std::to_string(half) +
                                        " of cost " + std::to_string(k) + " need mass " +
                                        std::to_string(near.value()));
        }
        leftover = std::max(leftover, 0.0);
        leftovers.push_back(leftover);

        CompensatedSum far_mass;
        for (Cost j = 0; j <= size; ++j) {
            if (std::abs(j - k) > half) {
                far_mass += dist(j);
            }
        }
        const double far = far_mass.value();
        const double far_weight = far > 0.0 ? leftover / far : 0.0;
        if (k == half) {
            eval_far_weight = far_weight;
            const double last = spec.weights.empty() ? 1.0 : spec.weights.back();
            if (!approx_leq(far_weight, last, 1e-12)) {
                throw InfeasibleWeights("last_NSFWeight_too_low",
                                        "far weight " + std::to_string(far_weight) +
                                            " exceeds the last weight " + std::to_string(last));
            }
        }
        if (far > 0.0) {
            for (Cost j = 0; j <= size; ++j) {
                if (std::abs(j - k) > half) {
                    row[static_cast<std::size_t>(j)] = far_weight * dist(j);
                }
            }
        } else {
            row[static_cast<std::size_t>(size)] += leftover;
        }
    }
    for (Cost k = half + 1; k <= size; ++k) {
        rows[static_cast<std::size_t>(k)] = probs;
    }
    return {ClassModel(dist, NeighborKernel(rows)), half, eval_far_weight, std::move(leftovers)};
}

// ---------------------------------------------------------------------------
// Analytic 2-SAT class
// ---------------------------------------------------------------------------

/// Degree-regular random k-SAT configuration
struct Sat2Spec {
    int n_vars = 50;
    int n_clauses = 100;
    int clause_len = 2;
    int occurrences_per_var = 4;

    /// @throws ConfigError unless clause slots match variable occurrences
    void validate() const {
        if (n_vars < 1 || n_clauses < 1 || clause_len < 1 || occurrences_per_var < 1) {
            throw ConfigError("SAT configuration fields must be positive");
        }
        if (n_clauses * clause_len != n_vars * occurrences_per_var) {
            throw ConfigError("n_clauses * clause_len must equal n_vars * occurrences_per_var");
        }
        if (clause_len > n_vars) {
            throw ConfigError("a clause cannot hold more distinct variables than exist");
        }
    }
};

/// Modelling choices of the analytic flip kernel
struct Sat2Conventions {
    /// Divisor turning cost k into the chance that a clause of the flipped variable is false;
    /// zero means n_clauses
    double unsat_denominator = 0.0;
    /// Chance that flipping a variable falsifies one of its satisfied clauses; zero means
    /// 1/(2^clause_len − 1), the share of satisfying assignments with a single true literal
    double falsify_prob = 0.0;
};

/// Binomial coefficient as a double
inline double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

/// Analytic flip-neighbourhood model of degree-regular random SAT
///
/// p(C) = C(m,C)·q^C·(1−q)^(m−C) with q = 2^−clause_len. Flipping a variable at cost k
/// repairs each of its false clauses and may break each satisfied one, treated as
/// independent events; every outcome of the d occurrences is enumerated. Moves that would
/// leave the cost range are folded onto its boundary.
inline ClassModel build_sat2_analytic(const Sat2Spec& spec = {}, const Sat2Conventions& conv = {}) {
    spec.validate();
    const int m = spec.n_clauses;
    const int d = spec.occurrences_per_var;
    const double q = std::ldexp(1.0, -spec.clause_len);
    std::vector<double> w(static_cast<std::size_t>(m) + 1);
    for (int c = 0; c <= m; ++c) {
        w[static_cast<std::size_t>(c)] =
            std::exp(std::lgamma(m + 1.0) - std::lgamma(c + 1.0) - std::lgamma(m - c + 1.0) +
                     c * std::log(q) + (m - c) * std::log1p(-q));
    }
    const FitnessDistribution dist = FitnessDistribution::from_weights(w);

    const double denom = conv.unsat_denominator > 0.0 ? conv.unsat_denominator : m;
    const double f = conv.falsify_prob > 0.0
                         ? conv.falsify_prob
                         : 1.0 / (std::ldexp(1.0, spec.clause_len) - 1.0);
    if (f > 1.0) {
        throw ConfigError("falsify probability must be at most 1");
    }
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m) + 1,
                                          std::vector<double>(static_cast<std::size_t>(m) + 1));
    for (int k = 0; k <= m; ++k) {
        const double pk = std::min(1.0, k / denom);
        const double npf = (1.0 - pk) * f;
        const double npt = (1.0 - pk) * (1.0 - f);
        auto& row = rows[static_cast<std::size_t>(k)];
        for (int repaired = 0; repaired <= d; ++repaired) {
            for (int broken = 0; broken <= d - repaired; ++broken) {
                const double prob = binomial(d, repaired) * std::pow(pk, repaired) *
                                    binomial(d - repaired, broken) * std::pow(npf, broken) *
                                    std::pow(npt, d - repaired - broken);
                const int target = std::clamp(k + broken - repaired, 0, m);
                row[static_cast<std::size_t>(target)] += prob;
            }
        }
    }
    return ClassModel(dist, NeighborKernel(rows));
}

// ---------------------------------------------------------------------------
// Counter-example fixtures
// ---------------------------------------------------------------------------

/// The hypothesis a counter-example breaks
enum class Hypothesis { monotone_p, nsf, normal, same_cost_bound };

inline std::string to_string(Hypothesis h) {
    switch (h) {
    case Hypothesis::monotone_p:
        return "monotone-p";
    case Hypothesis::nsf:
        return "nsf";
    case Hypothesis::normal:
        return "normal";
    case Hypothesis::same_cost_bound:
        return "same-cost-bound";
    }
    return "unknown";
}

/// The four counter-example classes
enum class CounterexampleId { non_monotone_p, non_nsf_weights, non_normal, same_cost_only };

inline std::string to_string(CounterexampleId id) {
    switch (id) {
    case CounterexampleId::non_monotone_p:
        return "non-monotone-p";
    case CounterexampleId::non_nsf_weights:
        return "non-nsf-weights";
    case CounterexampleId::non_normal:
        return "non-normal";
    case CounterexampleId::same_cost_only:
        return "same-cost-only";
    }
    return "unknown";
}

inline const std::vector<CounterexampleId>& all_counterexamples() {
    static const std::vector<CounterexampleId> ids{
        CounterexampleId::non_monotone_p, CounterexampleId::non_nsf_weights,
        CounterexampleId::non_normal, CounterexampleId::same_cost_only};
    return ids;
}

/// A fixture, the level it is examined at, the hypothesis it breaks and expected values
struct Counterexample {
    CounterexampleId id;
    ClassModel model;
    Cost level = 25;
    Hypothesis violated;
    double expected_blind_improve = 0.0;
    double expected_nbr_improve = 0.0;
};

/// Which of the four hypotheses hold for a model at level k
struct HypothesisVerdicts {
    bool monotone_p = false;
    bool nsf = false;
    bool normal = false;
    bool same_cost_bound = false;

    bool holds(Hypothesis h) const {
        switch (h) {
        case Hypothesis::monotone_p:
            return monotone_p;
        case Hypothesis::nsf:
            return nsf;
        case Hypothesis::normal:
            return normal;
        case Hypothesis::same_cost_bound:
            return same_cost_bound;
        }
        return false;
    }
};

inline HypothesisVerdicts evaluate_hypotheses(const ClassModel& model, Cost k) {
    return {check_monotone_p(model.dist(), k), check_nsf(model.weights(), k).holds(),
            check_normal(model, k).holds(), check_same_cost_bound(model, k)};
}

/// Build a fixture where exactly one hypothesis fails and blind search wins at cost 25
inline Counterexample build_counterexample(CounterexampleId id) {
    auto zero_rows = [](int levels) {
        return std::vector<std::vector<double>>(static_cast<std::size_t>(levels),
                                                std::vector<double>(static_cast<std::size_t>(levels)));
    };
    switch (id) {
    case CounterexampleId::non_monotone_p: {
        // Half the mass on the optimum, the rest spread over 1..100; neighbours differ by one
        std::vector<double> probs(101, 1.0 / 200.0);
        probs[0] = 0.5;
        auto rows = zero_rows(101);
        for (int k = 0; k <= 100; ++k) {
            auto& row = rows[static_cast<std::size_t>(k)];
            if (k == 0) {
                row[1] = 1.0;
            } else if (k == 100) {
                row[99] = 1.0;
            } else {
                row[static_cast<std::size_t>(k - 1)] = 0.5;
                row[static_cast<std::size_t>(k + 1)] = 0.5;
            }
        }
        return {id, ClassModel(FitnessDistribution(probs), NeighborKernel(rows)), 25,
                Hypothesis::monotone_p, 0.62, 0.5};
    }
    case CounterexampleId::non_nsf_weights: {
        // Uniform costs; every neighbour is exactly 26 levels away
        auto rows = zero_rows(101);
        for (int k = 0; k <= 100; ++k) {
            auto& row = rows[static_cast<std::size_t>(k)];
            const bool down = k - 26 >= 0;
            const bool up = k + 26 <= 100;
            const double share = (down && up) ? 0.5 : 1.0;
            if (down) {
                row[static_cast<std::size_t>(k - 26)] = share;
            }
            if (up) {
                row[static_cast<std::size_t>(k + 26)] = share;
            }
        }
        return {id, ClassModel(FitnessDistribution::from_weights(std::vector<double>(101, 1.0)),
                               NeighborKernel(rows)),
                25, Hypothesis::nsf, 25.0 / 101.0, 0.0};
    }
    case CounterexampleId::non_normal: {
        // Uniform costs; every neighbour is one level worse, the worst level loops on itself
        auto rows = zero_rows(101);
        for (int k = 0; k <= 100; ++k) {
            rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(std::min(k + 1, 100))] = 1.0;
        }
        return {id, ClassModel(FitnessDistribution::from_weights(std::vector<double>(101, 1.0)),
                               NeighborKernel(rows)),
                25, Hypothesis::normal, 25.0 / 101.0, 0.0};
    }
    case CounterexampleId::same_cost_only: {
        // Uniform costs; every neighbour has the same cost
        auto rows = zero_rows(101);
        for (int k = 0; k <= 100; ++k) {
            rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1.0;
        }
        return {id, ClassModel(FitnessDistribution::from_weights(std::vector<double>(101, 1.0)),
                               NeighborKernel(rows)),
                25, Hypothesis::same_cost_bound, 25.0 / 101.0, 0.0};
    }
    }
    throw ConfigError("unknown counter-example");
}

} // namespace nsf
