/// @file model.hpp
/// @brief Fitness distributions, NSF weight tables, neighbourhood kernels and class models
///
/// A problem class is described by three mutually consistent objects:
/// - p(k), the probability that a random point has cost k
/// - pn(k1,k2), the probability that a random neighbour of a cost-k1 point has cost k2
/// - r(k,δ), the NSF weight relating pn(k,k±δ) to p(k±δ) on the combined sides
///
/// Out-of-range costs always carry probability zero. All types are immutable after
/// construction and every free function is pure.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nsf/numeric.hpp>

namespace nsf {

/// Probability p(k) of each cost level 0..k_max
class FitnessDistribution {
    std::vector<double> probs_;

  public:
    /// @throws ConfigError if empty, negative, non-finite or not summing to 1 within 1e-9
    explicit FitnessDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) {
            throw ConfigError("fitness distribution needs at least one level");
        }
        for (double v : probs_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ConfigError("fitness probabilities must be finite and non-negative");
            }
        }
        const double total = compensated_sum(probs_);
        if (std::abs(total - 1.0) > kNormTolerance) {
            throw ConfigError("fitness probabilities sum to " + std::to_string(total) +
                              ", expected 1");
        }
    }

    /// Normalize non-negative weights into a distribution
    /// @throws ConfigError if the weights are negative or all zero
    static FitnessDistribution from_weights(const std::vector<double>& weights) {
        for (double w : weights) {
            if (!std::isfinite(w) || w < 0.0) {
                throw ConfigError("distribution weights must be finite and non-negative");
            }
        }
        const double total = compensated_sum(weights);
        if (!(total > 0.0)) {
            throw ConfigError("distribution weights sum to zero");
        }
        std::vector<double> probs(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i) {
            probs[i] = weights[i] / total;
        }
        return FitnessDistribution(std::move(probs));
    }

    Cost k_max() const { return static_cast<Cost>(probs_.size()) - 1; }

    /// p(k), zero outside 0..k_max
    double operator()(long k) const {
        if (k < 0 || k > k_max()) {
            return 0.0;
        }
        return probs_[static_cast<std::size_t>(k)];
    }

    /// p(k+δ)+p(k−δ), the combined mass at distance δ from k
    double pm(Cost k, int delta) const {
        return (*this)(static_cast<long>(k) + delta) + (*this)(static_cast<long>(k) - delta);
    }

    const std::vector<double>& probs() const { return probs_; }
};

/// NSF weights r(k,δ) for k, δ in 0..k_max; entries may be undefined
///
/// A weight is undefined where its defining ratio has a zero denominator. Undefined
/// entries are skipped by averages and predicates. r(k,0) is fixed at 1 by convention.
class NsfWeightTable {
    Cost k_max_;
    std::vector<double> values_; ///< row-major (k, δ); NaN marks undefined

    std::size_t index(Cost k, int delta) const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(k_max_ + 1) +
               static_cast<std::size_t>(delta);
    }

  public:
    /// Build from rows[k][δ]; missing trailing entries and nullopt are undefined
    /// @throws ConfigError on negative or non-finite weights or too many rows
    NsfWeightTable(Cost k_max, const std::vector<std::vector<std::optional<double>>>& rows)
        : k_max_(k_max) {
        if (k_max < 0) {
            throw ConfigError("weight table needs k_max >= 0");
        }
        if (rows.size() > static_cast<std::size_t>(k_max) + 1) {
            throw ConfigError("weight table has more rows than cost levels");
        }
        const auto width = static_cast<std::size_t>(k_max) + 1;
        values_.assign(width * width, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k].size() > width) {
                throw ConfigError("weight row longer than the cost range");
            }
            for (std::size_t d = 1; d < rows[k].size(); ++d) {
                if (!rows[k][d]) {
                    continue;
                }
                const double v = *rows[k][d];
                if (!std::isfinite(v) || v < 0.0) {
                    throw ConfigError("NSF weights must be finite and non-negative");
                }
                values_[k * width + d] = v;
            }
        }
        for (std::size_t k = 0; k < width; ++k) {
            values_[k * width] = 1.0;
        }
    }

    /// Same weight c at every k and every δ >= 1
    static NsfWeightTable constant(Cost k_max, double c) {
        std::vector<std::vector<std::optional<double>>> rows(
            static_cast<std::size_t>(k_max) + 1,
            std::vector<std::optional<double>>(static_cast<std::size_t>(k_max) + 1, c));
        return NsfWeightTable(k_max, rows);
    }

    /// Weights that depend only on δ: r(k,δ) = profile[δ−1]; beyond the profile r is 0
    static NsfWeightTable from_profile(Cost k_max, const std::vector<double>& profile) {
        std::vector<std::vector<std::optional<double>>> rows(
            static_cast<std::size_t>(k_max) + 1,
            std::vector<std::optional<double>>(static_cast<std::size_t>(k_max) + 1, 0.0));
        for (auto& row : rows) {
            for (std::size_t d = 1; d < row.size() && d <= profile.size(); ++d) {
                row[d] = profile[d - 1];
            }
        }
        return NsfWeightTable(k_max, rows);
    }

    Cost k_max() const { return k_max_; }

    /// r(k,δ), or nullopt when undefined or out of range
    std::optional<double> at(Cost k, int delta) const {
        if (k < 0 || k > k_max_ || delta < 0 || delta > k_max_) {
            return std::nullopt;
        }
        const double v = values_[index(k, delta)];
        if (std::isnan(v)) {
            return std::nullopt;
        }
        return v;
    }
};

/// Neighbourhood probabilities pn(k1,k2): one probability row per cost level
class NeighborKernel {
    Cost k_max_;
    std::vector<double> values_;

  public:
    /// @throws ConfigError unless rows form a square stochastic matrix
    explicit NeighborKernel(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) {
            throw ConfigError("neighbour kernel needs at least one row");
        }
        k_max_ = static_cast<Cost>(rows.size()) - 1;
        values_.reserve(rows.size() * rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k].size() != rows.size()) {
                throw ConfigError("neighbour kernel must be square");
            }
            for (double v : rows[k]) {
                if (!std::isfinite(v) || v < 0.0) {
                    throw ConfigError("neighbour probabilities must be finite and non-negative");
                }
            }
            const double total = compensated_sum(rows[k]);
            if (std::abs(total - 1.0) > kNormTolerance) {
                throw ConfigError("neighbour row " + std::to_string(k) + " sums to " +
                                  std::to_string(total) + ", expected 1");
            }
            values_.insert(values_.end(), rows[k].begin(), rows[k].end());
        }
    }

    Cost k_max() const { return k_max_; }

    /// pn(k1,k2), zero outside the cost range
    double operator()(long k1, long k2) const {
        if (k1 < 0 || k2 < 0 || k1 > k_max_ || k2 > k_max_) {
            return 0.0;
        }
        return values_[static_cast<std::size_t>(k1) * static_cast<std::size_t>(k_max_ + 1) +
                       static_cast<std::size_t>(k2)];
    }

    /// Copy of row k
    std::vector<double> row(Cost k) const {
        const auto width = static_cast<std::size_t>(k_max_) + 1;
        const auto begin = values_.begin() + static_cast<std::ptrdiff_t>(k * width);
        return std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(width));
    }
};

/// Combined-sides weights implied by a kernel and a distribution
inline NsfWeightTable derive_weights(const FitnessDistribution& dist,
                                     const NeighborKernel& kernel) {
    const Cost k_max = dist.k_max();
    std::vector<std::vector<std::optional<double>>> rows(static_cast<std::size_t>(k_max) + 1);
    for (Cost k = 0; k <= k_max; ++k) {
        auto& row = rows[static_cast<std::size_t>(k)];
        row.assign(static_cast<std::size_t>(k_max) + 1, std::nullopt);
        for (int d = 1; d <= k_max; ++d) {
            const double den = dist.pm(k, d);
            if (den > 0.0) {
                row[static_cast<std::size_t>(d)] =
                    (kernel(k, static_cast<long>(k) + d) + kernel(k, static_cast<long>(k) - d)) /
                    den;
            }
        }
    }
    return NsfWeightTable(k_max, rows);
}

/// A fitness distribution, a kernel over the same cost range and their NSF weights
class ClassModel {
    FitnessDistribution dist_;
    NeighborKernel kernel_;
    NsfWeightTable weights_;

  public:
    /// Derive the weights from the kernel
    /// @throws ConfigError if the cost ranges differ
    ClassModel(FitnessDistribution dist, NeighborKernel kernel)
        : dist_(std::move(dist)), kernel_(std::move(kernel)),
          weights_(NsfWeightTable::constant(0, 1.0)) {
        if (dist_.k_max() != kernel_.k_max()) {
            throw ConfigError("distribution and kernel cover different cost ranges");
        }
        weights_ = derive_weights(dist_, kernel_);
    }

    /// Use supplied weights after checking them against the kernel
    /// @throws ConfigError if ranges differ or pn(k,k±δ) ≠ r(k,δ)·p(k±δ) beyond 1e-9
    ClassModel(FitnessDistribution dist, NeighborKernel kernel, NsfWeightTable weights)
        : dist_(std::move(dist)), kernel_(std::move(kernel)), weights_(std::move(weights)) {
        const Cost k_max = dist_.k_max();
        if (kernel_.k_max() != k_max || weights_.k_max() != k_max) {
            throw ConfigError("distribution, kernel and weights cover different cost ranges");
        }
        for (Cost k = 0; k <= k_max; ++k) {
            for (int d = 1; d <= k_max; ++d) {
                const double den = dist_.pm(k, d);
                if (den <= 0.0) {
                    continue;
                }
                const auto r = weights_.at(k, d);
                const double lhs = kernel_(k, static_cast<long>(k) + d) +
                                   kernel_(k, static_cast<long>(k) - d);
                if (!r || std::abs(lhs - *r * den) > kNormTolerance) {
                    throw ConfigError("weights inconsistent with kernel at k=" +
                                      std::to_string(k) + " delta=" + std::to_string(d));
                }
            }
        }
    }

    const FitnessDistribution& dist() const { return dist_; }
    const NeighborKernel& kernel() const { return kernel_; }
    const NsfWeightTable& weights() const { return weights_; }

    Cost k_max() const { return dist_.k_max(); }
    double p(long k) const { return dist_(k); }
    double pn(long k1, long k2) const { return kernel_(k1, k2); }
    std::optional<double> r(Cost k, int delta) const { return weights_.at(k, delta); }

    /// pn(k,k)/p(k), the implied weight on same-cost neighbours; nullopt if p(k)=0
    std::optional<double> same_cost_weight(Cost k) const {
        if (p(k) <= 0.0) {
            return std::nullopt;
        }
        return pn(k, k) / p(k);
    }
};

// ---------------------------------------------------------------------------
// Scalar quantities
// ---------------------------------------------------------------------------

/// Largest k with p non-decreasing on 0..k; ties go to the larger k
inline Cost modal_cost(const FitnessDistribution& dist) {
    Cost k = 0;
    while (k < dist.k_max() && dist(k + 1) >= dist(k)) {
        ++k;
    }
    return k;
}

/// floor(k_mod / 2), measured from an optimum at level 0
inline Cost good_enough_cost(const FitnessDistribution& dist) { return modal_cost(dist) / 2; }

/// Halfway between an observed optimum and modal cost, rounded down
inline Cost good_enough_midpoint(Cost optimum, Cost modal) {
    return optimum + (modal - optimum) / 2;
}

/// p^<(k): probability that a blind sample improves on cost k
inline double blind_improve_prob(const FitnessDistribution& dist, Cost k) {
    CompensatedSum acc;
    for (Cost i = 0; i < k && i <= dist.k_max(); ++i) {
        acc += dist(i);
    }
    return acc.value();
}

/// p^>(k): probability that a blind sample is worse than cost k
inline double blind_worsen_prob(const FitnessDistribution& dist, Cost k) {
    CompensatedSum acc;
    for (Cost i = std::max(k + 1, 0); i <= dist.k_max(); ++i) {
        acc += dist(i);
    }
    return acc.value();
}

/// pn^<(k): probability that a random neighbour of a cost-k point improves on it
inline double nbr_improve_prob(const NeighborKernel& kernel, Cost k) {
    CompensatedSum acc;
    for (Cost i = 0; i < k && i <= kernel.k_max(); ++i) {
        acc += kernel(k, i);
    }
    return acc.value();
}

/// Which side of k a weighted probability sums over
enum class Direction { improving, worsening };

/// pbr^<(k) = Σ_{δ=1..k} p(k−δ)·r(k,δ), or pbr^>(k) over δ = 1..k_max−k
///
/// Undefined weights only occur where the matching p is zero, so they contribute nothing.
inline double weighted_improve_prob(const ClassModel& model, Cost k,
                                    Direction direction = Direction::improving) {
    CompensatedSum acc;
    const int last = direction == Direction::improving ? k : model.k_max() - k;
    for (int d = 1; d <= last; ++d) {
        const long other = direction == Direction::improving ? k - d : k + d;
        const double p = model.p(other);
        const auto r = model.r(k, d);
        if (r && p > 0.0) {
            acc += p * *r;
        }
    }
    return acc.value();
}

/// r̄(k): mean of the defined weights r(k,1..k)
/// @throws ConfigError if k < 1 or no weight in range is defined
inline double avg_nsf_weight(const NsfWeightTable& weights, Cost k) {
    if (k < 1) {
        throw ConfigError("average NSF weight is undefined at k = 0");
    }
    CompensatedSum acc;
    int defined = 0;
    for (int d = 1; d <= k; ++d) {
        if (const auto r = weights.at(k, d)) {
            acc += *r;
            ++defined;
        }
    }
    if (defined == 0) {
        throw ConfigError("no defined NSF weight at k = " + std::to_string(k));
    }
    return acc.value() / defined;
}

// ---------------------------------------------------------------------------
// Benchmark kernels
// ---------------------------------------------------------------------------

/// How kernel_from_weights treats neighbours of equal cost
enum class SameCostRule {
    match_p,     ///< pn(k,k) = p(k); the other neighbours share 1 − p(k)
    zero,        ///< pn(k,k) = 0; all mass goes to other costs
    proportional ///< same-cost neighbours get the same weight c_k as the others
};

inline std::string to_string(SameCostRule rule) {
    switch (rule) {
    case SameCostRule::match_p:
        return "match-p";
    case SameCostRule::zero:
        return "zero";
    case SameCostRule::proportional:
        return "proportional";
    }
    return "unknown";
}

/// @throws ConfigError on an unknown name
inline SameCostRule same_cost_rule_from_string(const std::string& name) {
    if (name == "match-p") {
        return SameCostRule::match_p;
    }
    if (name == "zero") {
        return SameCostRule::zero;
    }
    if (name == "proportional") {
        return SameCostRule::proportional;
    }
    throw ConfigError("unknown same-cost rule '" + name + "'");
}

/// Benchmark kernel with constant weight c_k inside the bound and zero outside
///
/// pn(k,k±δ) = c_k·p(k±δ) for 1 <= δ <= bound, where c_k normalizes the row.
/// @throws ConfigError if bound < 1 or some row has no mass to normalize
inline ClassModel kernel_from_weights(const FitnessDistribution& dist, int bound,
                                      SameCostRule rule = SameCostRule::match_p) {
    if (bound < 1) {
        throw ConfigError("kernel bound must be at least 1");
    }
    const Cost k_max = dist.k_max();
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(k_max) + 1,
                                          std::vector<double>(static_cast<std::size_t>(k_max) + 1));
    for (Cost k = 0; k <= k_max; ++k) {
        CompensatedSum around;
        for (int d = 1; d <= bound; ++d) {
            around += dist.pm(k, d);
        }
        const double mass = around.value();
        double same = 0.0;
        double c = 0.0;
        switch (rule) {
        case SameCostRule::match_p:
            same = dist(k);
            c = mass > 0.0 ? (1.0 - same) / mass : 0.0;
            break;
        case SameCostRule::zero:
            c = mass > 0.0 ? 1.0 / mass : 0.0;
            break;
        case SameCostRule::proportional:
            c = (mass + dist(k)) > 0.0 ? 1.0 / (mass + dist(k)) : 0.0;
            same = c * dist(k);
            break;
        }
        const bool needs_mass = rule == SameCostRule::proportional ? (mass + dist(k)) <= 0.0
                                                                   : (mass <= 0.0 && same < 1.0);
        if (needs_mass) {
            throw ConfigError("no probability mass within bound " + std::to_string(bound) +
                              " of cost " + std::to_string(k));
        }
        auto& row = rows[static_cast<std::size_t>(k)];
        row[static_cast<std::size_t>(k)] = same;
        for (int d = 1; d <= bound; ++d) {
            for (const long other : {static_cast<long>(k) - d, static_cast<long>(k) + d}) {
                if (other >= 0 && other <= k_max) {
                    row[static_cast<std::size_t>(other)] = c * dist(other);
                }
            }
        }
    }
    return ClassModel(dist, NeighborKernel(rows));
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

/// One inequality lhs >= rhs evaluated at distance δ
struct DeltaCheck {
    int delta = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

/// Conjunction of per-δ checks at one level
struct LevelVerdict {
    Cost k = 0;
    std::vector<DeltaCheck> checks;

    bool holds() const {
        for (const auto& c : checks) {
            if (!c.holds) {
                return false;
            }
        }
        return true;
    }

    /// Number of checks that hold
    std::size_t satisfied() const {
        std::size_t n = 0;
        for (const auto& c : checks) {
            n += c.holds ? 1 : 0;
        }
        return n;
    }
};

/// Normal neighbourhood at k: pn(k,k−δ) >= r(k,δ)·p(k−δ) for δ in 1..k
inline LevelVerdict check_normal(const ClassModel& model, Cost k) {
    LevelVerdict v{k, {}};
    for (int d = 1; d <= k; ++d) {
        const auto r = model.r(k, d);
        if (!r) {
            continue;
        }
        const double lhs = model.pn(k, k - d);
        const double rhs = *r * model.p(k - d);
        v.checks.push_back({d, lhs, rhs, approx_geq(lhs, rhs)});
    }
    return v;
}

/// Boosting at k: the normal inequality is strict wherever p(k−δ) > 0
inline bool check_boosting(const ClassModel& model, Cost k) {
    for (int d = 1; d <= k; ++d) {
        const auto r = model.r(k, d);
        if (!r || model.p(k - d) <= 0.0) {
            continue;
        }
        const double lhs = model.pn(k, k - d);
        const double rhs = *r * model.p(k - d);
        if (approx_leq(lhs, rhs)) {
            return false;
        }
    }
    return true;
}

/// NSF(k): r(k,δ) >= r(k,δ+1) for δ in 1..max_delta−1
///
/// By default every distance in the table is checked, since a weight spike far from k
/// breaks NSF just as much as one close to it. Pairs with an undefined weight are skipped.
inline LevelVerdict check_nsf(const NsfWeightTable& weights, Cost k,
                              std::optional<int> max_delta = std::nullopt) {
    LevelVerdict v{k, {}};
    const int last = max_delta.value_or(weights.k_max());
    for (int d = 1; d < last; ++d) {
        const auto near = weights.at(k, d);
        const auto far = weights.at(k, d + 1);
        if (!near || !far) {
            continue;
        }
        v.checks.push_back({d, *near, *far, approx_geq(*near, *far)});
    }
    return v;
}

/// Full NSF from k0: NSF(k) for all k <= k0, and r(k1,δ) <= r(k2,δ) for δ <= k2 < k1 <= k0
inline bool check_full_nsf(const NsfWeightTable& weights, Cost k0,
                           std::optional<int> max_delta = std::nullopt) {
    if (k0 < 1) {
        throw ConfigError("full NSF needs a start level of at least 1");
    }
    for (Cost k = 1; k <= k0; ++k) {
        if (!check_nsf(weights, k, max_delta).holds()) {
            return false;
        }
    }
    for (Cost k1 = 2; k1 <= k0; ++k1) {
        for (Cost k2 = 1; k2 < k1; ++k2) {
            for (int d = 1; d <= k2; ++d) {
                const auto hi = weights.at(k1, d);
                const auto lo = weights.at(k2, d);
                if (hi && lo && !approx_leq(*hi, *lo)) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// p non-decreasing on 0..min(2k, k_max), the monotonicity the descent bounds assume below k
inline bool check_monotone_p(const FitnessDistribution& dist, Cost k) {
    const Cost last = std::min(2 * k, dist.k_max());
    for (Cost i = 0; i < last; ++i) {
        if (!approx_leq(dist(i), dist(i + 1))) {
            return false;
        }
    }
    return true;
}

/// pn(k,k) <= p(k): neighbours are no more likely than random points to share cost k
inline bool check_same_cost_bound(const ClassModel& model, Cost k) {
    return approx_leq(model.pn(k, k), model.p(k));
}

} // namespace nsf
