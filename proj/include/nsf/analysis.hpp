/// @file analysis.hpp
/// @brief Expected improvement per step, expected steps of local descent and blind search,
///        blind-seeded descent, the switch-point study and a grid falsifier for weights

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nsf/benchmarks.hpp>
#include <nsf/model.hpp>
#include <nsf/numeric.hpp>

namespace nsf {

/// Which search the one-step improvement is measured for
enum class SearchMode { blind, neighbourhood };

/// Expected cost reduction of one step from cost k, counting only improving moves
///
/// Blind: Σ_{k'<k} p(k')·(k−k'). Neighbourhood: Σ_{k'<k} pn(k,k')·(k−k').
inline double expected_one_step_improvement(const ClassModel& model, Cost k, SearchMode mode) {
    CompensatedSum acc;
    for (Cost i = 0; i < k && i <= model.k_max(); ++i) {
        const double prob = mode == SearchMode::blind ? model.p(i) : model.pn(k, i);
        acc += prob * (k - i);
    }
    return acc.value();
}

/// Expected samples for blind search to hit the optimum, 1/p(0)
/// @throws UnreachableOptimum if p(0) = 0
inline double blind_steps(const FitnessDistribution& dist) {
    if (!(dist(0) > 0.0)) {
        throw UnreachableOptimum(0, "blind search never finds an optimum with p(0) = 0");
    }
    return 1.0 / dist(0);
}

/// Expected local-descent steps from every cost 0..k0
struct StepsProfile {
    std::vector<double> values; ///< values[k] = expected trials from cost k to the optimum
    double blind = 0.0;         ///< 1/p(0), or +inf when p(0) = 0
    Cost k0 = 0;

    double at(Cost k) const { return values.at(static_cast<std::size_t>(k)); }
};

/// Expected trials for first-improvement descent from each cost up to k
///
/// steps(0) = 0 and steps(j) = (1 + Σ_{i<j} pn(j,i)·steps(i)) / pn^<(j): every trial costs
/// one evaluation, and a trial that does not improve leaves the point unchanged.
/// @throws UnreachableOptimum if some level 1..k has pn^<(j) = 0
inline StepsProfile steps(const ClassModel& model, Cost k) {
    if (k < 0 || k > model.k_max()) {
        throw ConfigError("steps level outside the cost range");
    }
    StepsProfile out;
    out.k0 = k;
    out.blind = model.p(0) > 0.0 ? 1.0 / model.p(0) : std::numeric_limits<double>::infinity();
    out.values.assign(static_cast<std::size_t>(k) + 1, 0.0);
    for (Cost j = 1; j <= k; ++j) {
        CompensatedSum improve;
        CompensatedSum weighted;
        for (Cost i = 0; i < j; ++i) {
            const double pn = model.pn(j, i);
            improve += pn;
            weighted += pn * out.values[static_cast<std::size_t>(i)];
        }
        if (!(improve.value() > 0.0)) {
            throw UnreachableOptimum(j, "no improving neighbour at cost " + std::to_string(j));
        }
        out.values[static_cast<std::size_t>(j)] = (1.0 + weighted.value()) / improve.value();
    }
    return out;
}

/// Profile of the uniform-p recursion with pn(k1,k2) = r(k1,k1−k2)·p
///
/// Undefined weights count as zero.
/// @throws ConfigError if p <= 0; UnreachableOptimum if some level cannot improve
inline std::vector<double> steps_uniform_profile(const NsfWeightTable& weights, double p, Cost k) {
    if (!(p > 0.0)) {
        throw ConfigError("uniform probability must be positive");
    }
    if (k < 0 || k > weights.k_max()) {
        throw ConfigError("steps level outside the weight table");
    }
    std::vector<double> s(static_cast<std::size_t>(k) + 1, 0.0);
    for (Cost j = 1; j <= k; ++j) {
        CompensatedSum improve;
        CompensatedSum weighted;
        for (int d = 1; d <= j; ++d) {
            const double r = weights.at(j, d).value_or(0.0);
            improve += r * p;
            weighted += r * p * s[static_cast<std::size_t>(j - d)];
        }
        if (!(improve.value() > 0.0)) {
            throw UnreachableOptimum(j, "no improving neighbour at cost " + std::to_string(j));
        }
        s[static_cast<std::size_t>(j)] = (1.0 + weighted.value()) / improve.value();
    }
    return s;
}

/// steps_u(k) for the uniform-p recursion
inline double steps_uniform(const NsfWeightTable& weights, double p, Cost k) {
    return steps_uniform_profile(weights, p, k).back();
}

/// Expected trials of blind sampling until cost <= k, then local descent to the optimum
///
/// Solving the one-step equation gives (1 + Σ_{i=1..k} p(i)·steps(i)) / Σ_{i=0..k} p(i).
/// @throws ConfigError if no mass lies at or below k; UnreachableOptimum from steps
inline double blind_seeded_steps(const ClassModel& model, const StepsProfile& profile, Cost k) {
    if (k < 0 || k > profile.k0) {
        throw ConfigError("seeded level outside the computed steps profile");
    }
    CompensatedSum hit;
    CompensatedSum tail;
    for (Cost i = 0; i <= k; ++i) {
        hit += model.p(i);
        if (i > 0) {
            tail += model.p(i) * profile.at(i);
        }
    }
    if (!(hit.value() > 0.0)) {
        throw ConfigError("no probability mass at or below cost " + std::to_string(k));
    }
    return (1.0 + tail.value()) / hit.value();
}

inline double blind_seeded_steps(const ClassModel& model, Cost k) {
    return blind_seeded_steps(model, steps(model, k), k);
}

/// Result of scanning switch levels for blind-seeded descent
struct SwitchPoint {
    Cost best_level = 0;     ///< argmin of seeded steps over "blind until cost <= k"
    Cost best_threshold = 1; ///< the same switch written as "blind until cost < k"
    double best_steps = 0.0;
    /// Smallest k at which one blind step improves more, in expectation, than one
    /// neighbourhood step; nullopt if there is none up to k_hi
    std::optional<Cost> improvement_crossover;
    std::vector<double> seeded; ///< seeded steps for every k in 0..k_hi
};

/// Scan k = 0..k_hi for the cheapest switch from blind sampling to local descent
///
/// Ties go to the larger k, so a model where blind search is as good as descent everywhere
/// reports k_hi.
inline SwitchPoint switch_point(const ClassModel& model, Cost k_hi) {
    const StepsProfile profile = steps(model, k_hi);
    SwitchPoint out;
    out.seeded.resize(static_cast<std::size_t>(k_hi) + 1);
    out.best_steps = std::numeric_limits<double>::infinity();
    for (Cost k = 0; k <= k_hi; ++k) {
        const double v = blind_seeded_steps(model, profile, k);
        out.seeded[static_cast<std::size_t>(k)] = v;
        if (approx_leq(v, out.best_steps, 1e-12)) {
            out.best_steps = std::min(v, out.best_steps);
            out.best_level = k;
        }
    }
    out.best_threshold = out.best_level + 1;
    for (Cost k = 1; k <= k_hi; ++k) {
        const double gap = expected_one_step_improvement(model, k, SearchMode::blind) -
                           expected_one_step_improvement(model, k, SearchMode::neighbourhood);
        if (gap > 0.0) {
            out.improvement_crossover = k;
            break;
        }
    }
    return out;
}

/// Write "k,steps,blind" rows
inline void write_steps_csv(std::ostream& os, const StepsProfile& profile) {
    os.precision(17);
    os << "k,steps,blind\n";
    for (Cost k = 0; k <= profile.k0; ++k) {
        os << k << ',' << profile.at(k) << ',' << profile.blind << '\n';
    }
}

/// Write two whitespace-separated columns, one point per line, no header
inline void write_dat(std::ostream& os, const std::vector<double>& xs, const std::vector<double>& ys) {
    os.precision(17);
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        os << xs[i] << ' ' << ys[i] << '\n';
    }
}

inline void write_steps_dat(std::ostream& os, const StepsProfile& profile) {
    std::vector<double> xs;
    for (Cost k = 0; k <= profile.k0; ++k) {
        xs.push_back(k);
    }
    write_dat(os, xs, profile.values);
}

// ---------------------------------------------------------------------------
// Grid falsifier
// ---------------------------------------------------------------------------

/// One weight vector that makes local descent no better than blind search
struct WeightViolation {
    std::vector<double> weights;
    double steps = 0.0;
    double blind = 0.0;
};

/// Summary of a grid search over non-increasing weight vectors
struct FalsifyResult {
    std::vector<WeightViolation> violations;
    std::size_t examined = 0;   ///< vectors that passed the r(_,1) filter
    std::size_t feasible = 0;   ///< of those, vectors that built a valid kernel
    std::size_t grid_points = 0;
};

/// Enumerate non-increasing weight vectors on the grid epsilon, epsilon+res, ... <= r_max
///
/// Each vector with r(_,1) > 1 + epsilon that builds a feasible counts class is evaluated;
/// those whose expected steps at size div 2 reach blind are returned. The counts, total
/// and size come from spec; its weights are ignored. Partial sums of the near-neighbour
/// mass at the evaluation level prune vectors that cannot be feasible.
inline FalsifyResult falsify_weights(const CountsClassSpec& spec, double grid_resolution,
                                     double epsilon, double r_max = 100.0) {
    if (!(grid_resolution > 0.0)) {
        throw ConfigError("grid resolution must be positive");
    }
    if (!(epsilon >= 0.0) || !(r_max >= epsilon)) {
        throw ConfigError("grid needs 0 <= epsilon <= r_max");
    }
    CountsClassSpec probe = spec;
    probe.weights.assign(static_cast<std::size_t>(spec.size / 2), 1.0);
    probe.validate();
    const int half = spec.size / 2;

    std::vector<double> grid;
    for (long i = 0;; ++i) {
        const double v = epsilon + static_cast<double>(i) * grid_resolution;
        if (v > r_max + 1e-12) {
            break;
        }
        grid.push_back(v);
    }
    FalsifyResult out;
    out.grid_points = grid.size();
    if (half == 0) {
        return out;
    }

    // Mass each weight multiplies in the evaluation row; the row must not exceed 1
    std::vector<double> lever(static_cast<std::size_t>(half) + 1, 0.0);
    const double p_eval = spec.counts[static_cast<std::size_t>(half)] / spec.total;
    for (int d = 1; d <= half; ++d) {
        const double below = spec.counts[static_cast<std::size_t>(half - d)];
        const double above = spec.counts[static_cast<std::size_t>(half + d)];
        lever[static_cast<std::size_t>(d)] = (below + above) / spec.total;
    }

    std::vector<std::size_t> idx(static_cast<std::size_t>(half) + 1, 0);
    std::vector<double> weights(static_cast<std::size_t>(half));
    // Depth-first over positions 1..half with idx non-increasing
    auto recurse = [&](auto&& self, int pos, double used) -> void {
        if (pos > half) {
            if (!(weights[0] > 1.0 + epsilon)) {
                return;
            }
            ++out.examined;
            probe.weights = weights;
            try {
                const CountsClass cls = build_counts_class(probe);
                ++out.feasible;
                const StepsProfile prof = steps(cls.model, cls.eval_level);
                const double s = prof.at(cls.eval_level);
                if (approx_geq(s, prof.blind, 1e-12)) {
                    out.violations.push_back({weights, s, prof.blind});
                }
            } catch (const InfeasibleWeights&) {
            } catch (const UnreachableOptimum&) {
            }
            return;
        }
        const std::size_t top = pos == 1 ? grid.size() - 1 : idx[static_cast<std::size_t>(pos - 1)];
        for (std::size_t i = 0; i <= top; ++i) {
            const double next = used + grid[i] * lever[static_cast<std::size_t>(pos)];
            if (next > 1.0 + kNormTolerance) {
                break;
            }
            idx[static_cast<std::size_t>(pos)] = i;
            weights[static_cast<std::size_t>(pos - 1)] = grid[i];
            self(self, pos + 1, next);
        }
    };
    recurse(recurse, 1, p_eval);
    return out;
}

} // namespace nsf
