/// @file simulate.hpp
/// @brief Monte-Carlo blind search, first-improvement descent and blind-seeded descent on
///        abstract class models and on concrete instances, with trace aggregation
///
/// Every evaluated point counts as one trial, rejected neighbours included.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <nsf/model.hpp>
#include <nsf/numeric.hpp>
#include <nsf/parallel.hpp>
#include <nsf/rng.hpp>

namespace nsf {

/// When a neighbour replaces the current point
enum class AcceptRule {
    strict, ///< only strictly better neighbours
    plateau ///< equal or better neighbours
};

inline AcceptRule accept_rule_from_string(const std::string& s) {
    if (s == "strict") {
        return AcceptRule::strict;
    }
    if (s == "plateau") {
        return AcceptRule::plateau;
    }
    throw ConfigError("unknown acceptance rule '" + s + "'");
}

/// How much of each run to keep
enum class TraceDetail {
    summary,  ///< counts and terminal fitness only
    accepted, ///< plus every accepted fitness
    full      ///< plus every evaluated fitness
};

/// Search phase a trace point belongs to
enum class Phase { blind = 0, descent = 1 };

struct TracePoint {
    Phase phase;
    std::uint64_t trial; ///< 1-based trial index across both phases, 0 for the start point
    long fitness;
};

/// One search run
struct Trace {
    std::uint64_t seed = 0;
    std::uint64_t run_id = 0;
    std::uint64_t trials = 0;       ///< evaluations in all phases
    std::uint64_t blind_trials = 0; ///< evaluations spent in the blind phase
    long terminal = 0;              ///< fitness when the run stopped
    bool reached = false;           ///< target reached within the cap
    bool capped = false;            ///< stopped by the cap
    bool stuck = false;             ///< no acceptable neighbour exists
    std::vector<TracePoint> points;
};

/// Inverse-CDF sampler over one probability vector
class DiscreteSampler {
    std::vector<double> cdf_;

  public:
    explicit DiscreteSampler(const std::vector<double>& probs) {
        cdf_.resize(probs.size());
        CompensatedSum acc;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            cdf_[i] = acc.value();
        }
        if (cdf_.empty() || !(cdf_.back() > 0.0)) {
            throw ConfigError("cannot sample from an empty distribution");
        }
    }

    long draw(Rng& rng) const {
        const double u = uniform01(rng) * cdf_.back();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        // Skip zero-probability entries that share a cdf value with their predecessor
        return static_cast<long>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                          static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    }
};

/// Samplers for p and every kernel row of a class model
class ModelSampler {
    const ClassModel* model_;
    DiscreteSampler blind_;
    std::vector<DiscreteSampler> rows_;
    std::vector<double> improve_;

  public:
    explicit ModelSampler(const ClassModel& model) : model_(&model), blind_(model.dist().probs()) {
        rows_.reserve(static_cast<std::size_t>(model.k_max()) + 1);
        for (Cost k = 0; k <= model.k_max(); ++k) {
            rows_.emplace_back(model.kernel().row(k));
            improve_.push_back(nbr_improve_prob(model.kernel(), k));
        }
    }

    /// pn^<(k), cached
    double improve_prob(Cost k) const { return improve_[static_cast<std::size_t>(k)]; }

    const ClassModel& model() const { return *model_; }

    long blind(Rng& rng) const { return blind_.draw(rng); }

    long neighbour(Cost k, Rng& rng) const { return rows_[static_cast<std::size_t>(k)].draw(rng); }
};

/// Draw a next fitness from pn(k,·)
inline Cost sample_kernel(const ClassModel& model, Cost k, Rng& rng) {
    if (k < 0 || k > model.k_max()) {
        throw ConfigError("kernel row outside the cost range");
    }
    return static_cast<Cost>(DiscreteSampler(model.kernel().row(k)).draw(rng));
}

namespace detail {

inline void record(Trace& t, TraceDetail detail, Phase phase, long fitness, bool accepted) {
    if (detail == TraceDetail::full || (detail == TraceDetail::accepted && accepted)) {
        t.points.push_back({phase, t.trials, fitness});
    }
}

inline bool accepts(AcceptRule rule, long candidate, long current) {
    return rule == AcceptRule::strict ? candidate < current : candidate <= current;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Abstract runs on a class model
// ---------------------------------------------------------------------------

/// Sample p until a cost <= target appears or cap trials are spent
inline Trace run_blind(const ModelSampler& s, Cost target, Rng& rng, std::uint64_t cap,
                       TraceDetail detail = TraceDetail::summary) {
    if (cap < 1) {
        throw ConfigError("cap must be at least 1");
    }
    Trace t;
    while (t.trials < cap) {
        ++t.trials;
        const long c = s.blind(rng);
        t.terminal = c;
        detail::record(t, detail, Phase::blind, c, c <= target);
        if (c <= target) {
            t.reached = true;
            break;
        }
    }
    t.blind_trials = t.trials;
    t.capped = !t.reached;
    return t;
}

/// Continue a trace with descent from cost start until target, cap or a dead row
inline void continue_descent(const ModelSampler& s, Cost start, AcceptRule rule, Cost target, Rng& rng,
                             std::uint64_t cap, TraceDetail detail, Trace& t) {
    long k = start;
    t.terminal = k;
    const ClassModel& m = s.model();
    while (k > target) {
        const double improve = s.improve_prob(static_cast<Cost>(k));
        const double stay = rule == AcceptRule::plateau ? m.pn(k, k) : 0.0;
        if (!(improve + stay > 0.0)) {
            t.stuck = true;
            break;
        }
        if (t.trials >= cap) {
            t.capped = true;
            break;
        }
        ++t.trials;
        const long c = s.neighbour(static_cast<Cost>(k), rng);
        const bool accepted = detail::accepts(rule, c, k);
        detail::record(t, detail, Phase::descent, c, accepted);
        if (accepted) {
            k = c;
            t.terminal = k;
        }
    }
    t.reached = k <= target;
}

/// First-improvement descent from cost start to the optimum (or target)
inline Trace run_descent(const ModelSampler& s, Cost start, AcceptRule rule, Rng& rng, std::uint64_t cap,
                         Cost target = 0, TraceDetail detail = TraceDetail::summary) {
    if (start < 0 || start > s.model().k_max()) {
        throw ConfigError("start level outside the cost range");
    }
    Trace t;
    detail::record(t, detail, Phase::descent, start, true);
    continue_descent(s, start, rule, target, rng, cap, detail, t);
    return t;
}

/// Blind sampling until cost <= threshold, then descent to the optimum
///
/// A threshold of 0 is plain blind search for the optimum.
inline Trace run_seeded(const ModelSampler& s, Cost threshold, AcceptRule rule, Rng& rng, std::uint64_t cap,
                        TraceDetail detail = TraceDetail::summary) {
    if (threshold < 0) {
        throw ConfigError("threshold must be non-negative");
    }
    Trace t = run_blind(s, threshold, rng, cap, detail);
    if (!t.reached) {
        return t;
    }
    continue_descent(s, static_cast<Cost>(t.terminal), rule, 0, rng, cap, detail, t);
    return t;
}

// ---------------------------------------------------------------------------
// Concrete runs on a landscape (TspLandscape, SatLandscape)
// ---------------------------------------------------------------------------

/// Uniform random points until cost <= target or cap
template <typename Landscape>
Trace run_blind(const Landscape& land, long target, Rng& rng, std::uint64_t cap,
                TraceDetail detail = TraceDetail::summary, typename Landscape::Point* found = nullptr) {
    if (cap < 1) {
        throw ConfigError("cap must be at least 1");
    }
    Trace t;
    while (t.trials < cap) {
        ++t.trials;
        auto x = land.random_point(rng);
        const long c = land.cost(x);
        t.terminal = c;
        detail::record(t, detail, Phase::blind, c, c <= target);
        if (c <= target) {
            t.reached = true;
            if (found) {
                *found = std::move(x);
            }
            break;
        }
    }
    t.blind_trials = t.trials;
    t.capped = !t.reached;
    return t;
}

/// Continue with random-neighbour descent; local optima end the run as stuck
template <typename Landscape>
void continue_descent(const Landscape& land, typename Landscape::Point x, AcceptRule rule, long target, Rng& rng,
                      std::uint64_t cap, TraceDetail detail, Trace& t) {
    long c = land.cost(x);
    t.terminal = c;
    const std::size_t m = land.neighbor_count();
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::size_t misses = 0;
    while (c > target) {
        if (misses >= m) {
            // Many rejections in a row: check whether any acceptable neighbour exists
            bool any = false;
            for (std::size_t i = 0; i < m && !any; ++i) {
                any = detail::accepts(rule, c + land.move_delta(x, i), c);
            }
            if (!any) {
                t.stuck = true;
                break;
            }
            misses = 0;
        }
        if (t.trials >= cap) {
            t.capped = true;
            break;
        }
        ++t.trials;
        const std::size_t mv = pick(rng);
        const long c2 = c + land.move_delta(x, mv);
        const bool accepted = detail::accepts(rule, c2, c);
        detail::record(t, detail, Phase::descent, c2, accepted);
        if (accepted) {
            land.apply(x, mv);
            misses = c2 < c ? 0 : misses + 1;
            c = c2;
            t.terminal = c;
        } else {
            ++misses;
        }
    }
    t.reached = c <= target;
}

template <typename Landscape>
Trace run_descent(const Landscape& land, const typename Landscape::Point& start, AcceptRule rule, Rng& rng,
                  std::uint64_t cap, long target, TraceDetail detail = TraceDetail::summary) {
    Trace t;
    detail::record(t, detail, Phase::descent, land.cost(start), true);
    continue_descent(land, start, rule, target, rng, cap, detail, t);
    return t;
}

template <typename Landscape>
Trace run_seeded(const Landscape& land, long threshold, AcceptRule rule, Rng& rng, std::uint64_t cap, long target,
                 TraceDetail detail = TraceDetail::summary) {
    typename Landscape::Point x;
    Trace t = run_blind(land, threshold, rng, cap, detail, &x);
    if (!t.reached) {
        return t;
    }
    continue_descent(land, std::move(x), rule, target, rng, cap, detail, t);
    return t;
}

// ---------------------------------------------------------------------------
// Many runs and aggregation
// ---------------------------------------------------------------------------

/// Run n independent simulations; run i gets stream (seed, kind, i) and lands in slot i
template <typename Fn>
std::vector<Trace> simulate_many(std::size_t n, std::uint64_t seed, std::uint64_t kind, unsigned workers, Fn&& fn) {
    std::vector<Trace> out(n);
    parallel_for(n, workers, [&](std::size_t i) {
        Rng rng = derive_stream(seed, {kind, i});
        out[i] = fn(rng);
        out[i].seed = seed;
        out[i].run_id = i;
    });
    return out;
}

/// Trial-count statistics over a set of runs
struct TraceStats {
    std::size_t runs = 0;
    double mean = 0.0;
    double std_error = 0.0; ///< zero for a single run
    double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
    double success_fraction = 0.0;
    double stuck_fraction = 0.0;
};

/// @throws ConfigError on an empty list
inline TraceStats aggregate(const std::vector<Trace>& traces) {
    if (traces.empty()) {
        throw ConfigError("cannot aggregate an empty list of traces");
    }
    TraceStats s;
    s.runs = traces.size();
    std::vector<double> xs;
    xs.reserve(traces.size());
    CompensatedSum sum;
    std::size_t ok = 0, stuck = 0;
    for (const auto& t : traces) {
        xs.push_back(static_cast<double>(t.trials));
        sum += static_cast<double>(t.trials);
        ok += t.reached ? 1 : 0;
        stuck += t.stuck ? 1 : 0;
    }
    const double n = static_cast<double>(xs.size());
    s.mean = sum.value() / n;
    if (xs.size() > 1) {
        CompensatedSum sq;
        for (double x : xs) {
            sq += (x - s.mean) * (x - s.mean);
        }
        s.std_error = std::sqrt(sq.value() / (n - 1.0)) / std::sqrt(n);
    }
    std::sort(xs.begin(), xs.end());
    auto quantile = [&](double q) {
        const double pos = q * (n - 1.0);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, xs.size() - 1);
        return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
    };
    s.min = xs.front();
    s.q25 = quantile(0.25);
    s.median = quantile(0.5);
    s.q75 = quantile(0.75);
    s.max = xs.back();
    s.success_fraction = static_cast<double>(ok) / n;
    s.stuck_fraction = static_cast<double>(stuck) / n;
    return s;
}

/// "run_id,phase,trial_index,fitness" rows for every recorded point
inline void write_traces_csv(std::ostream& os, const std::vector<Trace>& traces) {
    os << "run_id,phase,trial_index,fitness\n";
    for (const auto& t : traces) {
        for (const auto& p : t.points) {
            os << t.run_id << ',' << (p.phase == Phase::blind ? "blind" : "descent") << ',' << p.trial << ','
               << p.fitness << '\n';
        }
    }
}

/// "runs,mean,std_error,min,q25,median,q75,max,success_fraction,stuck_fraction"
inline void write_stats_csv(std::ostream& os, const TraceStats& s) {
    os.precision(17);
    os << "runs,mean,std_error,min,q25,median,q75,max,success_fraction,stuck_fraction\n";
    os << s.runs << ',' << s.mean << ',' << s.std_error << ',' << s.min << ',' << s.q25 << ',' << s.median << ','
       << s.q75 << ',' << s.max << ',' << s.success_fraction << ',' << s.stuck_fraction << '\n';
}

} // namespace nsf
