/// @file census.hpp
/// @brief Empirical estimates of p, pn and r on concrete instances, by exhaustive
///        enumeration or by sampling, and the NSF verdict report built from them

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nsf/model.hpp>
#include <nsf/numeric.hpp>
#include <nsf/parallel.hpp>
#include <nsf/rng.hpp>
#include <nsf/sat.hpp>
#include <nsf/tsp.hpp>

namespace nsf {

/// The sampling pass found no point at the requested cost
class NoPointsAtTarget : public ResourceLimit {
  public:
    using ResourceLimit::ResourceLimit;
};

enum class SampleMode { exhaustive, sampled };

/// Pooled cost and neighbour-cost counts over a set of instances
///
/// Costs are raw instance costs; "level" k below means a raw cost. The observed optimum
/// is the smallest cost seen among surveyed points.
struct CensusReport {
    SampleMode mode = SampleMode::exhaustive;
    std::vector<std::uint64_t> counts;                 ///< points seen at each raw cost
    std::uint64_t points = 0;                          ///< points surveyed
    std::vector<std::vector<std::uint64_t>> nbr_counts; ///< per surveyed cost, neighbour costs
    std::vector<std::uint64_t> nbr_totals;             ///< neighbours evaluated per surveyed cost
    std::uint64_t evaluations = 0;                     ///< all cost evaluations, incremental ones included
    std::optional<long> target;                        ///< surveyed cost of a sampled census
    std::optional<long> forced_ge;                     ///< overrides the midpoint good-enough cost

    long max_cost() const { return static_cast<long>(counts.size()) - 1; }

    long optimum() const {
        for (std::size_t c = 0; c < counts.size(); ++c) {
            if (counts[c] > 0) {
                return static_cast<long>(c);
            }
        }
        return 0;
    }

    long worst() const {
        for (std::size_t c = counts.size(); c-- > 0;) {
            if (counts[c] > 0) {
                return static_cast<long>(c);
            }
        }
        return 0;
    }

    /// Most frequent cost; ties go to the larger cost
    long modal() const {
        std::size_t best = 0;
        for (std::size_t c = 0; c < counts.size(); ++c) {
            if (counts[c] >= counts[best]) {
                best = c;
            }
        }
        return static_cast<long>(best);
    }

    /// Halfway between the observed optimum and modal cost unless forced
    long ge_level() const {
        return forced_ge.value_or(good_enough_midpoint(static_cast<Cost>(optimum()), static_cast<Cost>(modal())));
    }

    double p_hat(long c) const {
        if (c < 0 || c > max_cost() || points == 0) {
            return 0.0;
        }
        return static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(points);
    }

    bool surveyed(long k) const {
        return k >= 0 && k <= max_cost() && nbr_totals[static_cast<std::size_t>(k)] > 0;
    }

    double pn_hat(long k, long k2) const {
        if (!surveyed(k) || k2 < 0 || k2 > max_cost()) {
            return 0.0;
        }
        return static_cast<double>(nbr_counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(k2)]) /
               static_cast<double>(nbr_totals[static_cast<std::size_t>(k)]);
    }

    /// Combined-sides ratio, undefined when p̂(k+δ)+p̂(k−δ) = 0
    std::optional<double> r_hat(long k, int d) const {
        const double den = p_hat(k + d) + p_hat(k - d);
        if (!(den > 0.0)) {
            return std::nullopt;
        }
        return (pn_hat(k, k + d) + pn_hat(k, k - d)) / den;
    }

    /// One-sided ratio p̂n(k,k+side·δ)/p̂(k+side·δ) for diagnostics
    std::optional<double> r_hat_side(long k, int d, int side) const {
        const long other = k + side * d;
        const double den = p_hat(other);
        if (!(den > 0.0)) {
            return std::nullopt;
        }
        return pn_hat(k, other) / den;
    }

    /// Shifted distribution over levels 0..worst−optimum
    FitnessDistribution level_distribution() const {
        const long lo = optimum();
        std::vector<double> w;
        for (long c = lo; c <= worst(); ++c) {
            w.push_back(static_cast<double>(counts[static_cast<std::size_t>(c)]));
        }
        return FitnessDistribution::from_weights(w);
    }
};

namespace detail {

inline CensusReport empty_report(long max_cost, SampleMode mode) {
    CensusReport r;
    r.mode = mode;
    const auto width = static_cast<std::size_t>(max_cost) + 1;
    r.counts.assign(width, 0);
    r.nbr_counts.assign(width, {});
    r.nbr_totals.assign(width, 0);
    return r;
}

inline void merge_into(CensusReport& into, const CensusReport& part) {
    for (std::size_t c = 0; c < part.counts.size(); ++c) {
        into.counts[c] += part.counts[c];
        into.nbr_totals[c] += part.nbr_totals[c];
        if (!part.nbr_counts[c].empty()) {
            auto& row = into.nbr_counts[c];
            if (row.empty()) {
                row.assign(into.counts.size(), 0);
            }
            for (std::size_t j = 0; j < part.nbr_counts[c].size(); ++j) {
                row[j] += part.nbr_counts[c][j];
            }
        }
    }
    into.points += part.points;
    into.evaluations += part.evaluations;
}

/// Count one point and, if asked, all its neighbours
template <typename Landscape>
void survey_point(const Landscape& land, const typename Landscape::Point& x, long cost, bool neighbours,
                  CensusReport& r) {
    ++r.counts[static_cast<std::size_t>(cost)];
    ++r.points;
    ++r.evaluations;
    if (!neighbours) {
        return;
    }
    auto& row = r.nbr_counts[static_cast<std::size_t>(cost)];
    if (row.empty()) {
        row.assign(r.counts.size(), 0);
    }
    const std::size_t m = land.neighbor_count();
    for (std::size_t i = 0; i < m; ++i) {
        const long c2 = cost + land.move_delta(x, i);
        ++row[static_cast<std::size_t>(c2)];
    }
    r.nbr_totals[static_cast<std::size_t>(cost)] += m;
    r.evaluations += m;
}

template <typename Landscape, typename Instance>
CensusReport exhaustive(const std::vector<Instance>& instances, unsigned workers) {
    if (instances.empty()) {
        throw ConfigError("census needs at least one instance");
    }
    std::vector<Landscape> lands;
    long max_cost = 0;
    for (const auto& inst : instances) {
        lands.emplace_back(inst);
        max_cost = std::max(max_cost, lands.back().max_cost());
    }
    std::vector<CensusReport> parts(instances.size(), empty_report(max_cost, SampleMode::exhaustive));
    parallel_for(instances.size(), workers, [&](std::size_t i) {
        lands[i].for_each_point([&](const typename Landscape::Point& x) {
            survey_point(lands[i], x, lands[i].cost(x), true, parts[i]);
        });
    });
    CensusReport out = empty_report(max_cost, SampleMode::exhaustive);
    for (const auto& part : parts) {
        merge_into(out, part);
    }
    return out;
}

} // namespace detail

/// Exact census of every canonical tour of every instance (n <= 10)
/// @throws ResourceLimit above the enumeration limit
inline CensusReport census_exhaustive(const std::vector<TspInstance>& instances, unsigned workers = 0) {
    for (const auto& inst : instances) {
        if (TspLandscape::enumerable_points(inst.n) == 0) {
            throw ResourceLimit("exhaustive TSP census is limited to n <= 10; use sampling");
        }
    }
    return detail::exhaustive<TspLandscape>(instances, workers);
}

/// Exact census of every assignment of every instance (n_vars <= 20)
/// @throws ResourceLimit above the enumeration limit
inline CensusReport census_exhaustive(const std::vector<Sat2Instance>& instances, unsigned workers = 0) {
    for (const auto& inst : instances) {
        if (SatLandscape::enumerable_points(inst.n_vars) == 0) {
            throw ResourceLimit("exhaustive SAT census is limited to 20 variables; use sampling");
        }
    }
    return detail::exhaustive<SatLandscape>(instances, workers);
}

/// Points drawn per work unit; fixed so results do not depend on the worker count
inline constexpr std::uint64_t kSampleChunk = 1u << 16;

/// Two-pass sampled census over a pool of instances
///
/// Pass one draws n_samples uniform points, spread evenly over the instances, to estimate
/// p̂. Pass two draws n_samples fresh points and keeps those at the target cost, whose
/// neighbours are all evaluated to estimate p̂n(target,·). Without an explicit target the
/// midpoint of the observed minimum and modal cost is used.
/// @throws NoPointsAtTarget if pass two finds no point at the target cost
template <typename Landscape, typename Instance>
CensusReport census_sampled(const std::vector<Instance>& instances, std::uint64_t n_samples,
                            std::optional<long> target_k, std::uint64_t seed, unsigned workers = 0) {
    if (instances.empty()) {
        throw ConfigError("census needs at least one instance");
    }
    if (n_samples < 1) {
        throw ConfigError("census needs at least one sample");
    }
    std::vector<Landscape> lands;
    long max_cost = 0;
    for (const auto& inst : instances) {
        lands.emplace_back(inst);
        max_cost = std::max(max_cost, lands.back().max_cost());
    }
    // Work units: (instance, chunk) pairs with a fixed sample count each
    struct Unit {
        std::size_t instance;
        std::uint64_t chunk;
        std::uint64_t samples;
    };
    std::vector<Unit> units;
    const std::uint64_t m = instances.size();
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::uint64_t share = n_samples / m + (i < n_samples % m ? 1 : 0);
        for (std::uint64_t c = 0; share > 0; ++c) {
            const std::uint64_t take = std::min(share, kSampleChunk);
            units.push_back({i, c, take});
            share -= take;
        }
    }
    auto run_pass = [&](std::uint64_t pass, std::optional<long> keep) {
        std::vector<CensusReport> parts(units.size(), detail::empty_report(max_cost, SampleMode::sampled));
        parallel_for(units.size(), workers, [&](std::size_t u) {
            const Unit& unit = units[u];
            const Landscape& land = lands[unit.instance];
            Rng rng = derive_stream(seed, {pass, unit.instance, unit.chunk});
            for (std::uint64_t s = 0; s < unit.samples; ++s) {
                const auto x = land.random_point(rng);
                const long c = land.cost(x);
                if (!keep) {
                    detail::survey_point(land, x, c, false, parts[u]);
                } else if (c == *keep) {
                    detail::survey_point(land, x, c, true, parts[u]);
                } else {
                    ++parts[u].evaluations;
                }
            }
        });
        CensusReport out = detail::empty_report(max_cost, SampleMode::sampled);
        for (const auto& part : parts) {
            detail::merge_into(out, part);
        }
        return out;
    };
    CensusReport report = run_pass(1, std::nullopt);
    const long target = target_k.value_or(report.ge_level());
    const CensusReport second = run_pass(2, target);
    if (second.nbr_totals[static_cast<std::size_t>(std::clamp(target, 0L, max_cost))] == 0 || target < 0 ||
        target > max_cost) {
        throw NoPointsAtTarget("no sampled point has cost " + std::to_string(target) +
                               "; raise the sample count or choose a more common target");
    }
    report.nbr_counts = second.nbr_counts;
    report.nbr_totals = second.nbr_totals;
    report.evaluations += second.evaluations;
    report.target = target;
    if (target_k) {
        report.forced_ge = target_k;
    }
    return report;
}

// ---------------------------------------------------------------------------
// NSF report
// ---------------------------------------------------------------------------

/// Per-(k,δ) verdicts
struct NsfPair {
    long k = 0;
    int delta = 0;
    std::optional<double> r;
    bool normal = true;              ///< p̂n(k,k−δ) >= r̂(k,δ)·p̂(k−δ)
    std::optional<bool> monotone;    ///< r̂(k,δ) >= r̂(k,δ+1), if both are defined and δ+1 in range
};

/// Per-level summary
struct NsfLevelSummary {
    long k = 0;
    std::optional<double> rbar;
    double p_less = 0.0;
    double pn_less = 0.0;
    double pbr_less = 0.0;
    bool pbr_bound_holds = false; ///< pbr^<(k) >= r̄(k)·p^<(k)
};

struct NsfReport {
    long optimum = 0;
    std::vector<NsfPair> pairs;
    std::vector<NsfLevelSummary> levels;
    std::size_t normal_checked = 0, normal_ok = 0;
    std::size_t monotone_checked = 0, monotone_ok = 0;

    double normal_fraction() const {
        return normal_checked ? static_cast<double>(normal_ok) / static_cast<double>(normal_checked) : 1.0;
    }
    double monotone_fraction() const {
        return monotone_checked ? static_cast<double>(monotone_ok) / static_cast<double>(monotone_checked) : 1.0;
    }
};

/// Verdicts for k in k_lo..k_hi and δ in 1..k−optimum, from any p/pn source
template <typename P, typename PN>
NsfReport nsf_report_from(P&& p, PN&& pn, long optimum, long k_lo, long k_hi) {
    NsfReport rep;
    rep.optimum = optimum;
    auto r_of = [&](long k, int d) -> std::optional<double> {
        const double den = p(k + d) + p(k - d);
        if (!(den > 0.0)) {
            return std::nullopt;
        }
        return (pn(k, k + d) + pn(k, k - d)) / den;
    };
    for (long k = std::max(k_lo, optimum + 1); k <= k_hi; ++k) {
        const int span = static_cast<int>(k - optimum);
        NsfLevelSummary lvl;
        lvl.k = k;
        CompensatedSum rsum, pl, nl, bl;
        int defined = 0;
        for (int d = 1; d <= span; ++d) {
            NsfPair pr;
            pr.k = k;
            pr.delta = d;
            pr.r = r_of(k, d);
            pl += p(k - d);
            nl += pn(k, k - d);
            if (pr.r) {
                rsum += *pr.r;
                ++defined;
                bl += *pr.r * p(k - d);
                pr.normal = approx_geq(pn(k, k - d), *pr.r * p(k - d));
                ++rep.normal_checked;
                rep.normal_ok += pr.normal ? 1 : 0;
                if (d < span) {
                    if (const auto next = r_of(k, d + 1)) {
                        pr.monotone = approx_geq(*pr.r, *next);
                        ++rep.monotone_checked;
                        rep.monotone_ok += *pr.monotone ? 1 : 0;
                    }
                }
            }
            rep.pairs.push_back(pr);
        }
        lvl.p_less = pl.value();
        lvl.pn_less = nl.value();
        lvl.pbr_less = bl.value();
        if (defined > 0) {
            lvl.rbar = rsum.value() / defined;
            lvl.pbr_bound_holds = approx_geq(lvl.pbr_less, *lvl.rbar * lvl.p_less);
        }
        rep.levels.push_back(lvl);
    }
    return rep;
}

/// Verdicts over surveyed levels of a census
inline NsfReport nsf_report(const CensusReport& report, long k_lo, long k_hi) {
    return nsf_report_from([&](long c) { return report.p_hat(c); },
                           [&](long a, long b) { return report.pn_hat(a, b); }, report.optimum(), k_lo, k_hi);
}

/// Verdicts on an analytic model, whose optimum is level 0
inline NsfReport nsf_report(const ClassModel& model, long k_lo, long k_hi) {
    return nsf_report_from([&](long c) { return model.p(c); }, [&](long a, long b) { return model.pn(a, b); }, 0,
                           k_lo, k_hi);
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// "cost,count,p_hat,p_less,pn_less" for each cost with points
inline void write_census_csv(std::ostream& os, const CensusReport& r) {
    os.precision(17);
    os << "cost,count,p_hat,p_less,pn_less\n";
    double below = 0.0;
    for (long c = 0; c <= r.max_cost(); ++c) {
        const auto n = r.counts[static_cast<std::size_t>(c)];
        if (n > 0) {
            os << c << ',' << n << ',' << r.p_hat(c) << ',' << below << ',';
            if (r.surveyed(c)) {
                double nl = 0.0;
                for (long j = 0; j < c; ++j) {
                    nl += r.pn_hat(c, j);
                }
                os << nl;
            }
            os << '\n';
        }
        below += r.p_hat(c);
    }
}

/// "k,delta,r,r_below,r_above,normal,monotone" rows
inline void write_nsf_csv(std::ostream& os, const NsfReport& rep, const CensusReport* census = nullptr) {
    os.precision(17);
    os << "k,delta,r,r_below,r_above,normal,monotone\n";
    for (const auto& pr : rep.pairs) {
        os << pr.k << ',' << pr.delta << ',';
        if (pr.r) {
            os << *pr.r;
        }
        os << ',';
        if (census) {
            if (const auto v = census->r_hat_side(pr.k, pr.delta, -1)) {
                os << *v;
            }
        }
        os << ',';
        if (census) {
            if (const auto v = census->r_hat_side(pr.k, pr.delta, +1)) {
                os << *v;
            }
        }
        os << ',' << (pr.normal ? 1 : 0) << ',';
        if (pr.monotone) {
            os << (*pr.monotone ? 1 : 0);
        }
        os << '\n';
    }
}

} // namespace nsf
