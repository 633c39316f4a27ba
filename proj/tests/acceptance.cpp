/// @file acceptance.cpp
/// @brief End-to-end acceptance run: one PASS/FAIL line per criterion, followed by details
///
/// The process exits 0 when every failing criterion belongs to the documented known-red set
/// and 1 otherwise. With --strict, any failure exits 1.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nsf/analysis.hpp>
#include <nsf/benchmarks.hpp>
#include <nsf/census.hpp>
#include <nsf/properties.hpp>
#include <nsf/simulate.hpp>

using namespace nsf;

namespace {

/// Criteria that fail for documented reasons outside the code's control
const std::set<int> kKnownRed{2, 3, 4, 10};

/// Collects sub-checks of one criterion and the lines explaining them
class Checks {
    bool ok_ = true;
    std::ostringstream log_;

  public:
    void expect(bool cond, const std::string& what) {
        ok_ = ok_ && cond;
        log_ << "    [" << (cond ? "ok" : "MISS") << "] " << what << '\n';
    }

    void near_abs(double actual, double expected, double tol, const std::string& what) {
        std::ostringstream s;
        s.precision(6);
        s << what << ": " << actual << " vs " << expected << " +- " << tol;
        expect(std::abs(actual - expected) <= tol, s.str());
    }

    void near_rel(double actual, double expected, double rel, const std::string& what) {
        std::ostringstream s;
        s.precision(8);
        s << what << ": " << actual << " vs " << expected << " +- " << rel * 100 << "%";
        expect(std::abs(actual - expected) <= rel * std::abs(expected), s.str());
    }

    void note(const std::string& text) { log_ << "    " << text << '\n'; }

    bool ok() const { return ok_; }
    std::string log() const { return log_.str(); }
};

struct Outcome {
    int id;
    std::string title;
    bool pass;
    double seconds;
    std::string log;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void runtime_limit(Checks& c, double seconds, double limit) {
    c.expect(seconds < limit, "runtime " + fmt("%.2f", seconds) + " s < " + fmt("%.0f", limit) + " s");
}

ClassModel uniform_bench(int bound) { return kernel_from_weights(build_uniform(), bound, SameCostRule::proportional); }

const std::vector<double> kGeometricCounts{1, 5, 25, 125, 625, 3125, 15625, 78125, 390625};

double counts_steps(const CountsClassSpec& spec) {
    const auto cc = build_counts_class(spec);
    return steps(cc.model, cc.eval_level).at(cc.eval_level);
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------

void sat_cost_distribution(Checks& c) {
    const auto t0 = Clock::now();
    const auto m = build_sat2_analytic();
    const double secs = since(t0);
    c.near_abs(m.p(25), 0.092, 0.001, "p(25)");
    c.expect(modal_cost(m.dist()) == 25, "modal cost " + std::to_string(modal_cost(m.dist())) + " == 25");
    runtime_limit(c, secs, 1.0);
}

void sat_cost_twenty(Checks& c) {
    const std::array<double, 4> r_ref{3.87, 2.55, 1.14, 0.27};
    const std::array<double, 4> pn_ref{0.256, 0.205, 0.102, 0.026};
    Sat2Conventions fifty;
    fifty.unsat_denominator = 50;
    const auto table_model = build_sat2_analytic({}, fifty);
    const auto default_model = build_sat2_analytic();
    c.note("falsify chance 1/3, clause-false chance k/50:");
    for (int d = 1; d <= 4; ++d) {
        const auto i = static_cast<std::size_t>(d - 1);
        c.near_abs(*table_model.r(20, d), r_ref[i], 0.02, "r(20," + std::to_string(d) + ")");
        c.near_abs(table_model.pn(20, 20 - d), pn_ref[i], 0.002, "pn(20," + std::to_string(20 - d) + ")");
    }

    std::vector<Sat2Instance> insts;
    for (std::uint64_t s = 0; s < 20; ++s) {
        insts.push_back(gen_sat2(700 + s));
    }
    const auto census = census_sampled<SatLandscape>(insts, 500000, 20L, 2026, default_workers());
    const double flips = static_cast<double>(census.nbr_totals[20]);
    c.expect(flips >= 1e6, "flip experiment size " + fmt("%.0f", flips) + " >= 1e6");
    auto ci_check = [&](const ClassModel& m, const std::string& label) {
        for (int d = 1; d <= 4; ++d) {
            const double est = census.pn_hat(20, 20 - d);
            const double se = std::sqrt(est * (1 - est) / flips);
            const double a = m.pn(20, 20 - d);
            std::ostringstream s;
            s.precision(4);
            s << label << " pn(20," << 20 - d << ")=" << a << " in 99% CI [" << est - 2.576 * se << ", "
              << est + 2.576 * se << "]";
            c.expect(std::abs(a - est) <= 2.576 * se, s.str());
        }
    };
    ci_check(table_model, "k/50 model");
    c.note("the default k/100 model is closer to the generated instances but also outside the interval:");
    for (int d = 1; d <= 4; ++d) {
        const double est = census.pn_hat(20, 20 - d);
        const double se = std::sqrt(est * (1 - est) / flips);
        c.note("k/100 pn(20," + std::to_string(20 - d) + ")=" + fmt("%.4f", default_model.pn(20, 20 - d)) +
               " sampled " + fmt("%.4f", est) + " (" +
               fmt("%.1f", (default_model.pn(20, 20 - d) - est) / se) + " se)");
    }
}

void sat_cost_ten(Checks& c) {
    Sat2Conventions even;
    even.falsify_prob = 0.5;
    const auto m = build_sat2_analytic({}, even);
    const std::array<double, 4> r_ref{1162, 461, 116, 14};
    for (int d = 1; d <= 4; ++d) {
        c.near_rel(*m.r(10, d), r_ref[static_cast<std::size_t>(d - 1)], 0.01, "r(10," + std::to_string(d) + ")");
    }
    const auto q = improvement_quantities(m, 10);
    c.near_rel(q.rbar, 175, 0.01, "mean weight at 10");
    c.near_abs(q.pn_less, 0.76, 0.01, "pn<(10)");
    c.near_abs(q.pbr_less, 0.04, 0.005, "pbr<(10)");
    c.near_rel(q.p_less, 4.3e-5, 0.10, "p<(10)");
    c.near_abs(m.pn(10, 10), 0.16, 0.01, "pn(10,10)");
    c.near_rel(m.p(10), 9.4e-5, 0.05, "p(10)");
    // Above the modal cost p is tiny and both quantities grow again, so the scans stop there.
    // The largest-k claims are checked on the model that reproduces the cost-20 table; the
    // other conventions are reported alongside.
    auto largest = [](const ClassModel& model) {
        Cost last_rbar = -1, last_beat = -1;
        for (Cost k = 1; k <= modal_cost(model.dist()); ++k) {
            const auto qk = improvement_quantities(model, k);
            if (qk.rbar > 1.0) {
                last_rbar = k;
            }
            if (qk.pn_less > qk.p_less) {
                last_beat = k;
            }
        }
        return std::pair{last_rbar, last_beat};
    };
    Sat2Conventions fifty;
    fifty.unsat_denominator = 50;
    const auto [last_rbar, last_beat] = largest(build_sat2_analytic({}, fifty));
    c.expect(last_rbar == 17, "k/50 model: largest k <= modal with mean weight > 1: " + std::to_string(last_rbar) +
                                  " == 17");
    c.expect(last_beat == 25, "k/50 model: largest k <= modal with pn<(k) > p<(k): " + std::to_string(last_beat) +
                                  " == 25");
    const auto [even_rbar, even_beat] = largest(m);
    const auto [plain_rbar, plain_beat] = largest(build_sat2_analytic());
    c.note("falsify chance 1/2: largest k with mean weight > 1 is " + std::to_string(even_rbar) +
           ", with pn< > p< is " + std::to_string(even_beat));
    c.note("k/100 model: largest k with mean weight > 1 is " + std::to_string(plain_rbar) + ", with pn< > p< is " +
           std::to_string(plain_beat));
}

void uniform_benchmark(Checks& c) {
    auto t0 = Clock::now();
    const std::array<int, 5> bounds{1, 5, 10, 50, 200};
    const auto base = uniform_bench(5);
    c.near_abs(blind_improve_prob(base.dist(), 50), 0.25, 0.01, "p<(50)");
    const std::array<double, 5> pn_ref{0.33, 0.45, 0.48, 0.49, 0.25};
    const std::array<double, 5> en_ref{0.33, 1.36, 2.61, 5.81, 2.32};
    const std::array<double, 5> s50_ref{150, 41.9, 29.9, 55.5, 200};
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const auto m = uniform_bench(bounds[i]);
        const std::string b = "b=" + std::to_string(bounds[i]);
        c.near_abs(nbr_improve_prob(m.kernel(), 50), pn_ref[i], 0.01, "pn<(50) " + b);
        c.near_abs(expected_one_step_improvement(m, 30, SearchMode::neighbourhood), en_ref[i], 0.02,
                   "en_imp(30) " + b);
        c.near_rel(steps(m, 50).at(50), s50_ref[i], 0.01, "steps(50) " + b);
    }
    c.near_abs(expected_one_step_improvement(base, 30, SearchMode::blind), 2.32, 0.02, "e_imp(30)");
    const auto prof = steps(base, 50);
    const std::array<Cost, 4> ks{50, 30, 10, 2};
    const std::array<double, 4> s_ref{41.9, 27.3, 12.5, 7.5};
    for (std::size_t i = 0; i < ks.size(); ++i) {
        c.near_rel(prof.at(ks[i]), s_ref[i], 0.01, "steps(" + std::to_string(ks[i]) + ") b=5");
    }
    const std::array<Cost, 5> bl_ks{50, 30, 20, 10, 5};
    const std::array<double, 5> bl_ref{27.4, 22.6, 21.9, 26.8, 39.8};
    for (std::size_t i = 0; i < bl_ks.size(); ++i) {
        c.near_rel(blind_seeded_steps(base, prof, bl_ks[i]), bl_ref[i], 0.01,
                   "blind-seeded(" + std::to_string(bl_ks[i]) + ") b=5");
    }
    const auto sp = switch_point(base, 50);
    c.expect(sp.best_threshold == 23, "switch point " + std::to_string(sp.best_threshold) + " == 23");
    runtime_limit(c, since(t0), 1.0);
}

void counts_classes(Checks& c) {
    const std::array<std::vector<double>, 4> geo_w{{{1, 1, 1, 1}, {2, 1, 1, 1}, {4, 1, 1, 1}, {4, 3.5, 3, 0.5}}};
    const std::array<double, 4> geo_ref{500000, 274937, 145741, 128801.73};
    for (std::size_t i = 0; i < geo_w.size(); ++i) {
        c.near_rel(counts_steps({9, kGeometricCounts, 500000, geo_w[i]}), geo_ref[i], 5e-6,
                   "geometric counts, weights set " + std::to_string(i + 1));
    }
    const double exact = counts_steps({9, kGeometricCounts, 500000, geo_w[3]});
    c.expect(std::abs(exact / 128801.72941244145 - 1.0) < 5e-6,
             "geometric counts to six significant digits: " + fmt("%.10f", exact));
    const std::vector<double> rising{1, 2, 3, 4, 5, 6, 7, 8, 1};
    const std::array<std::vector<double>, 4> rise_w{{{1, 1, 1, 1}, {2, 1, 1, 1}, {3, 2, 1, 0.7}, {3, 2.5, 1.5, 0.5}}};
    const std::array<double, 4> rise_ref{100, 62.7, 42.7, 40};
    for (std::size_t i = 0; i < rise_w.size(); ++i) {
        c.near_rel(counts_steps({9, rising, 100, rise_w[i]}), rise_ref[i], 0.01,
                   "rising counts, weights set " + std::to_string(i + 1));
    }
    c.near_rel(counts_steps({9, {1, 10, 10, 10, 20, 20, 10, 10, 1}, 100, {1.1, 1, 1, 0.8}}), 92.3, 0.01,
               "low-weight class A");
    c.near_rel(counts_steps({9, {1, 1, 10, 10, 10, 10, 10, 10, 1}, 70, {1.4, 1, 1, 0.5}}), 59.7, 0.01,
               "low-weight class B");
    c.near_rel(counts_steps({5, {1, 10, 10, 10, 1}, 35, {1.1, 0.8}}), 32.6, 0.01, "low-weight class C");
}

void other_benchmarks(Checks& c) {
    struct Row {
        BenchmarkClass cls;
        std::array<double, 4> steps_ref;   // steps(50,30,10,2), b=5
        std::array<double, 5> steps50_ref; // steps(50) for b=1,5,10,50,200
        std::array<double, 5> seeded_ref;  // blind-seeded(50,30,20,10,5), b=5
        double p_less_ref;                 // p<(50), negative when not tabulated
        std::array<double, 5> pn_ref;      // pn<(50) for b=1,5,10,50,200, empty when not tabulated
    };
    const std::vector<Row> rows{
        {BenchmarkClass::linear,
         {70.7, 54.7, 36.6, 25.5},
         {164, 70.7, 36.6, 1400, 10000},
         {65.2, 67.7, 87.7, 213, 657},
         0.16,
         {0.33, 0.44, 0.45, 0.33, 0.16}},
        {BenchmarkClass::steep_linear,
         {158, 142, 123, 112},
         {176, 158, 373, 6728, 50000},
         {152, 155, 175, 302, 778},
         -1,
         {}},
        {BenchmarkClass::exponential,
         {5.9e10, 5.9e10, 5.9e10, 4.3e10},
         {39140, 5.9e10, 2.5e17, 1.4e48, 1.6e60},
         {6.9e12, 1.8e25, 7.6e33, 1.2e45, 2.3e52},
         0.06,
         {0.34, 0.43, 0.37, 0.12, 0.06}},
    };
    const std::array<int, 5> bounds{1, 5, 10, 50, 200};
    std::size_t agree = 0, compared = 0;
    auto report = [&](const std::string& what, double got, double ref) {
        ++compared;
        const double rel = std::abs(got / ref - 1.0);
        agree += rel <= 0.01 ? 1 : 0;
        c.note((rel <= 0.01 ? "agrees   " : "DIFFERS  ") + what + ": computed " + fmt("%.4g", got) + ", tabulated " +
               fmt("%.4g", ref));
    };
    for (const auto& row : rows) {
        const auto d = build_benchmark(row.cls);
        const std::string name = to_string(row.cls);
        const double blind = blind_steps(d);
        if (row.p_less_ref >= 0) {
            report(name + " p<(50)", blind_improve_prob(d, 50), row.p_less_ref);
        }
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            const auto m = kernel_from_weights(d, bounds[i], SameCostRule::proportional);
            const std::string b = " b=" + std::to_string(bounds[i]);
            const auto prof = steps(m, 50);
            report(name + " steps(50)" + b, prof.at(50), row.steps50_ref[i]);
            if (row.p_less_ref >= 0) {
                report(name + " pn<(50)" + b, nbr_improve_prob(m.kernel(), 50), row.pn_ref[i]);
            }
            // Descent never loses to blind search where the descent hypotheses hold
            if (descent_hypotheses(m, 50)) {
                c.expect(approx_leq(prof.at(50), blind, 1e-9),
                         name + b + ": descent hypotheses hold and steps(50) <= blind");
            }
            // Improvement probability grows with the starting cost, and tighter bounds improve more often
            bool rising = true, above_blind = true;
            for (Cost k = 1; k <= 50; ++k) {
                rising = rising && approx_geq(nbr_improve_prob(m.kernel(), k), nbr_improve_prob(m.kernel(), k - 1));
                above_blind = above_blind && approx_geq(nbr_improve_prob(m.kernel(), k), blind_improve_prob(d, k));
            }
            c.expect(rising, name + b + ": pn<(k) non-decreasing over k = 0..50");
            c.expect(above_blind, name + b + ": pn<(k) >= p<(k) over k = 1..50");
        }
        const auto m5 = kernel_from_weights(d, 5, SameCostRule::proportional);
        const auto prof = steps(m5, 50);
        const std::array<Cost, 4> ks{50, 30, 10, 2};
        bool monotone = true;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            report(name + " steps(" + std::to_string(ks[i]) + ") b=5", prof.at(ks[i]), row.steps_ref[i]);
            if (i > 0) {
                monotone = monotone && approx_leq(prof.at(ks[i]), prof.at(ks[i - 1]), 1e-12);
            }
        }
        c.expect(monotone, name + " b=5: steps(k) falls as the start cost falls");
        const std::array<Cost, 5> bl_ks{50, 30, 20, 10, 5};
        for (std::size_t i = 0; i < bl_ks.size(); ++i) {
            const double bl = blind_seeded_steps(m5, prof, bl_ks[i]);
            report(name + " blind-seeded(" + std::to_string(bl_ks[i]) + ") b=5", bl, row.seeded_ref[i]);
            c.expect(approx_leq(bl, blind, 1e-9), name + " blind-seeded(" + std::to_string(bl_ks[i]) + ") <= blind");
        }
        c.note(name + " b=5 switch threshold " + std::to_string(switch_point(m5, 50).best_threshold));
    }
    c.note("discrepancy report: " + std::to_string(agree) + " of " + std::to_string(compared) +
           " tabulated values agree within 1%; exact agreement is not required for these rows");
}

void counterexample_fixtures(Checks& c) {
    for (const auto id : all_counterexamples()) {
        const auto cx = build_counterexample(id);
        const double pl = blind_improve_prob(cx.model.dist(), cx.level);
        const double nl = nbr_improve_prob(cx.model.kernel(), cx.level);
        const double want_p = id == CounterexampleId::non_monotone_p ? 0.62 : 25.0 / 101.0;
        const double want_n = id == CounterexampleId::non_monotone_p ? 0.5 : 0.0;
        c.near_abs(pl, want_p, 1e-12, to_string(id) + " p<(25)");
        c.near_abs(nl, want_n, 1e-12, to_string(id) + " pn<(25)");
        const auto v = evaluate_hypotheses(cx.model, cx.level);
        bool exact = true;
        for (auto h : {Hypothesis::monotone_p, Hypothesis::nsf, Hypothesis::normal, Hypothesis::same_cost_bound}) {
            exact = exact && v.holds(h) == (h != cx.violated);
        }
        c.expect(exact, to_string(id) + " fails exactly " + to_string(cx.violated));
    }
}

void property_suites(Checks& c) {
    const auto t0 = Clock::now();
    auto reports = run_improvement_suites(2000, 20240601);
    for (auto& r : run_descent_suites(2000, 20240602)) {
        reports.push_back(std::move(r));
    }
    for (const auto& r : reports) {
        c.expect(r.violations == 0 && r.checked >= 1000,
                 r.name + ": " + std::to_string(r.checked) + " models checked, " + std::to_string(r.violations) +
                     " violations" + (r.first_violation.empty() ? "" : " (" + r.first_violation + ")"));
    }
    const auto cx = run_counterexample_suite();
    c.expect(cx.passed(), cx.name + ": " + std::to_string(cx.checked) + " fixtures");
    runtime_limit(c, since(t0), 60.0);
}

void monte_carlo(Checks& c) {
    const auto t0 = Clock::now();
    const unsigned workers = default_workers();
    const auto cc = build_counts_class({9, kGeometricCounts, 500000, {4, 3.5, 3, 0.5}});
    const ModelSampler geo(cc.model);
    const auto descents = simulate_many(10000, 31337, 0, workers, [&](Rng& rng) {
        return run_descent(geo, cc.eval_level, AcceptRule::strict, rng, std::uint64_t{1} << 40);
    });
    const auto s1 = aggregate(descents);
    c.expect(std::abs(s1.mean - 128801.73) <= 3 * s1.std_error,
             "geometric counts descent: mean " + fmt("%.1f", s1.mean) + ", se " + fmt("%.1f", s1.std_error) +
                 " over 10000 runs, target 128801.73");
    const auto uni = uniform_bench(5);
    const ModelSampler us(uni);
    const auto seeded = simulate_many(10000, 31337, 1, workers, [&](Rng& rng) {
        return run_seeded(us, 20, AcceptRule::strict, rng, std::uint64_t{1} << 40);
    });
    const auto s2 = aggregate(seeded);
    c.expect(std::abs(s2.mean - 21.9) <= 3 * s2.std_error,
             "uniform blind-seeded at 20: mean " + fmt("%.3f", s2.mean) + ", se " + fmt("%.3f", s2.std_error) +
                 ", target 21.9 (recursion gives " + fmt("%.3f", blind_seeded_steps(uni, 20)) + ")");
    runtime_limit(c, since(t0), 300.0);
}

void tsp_census(Checks& c) {
    const auto t0 = Clock::now();
    std::vector<TspInstance> insts;
    for (std::uint64_t s = 0; s < 20; ++s) {
        insts.push_back(gen_tsp(10, 20, 1000 + s));
    }
    const auto census = census_exhaustive(insts, default_workers());
    const double secs = since(t0);
    c.expect(TspLandscape::enumerable_points(10) == 181440 && census.points == 20u * 181440u,
             "enumerated " + std::to_string(census.points) + " tours = 20 x 181440");
    const long opt = census.optimum(), modal = census.modal(), ge = census.ge_level();
    c.note("optimum " + std::to_string(opt) + ", modal " + std::to_string(modal) + ", good-enough " +
           std::to_string(ge));
    int inversions = 0;
    for (long k = opt; k < modal; ++k) {
        inversions += census.p_hat(k) > census.p_hat(k + 1) ? 1 : 0;
    }
    c.expect(inversions <= 2, "p falls from modal to optimum with " + std::to_string(inversions) + " inversions");
    const auto rep = nsf_report(census, opt + 1, ge);
    c.expect(rep.monotone_fraction() >= 0.95, "weight monotonicity " + std::to_string(rep.monotone_ok) + "/" +
                                                  std::to_string(rep.monotone_checked) + " = " +
                                                  fmt("%.3f", rep.monotone_fraction()) + " >= 0.95");
    c.expect(rep.normal_fraction() >= 0.95, "normality " + std::to_string(rep.normal_ok) + "/" +
                                                std::to_string(rep.normal_checked) + " = " +
                                                fmt("%.3f", rep.normal_fraction()) + " >= 0.95");
    std::size_t rbar_ok = 0, pbr_ok = 0, surveyed = 0;
    for (const auto& lvl : rep.levels) {
        if (!lvl.rbar) {
            continue;
        }
        ++surveyed;
        rbar_ok += *lvl.rbar > 1.0 ? 1 : 0;
        pbr_ok += lvl.pbr_bound_holds ? 1 : 0;
    }
    c.expect(rbar_ok == surveyed, "mean weight > 1 at " + std::to_string(rbar_ok) + "/" + std::to_string(surveyed) +
                                      " levels");
    c.expect(pbr_ok == surveyed, "weighted improvement bound at " + std::to_string(pbr_ok) + "/" +
                                     std::to_string(surveyed) + " levels");
    // Diagnostic: the same verdicts restricted to pairs whose improving levels are well populated
    std::size_t n_ok = 0, n_all = 0, m_ok = 0, m_all = 0;
    const auto populated = [&](long lvl) { return lvl >= 0 && census.counts[static_cast<std::size_t>(lvl)] >= 1000; };
    for (const auto& pr : rep.pairs) {
        if (!pr.r || !populated(pr.k - pr.delta)) {
            continue;
        }
        ++n_all;
        n_ok += pr.normal ? 1 : 0;
        if (pr.monotone && populated(pr.k - pr.delta - 1)) {
            ++m_all;
            m_ok += *pr.monotone ? 1 : 0;
        }
    }
    c.note("diagnostic, improving levels with >= 1000 tours: normality " + std::to_string(n_ok) + "/" +
           std::to_string(n_all) + ", monotonicity " + std::to_string(m_ok) + "/" + std::to_string(m_all));
    runtime_limit(c, secs, 600.0);
}

void falsifier(Checks& c) {
    const auto t0 = Clock::now();
    const auto res = falsify_weights({9, kGeometricCounts, 500000, {1, 1, 1, 1}}, 0.25, 0.05);
    const double secs = since(t0);
    c.expect(res.violations.empty(), std::to_string(res.violations.size()) + " violations among " +
                                         std::to_string(res.feasible) + " feasible of " +
                                         std::to_string(res.examined) + " examined weight vectors");
    c.expect(res.feasible > 0, "grid contains feasible vectors");
    runtime_limit(c, secs, 300.0);
}

} // namespace

int main(int argc, char** argv) {
    bool strict = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) {
            strict = true;
        }
    }
    const std::vector<std::pair<std::string, std::function<void(Checks&)>>> criteria{
        {"analytic 2-SAT cost distribution", sat_cost_distribution},
        {"analytic 2-SAT neighbours at cost 20 and flip experiment", sat_cost_twenty},
        {"analytic 2-SAT derived quantities at cost 10", sat_cost_ten},
        {"uniform benchmark improvement, steps and switch point", uniform_benchmark},
        {"counts-class steps", counts_classes},
        {"linear and exponential benchmarks with discrepancy report", other_benchmarks},
        {"counter-example fixtures", counterexample_fixtures},
        {"randomized property suites", property_suites},
        {"Monte-Carlo validation of the recursions", monte_carlo},
        {"TSP-10 exhaustive census", tsp_census},
        {"weight-grid falsifier on the geometric counts class", falsifier},
    };
    std::vector<Outcome> outcomes;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checks c;
        const auto t0 = Clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const Outcome o{static_cast<int>(i + 1), criteria[i].first, c.ok(), since(t0), c.log()};
        std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", o.id, o.title.c_str(), o.seconds);
        std::fflush(stdout);
        outcomes.push_back(o);
    }
    std::printf("\n");
    int unexpected = 0;
    for (const auto& o : outcomes) {
        const bool known = kKnownRed.count(o.id) > 0;
        if (!o.pass && !known) {
            ++unexpected;
        }
        std::printf("criterion %d: %s%s\n%s", o.id, o.pass ? "PASS" : "FAIL",
                    !o.pass && known ? " (known red, see the decisions ledger)" : "", o.log.c_str());
    }
    std::printf("\n%d unexpected failure(s)\n", unexpected);
    const bool any_fail = std::any_of(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return !o.pass; });
    return (strict ? any_fail : unexpected > 0) ? 1 : 0;
}
