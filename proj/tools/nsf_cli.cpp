/// @file nsf_cli.cpp
/// @brief Command-line front end: benchmark tables, counts classes, the analytic 2-SAT class,
///        TSP censuses, Monte-Carlo runs, the property suites and the weight-grid falsifier
///
/// Every run writes its tables to an output directory together with manifest.json, which
/// records the resolved parameters. Exit codes: 0 success, 1 property violation,
/// 2 configuration error, 3 resource or threshold error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <nsf/analysis.hpp>
#include <nsf/benchmarks.hpp>
#include <nsf/census.hpp>
#include <nsf/io.hpp>
#include <nsf/properties.hpp>
#include <nsf/simulate.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nsf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

/// Options shared by every subcommand
struct Globals {
    std::string out_dir;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string format = "csv";
};

/// Named columns of numbers, written as CSV, JSON or a two-column .dat file
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os, const std::string& format) const {
        os.precision(17);
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : rows) {
                json obj = json::object();
                for (std::size_t i = 0; i < columns.size() && i < r.size(); ++i) {
                    obj[columns[i]] = r[i];
                }
                arr.push_back(std::move(obj));
            }
            os << arr.dump(2) << '\n';
        } else if (format == "dat") {
            std::vector<double> xs, ys;
            for (const auto& r : rows) {
                xs.push_back(r.at(0));
                ys.push_back(r.at(r.size() > 1 ? 1 : 0));
            }
            write_dat(os, xs, ys);
        } else {
            for (std::size_t i = 0; i < columns.size(); ++i) {
                os << (i ? "," : "") << columns[i];
            }
            os << '\n';
            for (const auto& r : rows) {
                for (std::size_t i = 0; i < r.size(); ++i) {
                    os << (i ? "," : "") << r[i];
                }
                os << '\n';
            }
        }
    }
};

/// Output directory, the files written so far and the manifest
class Output {
    fs::path dir_;
    std::string format_;
    std::vector<std::string> files_;

  public:
    Output(const Globals& g) : dir_(g.out_dir), format_(g.format) {
        if (format_ != "csv" && format_ != "json" && format_ != "dat") {
            throw ConfigError("unknown output format '" + format_ + "'; use csv, json or dat");
        }
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
        }
    }

    std::ofstream open(const std::string& name) {
        std::ofstream os(dir_ / name);
        if (!os) {
            throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
        }
        files_.push_back(name);
        return os;
    }

    /// Write a table as stem.csv, stem.json or stem.dat according to the format selector
    void table(const std::string& stem, const Table& t) {
        auto os = open(stem + "." + format_);
        t.write(os, format_);
    }

    /// Two-column plot file, always .dat
    void dat(const std::string& stem, const std::vector<double>& xs, const std::vector<double>& ys) {
        auto os = open(stem + ".dat");
        write_dat(os, xs, ys);
    }

    void manifest(const std::string& command, const Globals& g, const json& params) {
        json m;
        m["command"] = command;
        m["seed"] = g.seed;
        m["workers"] = g.workers;
        m["format"] = g.format;
        m["parameters"] = params;
        m["outputs"] = files_;
        std::ofstream os(dir_ / "manifest.json");
        os << m.dump(2) << '\n';
    }
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------------------
// Benchmark options
// ---------------------------------------------------------------------------

struct BenchOptions {
    std::string cls = "uniform";
    std::vector<int> bounds{5};
    std::vector<long> ks{50};
    std::string linear_mode = "positive-optimum";
    std::string exp_mode = "index0";
    std::string same_cost = "proportional";

    FitnessDistribution dist() const {
        LinearMode lm;
        if (linear_mode == "positive-optimum") {
            lm = LinearMode::positive_optimum;
        } else if (linear_mode == "table") {
            lm = LinearMode::table;
        } else {
            throw ConfigError("unknown linear mode '" + linear_mode + "'");
        }
        ExponentialMode em;
        if (exp_mode == "index0") {
            em = ExponentialMode::index0;
        } else if (exp_mode == "table") {
            em = ExponentialMode::table;
        } else {
            throw ConfigError("unknown exponential mode '" + exp_mode + "'");
        }
        return build_benchmark(benchmark_from_string(cls), lm, em);
    }

    ClassModel model(int bound) const {
        return kernel_from_weights(dist(), bound, same_cost_rule_from_string(same_cost));
    }

    json to_json() const {
        return {{"class", cls},         {"b", bounds},         {"k", ks},
                {"linear_mode", linear_mode}, {"exp_mode", exp_mode}, {"same_cost", same_cost}};
    }

    void add_to(CLI::App* app, const std::string& k_help) {
        app->add_option("--class", cls, "uniform, linear, steep-linear or exponential")->capture_default_str();
        app->add_option("--b", bounds, "neighbour cost bounds; r(k,δ) = 0 beyond δ = b")->capture_default_str();
        app->add_option("--k", ks, k_help)->capture_default_str();
        app->add_option("--linear-mode", linear_mode, "positive-optimum or table")->capture_default_str();
        app->add_option("--exp-mode", exp_mode, "index0 or table")->capture_default_str();
        app->add_option("--same-cost", same_cost, "proportional, match-p or zero")->capture_default_str();
    }
};

Cost max_k(const std::vector<long>& ks) {
    long m = 0;
    for (long k : ks) {
        if (k < 0) {
            throw ConfigError("cost levels must be non-negative");
        }
        m = std::max(m, k);
    }
    return static_cast<Cost>(m);
}

int cmd_bench_improve(const Globals& g, const BenchOptions& o) {
    Output out(g);
    const auto d = o.dist();
    const Cost k_hi = std::min<Cost>(max_k(o.ks), d.k_max());
    Table t{{"b", "k", "p_less", "pn_less"}, {}};
    std::vector<double> xs, blind;
    for (Cost k = 0; k <= k_hi; ++k) {
        xs.push_back(k);
        blind.push_back(blind_improve_prob(d, k));
    }
    out.dat("p", [&] {
        std::vector<double> all;
        for (Cost k = 0; k <= d.k_max(); ++k) {
            all.push_back(k);
        }
        return all;
    }(), d.probs());
    out.dat("p_less", xs, blind);
    for (int b : o.bounds) {
        const auto m = o.model(b);
        std::vector<double> pn;
        for (Cost k = 0; k <= k_hi; ++k) {
            pn.push_back(nbr_improve_prob(m.kernel(), k));
        }
        out.dat("pn_less_b" + std::to_string(b), xs, pn);
        for (long k : o.ks) {
            const double pl = blind_improve_prob(d, static_cast<Cost>(k));
            const double nl = nbr_improve_prob(m.kernel(), static_cast<Cost>(k));
            t.rows.push_back({static_cast<double>(b), static_cast<double>(k), pl, nl});
            std::cout << o.cls << " b=" << b << " k=" << k << ": p<(k)=" << num(pl) << " pn<(k)=" << num(nl) << '\n';
        }
    }
    out.table("improve", t);
    out.manifest("bench improve", g, o.to_json());
    return kExitOk;
}

int cmd_bench_onestep(const Globals& g, const BenchOptions& o) {
    Output out(g);
    Table t{{"b", "k", "e_imp", "en_imp"}, {}};
    for (int b : o.bounds) {
        const auto m = o.model(b);
        for (long k : o.ks) {
            const double e = expected_one_step_improvement(m, static_cast<Cost>(k), SearchMode::blind);
            const double en = expected_one_step_improvement(m, static_cast<Cost>(k), SearchMode::neighbourhood);
            t.rows.push_back({static_cast<double>(b), static_cast<double>(k), e, en});
            std::cout << o.cls << " b=" << b << " k=" << k << ": e_imp=" << num(e) << " en_imp=" << num(en) << '\n';
        }
    }
    out.table("onestep", t);
    out.manifest("bench onestep", g, o.to_json());
    return kExitOk;
}

int cmd_bench_steps(const Globals& g, const BenchOptions& o) {
    Output out(g);
    const Cost k_hi = max_k(o.ks);
    Table t{{"b", "k", "steps", "blind"}, {}};
    for (int b : o.bounds) {
        const auto prof = steps(o.model(b), k_hi);
        std::vector<double> xs;
        for (Cost k = 0; k <= k_hi; ++k) {
            xs.push_back(k);
        }
        out.dat("steps_b" + std::to_string(b), xs, prof.values);
        for (long k : o.ks) {
            t.rows.push_back({static_cast<double>(b), static_cast<double>(k), prof.at(static_cast<Cost>(k)), prof.blind});
            std::cout << o.cls << " b=" << b << " steps(" << k << ")=" << num(prof.at(static_cast<Cost>(k)))
                      << " blind=" << num(prof.blind) << '\n';
        }
    }
    out.table("steps", t);
    out.manifest("bench steps", g, o.to_json());
    return kExitOk;
}

int cmd_bench_seeded(const Globals& g, const BenchOptions& o, long scan_hi) {
    Output out(g);
    const Cost k_hi = std::max<Cost>(max_k(o.ks), static_cast<Cost>(scan_hi));
    Table t{{"b", "k", "blind_seeded", "blind"}, {}};
    for (int b : o.bounds) {
        const auto m = o.model(b);
        const auto prof = steps(m, k_hi);
        for (long k : o.ks) {
            const double v = blind_seeded_steps(m, prof, static_cast<Cost>(k));
            t.rows.push_back({static_cast<double>(b), static_cast<double>(k), v, prof.blind});
            std::cout << o.cls << " b=" << b << " blind-seeded(" << k << ")=" << num(v) << '\n';
        }
        const auto sp = switch_point(m, static_cast<Cost>(scan_hi));
        std::vector<double> xs;
        for (Cost k = 0; k <= static_cast<Cost>(scan_hi); ++k) {
            xs.push_back(k);
        }
        out.dat("seeded_b" + std::to_string(b), xs, sp.seeded);
        std::cout << o.cls << " b=" << b << " switch: blind until cost < " << sp.best_threshold << " ("
                  << num(sp.best_steps) << " trials)";
        if (sp.improvement_crossover) {
            std::cout << ", one blind step beats one neighbour step from k=" << *sp.improvement_crossover;
        }
        std::cout << '\n';
    }
    out.table("seeded", t);
    json params = o.to_json();
    params["scan_hi"] = scan_hi;
    out.manifest("bench seeded", g, params);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Counts classes
// ---------------------------------------------------------------------------

struct CountsOptions {
    std::string spec_file;
    std::vector<double> counts{1, 5, 25, 125, 625, 3125, 15625, 78125, 390625};
    double total = 500000;
    std::vector<double> weights{4, 3.5, 3, 0.5};
    int size = 0;
    bool require_nsf = false;

    /// Spec file values first, then any flag given on the command line
    CountsClassSpec resolve(const CLI::App* app) const {
        CountsClassSpec spec{size, counts, total, weights, require_nsf};
        if (!spec_file.empty()) {
            std::ifstream is(spec_file);
            if (!is) {
                throw ConfigError("cannot read spec file '" + spec_file + "'");
            }
            const auto cfg = parse_config(is);
            const auto from_file = counts_spec_from_config(cfg);
            if (app->count("--counts") == 0) {
                spec.counts = from_file.counts;
            }
            if (app->count("--total") == 0) {
                spec.total = from_file.total;
            }
            if (app->count("--weights") == 0) {
                spec.weights = from_file.weights;
            }
            if (app->count("--size") == 0 && cfg.count("size")) {
                spec.size = from_file.size;
            }
        }
        if (spec.size == 0) {
            spec.size = static_cast<int>(spec.counts.size());
        }
        return spec;
    }

    void add_to(CLI::App* app) {
        app->add_option("--spec", spec_file, "key = value file with counts, total, weights and optional size");
        app->add_option("--counts", counts, "points per listed cost level, optimum first")->capture_default_str();
        app->add_option("--total", total, "points in the whole search space")->capture_default_str();
        app->add_option("--weights", weights, "r(_,δ) for δ = 1..size div 2")->capture_default_str();
        app->add_option("--size", size, "listed levels (default: number of counts)");
        app->add_flag("--require-nsf", require_nsf, "reject weights that increase with δ");
    }
};

json spec_json(const CountsClassSpec& s) {
    return {{"size", s.size}, {"counts", s.counts}, {"total", s.total}, {"weights", s.weights},
            {"require_nsf", s.require_nsf}};
}

int cmd_class_steps(const Globals& g, const CountsClassSpec& spec) {
    Output out(g);
    const auto cc = build_counts_class(spec);
    const auto prof = steps(cc.model, cc.eval_level);
    Table t{{"k", "steps", "blind"}, {}};
    for (Cost k = 0; k <= cc.eval_level; ++k) {
        t.rows.push_back({static_cast<double>(k), prof.at(k), prof.blind});
    }
    out.table("class_steps", t);
    {
        auto os = out.open("class_model.json");
        os << to_json(cc.model).dump() << '\n';
    }
    std::cout.precision(17);
    std::cout << "steps(" << cc.eval_level << ") = " << prof.at(cc.eval_level) << '\n'
              << "blind = " << prof.blind << '\n'
              << "far weight at the evaluation level = " << cc.far_weight << '\n'
              << "verdict: " << (prof.at(cc.eval_level) < prof.blind ? "descent beats blind" : "blind at least as good")
              << '\n';
    out.manifest("class steps", g, spec_json(spec));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Analytic 2-SAT class
// ---------------------------------------------------------------------------

struct SatOptions {
    int n_vars = 50, n_clauses = 100, clause_len = 2, occurrences = 4;
    double denominator = 0.0;
    double falsify = 0.0;
    long k = 20;

    Sat2Spec spec() const { return {n_vars, n_clauses, clause_len, occurrences}; }
    Sat2Conventions conv() const { return {denominator, falsify}; }

    json to_json() const {
        return {{"n_vars", n_vars},           {"n_clauses", n_clauses}, {"clause_len", clause_len},
                {"occurrences", occurrences}, {"denominator", denominator}, {"falsify", falsify},
                {"k", k}};
    }
};

int cmd_sat2(const Globals& g, const SatOptions& o) {
    Output out(g);
    const auto m = build_sat2_analytic(o.spec(), o.conv());
    const Cost modal = modal_cost(m.dist());
    std::vector<double> xs;
    for (Cost c = 0; c <= m.k_max(); ++c) {
        xs.push_back(c);
    }
    out.dat("sat2_p", xs, m.dist().probs());

    const Cost k = static_cast<Cost>(o.k);
    if (k < 1 || k > m.k_max()) {
        throw ConfigError("--k must lie in 1..n_clauses");
    }
    Table near{{"delta", "r", "p_below", "r_times_p", "pn_below"}, {}};
    for (int d = 1; d <= k; ++d) {
        const double r = m.r(k, d).value_or(0.0);
        if (r == 0.0 && m.pn(k, k - d) == 0.0) {
            break;
        }
        near.rows.push_back({static_cast<double>(d), r, m.p(k - d), r * m.p(k - d), m.pn(k, k - d)});
    }
    out.table("sat2_level" + std::to_string(k), near);

    Table levels{{"k", "rbar", "p_less", "pbr_less", "pn_less"}, {}};
    Cost last_rbar = -1, last_beat = -1;
    for (Cost c = 1; c <= m.k_max(); ++c) {
        const auto q = improvement_quantities(m, c);
        levels.rows.push_back({static_cast<double>(c), q.rbar, q.p_less, q.pbr_less, q.pn_less});
        if (c <= modal) {
            last_rbar = q.rbar > 1.0 ? c : last_rbar;
            last_beat = q.pn_less > q.p_less ? c : last_beat;
        }
    }
    out.table("sat2_levels", levels);
    std::cout << "peak: cost " << modal << ", p = " << num(m.p(modal)) << '\n';
    for (const auto& r : near.rows) {
        std::cout << "k=" << k << " delta=" << r[0] << ": r=" << num(r[1]) << " p=" << num(r[2])
                  << " r*p=" << num(r[3]) << " pn=" << num(r[4]) << '\n';
    }
    const auto q = improvement_quantities(m, k);
    std::cout << "k=" << k << ": mean weight " << num(q.rbar) << ", p< " << num(q.p_less) << ", pbr< "
              << num(q.pbr_less) << ", pn< " << num(q.pn_less) << ", pn(k,k) " << num(m.pn(k, k)) << '\n'
              << "largest k <= " << modal << " with mean weight > 1: " << last_rbar << '\n'
              << "largest k <= " << modal << " with pn<(k) > p<(k): " << last_beat << '\n';
    out.manifest("sat2", g, o.to_json());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// TSP censuses
// ---------------------------------------------------------------------------

struct TspOptions {
    int n = 10;
    int max_edge = 20;
    int instances = 20;
    std::uint64_t samples = 0;
    long target_k = -1;
    long k_lo = -1, k_hi = -1;
    bool save_instances = false;

    json to_json() const {
        return {{"n", n},         {"max_edge", max_edge}, {"instances", instances}, {"samples", samples},
                {"target_k", target_k}, {"k_lo", k_lo}, {"k_hi", k_hi}, {"save_instances", save_instances}};
    }
};

CensusReport run_census(const Globals& g, const TspOptions& o, Output& out) {
    if (o.instances < 1) {
        throw ConfigError("--instances must be at least 1");
    }
    std::vector<TspInstance> insts;
    for (int i = 0; i < o.instances; ++i) {
        insts.push_back(gen_tsp(o.n, o.max_edge, g.seed + static_cast<std::uint64_t>(i)));
        if (o.save_instances) {
            auto os = out.open("tsp_instance_" + std::to_string(i) + ".txt");
            write_tsp(os, insts.back());
        }
    }
    if (o.samples == 0) {
        if (TspLandscape::enumerable_points(o.n) == 0) {
            throw ResourceLimit("exhaustive enumeration is limited to 10 cities; pass --samples for a sampled census");
        }
        return census_exhaustive(insts, g.workers);
    }
    std::optional<long> target;
    if (o.target_k >= 0) {
        target = o.target_k;
    }
    return census_sampled<TspLandscape>(insts, o.samples, target, g.seed, g.workers);
}

std::pair<long, long> nsf_range(const CensusReport& c, const TspOptions& o) {
    if (c.mode == SampleMode::sampled) {
        return {*c.target, *c.target};
    }
    return {o.k_lo >= 0 ? o.k_lo : c.optimum() + 1, o.k_hi >= 0 ? o.k_hi : c.ge_level()};
}

void print_nsf_summary(const NsfReport& rep) {
    std::size_t rbar_ok = 0, pbr_ok = 0, defined = 0;
    for (const auto& lvl : rep.levels) {
        if (lvl.rbar) {
            ++defined;
            rbar_ok += *lvl.rbar > 1.0 ? 1 : 0;
            pbr_ok += lvl.pbr_bound_holds ? 1 : 0;
        }
    }
    std::cout << "normal pairs " << rep.normal_ok << "/" << rep.normal_checked << ", monotone pairs "
              << rep.monotone_ok << "/" << rep.monotone_checked << ", mean weight > 1 at " << rbar_ok << "/"
              << defined << " levels, weighted bound at " << pbr_ok << "/" << defined << " levels\n";
}

int cmd_tsp_census(const Globals& g, const TspOptions& o) {
    Output out(g);
    const auto census = run_census(g, o, out);
    {
        auto os = out.open("census.csv");
        write_census_csv(os, census);
    }
    std::vector<double> xs, ps, blind, nbr;
    for (long c = 0; c <= census.max_cost(); ++c) {
        if (census.counts[static_cast<std::size_t>(c)] > 0) {
            xs.push_back(static_cast<double>(c));
            ps.push_back(census.p_hat(c));
        }
    }
    out.dat("p_hat", xs, ps);
    const auto [lo, hi] = nsf_range(census, o);
    const auto rep = nsf_report(census, lo, hi);
    Table lv{{"k", "rbar", "p_less", "pbr_less", "pn_less"}, {}};
    std::vector<double> ks;
    for (const auto& l : rep.levels) {
        lv.rows.push_back({static_cast<double>(l.k), l.rbar.value_or(std::nan("")), l.p_less, l.pbr_less, l.pn_less});
        ks.push_back(static_cast<double>(l.k));
        blind.push_back(l.p_less);
        nbr.push_back(l.pn_less);
    }
    out.table("levels", lv);
    out.dat("improve_blind", ks, blind);
    out.dat("improve_2opt", ks, nbr);
    std::cout << census.points << " points, optimum " << census.optimum() << ", modal " << census.modal()
              << ", good-enough " << census.ge_level() << ", levels " << lo << ".." << hi << '\n';
    print_nsf_summary(rep);
    out.manifest("tsp census", g, o.to_json());
    return kExitOk;
}

int cmd_tsp_nsf(const Globals& g, const TspOptions& o) {
    Output out(g);
    const auto census = run_census(g, o, out);
    const auto [lo, hi] = nsf_range(census, o);
    const auto rep = nsf_report(census, lo, hi);
    {
        auto os = out.open("nsf.csv");
        write_nsf_csv(os, rep, &census);
    }
    for (const auto& pr : rep.pairs) {
        if (pr.r && (!pr.normal || (pr.monotone && !*pr.monotone))) {
            std::cout << "k=" << pr.k << " delta=" << pr.delta << " r=" << num(*pr.r)
                      << (pr.normal ? "" : " not normal") << (pr.monotone && !*pr.monotone ? " not monotone" : "")
                      << '\n';
        }
    }
    print_nsf_summary(rep);
    out.manifest("tsp nsf", g, o.to_json());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Monte-Carlo runs
// ---------------------------------------------------------------------------

struct SimOptions {
    std::string source = "bench";
    BenchOptions bench;
    CountsOptions counts;
    int bound = 5;
    std::size_t runs = 1000;
    long k = 20;
    long target = 0;
    std::string accept = "strict";
    std::uint64_t cap = 1'000'000;
    std::string trace = "summary";
    int n = 10, max_edge = 20;
    std::uint64_t instance_seed = 1;

    TraceDetail detail() const {
        if (trace == "summary") {
            return TraceDetail::summary;
        }
        if (trace == "accepted") {
            return TraceDetail::accepted;
        }
        if (trace == "full") {
            return TraceDetail::full;
        }
        throw ConfigError("unknown trace detail '" + trace + "'");
    }
};

int cmd_simulate(const Globals& g, const std::string& kind, const SimOptions& o, const CLI::App* app) {
    Output out(g);
    const AcceptRule rule = accept_rule_from_string(o.accept);
    const TraceDetail detail = o.detail();
    const std::uint64_t kind_id = kind == "blind" ? 0 : kind == "descent" ? 1 : 2;
    json params = {{"source", o.source}, {"kind", kind},   {"runs", o.runs},   {"k", o.k},
                   {"target", o.target}, {"accept", o.accept}, {"cap", o.cap}, {"trace", o.trace}};
    std::vector<Trace> traces;
    std::optional<double> predicted;
    if (o.source == "bench" || o.source == "class") {
        std::optional<ClassModel> model;
        if (o.source == "bench") {
            model = o.bench.model(o.bound);
            params["class"] = o.bench.cls;
            params["b"] = o.bound;
        } else {
            const auto spec = o.counts.resolve(app);
            model = build_counts_class(spec).model;
            params["counts_class"] = spec_json(spec);
        }
        const ModelSampler s(*model);
        const Cost k = static_cast<Cost>(o.k);
        traces = simulate_many(o.runs, g.seed, kind_id, g.workers, [&](Rng& rng) {
            if (kind == "blind") {
                return run_blind(s, k, rng, o.cap, detail);
            }
            if (kind == "descent") {
                return run_descent(s, k, rule, rng, o.cap, static_cast<Cost>(o.target), detail);
            }
            return run_seeded(s, k, rule, rng, o.cap, detail);
        });
        if (rule == AcceptRule::strict) {
            if (kind == "blind") {
                predicted = 1.0 / blind_improve_prob(model->dist(), k + 1);
            } else if (kind == "descent" && o.target == 0) {
                predicted = steps(*model, k).at(k);
            } else if (kind == "seeded") {
                predicted = blind_seeded_steps(*model, k);
            }
        }
    } else if (o.source == "tsp" || o.source == "sat") {
        params["instance_seed"] = o.instance_seed;
        auto run_on = [&](const auto& land) {
            return simulate_many(o.runs, g.seed, kind_id, g.workers, [&](Rng& rng) {
                if (kind == "blind") {
                    return run_blind(land, o.k, rng, o.cap, detail);
                }
                if (kind == "descent") {
                    return run_descent(land, land.random_point(rng), rule, rng, o.cap, o.target, detail);
                }
                return run_seeded(land, o.k, rule, rng, o.cap, o.target, detail);
            });
        };
        if (o.source == "tsp") {
            params["n"] = o.n;
            params["max_edge"] = o.max_edge;
            const auto inst = gen_tsp(o.n, o.max_edge, o.instance_seed);
            traces = run_on(TspLandscape(inst));
        } else {
            const auto inst = gen_sat2(o.instance_seed);
            traces = run_on(SatLandscape(inst));
        }
    } else {
        throw ConfigError("unknown source '" + o.source + "'; use bench, class, tsp or sat");
    }
    const auto st = aggregate(traces);
    {
        auto os = out.open("stats.csv");
        write_stats_csv(os, st);
    }
    if (detail != TraceDetail::summary) {
        auto os = out.open("traces.csv");
        write_traces_csv(os, traces);
    }
    std::cout << st.runs << " runs: mean " << num(st.mean) << " trials (se " << num(st.std_error) << "), median "
              << num(st.median) << ", reached " << num(st.success_fraction) << ", stuck " << num(st.stuck_fraction)
              << '\n';
    if (predicted) {
        std::cout << "recursion predicts " << num(*predicted) << " ("
                  << num((st.mean - *predicted) / std::max(st.std_error, 1e-300)) << " se away)\n";
        params["predicted"] = *predicted;
    }
    out.manifest("simulate " + kind, g, params);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::size_t models = 1000;
    std::vector<std::string> only;
    bool falsify = false;
    double resolution = 0.25;
    double epsilon = 0.05;
    double r_max = 100.0;
};

int run_falsifier(const Globals& g, Output& out, const CountsClassSpec& spec, const VerifyOptions& o) {
    const auto res = falsify_weights(spec, o.resolution, o.epsilon, o.r_max);
    Table t{{"steps", "blind"}, {}};
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        t.columns.push_back("r" + std::to_string(i + 1));
    }
    for (const auto& v : res.violations) {
        std::vector<double> row{v.steps, v.blind};
        row.insert(row.end(), v.weights.begin(), v.weights.end());
        t.rows.push_back(std::move(row));
    }
    out.table("falsify_violations", t);
    std::cout << "falsifier: " << res.violations.size() << " violations among " << res.feasible << " feasible of "
              << res.examined << " examined weight vectors (grid of " << res.grid_points << " values)\n";
    (void)g;
    return res.violations.empty() ? kExitOk : kExitViolation;
}

int cmd_verify(const Globals& g, const VerifyOptions& o, const CountsClassSpec& spec) {
    Output out(g);
    auto reports = run_improvement_suites(o.models, g.seed);
    for (auto& r : run_descent_suites(o.models, g.seed + 1)) {
        reports.push_back(std::move(r));
    }
    reports.push_back(run_counterexample_suite());
    std::vector<std::string> known;
    for (const auto& r : reports) {
        known.push_back(r.name);
    }
    for (const auto& name : o.only) {
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            std::string list;
            for (const auto& k : known) {
                list += (list.empty() ? "" : ", ") + k;
            }
            throw ConfigError("unknown suite '" + name + "'; known suites: " + list);
        }
    }
    int code = kExitOk;
    json results = json::array();
    for (const auto& r : reports) {
        if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), r.name) == o.only.end()) {
            continue;
        }
        std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.checked << " checked, " << r.violations
                  << " violations" << (r.first_violation.empty() ? "" : " (first: " + r.first_violation + ")")
                  << '\n';
        results.push_back({{"name", r.name},
                           {"models", r.models},
                           {"checked", r.checked},
                           {"violations", r.violations},
                           {"first_violation", r.first_violation}});
        if (!r.passed()) {
            code = kExitViolation;
        }
    }
    {
        auto os = out.open("verify.json");
        os << results.dump(2) << '\n';
    }
    json params = {{"models", o.models}, {"only", o.only}, {"falsify", o.falsify}};
    if (o.falsify) {
        params["resolution"] = o.resolution;
        params["epsilon"] = o.epsilon;
        params["r_max"] = o.r_max;
        params["counts_class"] = spec_json(spec);
        if (run_falsifier(g, out, spec, o) != kExitOk) {
            code = kExitViolation;
        }
    }
    out.manifest("verify", g, params);
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neighbour-similar-fitness analysis: benchmark tables, counts classes, censuses and "
                 "verification suites"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file; keys name options with their subcommand path, e.g. "
                                   "bench.steps.k = 30; command-line flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    Globals g;
    const char* env_out = std::getenv("NSF_OUT_DIR");
    g.out_dir = env_out && *env_out ? env_out : "nsf_out";
    app.add_option("--out", g.out_dir, "output directory (default from NSF_OUT_DIR, else nsf_out)")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--workers", g.workers, "worker threads, 0 for all cores; results do not depend on it")
        ->capture_default_str();
    app.add_option("--format", g.format, "table format: csv, json or dat")->capture_default_str();

    std::function<int()> action;

    // bench
    auto* bench = app.add_subcommand("bench", "benchmark classes with a bounded NSF kernel");
    bench->require_subcommand(1);
    BenchOptions bo;
    long scan_hi = 50;
    auto* b_improve = bench->add_subcommand("improve", "blind and neighbour improvement probabilities");
    bo.add_to(b_improve, "cost levels to tabulate; plot files run from 0 to the largest");
    b_improve->callback([&] { action = [&] { return cmd_bench_improve(g, bo); }; });
    auto* b_onestep = bench->add_subcommand("onestep", "expected improvement in one blind or neighbour step");
    bo.add_to(b_onestep, "start costs");
    b_onestep->callback([&] { action = [&] { return cmd_bench_onestep(g, bo); }; });
    auto* b_steps = bench->add_subcommand("steps", "expected local-descent trials from each start cost");
    bo.add_to(b_steps, "start costs");
    b_steps->callback([&] { action = [&] { return cmd_bench_steps(g, bo); }; });
    auto* b_seeded = bench->add_subcommand("seeded", "blind sampling until cost <= k, then descent");
    bo.add_to(b_seeded, "switch costs");
    b_seeded->add_option("--scan", scan_hi, "highest switch cost scanned for the best switch")->capture_default_str();
    b_seeded->callback([&] { action = [&] { return cmd_bench_seeded(g, bo, scan_hi); }; });

    // class
    auto* cls = app.add_subcommand("class", "classes given by point counts and a weight profile");
    cls->require_subcommand(1);
    CountsOptions co;
    auto* c_steps = cls->add_subcommand("steps", "expected descent trials at the middle listed level");
    co.add_to(c_steps);
    c_steps->callback([&] { action = [&] { return cmd_class_steps(g, co.resolve(c_steps)); }; });

    // sat2
    SatOptions so;
    auto* sat = app.add_subcommand("sat2", "analytic degree-regular 2-SAT class with the flip neighbourhood");
    sat->add_option("--vars", so.n_vars, "variables")->capture_default_str();
    sat->add_option("--clauses", so.n_clauses, "clauses")->capture_default_str();
    sat->add_option("--clause-len", so.clause_len, "literals per clause")->capture_default_str();
    sat->add_option("--occurrences", so.occurrences, "occurrences of each variable")->capture_default_str();
    sat->add_option("--denominator", so.denominator, "cost k gives clause-false chance k/denominator; 0 = clauses")
        ->capture_default_str();
    sat->add_option("--falsify", so.falsify, "chance a flip breaks a satisfied clause; 0 = 1/(2^len - 1)")
        ->capture_default_str();
    sat->add_option("--k", so.k, "cost level for the per-δ table")->capture_default_str();
    sat->callback([&] { action = [&] { return cmd_sat2(g, so); }; });

    // tsp
    TspOptions to;
    auto* tsp = app.add_subcommand("tsp", "random-distance TSP classes with the 2-opt neighbourhood");
    tsp->require_subcommand(1);
    auto add_tsp = [&](CLI::App* a) {
        a->add_option("--n", to.n, "cities")->capture_default_str();
        a->add_option("--max-edge", to.max_edge, "edge lengths are uniform on 1..max-edge")->capture_default_str();
        a->add_option("--instances", to.instances, "instances; instance i uses seed + i")->capture_default_str();
        a->add_option("--samples", to.samples, "sampled census size; 0 enumerates every tour")->capture_default_str();
        a->add_option("--target-k", to.target_k, "surveyed cost of a sampled census; -1 = midpoint")
            ->capture_default_str();
        a->add_option("--k-lo", to.k_lo, "lowest level in the NSF report; -1 = optimum + 1");
        a->add_option("--k-hi", to.k_hi, "highest level in the NSF report; -1 = good-enough cost");
        a->add_flag("--save-instances", to.save_instances, "write each instance as plain text");
    };
    auto* t_census = tsp->add_subcommand("census", "cost counts, improvement probabilities and level summary");
    add_tsp(t_census);
    t_census->callback([&] { action = [&] { return cmd_tsp_census(g, to); }; });
    auto* t_nsf = tsp->add_subcommand("nsf", "per-(k,δ) weight, normality and monotonicity verdicts");
    add_tsp(t_nsf);
    t_nsf->callback([&] { action = [&] { return cmd_tsp_nsf(g, to); }; });

    // simulate
    SimOptions sim;
    auto* simc = app.add_subcommand("simulate", "Monte-Carlo search runs");
    simc->require_subcommand(1);
    for (const std::string kind : {"blind", "descent", "seeded"}) {
        const char* help = kind == "blind"      ? "blind sampling until cost <= k"
                           : kind == "descent" ? "descent from cost k (random start on instances)"
                                               : "blind until cost <= k, then descent";
        auto* s = simc->add_subcommand(kind, help);
        s->add_option("--source", sim.source, "bench, class, tsp or sat")->capture_default_str();
        s->add_option("--class", sim.bench.cls, "benchmark class for --source bench")->capture_default_str();
        s->add_option("--b", sim.bound, "neighbour cost bound for --source bench")->capture_default_str();
        s->add_option("--same-cost", sim.bench.same_cost, "same-cost rule for --source bench")->capture_default_str();
        s->add_option("--spec", sim.counts.spec_file, "counts-class file for --source class");
        s->add_option("--counts", sim.counts.counts, "counts for --source class");
        s->add_option("--total", sim.counts.total, "total points for --source class");
        s->add_option("--weights", sim.counts.weights, "weights for --source class");
        s->add_option("--runs", sim.runs, "independent runs")->capture_default_str();
        s->add_option("--k", sim.k, "blind target, descent start or seeding threshold")->capture_default_str();
        s->add_option("--target", sim.target, "descent stops at cost <= target")->capture_default_str();
        s->add_option("--accept", sim.accept, "strict or plateau")->capture_default_str();
        s->add_option("--cap", sim.cap, "trial cap per run")->capture_default_str();
        s->add_option("--trace", sim.trace, "summary, accepted or full")->capture_default_str();
        s->add_option("--n", sim.n, "cities for --source tsp")->capture_default_str();
        s->add_option("--max-edge", sim.max_edge, "edge bound for --source tsp")->capture_default_str();
        s->add_option("--instance-seed", sim.instance_seed, "instance seed for tsp and sat")->capture_default_str();
        s->callback([&, kind, s] {
            if (sim.source == "class" && s->count("--k") == 0) {
                sim.k = -1;
            }
            action = [&, kind, s] {
                if (sim.source == "class" && sim.k < 0) {
                    sim.k = sim.counts.resolve(s).size / 2;
                }
                return cmd_simulate(g, kind, sim, s);
            };
        });
    }

    // verify and falsify
    VerifyOptions vo;
    CountsOptions fo;
    fo.weights = {1, 1, 1, 1};
    auto* ver = app.add_subcommand("verify", "randomized property suites and the counter-example fixtures");
    ver->add_option("--models", vo.models, "random models per suite")->capture_default_str();
    ver->add_option("--only", vo.only, "run only the named suites");
    ver->add_flag("--falsify", vo.falsify, "also run the weight-grid falsifier");
    ver->add_option("--resolution", vo.resolution, "falsifier grid step")->capture_default_str();
    ver->add_option("--epsilon", vo.epsilon, "falsifier grid start; r(_,1) must exceed 1 + epsilon")
        ->capture_default_str();
    ver->add_option("--r-max", vo.r_max, "largest weight on the falsifier grid")->capture_default_str();
    ver->add_option("--spec", fo.spec_file, "counts class for the falsifier (default: geometric counts)");
    ver->callback([&] { action = [&] { return cmd_verify(g, vo, fo.resolve(ver)); }; });

    auto* fal = app.add_subcommand("falsify", "search non-increasing weight vectors for descent losing to blind");
    fo.add_to(fal);
    fal->add_option("--resolution", vo.resolution, "grid step")->capture_default_str();
    fal->add_option("--epsilon", vo.epsilon, "grid start; r(_,1) must exceed 1 + epsilon")->capture_default_str();
    fal->add_option("--r-max", vo.r_max, "largest weight on the grid")->capture_default_str();
    fal->callback([&] {
        action = [&] {
            Output out(g);
            const auto spec = fo.resolve(fal);
            const int code = run_falsifier(g, out, spec, vo);
            out.manifest("falsify", g,
                         {{"resolution", vo.resolution},
                          {"epsilon", vo.epsilon},
                          {"r_max", vo.r_max},
                          {"counts_class", spec_json(spec)}});
            return code;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    try {
        return action();
    } catch (const InfeasibleWeights& e) {
        std::cerr << "error: infeasible weights (" << e.reason() << "): " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnreachableOptimum& e) {
        std::cerr << "error: " << e.what() << " (level " << e.level() << ")\n";
        return kExitConfig;
    } catch (const NoPointsAtTarget& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const ResourceLimit& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    }
}
