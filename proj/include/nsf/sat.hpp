/// @file sat.hpp
/// @brief Degree-regular random SAT instances and the single-flip neighbourhood

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nsf/benchmarks.hpp>
#include <nsf/numeric.hpp>
#include <nsf/rng.hpp>

namespace nsf {

/// Clauses over variables 0..n_vars−1; literal +(v+1) or −(v+1) as in DIMACS
struct Sat2Instance {
    int n_vars = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> clauses;

    /// @throws ConfigError if a clause repeats a variable or occurrence counts differ from d
    void validate(int occurrences_per_var) const {
        std::vector<int> occ(static_cast<std::size_t>(n_vars), 0);
        for (const auto& c : clauses) {
            std::set<int> vars;
            for (int lit : c) {
                const int v = std::abs(lit) - 1;
                if (v < 0 || v >= n_vars) {
                    throw ConfigError("literal out of range");
                }
                if (!vars.insert(v).second) {
                    throw ConfigError("clause repeats a variable");
                }
                ++occ[static_cast<std::size_t>(v)];
            }
        }
        for (int o : occ) {
            if (o != occurrences_per_var) {
                throw ConfigError("variable occurrence count differs from the configuration");
            }
        }
    }
};

/// Random degree-regular instance by pairing variable stubs into clauses
///
/// Each variable gets occurrences_per_var stubs; a shuffled stub list is cut into clauses
/// and literal signs are drawn uniformly. A pairing that puts one variable twice in a
/// clause, or repeats a clause's variable set, is reshuffled.
/// @throws ResourceLimit after max_rounds failed pairings
inline Sat2Instance gen_sat2(std::uint64_t seed, const Sat2Spec& spec = {}, int max_rounds = 100000) {
    spec.validate();
    Rng rng = derive_stream(seed, {0x5a7});
    std::vector<int> stubs;
    for (int v = 0; v < spec.n_vars; ++v) {
        for (int i = 0; i < spec.occurrences_per_var; ++i) {
            stubs.push_back(v);
        }
    }
    const auto L = static_cast<std::size_t>(spec.clause_len);
    for (int round = 0; round < max_rounds; ++round) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        bool ok = true;
        std::set<std::vector<int>> seen;
        for (std::size_t c = 0; c < stubs.size() && ok; c += L) {
            std::vector<int> vars(stubs.begin() + static_cast<std::ptrdiff_t>(c),
                                  stubs.begin() + static_cast<std::ptrdiff_t>(c + L));
            std::sort(vars.begin(), vars.end());
            ok = std::adjacent_find(vars.begin(), vars.end()) == vars.end() && seen.insert(vars).second;
        }
        if (!ok) {
            continue;
        }
        Sat2Instance inst{spec.n_vars, seed, {}};
        std::bernoulli_distribution sign(0.5);
        for (std::size_t c = 0; c < stubs.size(); c += L) {
            std::vector<int> clause;
            for (std::size_t i = 0; i < L; ++i) {
                const int v = stubs[c + i] + 1;
                clause.push_back(sign(rng) ? -v : v);
            }
            inst.clauses.push_back(std::move(clause));
        }
        return inst;
    }
    throw ResourceLimit("no valid clause pairing after " + std::to_string(max_rounds) +
                        " rounds; retry with another seed");
}

/// Assignments seen through the single-flip neighbourhood; cost = unsatisfied clauses
class SatLandscape {
    const Sat2Instance* inst_;
    std::vector<std::vector<int>> occurs_; ///< clauses containing each variable

  public:
    using Point = std::vector<std::uint8_t>;

    explicit SatLandscape(const Sat2Instance& inst)
        : inst_(&inst), occurs_(static_cast<std::size_t>(inst.n_vars)) {
        for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
            for (int lit : inst.clauses[c]) {
                occurs_[static_cast<std::size_t>(std::abs(lit) - 1)].push_back(static_cast<int>(c));
            }
        }
    }

    const Sat2Instance& instance() const { return *inst_; }

    bool satisfied(const Point& x, std::size_t c) const {
        for (int lit : inst_->clauses[c]) {
            const bool val = x[static_cast<std::size_t>(std::abs(lit) - 1)] != 0;
            if ((lit > 0) == val) {
                return true;
            }
        }
        return false;
    }

    Point random_point(Rng& rng) const {
        Point x(static_cast<std::size_t>(inst_->n_vars));
        for (auto& b : x) {
            b = static_cast<std::uint8_t>(rng() & 1u);
        }
        return x;
    }

    long cost(const Point& x) const {
        long unsat = 0;
        for (std::size_t c = 0; c < inst_->clauses.size(); ++c) {
            unsat += satisfied(x, c) ? 0 : 1;
        }
        return unsat;
    }

    std::size_t neighbor_count() const { return static_cast<std::size_t>(inst_->n_vars); }

    long move_delta(const Point& x, std::size_t v) const {
        Point y = x;
        y[v] ^= 1u;
        long delta = 0;
        for (int c : occurs_[v]) {
            delta += (satisfied(x, static_cast<std::size_t>(c)) ? 1 : 0) -
                     (satisfied(y, static_cast<std::size_t>(c)) ? 1 : 0);
        }
        return delta;
    }

    void apply(Point& x, std::size_t v) const { x[v] ^= 1u; }

    long max_cost() const { return static_cast<long>(inst_->clauses.size()); }

    /// Visit all 2^n assignments
    template <typename Visit>
    void for_each_point(Visit&& visit) const {
        const auto n = static_cast<std::size_t>(inst_->n_vars);
        Point x(n, 0);
        const std::uint64_t total = std::uint64_t{1} << n;
        for (std::uint64_t code = 0; code < total; ++code) {
            for (std::size_t v = 0; v < n; ++v) {
                x[v] = static_cast<std::uint8_t>((code >> v) & 1u);
            }
            visit(static_cast<const Point&>(x));
        }
    }

    /// Number of assignments, or 0 above the enumeration limit
    static std::uint64_t enumerable_points(int n_vars, int limit = 20) {
        return n_vars > limit ? 0 : (std::uint64_t{1} << n_vars);
    }
};

/// DIMACS-style "p cnf" header and zero-terminated clause lines
inline void write_dimacs(std::ostream& os, const Sat2Instance& inst) {
    os << "c seed " << inst.seed << '\n';
    os << "p cnf " << inst.n_vars << ' ' << inst.clauses.size() << '\n';
    for (const auto& c : inst.clauses) {
        for (int lit : c) {
            os << lit << ' ';
        }
        os << "0\n";
    }
}

/// @throws ConfigError on malformed input
inline Sat2Instance read_dimacs(std::istream& is) {
    Sat2Instance inst;
    std::string line;
    std::size_t expected = 0;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        if (line[0] == 'c') {
            std::string c, key;
            if (ls >> c >> key && key == "seed") {
                ls >> inst.seed;
            }
            continue;
        }
        if (line[0] == 'p') {
            std::string p, fmt;
            if (!(ls >> p >> fmt >> inst.n_vars >> expected) || fmt != "cnf") {
                throw ConfigError("bad DIMACS header");
            }
            header = true;
            continue;
        }
        std::vector<int> clause;
        int lit = 0;
        while (ls >> lit && lit != 0) {
            clause.push_back(lit);
        }
        if (!clause.empty()) {
            inst.clauses.push_back(std::move(clause));
        }
    }
    if (!header || inst.clauses.size() != expected) {
        throw ConfigError("DIMACS clause count does not match the header");
    }
    return inst;
}

} // namespace nsf
