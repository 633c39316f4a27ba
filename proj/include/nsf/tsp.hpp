/// @file tsp.hpp
/// @brief Random symmetric TSP instances and the 2-opt neighbourhood

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nsf/numeric.hpp>
#include <nsf/rng.hpp>

namespace nsf {

/// Symmetric integer distance matrix over n cities
struct TspInstance {
    int n = 0;
    int max_edge = 0;
    std::uint64_t seed = 0;
    std::vector<int> dist; ///< row-major n×n

    int d(int a, int b) const {
        return dist[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)];
    }

    /// @throws ConfigError unless the matrix is symmetric with zero diagonal and entries in 1..max_edge
    void validate() const {
        if (n < 4 || dist.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
            throw ConfigError("TSP instance needs n >= 4 and an n x n matrix");
        }
        for (int a = 0; a < n; ++a) {
            if (d(a, a) != 0) {
                throw ConfigError("TSP matrix diagonal must be zero");
            }
            for (int b = a + 1; b < n; ++b) {
                if (d(a, b) != d(b, a) || d(a, b) < 1 || d(a, b) > max_edge) {
                    throw ConfigError("TSP matrix must be symmetric with entries in 1..max_edge");
                }
            }
        }
    }
};

/// Random instance with edge lengths drawn uniformly from 1..max_edge
///
/// No triangle inequality is imposed.
inline TspInstance gen_tsp(int n, int max_edge, std::uint64_t seed) {
    if (n < 4) {
        throw ConfigError("TSP needs at least 4 cities");
    }
    if (max_edge < 1) {
        throw ConfigError("max_edge must be at least 1");
    }
    TspInstance inst{n, max_edge, seed, std::vector<int>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0)};
    Rng rng = derive_stream(seed, {0x7359});
    std::uniform_int_distribution<int> edge(1, max_edge);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const int w = edge(rng);
            inst.dist[static_cast<std::size_t>(a * n + b)] = w;
            inst.dist[static_cast<std::size_t>(b * n + a)] = w;
        }
    }
    return inst;
}

/// Sum of successive distances including the closing edge
inline long tour_cost(const TspInstance& inst, const std::vector<int>& tour) {
    long total = 0;
    const std::size_t n = tour.size();
    for (std::size_t i = 0; i < n; ++i) {
        total += inst.d(tour[i], tour[(i + 1) % n]);
    }
    return total;
}

/// Position pairs (i, j) with i < j; the move reverses tour[i+1..j]
///
/// Edges (t[i],t[i+1]) and (t[j],t[j+1]) are replaced. Adjacent edges, and the pair of
/// edges meeting at t[0] when i = 0 and j = n−1, are excluded, leaving n(n−3)/2 moves.
inline std::vector<std::pair<int, int>> two_opt_moves(int n) {
    std::vector<std::pair<int, int>> moves;
    for (int i = 0; i < n - 2; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) {
                continue;
            }
            moves.emplace_back(i, j);
        }
    }
    return moves;
}

/// Cost change of reversing tour[i+1..j]
inline long two_opt_delta(const TspInstance& inst, const std::vector<int>& tour, int i, int j) {
    const int n = static_cast<int>(tour.size());
    const int a = tour[static_cast<std::size_t>(i)];
    const int b = tour[static_cast<std::size_t>(i + 1)];
    const int c = tour[static_cast<std::size_t>(j)];
    const int e = tour[static_cast<std::size_t>((j + 1) % n)];
    return static_cast<long>(inst.d(a, c)) + inst.d(b, e) - inst.d(a, b) - inst.d(c, e);
}

inline void apply_two_opt(std::vector<int>& tour, int i, int j) {
    std::reverse(tour.begin() + i + 1, tour.begin() + j + 1);
}

/// Every 2-opt neighbour of a tour
inline std::vector<std::vector<int>> two_opt_neighbors(const TspInstance& inst, const std::vector<int>& tour) {
    if (static_cast<int>(tour.size()) != inst.n) {
        throw ConfigError("tour length does not match the instance");
    }
    std::vector<std::vector<int>> out;
    for (const auto& [i, j] : two_opt_moves(inst.n)) {
        auto t = tour;
        apply_two_opt(t, i, j);
        out.push_back(std::move(t));
    }
    return out;
}

/// Tour space of one instance seen through the 2-opt neighbourhood
class TspLandscape {
    const TspInstance* inst_;
    std::vector<std::pair<int, int>> moves_;

  public:
    using Point = std::vector<int>;

    explicit TspLandscape(const TspInstance& inst) : inst_(&inst), moves_(two_opt_moves(inst.n)) {}

    const TspInstance& instance() const { return *inst_; }

    Point random_point(Rng& rng) const {
        Point t(static_cast<std::size_t>(inst_->n));
        std::iota(t.begin(), t.end(), 0);
        std::shuffle(t.begin() + 1, t.end(), rng);
        return t;
    }

    long cost(const Point& t) const { return tour_cost(*inst_, t); }

    std::size_t neighbor_count() const { return moves_.size(); }

    long move_delta(const Point& t, std::size_t m) const {
        return two_opt_delta(*inst_, t, moves_[m].first, moves_[m].second);
    }

    void apply(Point& t, std::size_t m) const { apply_two_opt(t, moves_[m].first, moves_[m].second); }

    /// Largest cost any tour can have
    long max_cost() const { return static_cast<long>(inst_->n) * inst_->max_edge; }

    /// Visit each undirected tour once: city 0 first and tour[1] < tour[n−1]
    template <typename Visit>
    void for_each_point(Visit&& visit) const {
        Point t(static_cast<std::size_t>(inst_->n));
        std::iota(t.begin(), t.end(), 0);
        do {
            if (t[1] < t.back()) {
                visit(static_cast<const Point&>(t));
            }
        } while (std::next_permutation(t.begin() + 1, t.end()));
    }

    /// Number of points for_each_point visits, or 0 if above the enumeration limit
    static std::uint64_t enumerable_points(int n, int limit_n = 10) {
        if (n > limit_n) {
            return 0;
        }
        std::uint64_t f = 1;
        for (int i = 2; i < n; ++i) {
            f *= static_cast<std::uint64_t>(i);
        }
        return f / 2;
    }
};

/// Header "n max_edge seed" then the lower triangle, one row per line
inline void write_tsp(std::ostream& os, const TspInstance& inst) {
    os << inst.n << ' ' << inst.max_edge << ' ' << inst.seed << '\n';
    for (int a = 1; a < inst.n; ++a) {
        for (int b = 0; b < a; ++b) {
            os << (b ? " " : "") << inst.d(a, b);
        }
        os << '\n';
    }
}

/// @throws ConfigError on malformed input
inline TspInstance read_tsp(std::istream& is) {
    TspInstance inst;
    if (!(is >> inst.n >> inst.max_edge >> inst.seed) || inst.n < 4) {
        throw ConfigError("bad TSP header");
    }
    inst.dist.assign(static_cast<std::size_t>(inst.n) * static_cast<std::size_t>(inst.n), 0);
    for (int a = 1; a < inst.n; ++a) {
        for (int b = 0; b < a; ++b) {
            int w = 0;
            if (!(is >> w)) {
                throw ConfigError("truncated TSP matrix");
            }
            inst.dist[static_cast<std::size_t>(a * inst.n + b)] = w;
            inst.dist[static_cast<std::size_t>(b * inst.n + a)] = w;
        }
    }
    inst.validate();
    return inst;
}

} // namespace nsf
