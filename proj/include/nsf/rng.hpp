/// @file rng.hpp
/// @brief Seedable random streams derived from one master seed
///
/// Every run, instance or sampling pass asks for its own stream by id, so the numbers a
/// piece of work sees never depend on how work is split across threads.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace nsf {

using Rng = std::mt19937_64;

/// Independent generator for the stream named by ids under master
inline Rng derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * ids.size());
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master);
    for (std::uint64_t id : ids) {
        push(id);
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

/// Uniform double in [0, 1)
inline double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

} // namespace nsf
