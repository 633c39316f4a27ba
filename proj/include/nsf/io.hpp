/// @file io.hpp
/// @brief JSON round trip for class models and the line-oriented key = value config format

#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <nsf/benchmarks.hpp>
#include <nsf/model.hpp>
#include <nsf/numeric.hpp>

namespace nsf {

/// {k_max, probs[], weights{k: [r or null per δ]}, rows[][]}
///
/// nlohmann::json prints the shortest decimal that reads back to the same double, which
/// never needs more than 17 significant digits.
inline nlohmann::json to_json(const ClassModel& m) {
    nlohmann::json j;
    j["k_max"] = m.k_max();
    j["probs"] = m.dist().probs();
    nlohmann::json weights = nlohmann::json::object();
    for (Cost k = 0; k <= m.k_max(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int d = 0; d <= m.k_max(); ++d) {
            if (const auto r = m.r(k, d)) {
                row.push_back(*r);
            } else {
                row.push_back(nullptr);
            }
        }
        weights[std::to_string(k)] = std::move(row);
    }
    j["weights"] = std::move(weights);
    nlohmann::json rows = nlohmann::json::array();
    for (Cost k = 0; k <= m.k_max(); ++k) {
        rows.push_back(m.kernel().row(k));
    }
    j["rows"] = std::move(rows);
    return j;
}

/// @throws ConfigError on missing fields or inconsistent content
inline ClassModel class_model_from_json(const nlohmann::json& j) {
    try {
        const Cost k_max = j.at("k_max").get<Cost>();
        FitnessDistribution dist(j.at("probs").get<std::vector<double>>());
        NeighborKernel kernel(j.at("rows").get<std::vector<std::vector<double>>>());
        if (dist.k_max() != k_max) {
            throw ConfigError("k_max does not match the probability list");
        }
        if (!j.contains("weights")) {
            return ClassModel(std::move(dist), std::move(kernel));
        }
        std::vector<std::vector<std::optional<double>>> rows(static_cast<std::size_t>(k_max) + 1);
        for (const auto& [key, row] : j.at("weights").items()) {
            const auto k = static_cast<std::size_t>(std::stoi(key));
            if (k >= rows.size()) {
                throw ConfigError("weight row outside the cost range");
            }
            for (const auto& v : row) {
                rows[k].push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
            }
        }
        return ClassModel(std::move(dist), std::move(kernel), NsfWeightTable(k_max, rows));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed class model JSON: ") + e.what());
    }
}

/// Parse "key = value" lines; '#' starts a comment, blank lines are ignored
/// @throws ConfigError on a line without '='
inline std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + " has no '='");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

/// Parse a comma- or space-separated list of numbers
/// @throws ConfigError on a non-numeric item
inline std::vector<double> parse_number_list(const std::string& text) {
    std::string s = text;
    for (char& c : s) {
        if (c == ',' || c == '[' || c == ']') {
            c = ' ';
        }
    }
    std::istringstream is(s);
    std::vector<double> out;
    std::string item;
    while (is >> item) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw ConfigError("bad number '" + item + "'");
            }
        } catch (const std::logic_error&) {
            throw ConfigError("bad number '" + item + "'");
        }
    }
    return out;
}

/// Counts class from config keys size, counts, total, weights
inline CountsClassSpec counts_spec_from_config(const std::map<std::string, std::string>& cfg) {
    CountsClassSpec spec;
    auto get = [&](const std::string& key) {
        const auto it = cfg.find(key);
        if (it == cfg.end()) {
            throw ConfigError("config is missing '" + key + "'");
        }
        return it->second;
    };
    spec.counts = parse_number_list(get("counts"));
    spec.total = parse_number_list(get("total")).at(0);
    spec.weights = parse_number_list(get("weights"));
    spec.size = cfg.count("size") ? static_cast<int>(parse_number_list(get("size")).at(0))
                                  : static_cast<int>(spec.counts.size());
    return spec;
}

} // namespace nsf
