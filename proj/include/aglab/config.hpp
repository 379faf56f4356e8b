#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aglab/adversary.hpp"
#include "aglab/identify.hpp"

namespace aglab {

/// Experiment description loaded from JSON (schema 1). Unknown fields are
/// rejected so that a typo cannot silently change an experiment.
///
///   {"schema": 1,
///    "instance": {"name": "id-lower", "params": {"distractors": 6}, "variant": "D0"},
///    "algorithm": {"name": "margin", "window": {"kind": "root", "degree": 4}},
///    "n_grid": [256, 1024], "trials": 1000, "seed": 7, "method": "auto", "format": "csv"}
///
/// Instead of "instance", a custom triple may be given:
///   "collection": {"name": "residue", "params": {"q": 2}},
///   "distribution": {"name": "finite", "atoms": [[2, 0.5], [4, 0.5]]},
///   "universe": {"kind": "naturals"}            (optional, checked)
struct ExperimentConfig {
    int schema = 1;

    std::optional<std::string> instance;
    std::vector<std::pair<std::string, std::string>> instance_params;
    std::optional<std::string> variant;     // "D0", "D1", ..., or "random"

    std::optional<nlohmann::json> collection;
    std::optional<nlohmann::json> distribution;
    std::optional<nlohmann::json> universe;

    std::optional<std::string> algorithm;   // margin | erm | witness | first-unseen
    std::optional<WindowFn> window;
    std::optional<std::uint64_t> generation_window;

    std::vector<std::uint64_t> n_grid;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::string method = "auto";            // auto | exact | mc
    std::optional<std::string> format;      // csv | json
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);

WindowFn parse_window(const nlohmann::json& j);
nlohmann::json to_json(const WindowFn& f);

// "1,2,4", "2..16", "pow2:1..12" (n = 2^k) or a mix separated by commas.
std::vector<std::uint64_t> parse_n_grid(const std::string& text);

// Instance from a config: named builder or custom triple. For custom triples
// the analytics come from scanning the first 64 languages.
Instance instance_from_config(const ExperimentConfig& c, const std::string& fallback_name);

// Collection and distribution constructors addressable by name.
Collection collection_by_name(const std::string& name, const nlohmann::json& params);
DistributionPtr distribution_from_json(const nlohmann::json& j, const Collection& C);

}  // namespace aglab
