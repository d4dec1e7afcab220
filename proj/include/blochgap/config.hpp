#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "blochgap/bands.hpp"
#include "blochgap/cell_solver.hpp"
#include "blochgap/perturbation.hpp"

namespace blochgap {

// Zero means "choose automatically" for every integer field except tau_points.
struct SolverOptions {
    Truncation truncation;
    int tau_points = 257;
    int m_max = 0;
    int coarse_points = 256;
    double tau_resolution = 0.0;
    int threads = 0;
};

using IntersectionSelector = std::variant<int, std::pair<BandIndex, BandIndex>>;

struct RunOptions {
    std::vector<double> epsilons{0.05};
    double energy_cutoff = 100.0;
    std::optional<IntersectionSelector> intersection;
    std::optional<EnergyRange> window;
};

struct JobConfig {
    WaveguideConfig waveguide;
    PerturbationSpec perturbation;
    SolverOptions solver;
    RunOptions run;
    std::string canonical;  // compact sorted-key dump of the parsed document
    std::uint64_t hash = 0;
};

// Throws ConfigError listing every violation with its key path.
JobConfig parse_config(std::string_view text);
JobConfig load_config(const std::string& path);

std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::uint64_t h);

// Admissible intersections below the configured cutoff, in the order listed by the CLI.
std::vector<Intersection> admissible_intersections(const JobConfig& job);

// An explicit index refers to admissible_intersections(); a band pair may name any crossing.
Intersection select_intersection(const JobConfig& job, std::optional<int> index_override = {});

struct CatalogEntry {
    std::string name;
    std::string summary;
    std::string text;  // config document
};
const std::vector<CatalogEntry>& example_catalog();

}  // namespace blochgap
