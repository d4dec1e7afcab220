#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "blochgap/geometry.hpp"

namespace blochgap {

struct BandIndex {
    int j = 1;
    int p = 0;
    auto operator<=>(const BandIndex&) const = default;
};

std::string to_string(const BandIndex& b);

struct IntersectionFlags {
    bool simple_eigenvalues = false;
    bool opposite_slopes = false;
    bool isolated = false;
    bool at_zone_edge = false;  // tau0 = pi/T
};

struct Intersection {
    double tau0 = 0.0;
    double lambda0 = 0.0;
    double period = 1.0;
    BandIndex first;
    BandIndex second;
    double slope_first = 0.0;
    double slope_second = 0.0;
    IntersectionFlags flags;

    bool admissible() const { return flags.simple_eigenvalues && flags.opposite_slopes && flags.isolated; }
    // Comma-separated names of the conditions that fail; empty when admissible.
    std::string failing_conditions() const;
};

struct EnergyRange {
    double lo = 0.0;
    double hi = 0.0;
};

double band_value(double lambda_j, double period, int p, double tau);
double band_value(const WaveguideConfig& config, BandIndex idx, double tau);
double band_slope(double period, int p, double tau);

// Range over tau in [0, pi/T].
EnergyRange band_range(double lambda_j, double period, int p);
EnergyRange band_range(const WaveguideConfig& config, BandIndex idx);

// Largest |p| whose band can reach below `energy`.
int longitudinal_bound(double period, double energy);

std::vector<Intersection> find_intersections(const WaveguideConfig& config, double energy_cutoff);

bool isolation_check(const WaveguideConfig& config, double lambda0,
                     const std::pair<BandIndex, BandIndex>& excluded, double margin = 0.0);

// Distance from lambda0 to the nearest band range outside `excluded`, capped at lambda0 + 1.
double isolation_distance(const WaveguideConfig& config, double lambda0,
                          const std::pair<BandIndex, BandIndex>& excluded);

}  // namespace blochgap
