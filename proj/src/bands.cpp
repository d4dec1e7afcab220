#include "blochgap/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "blochgap/error.hpp"

namespace blochgap {

namespace {

constexpr double pi = std::numbers::pi;

double touch_tolerance(double lambda0) { return 1e-12 * std::max(1.0, std::abs(lambda0)); }

bool excluded_from(const BandIndex& b, const std::pair<BandIndex, BandIndex>& ex) {
    return b == ex.first || b == ex.second;
}

}  // namespace

std::string to_string(const BandIndex& b) {
    return "(" + std::to_string(b.j) + "," + std::to_string(b.p) + ")";
}

std::string Intersection::failing_conditions() const {
    std::string out;
    auto add = [&](const char* s) {
        if (!out.empty()) out += ", ";
        out += s;
    };
    if (!flags.simple_eigenvalues) add("simple_eigenvalues");
    if (!flags.opposite_slopes) add("opposite_slopes");
    if (!flags.isolated) add("isolated");
    return out;
}

double band_value(double lambda_j, double period, int p, double tau) {
    double k = tau + 2.0 * pi * p / period;
    return lambda_j + k * k;
}

double band_value(const WaveguideConfig& config, BandIndex idx, double tau) {
    return band_value(transverse_eigenvalue(config.cross_section, idx.j), config.period, idx.p, tau);
}

double band_slope(double period, int p, double tau) { return 2.0 * (tau + 2.0 * pi * p / period); }

EnergyRange band_range(double lambda_j, double period, int p) {
    double edge = pi / period;
    double vertex = std::clamp(-2.0 * pi * p / period, 0.0, edge);
    double a = band_value(lambda_j, period, p, 0.0);
    double b = band_value(lambda_j, period, p, edge);
    return {band_value(lambda_j, period, p, vertex), std::max(a, b)};
}

EnergyRange band_range(const WaveguideConfig& config, BandIndex idx) {
    return band_range(transverse_eigenvalue(config.cross_section, idx.j), config.period, idx.p);
}

int longitudinal_bound(double period, double energy) {
    if (energy <= 0.0) return 1;
    return static_cast<int>(std::ceil((std::sqrt(energy) + pi / period) * period / (2.0 * pi))) + 1;
}

std::vector<Intersection> find_intersections(const WaveguideConfig& config, double energy_cutoff) {
    config.validate();
    const double T = config.period;
    const double edge = pi / T;
    auto modes = transverse_modes(config.cross_section, 3);
    if (energy_cutoff < modes[0].eigenvalue()) return {};
    const int pmax = longitudinal_bound(T, energy_cutoff);

    std::vector<Intersection> out;
    for (int j = 1; j <= 2; ++j) {
        for (int k = j; k <= 2; ++k) {
            double lj = modes[j - 1].eigenvalue(), lk = modes[k - 1].eigenvalue();
            for (int p = -pmax; p <= pmax; ++p) {
                for (int q = -pmax; q <= pmax; ++q) {
                    if (p == q) continue;
                    if (j == k && p < q) continue;  // unordered pair, higher p first
                    double tau0 = 0.5 * ((lk - lj) * T / (2.0 * pi * (p - q)) - 2.0 * pi * (p + q) / T);
                    double snap = 1e-12 * edge;
                    if (std::abs(tau0) < snap) tau0 = 0.0;
                    if (std::abs(tau0 - edge) < snap) tau0 = edge;
                    if (tau0 < 0.0 || tau0 > edge) continue;
                    double lambda0 = band_value(lj, T, p, tau0);
                    if (lambda0 > energy_cutoff) continue;

                    Intersection in;
                    in.tau0 = tau0;
                    in.lambda0 = lambda0;
                    in.period = T;
                    in.first = {j, p};
                    in.second = {k, q};
                    in.slope_first = band_slope(T, p, tau0);
                    in.slope_second = band_slope(T, q, tau0);
                    in.flags.simple_eigenvalues = check_simplicity(modes, j) && check_simplicity(modes, k);
                    in.flags.opposite_slopes = in.slope_first * in.slope_second < 0.0;
                    in.flags.isolated = isolation_check(config, lambda0, {in.first, in.second}, 0.0);
                    in.flags.at_zone_edge = tau0 == edge;
                    if (in.admissible() && (p * q > 0 || j + k > 3)) {
                        throw ConsistencyError("admissible intersection with p*q > 0 or j+k > 3");
                    }
                    out.push_back(in);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Intersection& a, const Intersection& b) {
        return std::tuple(a.lambda0, a.tau0, a.first, a.second) < std::tuple(b.lambda0, b.tau0, b.first, b.second);
    });
    return out;
}

bool isolation_check(const WaveguideConfig& config, double lambda0,
                     const std::pair<BandIndex, BandIndex>& excluded, double margin) {
    if (margin < 0.0) throw InvalidInput("isolation margin must be >= 0");
    const double top = lambda0 + margin;
    auto modes = transverse_modes(config.cross_section, 1);
    if (top < modes[0].eigenvalue()) return true;
    modes = transverse_modes_below(config.cross_section, top);
    const double tol = touch_tolerance(lambda0);
    const int pmax = longitudinal_bound(config.period, top);
    for (const auto& mode : modes) {
        for (int s = -pmax; s <= pmax; ++s) {
            BandIndex b{mode.index(), s};
            if (excluded_from(b, excluded)) continue;
            auto r = band_range(mode.eigenvalue(), config.period, s);
            if (r.lo <= top + tol && r.hi >= lambda0 - margin - tol) return false;
        }
    }
    return true;
}

double isolation_distance(const WaveguideConfig& config, double lambda0,
                          const std::pair<BandIndex, BandIndex>& excluded) {
    double cap = std::abs(lambda0) + 1.0;
    double top = lambda0 + cap;
    auto modes = transverse_modes_below(config.cross_section, top);
    const int pmax = longitudinal_bound(config.period, top);
    double best = cap;
    for (const auto& mode : modes) {
        for (int s = -pmax; s <= pmax; ++s) {
            BandIndex b{mode.index(), s};
            if (excluded_from(b, excluded)) continue;
            auto r = band_range(mode.eigenvalue(), config.period, s);
            double d = 0.0;
            if (lambda0 < r.lo) d = r.lo - lambda0;
            else if (lambda0 > r.hi) d = lambda0 - r.hi;
            best = std::min(best, d);
        }
    }
    return best;
}

}  // namespace blochgap
