#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blochgap/cell_solver.hpp"
#include "blochgap/config.hpp"
#include "blochgap/predictor.hpp"

namespace blochgap {

inline constexpr const char* tool_version = "1.0.0";

struct Provenance {
    std::string config_hash;  // fnv1a64 hex of the canonical config
    std::string family;
    std::optional<Intersection> intersection;
    std::optional<Truncation> truncation;
};

Provenance make_provenance(const JobConfig& job, const std::optional<Intersection>& inter = {},
                           const std::optional<Truncation>& trunc = {});

// Shortest round-trip decimal and the fixed 17-significant-digit form.
std::string format_shortest(double v);
std::string format_g17(double v);

// "tau,E_1,...,E_m" then one row per tau; an empty structure gives the header alone.
void emit_bands_csv(const BandStructure& bs, std::ostream& sink);
void emit_bands_json(const BandStructure& bs, const Provenance& prov, std::ostream& sink);

void emit_intersections(const std::vector<Intersection>& xs, bool json, std::ostream& sink);

void emit_report_json(const std::optional<GapPrediction>& prediction, const std::optional<GapReport>& gap,
                      const std::optional<ConvergenceReport>& convergence, const Provenance& prov,
                      std::ostream& sink);

// Parsed band table; throws ParseError on malformed input.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string& text);

// Writes to a file, or to stdout when path is empty or "-"; failures throw std::system_error.
void write_output(const std::string& path, const std::string& content);

}  // namespace blochgap
