#include "blochgap/report_io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "blochgap/error.hpp"

namespace blochgap {

using ojson = nlohmann::ordered_json;

namespace {

ojson num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ojson cnum(cplx z) { return ojson{{"re", num(z.real())}, {"im", num(z.imag())}}; }

ojson pair_json(const std::pair<double, double>& p) { return ojson::array({num(p.first), num(p.second)}); }

ojson band_json(const BandIndex& b) { return ojson::array({b.j, b.p}); }

ojson truncation_json(const Truncation& t) {
    return ojson{{"J", t.J}, {"P", t.P}, {"quadrature_order", t.quadrature_order},
                 {"longitudinal_points", t.longitudinal_points}};
}

ojson intersection_json(const Intersection& x) {
    return ojson{{"first", band_json(x.first)},
                 {"second", band_json(x.second)},
                 {"tau0", num(x.tau0)},
                 {"lambda0", num(x.lambda0)},
                 {"period", num(x.period)},
                 {"slope_first", num(x.slope_first)},
                 {"slope_second", num(x.slope_second)},
                 {"flags",
                  {{"simple_eigenvalues", x.flags.simple_eigenvalues},
                   {"opposite_slopes", x.flags.opposite_slopes},
                   {"isolated", x.flags.isolated},
                   {"at_zone_edge", x.flags.at_zone_edge}}},
                 {"admissible", x.admissible()}};
}

ojson coupling_json(const CouplingMatrix& B) {
    return ojson{{"branch", to_string(B.branch)},
                 {"b11", cnum(B.b11)},
                 {"b12", cnum(B.b12)},
                 {"b21", cnum(B.b21)},
                 {"b22", cnum(B.b22)}};
}

ojson k_json(const KCoeffs& k) {
    return ojson{{"branch", to_string(k.branch)}, {"k1", num(k.k1)}, {"k2", num(k.k2)}, {"k3", num(k.k3)},
                 {"k4", num(k.k4)}};
}

ojson opt_num(const std::optional<double>& v) { return v ? num(*v) : ojson(nullptr); }

ojson prediction_json(const GapPrediction& g) {
    return ojson{{"epsilon", num(g.epsilon)},
                 {"lambda0", num(g.lambda0)},
                 {"tau0", num(g.tau0)},
                 {"B_plus", coupling_json(g.B_plus)},
                 {"B_minus", coupling_json(g.B_minus)},
                 {"k_plus", k_json(g.k_plus)},
                 {"k_minus", k_json(g.k_minus)},
                 {"beta_minus_plusbranch", num(g.beta_minus_plusbranch)},
                 {"beta_plus_plusbranch", num(g.beta_plus_plusbranch)},
                 {"beta_minus_minusbranch", num(g.beta_minus_minusbranch)},
                 {"beta_plus_minusbranch", num(g.beta_plus_minusbranch)},
                 {"beta_l", num(g.beta_l)},
                 {"beta_r", num(g.beta_r)},
                 {"gap_condition_holds", g.gap_condition_holds},
                 {"tau_star_l", num(g.tau_star_l)},
                 {"tau_star_r", num(g.tau_star_r)},
                 {"gamma_l", num(g.gamma_l)},
                 {"gamma_r", num(g.gamma_r)},
                 {"secondary_gamma_l", opt_num(g.secondary_gamma_l)},
                 {"secondary_gamma_r", opt_num(g.secondary_gamma_r)},
                 {"edges", pair_json(g.edges())},
                 {"extremizers", pair_json(g.extremizers())},
                 {"verdict", to_string(g.verdict)},
                 {"verdict_text", g.verdict_text}};
}

ojson extrema_json(const std::vector<Extremum>& v) {
    ojson a = ojson::array();
    for (const auto& e : v) a.push_back(ojson{{"tau", num(e.tau)}, {"energy", num(e.energy)}});
    return a;
}

ojson gap_json(const GapReport& r) {
    return ojson{{"epsilon", num(r.epsilon)},
                 {"window", ojson::array({num(r.window.lo), num(r.window.hi)})},
                 {"lower_band", r.lower_band},
                 {"alpha_l", num(r.alpha_l)},
                 {"alpha_r", num(r.alpha_r)},
                 {"tau_l", num(r.tau_l)},
                 {"tau_r", num(r.tau_r)},
                 {"width", num(r.width)},
                 {"found", r.found},
                 {"lower_candidates", extrema_json(r.lower_candidates)},
                 {"upper_candidates", extrema_json(r.upper_candidates)},
                 {"truncation", truncation_json(r.truncation)}};
}

ojson convergence_json(const ConvergenceReport& c) {
    ojson rows = ojson::array();
    for (const auto& r : c.rows) {
        rows.push_back(ojson{{"epsilon", num(r.epsilon)},
                             {"gap", gap_json(r.report)},
                             {"predicted_edges", pair_json(r.predicted_edges)},
                             {"predicted_extremizers", pair_json(r.predicted_extremizers)},
                             {"tau_l", num(r.tau_l)},
                             {"tau_r", num(r.tau_r)},
                             {"edge_error_l", num(r.edge_error_l)},
                             {"edge_error_r", num(r.edge_error_r)},
                             {"extremizer_error_l", num(r.extremizer_error_l)},
                             {"extremizer_error_r", num(r.extremizer_error_r)},
                             {"width_ratio", num(r.width_ratio)}});
    }
    return ojson{{"rows", rows},
                 {"slope_edge_l", num(c.slope_edge_l)},
                 {"slope_edge_r", num(c.slope_edge_r)},
                 {"slope_extremizer_l", num(c.slope_extremizer_l)},
                 {"slope_extremizer_r", num(c.slope_extremizer_r)}};
}

ojson provenance_json(const Provenance& p) {
    return ojson{{"tool", "blochgap"},
                 {"tool_version", tool_version},
                 {"config_hash", p.config_hash},
                 {"family", p.family},
                 {"intersection", p.intersection ? intersection_json(*p.intersection) : ojson(nullptr)},
                 {"truncation", p.truncation ? truncation_json(*p.truncation) : ojson(nullptr)}};
}

void check_sink(std::ostream& sink) {
    if (!sink) throw std::system_error(std::make_error_code(std::errc::io_error), "write to output failed");
}

}  // namespace

Provenance make_provenance(const JobConfig& job, const std::optional<Intersection>& inter,
                           const std::optional<Truncation>& trunc) {
    return Provenance{"fnv1a64:" + hash_hex(job.hash), family_name(job.perturbation), inter, trunc};
}

std::string format_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_bands_csv(const BandStructure& bs, std::ostream& sink) {
    std::size_t m = bs.energies.empty() ? 0 : bs.energies.front().size();
    std::string out = "tau";
    for (std::size_t i = 1; i <= m; ++i) out += ",E_" + std::to_string(i);
    out += '\n';
    for (std::size_t r = 0; r < bs.tau_grid.size() && r < bs.energies.size(); ++r) {
        out += format_g17(bs.tau_grid[r]);
        for (double e : bs.energies[r]) out += "," + format_g17(e);
        out += '\n';
    }
    sink << out;
    check_sink(sink);
}

void emit_bands_json(const BandStructure& bs, const Provenance& prov, std::ostream& sink) {
    ojson rows = ojson::array();
    for (std::size_t r = 0; r < bs.tau_grid.size() && r < bs.energies.size(); ++r) {
        ojson e = ojson::array();
        for (double v : bs.energies[r]) e.push_back(num(v));
        rows.push_back(ojson{{"tau", num(bs.tau_grid[r])}, {"energies", e}});
    }
    ojson doc{{"provenance", provenance_json(prov)}, {"epsilon", num(bs.epsilon)}, {"bands", rows}};
    sink << doc.dump(2) << '\n';
    check_sink(sink);
}

void emit_intersections(const std::vector<Intersection>& xs, bool as_json, std::ostream& sink) {
    if (as_json) {
        ojson a = ojson::array();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            ojson x = intersection_json(xs[i]);
            x["index"] = i;
            a.push_back(std::move(x));
        }
        sink << a.dump(2) << '\n';
    } else {
        std::string out = "index,j,p,k,q,tau0,lambda0,slope_first,slope_second,at_zone_edge\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto& x = xs[i];
            out += std::to_string(i) + "," + std::to_string(x.first.j) + "," + std::to_string(x.first.p) + "," +
                   std::to_string(x.second.j) + "," + std::to_string(x.second.p) + "," + format_shortest(x.tau0) +
                   "," + format_shortest(x.lambda0) + "," + format_shortest(x.slope_first) + "," +
                   format_shortest(x.slope_second) + "," + (x.flags.at_zone_edge ? "1" : "0") + "\n";
        }
        sink << out;
    }
    check_sink(sink);
}

void emit_report_json(const std::optional<GapPrediction>& prediction, const std::optional<GapReport>& gap,
                      const std::optional<ConvergenceReport>& convergence, const Provenance& prov,
                      std::ostream& sink) {
    ojson doc{{"provenance", provenance_json(prov)},
              {"prediction", prediction ? prediction_json(*prediction) : ojson(nullptr)},
              {"gap", gap ? gap_json(*gap) : ojson(nullptr)},
              {"convergence", convergence ? convergence_json(*convergence) : ojson(nullptr)}};
    sink << doc.dump(2) << '\n';
    check_sink(sink);
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::size_t pos = 0, line_start = 0;
    bool first = true;
    while (pos <= text.size()) {
        if (pos == text.size() || text[pos] == '\n') {
            std::string_view line(text.data() + line_start, pos - line_start);
            if (!line.empty()) {
                std::vector<std::string_view> cells;
                std::size_t s = 0;
                for (std::size_t i = 0; i <= line.size(); ++i) {
                    if (i == line.size() || line[i] == ',') {
                        cells.push_back(line.substr(s, i - s));
                        s = i + 1;
                    }
                }
                if (first) {
                    for (auto c : cells) t.header.emplace_back(c);
                    first = false;
                } else {
                    if (cells.size() != t.header.size()) throw ParseError("row width differs from header", line_start);
                    std::vector<double> row;
                    for (auto c : cells) {
                        double v = 0.0;
                        auto res = std::from_chars(c.data(), c.data() + c.size(), v);
                        if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
                            throw ParseError("malformed number", static_cast<std::size_t>(c.data() - text.data()));
                        }
                        row.push_back(v);
                    }
                    t.rows.push_back(std::move(row));
                }
            }
            line_start = pos + 1;
        }
        ++pos;
    }
    return t;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw std::system_error(std::make_error_code(std::errc::io_error), "stdout");
        return;
    }
    errno = 0;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno ? errno : EIO, std::generic_category(), path);
    out << content;
    out.flush();
    if (!out) throw std::system_error(errno ? errno : EIO, std::generic_category(), path);
}

}  // namespace blochgap
