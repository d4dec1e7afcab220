// blochgap: band intersections, first-order gap predictions and numerical gap checks
// for periodically perturbed waveguides.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>

#include "blochgap/cell_solver.hpp"
#include "blochgap/config.hpp"
#include "blochgap/error.hpp"
#include "blochgap/predictor.hpp"
#include "blochgap/report_io.hpp"

using namespace blochgap;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

// Slope targets for `verify`.
constexpr double min_edge_slope = 1.8;
constexpr double max_width_deviation = 0.1;

struct Options {
    std::string config;
    int intersection = -1;
    double eps = 0.0;
    std::vector<double> eps_list;
    int tau_points = 0;
    std::string out;
    std::string format = "csv";
    int threads = -1;
    bool all = false;
    std::string example;
};

int thread_count(const Options& o, const JobConfig& job) {
    if (o.threads >= 0) return resolve_threads(o.threads);
    if (const char* env = std::getenv("BLOCHGAP_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0 && v <= 4096) return resolve_threads(static_cast<int>(v));
        throw ConfigError({"BLOCHGAP_THREADS: expected a non-negative integer, got \"" + std::string(env) + "\""});
    }
    return resolve_threads(job.solver.threads);
}

std::optional<int> index_override(const Options& o) {
    if (o.intersection >= 0) return o.intersection;
    return std::nullopt;
}

double single_eps(const Options& o, const JobConfig& job) { return o.eps > 0.0 ? o.eps : job.run.epsilons.front(); }

GapSearchOptions search_options(const Options& o, const JobConfig& job) {
    GapSearchOptions s;
    s.coarse_points = job.solver.coarse_points;
    s.tau_resolution = job.solver.tau_resolution;
    s.threads = thread_count(o, job);
    return s;
}

int cmd_intersections(const Options& o) {
    JobConfig job = load_config(o.config);
    std::vector<Intersection> xs;
    if (o.all) xs = find_intersections(job.waveguide, job.run.energy_cutoff);
    else xs = admissible_intersections(job);
    std::ostringstream ss;
    emit_intersections(xs, o.format == "json", ss);
    write_output(o.out, ss.str());
    return exit_ok;
}

int cmd_predict(const Options& o) {
    JobConfig job = load_config(o.config);
    Intersection inter = select_intersection(job, index_override(o));
    GapPrediction pred = predict_gap(job.perturbation, job.waveguide, inter, single_eps(o, job));
    std::ostringstream ss;
    emit_report_json(pred, std::nullopt, std::nullopt, make_provenance(job, inter), ss);
    write_output(o.out, ss.str());
    std::cerr << "predict: " << to_string(pred.verdict) << ": " << pred.verdict_text << "\n";
    return pred.verdict == Verdict::GapPredicted ? exit_ok : exit_negative;
}

int cmd_bands(const Options& o) {
    JobConfig job = load_config(o.config);
    double eps = single_eps(o, job);
    int n = o.tau_points > 0 ? o.tau_points : job.solver.tau_points;
    Truncation tr = job.solver.truncation.resolved(job.waveguide, job.run.energy_cutoff);
    int m_max = job.solver.m_max;
    if (m_max <= 0) {
        // Bands whose unperturbed range starts below the cutoff.
        auto modes = transverse_modes(job.waveguide.cross_section, tr.J);
        for (const auto& md : modes)
            for (int p = -tr.P; p <= tr.P; ++p)
                if (band_range(md.eigenvalue(), job.waveguide.period, p).lo < job.run.energy_cutoff) ++m_max;
        m_max = std::max(1, m_max);
    }
    m_max = std::min(m_max, tr.basis_size());
    FiberOperator op(job.perturbation, job.waveguide, eps, tr);
    BandStructure bs = band_structure(op, eps, zone_grid(job.waveguide, n), m_max, thread_count(o, job));
    std::ostringstream ss;
    if (o.format == "json") emit_bands_json(bs, make_provenance(job, std::nullopt, op.truncation()), ss);
    else emit_bands_csv(bs, ss);
    write_output(o.out, ss.str());
    return exit_ok;
}

int cmd_gap(const Options& o) {
    JobConfig job = load_config(o.config);
    Intersection inter = select_intersection(job, index_override(o));
    double eps = single_eps(o, job);
    GapPrediction pred = predict_gap(job.perturbation, job.waveguide, inter, eps);
    EnergyRange window = job.run.window ? *job.run.window : default_window(pred, job.waveguide, inter, eps);
    GapSearchOptions opt = search_options(o, job);
    if (pred.verdict == Verdict::GapPredicted) {
        auto [l, r] = pred.extremizers(eps);
        opt.lower_seeds.push_back(l);
        opt.upper_seeds.push_back(r);
        if (auto sec = pred.secondary_extremizers(eps)) {
            opt.lower_seeds.push_back(sec->first);
            opt.upper_seeds.push_back(sec->second);
        }
    }
    Truncation tr = job.solver.truncation.resolved(job.waveguide, inter.lambda0);
    GapReport rep = detect_gap(job.perturbation, job.waveguide, eps, window, tr, opt);
    std::ostringstream ss;
    emit_report_json(pred, rep, std::nullopt, make_provenance(job, inter, rep.truncation), ss);
    write_output(o.out, ss.str());
    std::cerr << "gap: " << (rep.found ? "found" : "none") << ", width " << format_shortest(rep.width) << "\n";
    return rep.found ? exit_ok : exit_negative;
}

int cmd_verify(const Options& o) {
    JobConfig job = load_config(o.config);
    Intersection inter = select_intersection(job, index_override(o));
    std::vector<double> eps = o.eps_list.empty() ? job.run.epsilons : o.eps_list;
    ConvergenceReport rep = convergence_study(job.perturbation, job.waveguide, inter, eps, job.solver.truncation,
                                              search_options(o, job));
    std::ostringstream ss;
    std::optional<Truncation> tr;
    if (!rep.rows.empty()) tr = rep.rows.front().report.truncation;
    if (o.format == "csv") {
        ss << "epsilon,width,width_ratio,edge_error_l,edge_error_r,extremizer_error_l,extremizer_error_r\n";
        for (const auto& r : rep.rows) {
            ss << format_shortest(r.epsilon) << ',' << format_shortest(r.report.width) << ','
               << format_shortest(r.width_ratio) << ',' << format_shortest(r.edge_error_l) << ','
               << format_shortest(r.edge_error_r) << ',' << format_shortest(r.extremizer_error_l) << ','
               << format_shortest(r.extremizer_error_r) << '\n';
        }
    } else {
        emit_report_json(rep.prediction, std::nullopt, rep, make_provenance(job, inter, tr), ss);
    }
    write_output(o.out, ss.str());

    bool pass = rep.prediction.verdict == Verdict::GapPredicted;
    std::string why = pass ? "" : "verdict " + to_string(rep.prediction.verdict);
    if (pass) {
        for (const auto& r : rep.rows) pass = pass && r.report.found;
        if (!pass) why = "gap missing at some epsilon";
    }
    if (pass && !(rep.slope_edge_l >= min_edge_slope && rep.slope_edge_r >= min_edge_slope)) {
        pass = false;
        why = "edge slopes " + format_shortest(rep.slope_edge_l) + ", " + format_shortest(rep.slope_edge_r) +
              " below " + format_shortest(min_edge_slope);
    }
    if (pass && !(std::abs(rep.rows.back().width_ratio - 1.0) <= max_width_deviation)) {
        pass = false;
        why = "width ratio " + format_shortest(rep.rows.back().width_ratio);
    }
    std::cerr << "verify: " << (pass ? "PASS" : "FAIL") << (why.empty() ? "" : " (" + why + ")") << ", edge slopes "
              << format_shortest(rep.slope_edge_l) << " " << format_shortest(rep.slope_edge_r) << "\n";
    return pass ? exit_ok : exit_negative;
}

int cmd_examples(const Options& o) {
    const auto& cat = example_catalog();
    if (!o.example.empty()) {
        for (const auto& e : cat) {
            if (e.name == o.example) {
                write_output(o.out, e.text);
                return exit_ok;
            }
        }
        std::cerr << "unknown example \"" << o.example << "\"\n";
        return exit_usage;
    }
    if (!o.out.empty() && o.out != "-") {
        std::filesystem::create_directories(o.out);
        for (const auto& e : cat) write_output((std::filesystem::path(o.out) / (e.name + ".json")).string(), e.text);
        return exit_ok;
    }
    for (const auto& e : cat) std::cout << e.name << "  " << e.summary << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral gaps of periodically perturbed waveguides"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", o.config, "job configuration (JSON)")->check(CLI::ExistingFile);
        if (needs_config) c->required();
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--threads", o.threads, "worker threads, 0 = auto")->check(CLI::Range(0, 4096));
    };
    auto add_intersection = [&](CLI::App* sub) {
        sub->add_option("--intersection", o.intersection, "index into the admissible list")
            ->check(CLI::NonNegativeNumber);
    };
    auto add_eps = [&](CLI::App* sub) {
        sub->add_option("--eps", o.eps, "perturbation strength")->check(CLI::PositiveNumber);
    };

    auto* inter = app.add_subcommand("intersections", "list admissible band crossings");
    add_common(inter, true);
    inter->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    inter->add_flag("--all", o.all, "include crossings that fail admissibility");

    auto* pred = app.add_subcommand("predict", "first-order gap prediction for one crossing");
    add_common(pred, true);
    add_intersection(pred);
    add_eps(pred);
    pred->add_option("--format", o.format)->check(CLI::IsMember({"json"}));

    auto* bands = app.add_subcommand("bands", "band functions over the Brillouin zone");
    add_common(bands, true);
    add_eps(bands);
    bands->add_option("--tau-points", o.tau_points, "grid points in (-pi/T, pi/T]")->check(CLI::Range(2, 1000000));
    bands->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

    auto* gap = app.add_subcommand("gap", "numerical gap near a crossing");
    add_common(gap, true);
    add_intersection(gap);
    add_eps(gap);
    gap->add_option("--format", o.format)->check(CLI::IsMember({"json"}));

    auto* verify = app.add_subcommand("verify", "convergence study against the prediction");
    add_common(verify, true);
    add_intersection(verify);
    verify->add_option("--eps-list", o.eps_list, "strictly decreasing strengths, comma separated")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    verify->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

    auto* examples = app.add_subcommand("examples", "built-in example configurations");
    examples->add_option("name", o.example, "print one configuration");
    examples->add_option("--out", o.out, "directory receiving every configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }
    // Reports default to JSON.
    for (auto* s : {pred, gap, verify})
        if (s->parsed() && s->count("--format") == 0) o.format = "json";

    try {
        if (inter->parsed()) return cmd_intersections(o);
        if (pred->parsed()) return cmd_predict(o);
        if (bands->parsed()) return cmd_bands(o);
        if (gap->parsed()) return cmd_gap(o);
        if (verify->parsed()) return cmd_verify(o);
        return cmd_examples(o);
    } catch (const ConfigError& e) {
        for (const auto& i : e.issues()) std::cerr << "config error: " << i << "\n";
        return exit_usage;
    } catch (const InadmissibleIntersection& e) {
        std::cerr << "inadmissible intersection: " << e.what() << "\n";
        return exit_negative;
    } catch (const DegenerateIntersection& e) {
        std::cerr << "degenerate intersection: " << e.what() << "\n";
        return exit_negative;
    } catch (const GapNotFound& e) {
        std::cerr << "gap not found: " << e.what() << "\n";
        return exit_negative;
    } catch (const AmbiguousWindow& e) {
        std::cerr << "ambiguous window: " << e.what() << "\n";
        return exit_negative;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::system_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_negative;
    }
}
