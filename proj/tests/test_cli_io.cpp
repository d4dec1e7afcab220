#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "blochgap/config.hpp"
#include "blochgap/error.hpp"
#include "blochgap/report_io.hpp"

using namespace blochgap;
using nlohmann::json;
using std::numbers::pi;

namespace {

json load_json(const std::string& rel) {
    std::ifstream in(std::string(BLOCHGAP_SOURCE_DIR) + "/" + rel);
    REQUIRE(in.good());
    return json::parse(in);
}

// Subset of draft-07: type, enum, required, properties, additionalProperties,
// items, minItems, maxItems, minimum, exclusiveMinimum, anyOf, local $ref.
class SchemaCheck {
public:
    explicit SchemaCheck(json root) : root_(std::move(root)) {}

    std::vector<std::string> errors(const json& doc) {
        errs_.clear();
        check(root_, doc, "$");
        return errs_;
    }

private:
    json root_;
    std::vector<std::string> errs_;

    const json& resolve(const json& s) {
        if (!s.contains("$ref")) return s;
        std::string ref = s["$ref"];
        REQUIRE(ref.rfind("#/definitions/", 0) == 0);
        return root_["definitions"][ref.substr(14)];
    }

    static bool type_ok(const std::string& t, const json& v) {
        if (t == "object") return v.is_object();
        if (t == "array") return v.is_array();
        if (t == "string") return v.is_string();
        if (t == "boolean") return v.is_boolean();
        if (t == "null") return v.is_null();
        if (t == "integer") return v.is_number_integer();
        if (t == "number") return v.is_number();
        return false;
    }

    void check(const json& schema_in, const json& v, const std::string& path) {
        const json& s = resolve(schema_in);
        if (s.contains("anyOf")) {
            for (const auto& alt : s["anyOf"]) {
                SchemaCheck sub(root_);
                if (sub.errors_at(alt, v, path).empty()) return;
            }
            errs_.push_back(path + ": no alternative matched");
            return;
        }
        if (s.contains("type")) {
            bool ok = false;
            if (s["type"].is_array()) {
                for (const auto& t : s["type"]) ok = ok || type_ok(t, v);
            } else {
                ok = type_ok(s["type"], v);
            }
            if (!ok) {
                errs_.push_back(path + ": wrong type");
                return;
            }
        }
        if (s.contains("enum")) {
            bool ok = false;
            for (const auto& e : s["enum"]) ok = ok || e == v;
            if (!ok) errs_.push_back(path + ": not in enum");
        }
        if (v.is_number()) {
            if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>()) errs_.push_back(path + ": below minimum");
            if (s.contains("exclusiveMinimum") && v.get<double>() <= s["exclusiveMinimum"].get<double>())
                errs_.push_back(path + ": not above exclusiveMinimum");
        }
        if (v.is_object()) {
            if (s.contains("required"))
                for (const auto& r : s["required"])
                    if (!v.contains(r.get<std::string>())) errs_.push_back(path + ": missing " + r.get<std::string>());
            for (const auto& [k, sub] : v.items()) {
                if (s.contains("properties") && s["properties"].contains(k)) {
                    check(s["properties"][k], sub, path + "." + k);
                } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
                    errs_.push_back(path + ": unexpected " + k);
                }
            }
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errs_.push_back(path + ": too short");
            if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) errs_.push_back(path + ": too long");
            if (s.contains("items"))
                for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]");
        }
    }

public:
    std::vector<std::string> errors_at(const json& schema, const json& v, const std::string& path) {
        errs_.clear();
        check(schema, v, path);
        return errs_;
    }
};

const char* minimal = R"({
  "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 2},
  "perturbation": {"family": "potential", "V": [{"amplitude": 1, "mode": 2}]}
})";

std::vector<std::string> issues_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    for (const auto& i : issues)
        if (i.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
    auto job = parse_config(minimal);
    CHECK(job.waveguide.dimension == 2);
    CHECK(job.waveguide.period == 2.0);
    CHECK(job.waveguide.cross_section.is_interval());
    auto* v = std::get_if<PotentialSpec>(&job.perturbation);
    REQUIRE(v != nullptr);
    CHECK(v->V.value(0.0, 2.0).real() == doctest::Approx(1.0));
    CHECK(v->V.value(0.25, 2.0).real() == doctest::Approx(std::cos(2 * pi * 0.25)).scale(1.0));
    CHECK(job.solver.truncation.J == 0);
    CHECK(job.solver.tau_points == 257);
    CHECK(job.run.epsilons == std::vector<double>{0.05});
    CHECK(job.run.energy_cutoff == 100.0);
    CHECK_FALSE(job.run.intersection.has_value());
    CHECK_FALSE(job.run.window.has_value());
    CHECK(job.hash == fnv1a64(job.canonical));
    // whitespace does not change the hash
    std::string compact = json::parse(minimal).dump();
    CHECK(parse_config(compact).hash == job.hash);
}

TEST_CASE("twist on a 2D waveguide") {
    auto issues = issues_of(R"({
      "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 2},
      "perturbation": {"family": "twist", "theta": [{"amplitude": 1, "mode": 1}]}
    })");
    REQUIRE_FALSE(issues.empty());
    CHECK(mentions(issues, "perturbation.family"));
    CHECK(mentions(issues, "dimension"));
}

TEST_CASE("duplicate keys are rejected") {
    auto issues = issues_of(R"({
      "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 2, "period": 3},
      "perturbation": {"family": "potential", "V": [{"amplitude": 1, "mode": 2, "mode": 1}]}
    })");
    CHECK(mentions(issues, "waveguide.period: duplicate key"));
    CHECK(mentions(issues, "perturbation.V[0].mode: duplicate key"));
}

TEST_CASE("schema violations name their key paths") {
    auto issues = issues_of(R"({
      "waveguide": {"dimension": 4, "cross_section": {"type": "disk", "width": 1}, "period": -1, "colour": 1},
      "perturbation": {"family": "potential", "V": [{"amplitude": {"re": 1, "im": 2}, "mode": 1.5, "profile": "sin(x1"}]},
      "solver": {"J": -1, "tau_points": 1},
      "run": {"epsilons": [], "window": [2, 1]},
      "extra": true
    })");
    for (const char* p : {"waveguide.dimension", "waveguide.cross_section.type", "waveguide.period", "waveguide.colour",
                          "perturbation.V[0].amplitude", "perturbation.V[0].mode", "perturbation.V[0].profile",
                          "solver.J", "solver.tau_points", "run.epsilons", "run.window", "(root).extra"}) {
        CHECK_MESSAGE(mentions(issues, p), p);
    }
    CHECK(mentions(issues, "offset 6"));
    CHECK(mentions(issues_of("{\"waveguide\": "), "(document)"));
    CHECK(mentions(issues_of("[]"), "expected an object"));
}

TEST_CASE("complex amplitudes only off the diagonal of A") {
    const char* ok = R"({
      "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 1},
      "perturbation": {"family": "general",
        "A": {"11": [{"amplitude": 0.5}], "12": [{"amplitude": {"re": 0.1, "im": 0.3}, "mode": 1, "profile": "x1"}]},
        "Aj": {"2": [{"amplitude": 0.2, "mode": 1}]},
        "A0": [{"amplitude": 1, "mode": 2}]}
    })";
    auto job = parse_config(ok);
    auto* g = std::get_if<GeneralSpec>(&job.perturbation);
    REQUIRE(g != nullptr);
    CHECK_FALSE(g->entry(0, 1, 2).is_real());
    CHECK(g->entry(0, 0, 2).is_real());

    auto bad = issues_of(R"({
      "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 1},
      "perturbation": {"family": "general", "A": {"11": [{"amplitude": {"re": 1, "im": 1}}], "21": []},
                       "A0": [{"amplitude": {"re": 1, "im": 0}}]}
    })");
    CHECK(mentions(bad, "perturbation.A.11[0].amplitude: complex amplitude not permitted"));
    CHECK(mentions(bad, "perturbation.A.21"));
    CHECK(mentions(bad, "perturbation.A0[0].amplitude"));
    auto hv = issues_of(R"({
      "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 1},
      "perturbation": {"family": "deformation", "h_plus": [{"amplitude": 1, "mode": 1, "profile": "x1"}]}
    })");
    CHECK(mentions(hv, "perturbation.h_plus[0].profile"));
    auto x2 = issues_of(R"({
      "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 1},
      "perturbation": {"family": "potential", "V": [{"amplitude": 1, "profile": "x2"}]}
    })");
    CHECK(mentions(x2, "perturbation.V[0].profile"));
}

TEST_CASE("intersection selection") {
    auto job = parse_config(R"({
      "waveguide": {"dimension": 2, "cross_section": {"type": "interval", "width": 1}, "period": 1},
      "perturbation": {"family": "potential", "V": [{"amplitude": 1, "mode": 1}]},
      "run": {"energy_cutoff": 60, "intersection": {"first": [2, 0], "second": [1, -1]}}
    })");
    auto x = select_intersection(job);
    CHECK(x.tau0 == doctest::Approx(pi / 4));
    auto all = admissible_intersections(job);
    REQUIRE(all.size() >= 2);
    auto y = select_intersection(job, 0);
    CHECK(y.lambda0 == all[0].lambda0);
    CHECK_THROWS_AS(select_intersection(job, 999), ConfigError);
    job.run.intersection = std::pair{BandIndex{1, 0}, BandIndex{1, 0}};
    CHECK_THROWS_AS(select_intersection(job), ConfigError);
    job.run.intersection.reset();
    CHECK_THROWS_AS(select_intersection(job), ConfigError);
}

TEST_CASE("catalog configs parse and validate") {
    SchemaCheck schema(load_json("schema/job_config.schema.json"));
    const auto& cat = example_catalog();
    CHECK(cat.size() == 7);
    for (const auto& e : cat) {
        INFO(e.name);
        auto job = parse_config(e.text);
        CHECK(job.run.intersection.has_value());
        CHECK_NOTHROW(select_intersection(job));
        CHECK(schema.errors(json::parse(e.text)).empty());
    }
    CHECK_FALSE(schema.errors(json::parse(R"({"waveguide": 1})")).empty());
}

TEST_CASE("band CSV") {
    BandStructure empty;
    std::ostringstream e;
    emit_bands_csv(empty, e);
    CHECK(e.str() == "tau\n");

    BandStructure bs;
    bs.tau_grid = {-0.1, 0.0, 1.0 / 3.0};
    bs.energies = {{pi, 2 * pi * pi, -0.0}, {1e-300, 1.0 / 7.0, 12345.678901234567}, {0.1, 0.2, 0.30000000000000004}};
    std::ostringstream s;
    emit_bands_csv(bs, s);
    auto text = s.str();
    CHECK(text.rfind("tau,E_1,E_2,E_3\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');
    auto t = parse_csv(text);
    CHECK(t.header == std::vector<std::string>{"tau", "E_1", "E_2", "E_3"});
    REQUIRE(t.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(t.rows[r][0] == bs.tau_grid[r]);
        for (std::size_t m = 0; m < 3; ++m) CHECK(t.rows[r][m + 1] == bs.energies[r][m]);
    }
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(format_shortest(0.1) == "0.1");
    CHECK_THROWS_AS(parse_csv("tau,E_1\n1,x\n"), ParseError);
    CHECK_THROWS_AS(parse_csv("tau,E_1\n1\n"), ParseError);
}

TEST_CASE("report JSON matches the schema and is deterministic") {
    SchemaCheck schema(load_json("schema/report.schema.json"));
    auto job = parse_config(example_catalog()[1].text);
    auto inter = select_intersection(job);
    auto pred = predict_gap(job.perturbation, job.waveguide, inter, 0.05);
    Truncation tr = Truncation{}.resolved(job.waveguide, inter.lambda0);
    auto gap = detect_gap(job.perturbation, job.waveguide, 0.05, default_window(pred, job.waveguide, inter, 0.05), tr);
    auto conv = convergence_study(job.perturbation, job.waveguide, inter, {0.1, 0.05, 0.025}, Truncation{});
    auto prov = make_provenance(job, inter, gap.truncation);

    std::ostringstream a, b;
    emit_report_json(pred, gap, conv, prov, a);
    emit_report_json(pred, gap, conv, prov, b);
    CHECK(a.str() == b.str());
    auto doc = json::parse(a.str());
    auto errs = schema.errors(doc);
    for (const auto& e : errs) INFO(e);
    CHECK(errs.empty());
    CHECK(doc["provenance"]["config_hash"] == "fnv1a64:" + hash_hex(job.hash));
    CHECK(doc["provenance"]["tool_version"] == tool_version);
    CHECK(doc["prediction"]["beta_r"].get<double>() == pred.beta_r);
    CHECK(doc["gap"]["width"].get<double>() == gap.width);

    std::ostringstream only;
    emit_report_json(pred, std::nullopt, std::nullopt, make_provenance(job), only);
    auto d2 = json::parse(only.str());
    CHECK(schema.errors(d2).empty());
    CHECK(d2["gap"].is_null());

    // a zero-coupling prediction carries nulls for the shifts
    auto zjob = parse_config(example_catalog()[3].text);
    auto zp = predict_gap(zjob.perturbation, zjob.waveguide, select_intersection(zjob), 0.05);
    std::ostringstream z;
    emit_report_json(zp, std::nullopt, std::nullopt, make_provenance(zjob), z);
    auto d3 = json::parse(z.str());
    CHECK(schema.errors(d3).empty());
    CHECK(d3["prediction"]["gamma_l"].is_null());
}

TEST_CASE("sink failures surface") {
    std::ostringstream s;
    s.setstate(std::ios::badbit);
    CHECK_THROWS_AS(emit_bands_csv(BandStructure{}, s), std::system_error);
    CHECK_THROWS_AS(write_output("/nonexistent-dir/x.csv", "x"), std::system_error);
}

TEST_CASE("identical config text gives identical outputs") {
    auto run = [] {
        auto job = parse_config(example_catalog()[0].text);
        Truncation tr = job.solver.truncation.resolved(job.waveguide, job.run.energy_cutoff);
        auto bs = band_structure(job.perturbation, job.waveguide, 0.05, zone_grid(job.waveguide, 33), tr, 6, 2);
        std::ostringstream s;
        emit_bands_csv(bs, s);
        emit_bands_json(bs, make_provenance(job, std::nullopt, tr), s);
        return s.str();
    };
    CHECK(run() == run());
}
