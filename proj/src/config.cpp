#include "blochgap/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "blochgap/error.hpp"
#include "blochgap/profile.hpp"

namespace blochgap {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

class Checker {
public:
    std::vector<std::string> issues;

    void fail(const std::string& path, const std::string& msg) { issues.push_back(path + ": " + msg); }

    bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        for (const auto& [k, v] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) fail(child(path, k), "unknown key");
        }
        return true;
    }

    bool require(const json& obj, const std::string& path, const char* key) {
        if (obj.contains(key)) return true;
        fail(child(path, key), "required key is missing");
        return false;
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* key) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            fail(child(path, key), "expected a finite number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<long long> integer(const json& obj, const std::string& path, const char* key) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(child(path, key), "expected an integer");
            return std::nullopt;
        }
        return v.get<long long>();
    }

    void positive(const json& obj, const std::string& path, const char* key, double& out) {
        if (auto v = number(obj, path, key)) {
            if (*v > 0.0) out = *v;
            else fail(child(path, key), "must be positive");
        }
    }

    void count(const json& obj, const std::string& path, const char* key, int lo, int& out) {
        if (auto v = integer(obj, path, key)) {
            if (*v >= lo && *v <= 1'000'000) out = static_cast<int>(*v);
            else fail(child(path, key), "must be an integer in [" + std::to_string(lo) + ", 1000000]");
        }
    }
};

struct TermRules {
    bool allow_complex = false;
    bool allow_profile = true;
    int dimension = 2;
    const char* family = "";
};

CellFunction parse_terms(Checker& c, const json& arr, const std::string& path, const TermRules& rules) {
    CellFunction f;
    if (!arr.is_array()) {
        c.fail(path, "expected an array of terms");
        return f;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string tp = item(path, i);
        const json& t = arr[i];
        if (!c.object(t, tp, {"amplitude", "mode", "phase", "profile"})) continue;
        cplx amp = 0.0;
        bool complex_amp = false;
        if (c.require(t, tp, "amplitude")) {
            const json& a = t.at("amplitude");
            if (a.is_object()) {
                if (!rules.allow_complex) {
                    c.fail(child(tp, "amplitude"), "complex amplitude not permitted here");
                } else if (c.object(a, child(tp, "amplitude"), {"re", "im"})) {
                    auto re = c.number(a, child(tp, "amplitude"), "re");
                    auto im = c.number(a, child(tp, "amplitude"), "im");
                    amp = cplx(re.value_or(0.0), im.value_or(0.0));
                    complex_amp = true;
                }
            } else if (auto v = c.number(t, tp, "amplitude")) {
                amp = *v;
            }
        }
        long long mode = c.integer(t, tp, "mode").value_or(0);
        if (std::llabs(mode) > 10000) c.fail(child(tp, "mode"), "magnitude must not exceed 10000");
        double phase = c.number(t, tp, "phase").value_or(0.0);
        std::optional<ProfileExpression> profile;
        if (t.contains("profile")) {
            const json& p = t.at("profile");
            if (!rules.allow_profile) {
                c.fail(child(tp, "profile"), std::string("transverse profiles are not permitted for ") + rules.family);
            } else if (!p.is_string()) {
                c.fail(child(tp, "profile"), "expected a string");
            } else {
                try {
                    profile = ProfileExpression::parse(p.get<std::string>());
                    if (rules.dimension == 2 && profile->uses_x2()) {
                        c.fail(child(tp, "profile"), "x2 is not a transverse coordinate in dimension 2");
                    }
                } catch (const ParseError& e) {
                    c.fail(child(tp, "profile"), e.what());
                }
            }
        }
        int m = static_cast<int>(mode);
        if (complex_amp) {
            if (m == 0) {
                f.add_exponential(amp * std::cos(phase), 0, profile);
            } else {
                f.add_exponential(0.5 * amp * std::polar(1.0, phase), m, profile);
                f.add_exponential(0.5 * amp * std::polar(1.0, -phase), -m, profile);
            }
        } else {
            f.add_cosine(amp.real(), m, phase, profile);
        }
    }
    return f;
}

WaveguideConfig parse_waveguide(Checker& c, const json& j, bool& ok) {
    const std::string path = "waveguide";
    WaveguideConfig w{CrossSection::interval(1.0), 1.0, 2};
    ok = false;
    if (!c.object(j, path, {"dimension", "cross_section", "period"})) return w;
    std::size_t before = c.issues.size();
    if (c.require(j, path, "dimension")) {
        if (auto d = c.integer(j, path, "dimension")) {
            if (*d == 2 || *d == 3) w.dimension = static_cast<int>(*d);
            else c.fail(child(path, "dimension"), "must be 2 or 3");
        }
    }
    if (c.require(j, path, "period")) c.positive(j, path, "period", w.period);
    if (c.require(j, path, "cross_section")) {
        const json& cs = j.at("cross_section");
        std::string cp = child(path, "cross_section");
        if (c.object(cs, cp, {"type", "width", "side_a", "side_b"}) && c.require(cs, cp, "type")) {
            const json& t = cs.at("type");
            if (t == "interval") {
                double width = 0.0;
                if (cs.contains("side_a") || cs.contains("side_b")) c.fail(cp, "interval takes only width");
                if (c.require(cs, cp, "width")) c.positive(cs, cp, "width", width);
                if (width > 0.0) w.cross_section = CrossSection::interval(width);
                if (w.dimension == 3) c.fail(cp + ".type", "interval cross-section requires waveguide.dimension 2 (got 3)");
            } else if (t == "rectangle") {
                double a = 0.0, b = 0.0;
                if (cs.contains("width")) c.fail(child(cp, "width"), "rectangle takes side_a and side_b");
                if (c.require(cs, cp, "side_a")) c.positive(cs, cp, "side_a", a);
                if (c.require(cs, cp, "side_b")) c.positive(cs, cp, "side_b", b);
                if (a > 0.0 && b > 0.0) w.cross_section = CrossSection::rectangle(a, b);
                if (w.dimension == 2) c.fail(cp + ".type", "rectangle cross-section requires waveguide.dimension 3 (got 2)");
            } else {
                c.fail(cp + ".type", "must be \"interval\" or \"rectangle\"");
            }
        }
    }
    ok = c.issues.size() == before;
    return w;
}

PerturbationSpec parse_perturbation(Checker& c, const json& j, int n) {
    const std::string path = "perturbation";
    if (!j.is_object()) {
        c.fail(path, "expected an object");
        return PotentialSpec{};
    }
    if (!c.require(j, path, "family")) return PotentialSpec{};
    const json& fam = j.at("family");
    if (!fam.is_string()) {
        c.fail(child(path, "family"), "expected a string");
        return PotentialSpec{};
    }
    std::string family = fam.get<std::string>();
    TermRules rules;
    rules.dimension = n;
    if (family == "potential") {
        c.object(j, path, {"family", "V"});
        PotentialSpec s;
        rules.family = "potential";
        if (j.contains("V")) s.V = parse_terms(c, j.at("V"), child(path, "V"), rules);
        return s;
    }
    if (family == "magnetic") {
        c.object(j, path, {"family", "A"});
        MagneticSpec s;
        s.A.resize(static_cast<std::size_t>(n));
        rules.family = "magnetic";
        if (c.require(j, path, "A")) {
            const json& a = j.at("A");
            if (!a.is_array() || static_cast<int>(a.size()) != n) {
                c.fail(child(path, "A"), "expected " + std::to_string(n) + " component term lists (dimension " +
                                             std::to_string(n) + ")");
            } else {
                for (int i = 0; i < n; ++i) s.A[i] = parse_terms(c, a[i], item(child(path, "A"), i), rules);
            }
        }
        return s;
    }
    if (family == "deformation") {
        c.object(j, path, {"family", "h_minus", "h_plus"});
        if (n != 2) c.fail(child(path, "family"), "deformation requires waveguide.dimension 2 (got 3)");
        DeformationSpec s;
        rules.allow_profile = false;
        rules.family = "deformation";
        if (j.contains("h_minus")) s.h_minus = parse_terms(c, j.at("h_minus"), child(path, "h_minus"), rules);
        if (j.contains("h_plus")) s.h_plus = parse_terms(c, j.at("h_plus"), child(path, "h_plus"), rules);
        return s;
    }
    if (family == "twist") {
        c.object(j, path, {"family", "theta"});
        if (n != 3) c.fail(child(path, "family"), "twist requires waveguide.dimension 3 (got 2)");
        TwistSpec s;
        rules.allow_profile = false;
        rules.family = "twist";
        if (j.contains("theta")) s.theta = parse_terms(c, j.at("theta"), child(path, "theta"), rules);
        return s;
    }
    if (family == "general") {
        c.object(j, path, {"family", "A", "Aj", "A0"});
        GeneralSpec s;
        s.A.resize(static_cast<std::size_t>(n * n));
        s.Aj.resize(static_cast<std::size_t>(n));
        rules.family = "general";
        if (j.contains("A")) {
            const json& a = j.at("A");
            std::string ap = child(path, "A");
            if (!a.is_object()) {
                c.fail(ap, "expected an object keyed by \"ij\"");
            } else {
                for (const auto& [k, v] : a.items()) {
                    int i = k.size() == 2 ? k[0] - '0' : -1, jj = k.size() == 2 ? k[1] - '0' : -1;
                    if (i < 1 || i > n || jj < 1 || jj > n) {
                        c.fail(child(ap, k), "key must be \"ij\" with 1 <= i, j <= " + std::to_string(n));
                    } else if (i > jj) {
                        c.fail(child(ap, k), "only the upper triangle i <= j is given; the rest is its conjugate");
                    } else {
                        TermRules r = rules;
                        r.allow_complex = i != jj;
                        s.A[static_cast<std::size_t>((i - 1) * n + jj - 1)] = parse_terms(c, v, child(ap, k), r);
                    }
                }
            }
        }
        if (j.contains("Aj")) {
            const json& a = j.at("Aj");
            std::string ap = child(path, "Aj");
            if (!a.is_object()) {
                c.fail(ap, "expected an object keyed by component index");
            } else {
                for (const auto& [k, v] : a.items()) {
                    int i = k.size() == 1 ? k[0] - '0' : -1;
                    if (i < 1 || i > n) c.fail(child(ap, k), "key must be a component index in 1.." + std::to_string(n));
                    else s.Aj[static_cast<std::size_t>(i - 1)] = parse_terms(c, v, child(ap, k), rules);
                }
            }
        }
        if (j.contains("A0")) s.A0 = parse_terms(c, j.at("A0"), child(path, "A0"), rules);
        return s;
    }
    c.fail(child(path, "family"), "unknown family \"" + family +
                                      "\" (expected potential, magnetic, deformation, twist or general)");
    return PotentialSpec{};
}

SolverOptions parse_solver(Checker& c, const json& j) {
    const std::string path = "solver";
    SolverOptions s;
    if (!c.object(j, path,
                  {"J", "P", "quadrature_order", "longitudinal_points", "tau_points", "m_max", "coarse_points",
                   "tau_resolution", "threads"}))
        return s;
    c.count(j, path, "J", 0, s.truncation.J);
    c.count(j, path, "P", 0, s.truncation.P);
    c.count(j, path, "quadrature_order", 0, s.truncation.quadrature_order);
    c.count(j, path, "longitudinal_points", 0, s.truncation.longitudinal_points);
    c.count(j, path, "tau_points", 2, s.tau_points);
    c.count(j, path, "m_max", 0, s.m_max);
    c.count(j, path, "coarse_points", 8, s.coarse_points);
    c.count(j, path, "threads", 0, s.threads);
    if (auto v = c.number(j, path, "tau_resolution")) {
        if (*v >= 0.0) s.tau_resolution = *v;
        else c.fail(child(path, "tau_resolution"), "must be non-negative");
    }
    return s;
}

std::optional<BandIndex> parse_band(Checker& c, const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        c.fail(path, "expected [j, p] with integer entries");
        return std::nullopt;
    }
    long long jj = j[0].get<long long>(), p = j[1].get<long long>();
    if (jj < 1 || jj > 10000 || std::llabs(p) > 10000) {
        c.fail(path, "band index out of range");
        return std::nullopt;
    }
    return BandIndex{static_cast<int>(jj), static_cast<int>(p)};
}

RunOptions parse_run(Checker& c, const json& j) {
    const std::string path = "run";
    RunOptions r;
    if (!c.object(j, path, {"epsilons", "energy_cutoff", "intersection", "window"})) return r;
    if (j.contains("epsilons")) {
        const json& e = j.at("epsilons");
        if (!e.is_array() || e.empty()) {
            c.fail(child(path, "epsilons"), "expected a non-empty array of positive numbers");
        } else {
            r.epsilons.clear();
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i].is_number() || !(e[i].get<double>() > 0.0) || !std::isfinite(e[i].get<double>())) {
                    c.fail(item(child(path, "epsilons"), i), "expected a positive number");
                } else {
                    r.epsilons.push_back(e[i].get<double>());
                }
            }
        }
    }
    c.positive(j, path, "energy_cutoff", r.energy_cutoff);
    if (j.contains("intersection")) {
        const json& s = j.at("intersection");
        std::string sp = child(path, "intersection");
        if (s.is_number_integer()) {
            if (s.get<long long>() < 0 || s.get<long long>() > 100000) c.fail(sp, "index must be non-negative");
            else r.intersection = static_cast<int>(s.get<long long>());
        } else if (s.is_object()) {
            if (c.object(s, sp, {"first", "second"}) && c.require(s, sp, "first") && c.require(s, sp, "second")) {
                auto a = parse_band(c, s.at("first"), child(sp, "first"));
                auto b = parse_band(c, s.at("second"), child(sp, "second"));
                if (a && b) r.intersection = std::pair{*a, *b};
            }
        } else {
            c.fail(sp, "expected an index or {\"first\": [j, p], \"second\": [k, q]}");
        }
    }
    if (j.contains("window")) {
        const json& w = j.at("window");
        std::string wp = child(path, "window");
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number() ||
            !(w[0].get<double>() < w[1].get<double>())) {
            c.fail(wp, "expected [lo, hi] with lo < hi");
        } else {
            r.window = EnergyRange{w[0].get<double>(), w[1].get<double>()};
        }
    }
    return r;
}

// Rejects duplicate object keys while the document is parsed.
struct DuplicateTracker {
    struct Frame {
        bool array = false;
        std::set<std::string> keys;
        std::string key;
        int index = -1;
    };
    std::vector<Frame> stack;
    std::vector<std::string> issues;

    std::string path() const {
        std::string p;
        for (const auto& f : stack) {
            if (f.array) p += "[" + std::to_string(f.index) + "]";
            else if (!f.key.empty()) p += (p.empty() ? "" : ".") + f.key;
        }
        return p.empty() ? "(root)" : p;
    }

    bool operator()(int, json::parse_event_t ev, json& parsed) {
        switch (ev) {
            case json::parse_event_t::object_start:
            case json::parse_event_t::array_start:
                if (!stack.empty() && stack.back().array) ++stack.back().index;
                stack.push_back(Frame{ev == json::parse_event_t::array_start, {}, {}, -1});
                break;
            case json::parse_event_t::key:
                stack.back().key = parsed.get<std::string>();
                if (!stack.back().keys.insert(stack.back().key).second) issues.push_back(path() + ": duplicate key");
                break;
            case json::parse_event_t::value:
                if (!stack.empty() && stack.back().array) ++stack.back().index;
                break;
            case json::parse_event_t::object_end:
            case json::parse_event_t::array_end:
                stack.pop_back();
                break;
        }
        return true;
    }
};

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

JobConfig parse_config(std::string_view text) {
    DuplicateTracker dups;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), std::ref(dups));
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        if (auto pos = msg.find("] "); pos != std::string::npos) msg = msg.substr(pos + 2);
        throw ConfigError({"(document): " + msg});
    }
    Checker c;
    c.issues = dups.issues;
    JobConfig job{WaveguideConfig{CrossSection::interval(1.0), 1.0, 2}, PotentialSpec{}, {}, {}, {}, 0};
    if (!c.object(doc, "(root)", {"waveguide", "perturbation", "solver", "run"})) throw ConfigError(c.issues);
    bool waveguide_ok = false;
    if (c.require(doc, "(root)", "waveguide")) job.waveguide = parse_waveguide(c, doc.at("waveguide"), waveguide_ok);
    if (c.require(doc, "(root)", "perturbation"))
        job.perturbation = parse_perturbation(c, doc.at("perturbation"), job.waveguide.dimension);
    if (doc.contains("solver")) job.solver = parse_solver(c, doc.at("solver"));
    if (doc.contains("run")) job.run = parse_run(c, doc.at("run"));
    if (c.issues.empty()) {
        try {
            validate(job.perturbation, job.waveguide);
        } catch (const InvalidInput& e) {
            c.fail("perturbation", e.what());
        }
    }
    if (!c.issues.empty()) throw ConfigError(c.issues);
    job.canonical = doc.dump();
    job.hash = fnv1a64(job.canonical);
    return job;
}

JobConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path + ": cannot open file"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<Intersection> admissible_intersections(const JobConfig& job) {
    std::vector<Intersection> out;
    for (auto& x : find_intersections(job.waveguide, job.run.energy_cutoff))
        if (x.admissible()) out.push_back(x);
    return out;
}

Intersection select_intersection(const JobConfig& job, std::optional<int> index_override) {
    std::optional<IntersectionSelector> sel = job.run.intersection;
    if (index_override) sel = *index_override;
    if (!sel) {
        auto all = admissible_intersections(job);
        if (all.size() == 1) return all.front();
        throw ConfigError({"run.intersection: not given and " + std::to_string(all.size()) +
                           " admissible intersections lie below the cutoff; pass --intersection"});
    }
    if (auto* idx = std::get_if<int>(&*sel)) {
        auto all = admissible_intersections(job);
        if (*idx < 0 || *idx >= static_cast<int>(all.size())) {
            throw ConfigError({"run.intersection: index " + std::to_string(*idx) + " out of range (" +
                               std::to_string(all.size()) + " admissible intersections)"});
        }
        return all[static_cast<std::size_t>(*idx)];
    }
    auto [a, b] = std::get<std::pair<BandIndex, BandIndex>>(*sel);
    double cutoff = job.run.energy_cutoff;
    for (BandIndex x : {a, b}) cutoff = std::max(cutoff, band_range(job.waveguide, x).hi + 1.0);
    for (const auto& x : find_intersections(job.waveguide, cutoff)) {
        if ((x.first == a && x.second == b) || (x.first == b && x.second == a)) return x;
    }
    throw ConfigError({"run.intersection: bands " + to_string(a) + " and " + to_string(b) + " do not cross"});
}

namespace {

json cos_term(double amp, int mode, const char* profile = nullptr) {
    json t = json::object();
    t["amplitude"] = amp;
    t["mode"] = mode;
    if (profile) t["profile"] = profile;
    return t;
}

CatalogEntry entry(const std::string& name, const std::string& summary, json wg, json pert, json run) {
    json doc = json::object();
    doc["waveguide"] = std::move(wg);
    doc["perturbation"] = std::move(pert);
    doc["run"] = std::move(run);
    return {name, summary, doc.dump(2) + "\n"};
}

json interval_guide(double T) {
    return json{{"dimension", 2}, {"cross_section", {{"type", "interval"}, {"width", 1.0}}}, {"period", T}};
}

json pair_sel(BandIndex a, BandIndex b) {
    return json{{"first", {a.j, a.p}}, {"second", {b.j, b.p}}};
}

}  // namespace

const std::vector<CatalogEntry>& example_catalog() {
    static const std::vector<CatalogEntry> catalog = [] {
        const char* psi12 = "2*sin(pi*x1)*sin(2*pi*x1)";
        std::vector<CatalogEntry> v;
        v.push_back(entry("central_potential", "potential cos(2 pi x2) on Interval(1), T=2, central crossing",
                          interval_guide(2.0), json{{"family", "potential"}, {"V", {cos_term(1.0, 2)}}},
                          json{{"epsilons", {0.1, 0.05, 0.025, 0.0125}},
                               {"energy_cutoff", 60.0},
                               {"intersection", pair_sel({1, 1}, {1, -1})}}));
        v.push_back(entry("interior_potential", "potential cos(2 pi x2) psi1 psi2 on Interval(1), T=1, interior crossing",
                          interval_guide(1.0), json{{"family", "potential"}, {"V", {cos_term(1.0, 1, psi12)}}},
                          json{{"epsilons", {0.1, 0.05, 0.025}},
                               {"energy_cutoff", 60.0},
                               {"intersection", pair_sel({1, -1}, {2, 0})}}));
        v.push_back(entry("magnetic_interior", "longitudinal magnetic potential psi1 psi2 cos(2 pi x2), T=1",
                          interval_guide(1.0),
                          json{{"family", "magnetic"}, {"A", {json::array(), {cos_term(1.0, 1, psi12)}}}},
                          json{{"epsilons", {0.1, 0.05, 0.025}},
                               {"energy_cutoff", 60.0},
                               {"intersection", pair_sel({1, -1}, {2, 0})}}));
        v.push_back(entry("magnetic_central", "the same construction at the central crossing, T=2: zero coupling",
                          interval_guide(2.0),
                          json{{"family", "magnetic"}, {"A", {json::array(), {cos_term(1.0, 2, "2*sin(pi*x1)^2")}}}},
                          json{{"epsilons", {0.05}},
                               {"energy_cutoff", 60.0},
                               {"intersection", pair_sel({1, 1}, {1, -1})}}));
        v.push_back(entry("deformation_central", "upper boundary 1 + eps cos(2 pi x2), T=2", interval_guide(2.0),
                          json{{"family", "deformation"}, {"h_plus", {cos_term(1.0, 2)}}},
                          json{{"epsilons", {0.04, 0.02, 0.01}},
                               {"energy_cutoff", 60.0},
                               {"intersection", pair_sel({1, 1}, {1, -1})}}));
        v.push_back(entry("deformation_contrast", "both boundaries shifted by eps cos(pi x2), T=2: zero coupling",
                          interval_guide(2.0),
                          json{{"family", "deformation"}, {"h_minus", {cos_term(1.0, 1)}}, {"h_plus", {cos_term(1.0, 1)}}},
                          json{{"epsilons", {0.01}},
                               {"energy_cutoff", 60.0},
                               {"intersection", pair_sel({1, 1}, {1, -1})}}));
        v.push_back(entry("twist_rectangle", "Rectangle(pi, pi/2) twisted by eps cos(pi x3), T=2, interior crossing",
                          json{{"dimension", 3},
                               {"cross_section",
                                {{"type", "rectangle"}, {"side_a", std::numbers::pi}, {"side_b", std::numbers::pi / 2}}},
                               {"period", 2.0}},
                          json{{"family", "twist"}, {"theta", {cos_term(1.0, 1)}}},
                          json{{"epsilons", {0.02, 0.01, 0.005}},
                               {"energy_cutoff", 20.0},
                               {"intersection", pair_sel({1, -1}, {2, 0})}}));
        return v;
    }();
    return catalog;
}

}  // namespace blochgap
