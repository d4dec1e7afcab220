#include "blochgap/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "blochgap/error.hpp"

namespace blochgap {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double coupling_scale(const CouplingMatrix& B) {
    return std::max({1.0, std::abs(B.b11), std::abs(B.b22)});
}

bool zero_coupling(const CouplingMatrix& B) { return std::abs(B.b12) <= 1e-10 * coupling_scale(B); }

bool ties(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

KCoeffs k_coefficients(const Intersection& inter, Branch branch, const CouplingMatrix& B) {
    if (B.branch != branch) throw InvalidInput("coupling matrix belongs to the other branch");
    auto bp = branch_pair(inter, branch);
    const double T = inter.period;
    if (bp.first.p == bp.second.p) throw DegenerateIntersection("p = q gives k3 = 0");
    KCoeffs k;
    k.branch = branch;
    k.k1 = -pi * (bp.first.p + bp.second.p) / T - bp.tau;
    k.k2 = -0.5 * (B.b11.real() + B.b22.real());
    k.k3 = pi * (bp.first.p - bp.second.p) / T;
    k.k4 = 0.5 * (B.b22.real() - B.b11.real());
    return k;
}

BetaPair beta_pm(const KCoeffs& k, cplx b12) {
    if (k.k3 == 0.0 || std::abs(k.k1) >= std::abs(k.k3)) {
        throw DegenerateIntersection("|k1| >= |k3|: the intersection is not admissible");
    }
    double radius = std::abs(b12) * std::sqrt(k.k3 * k.k3 - k.k1 * k.k1) / std::abs(k.k3);
    double base = -k.k1 * k.k4 / k.k3 - k.k2;
    return {base - radius, base + radius};
}

KCurvePoint K_curve(const KCoeffs& k, cplx b12, double t) {
    const double mean = k.k1 * t - k.k2;
    const double half = k.k3 * t + k.k4;
    const double root = std::sqrt(half * half + std::norm(b12));
    KCurvePoint out;
    out.minus = mean - root;
    out.plus = mean + root;
    // Matrix [[mean - half, conj(b12)], [b12, mean + half]].
    if (std::abs(b12) == 0.0) {
        std::array<cplx, 2> e1{1.0, 0.0}, e2{0.0, 1.0};
        out.eigvec_minus = half >= 0.0 ? e1 : e2;
        out.eigvec_plus = half >= 0.0 ? e2 : e1;
        return out;
    }
    auto vec = [&](double lambda) {
        // Pick the better conditioned of the two null-space candidates.
        std::array<cplx, 2> a{std::conj(b12), lambda - (mean - half)};
        std::array<cplx, 2> b{lambda - (mean + half), b12};
        double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
        double nb = std::sqrt(std::norm(b[0]) + std::norm(b[1]));
        if (na >= nb) return std::array<cplx, 2>{a[0] / na, a[1] / na};
        return std::array<cplx, 2>{b[0] / nb, b[1] / nb};
    };
    out.eigvec_minus = vec(out.minus);
    out.eigvec_plus = vec(out.plus);
    return out;
}

TExtrema t_extrema(const KCoeffs& k, cplx b12) {
    if (k.k3 == 0.0 || std::abs(k.k1) >= std::abs(k.k3)) {
        throw DegenerateIntersection("|k1| >= |k3|: the intersection is not admissible");
    }
    if (std::abs(b12) == 0.0) throw InvalidInput("t_extrema requires b12 != 0");
    double s = k.k1 * std::abs(b12) / (std::abs(k.k3) * std::sqrt(k.k3 * k.k3 - k.k1 * k.k1));
    double c = -k.k4 / k.k3;
    return {s + c, -s + c};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::GapPredicted: return "GapPredicted";
        case Verdict::ZeroCoupling: return "ZeroCoupling";
        case Verdict::ConditionViolated: return "ConditionViolated";
    }
    return "";
}

GapPrediction predict_gap(const PerturbationSpec& spec, const WaveguideConfig& config, const Intersection& inter,
                          double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    if (!inter.admissible()) {
        throw InadmissibleIntersection("intersection " + to_string(inter.first) + "&" + to_string(inter.second) +
                                       " fails: " + inter.failing_conditions());
    }
    GapPrediction g;
    g.epsilon = epsilon;
    g.lambda0 = inter.lambda0;
    g.tau0 = inter.tau0;
    g.B_plus = coupling_matrix(spec, config, inter, Branch::plus);
    g.B_minus = coupling_matrix(spec, config, inter, Branch::minus);
    g.k_plus = k_coefficients(inter, Branch::plus, g.B_plus);
    g.k_minus = k_coefficients(inter, Branch::minus, g.B_minus);
    auto bp = beta_pm(g.k_plus, g.B_plus.b12);
    auto bm = beta_pm(g.k_minus, g.B_minus.b12);
    g.beta_minus_plusbranch = bp.minus;
    g.beta_plus_plusbranch = bp.plus;
    g.beta_minus_minusbranch = bm.minus;
    g.beta_plus_minusbranch = bm.plus;
    g.beta_l = std::max(bp.minus, bm.minus);
    g.beta_r = std::min(bp.plus, bm.plus);
    g.gap_condition_holds = g.beta_l < g.beta_r;
    g.tau_star_l = g.tau_star_r = inter.tau0;
    g.gamma_l = g.gamma_r = nan;

    if (has_real_coefficients(spec) && (!ties(bp.minus, bm.minus) || !ties(bp.plus, bm.plus))) {
        throw ConsistencyError("real coefficients but branch values differ");
    }

    if (zero_coupling(g.B_plus) || zero_coupling(g.B_minus)) {
        g.verdict = Verdict::ZeroCoupling;
        g.verdict_text = "first-order coupling vanishes; no gap of order epsilon is predicted "
                         "(a gap, if it opens, has length o(epsilon))";
        return g;
    }
    if (!g.gap_condition_holds) {
        g.verdict = Verdict::ConditionViolated;
        g.verdict_text = "beta_l >= beta_r: the edges from the two branches overlap";
        return g;
    }

    auto tp = t_extrema(g.k_plus, g.B_plus.b12);
    auto tm = t_extrema(g.k_minus, g.B_minus.b12);
    const double mirror = -inter.tau0;
    // Lower edge: maximum of the lower curves.
    if (ties(bp.minus, bm.minus) || bp.minus > bm.minus) {
        g.tau_star_l = inter.tau0;
        g.gamma_l = quasi_momentum_shift(tp.minus);
        if (ties(bp.minus, bm.minus) && inter.tau0 != 0.0) {
            g.secondary_gamma_l = quasi_momentum_shift(tm.minus);
        }
    } else {
        g.tau_star_l = mirror;
        g.gamma_l = quasi_momentum_shift(tm.minus);
    }
    if (ties(bp.plus, bm.plus) || bp.plus < bm.plus) {
        g.tau_star_r = inter.tau0;
        g.gamma_r = quasi_momentum_shift(tp.plus);
        if (ties(bp.plus, bm.plus) && inter.tau0 != 0.0) {
            g.secondary_gamma_r = quasi_momentum_shift(tm.plus);
        }
    } else {
        g.tau_star_r = mirror;
        g.gamma_r = quasi_momentum_shift(tm.plus);
    }
    g.verdict = Verdict::GapPredicted;
    g.verdict_text = "gap of width epsilon*(beta_r - beta_l) + O(epsilon^2) predicted";
    return g;
}

MagneticConditions magnetic_explicit_conditions(const MagneticEntries& plus_entries, const Intersection& inter) {
    const double kp = 0.5 * inter.slope_first, kq = 0.5 * inter.slope_second;
    const double k1 = -0.5 * (kp + kq), k3 = 0.5 * (kp - kq);
    MagneticConditions c;
    c.lhs = std::abs(plus_entries.B.b12) * std::sqrt(std::max(0.0, k3 * k3 - k1 * k1));
    c.rhs = std::abs(kp * kq * (plus_entries.a22 - plus_entries.a11));
    c.holds = c.lhs > c.rhs;
    return c;
}

}  // namespace blochgap
