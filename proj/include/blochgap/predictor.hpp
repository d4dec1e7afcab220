#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "blochgap/bands.hpp"
#include "blochgap/perturbation.hpp"

namespace blochgap {

struct KCoeffs {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
    Branch branch = Branch::plus;
};

KCoeffs k_coefficients(const Intersection& inter, Branch branch, const CouplingMatrix& B);

struct BetaPair {
    double minus = 0.0;
    double plus = 0.0;
};

BetaPair beta_pm(const KCoeffs& k, cplx b12);

// Eigenvalues K_-(t) <= K_+(t) of the local two-band matrix and its orthonormal eigenvectors.
struct KCurvePoint {
    double minus = 0.0;
    double plus = 0.0;
    std::array<cplx, 2> eigvec_minus{};
    std::array<cplx, 2> eigvec_plus{};
};

KCurvePoint K_curve(const KCoeffs& k, cplx b12, double t);

struct TExtrema {
    double minus = 0.0;  // maximizer of K_-
    double plus = 0.0;   // minimizer of K_+
};

TExtrema t_extrema(const KCoeffs& k, cplx b12);

// The local variable t sits at tau = tau_* - eps t / 2.
inline double quasi_momentum_shift(double t) { return 0.0 - 0.5 * t; }

enum class Verdict { GapPredicted, ZeroCoupling, ConditionViolated };
std::string to_string(Verdict v);

struct GapPrediction {
    double epsilon = 0.0;
    double lambda0 = 0.0;
    double tau0 = 0.0;
    CouplingMatrix B_plus, B_minus;
    KCoeffs k_plus, k_minus;
    double beta_minus_plusbranch = 0.0, beta_plus_plusbranch = 0.0;
    double beta_minus_minusbranch = 0.0, beta_plus_minusbranch = 0.0;
    double beta_l = 0.0, beta_r = 0.0;
    bool gap_condition_holds = false;
    double tau_star_l = 0.0, tau_star_r = 0.0;
    double gamma_l = 0.0, gamma_r = 0.0;
    // Shift at the mirrored point -tau0 when both edges are attained on both branches.
    std::optional<double> secondary_gamma_l, secondary_gamma_r;
    Verdict verdict = Verdict::ZeroCoupling;
    std::string verdict_text;

    std::pair<double, double> edges(double eps) const { return {lambda0 + eps * beta_l, lambda0 + eps * beta_r}; }
    std::pair<double, double> extremizers(double eps) const {
        return {tau_star_l + eps * gamma_l, tau_star_r + eps * gamma_r};
    }
    std::optional<std::pair<double, double>> secondary_extremizers(double eps) const {
        if (!secondary_gamma_l || !secondary_gamma_r) return std::nullopt;
        return std::pair{-tau0 + eps * *secondary_gamma_l, -tau0 + eps * *secondary_gamma_r};
    }
    std::pair<double, double> edges() const { return edges(epsilon); }
    std::pair<double, double> extremizers() const { return extremizers(epsilon); }
};

GapPrediction predict_gap(const PerturbationSpec& spec, const WaveguideConfig& config, const Intersection& inter,
                          double epsilon);

// Explicit magnetic gap conditions: |b12| sqrt(k3^2 - k1^2) > |kappa_p kappa_q (a22 - a11)|.
struct MagneticConditions {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
MagneticConditions magnetic_explicit_conditions(const MagneticEntries& plus_entries, const Intersection& inter);

}  // namespace blochgap
