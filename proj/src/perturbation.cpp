#include "blochgap/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blochgap/error.hpp"

namespace blochgap {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I_unit(0.0, 1.0);

void require_real(const CellFunction& f, const std::string& name) {
    if (!f.is_real(1e-12)) throw InvalidInput(name + " must be real-valued");
}

void require_profile_free(const CellFunction& f, const std::string& name) {
    if (f.has_profiles()) throw InvalidInput(name + " must depend on the longitudinal variable only");
}

void require_1d_profiles(const CellFunction& f, const std::string& name, const WaveguideConfig& config) {
    if (!config.cross_section.is_interval()) return;
    for (const auto& t : f.terms())
        if (t.profile && t.profile->uses_x2()) {
            throw InvalidInput(name + " profile uses x2 but the cross-section is one-dimensional");
        }
}

int sign_pow(int k) { return (k % 2 == 0) ? 1 : -1; }

double kappa(double period, int p, double tau) { return tau + 2.0 * pi * p / period; }

struct ModeSample {
    double psi;
    Point2 grad;
};

}  // namespace

namespace trig {

double sin_sin(int m, int n, double L) { return m == n ? 0.5 * L : 0.0; }

double x_sin_sin(int m, int n, double L) {
    if (m == n) return 0.25 * L * L;
    double d = m - n, s = m + n;
    return 0.5 * (L / pi) * (L / pi) * ((sign_pow(m - n) - 1) / (d * d) - (sign_pow(m + n) - 1) / (s * s));
}

double cos_sin(int m, int n, double L) {
    auto g = [L](int k) { return k == 0 ? 0.0 : (L / (k * pi)) * (1 - sign_pow(k)); };
    return 0.5 * (g(n + m) + g(n - m));
}

double x_cos_sin(int m, int n, double L) {
    auto g = [L](int k) { return k == 0 ? 0.0 : -L * L * sign_pow(k) / (k * pi); };
    return 0.5 * (g(n + m) + g(n - m));
}

}  // namespace trig

std::string family_name(const PerturbationSpec& spec) {
    static const char* names[] = {"potential", "magnetic", "deformation", "twist", "general"};
    return names[spec.index()];
}

void validate(const PerturbationSpec& spec, const WaveguideConfig& config) {
    config.validate();
    const int n = config.dimension;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, PotentialSpec>) {
                require_real(s.V, "V");
                require_1d_profiles(s.V, "V", config);
            } else if constexpr (std::is_same_v<S, MagneticSpec>) {
                if (static_cast<int>(s.A.size()) != n) {
                    throw InvalidInput("magnetic potential needs " + std::to_string(n) + " components");
                }
                for (int i = 0; i < n; ++i) {
                    require_real(s.A[i], "A_" + std::to_string(i + 1));
                    require_1d_profiles(s.A[i], "A_" + std::to_string(i + 1), config);
                }
            } else if constexpr (std::is_same_v<S, DeformationSpec>) {
                if (n != 2) throw InvalidInput("boundary deformation requires dimension 2");
                require_real(s.h_minus, "h_minus");
                require_real(s.h_plus, "h_plus");
                require_profile_free(s.h_minus, "h_minus");
                require_profile_free(s.h_plus, "h_plus");
            } else if constexpr (std::is_same_v<S, TwistSpec>) {
                if (n != 3) throw InvalidInput("twist requires dimension 3");
                require_real(s.theta, "theta");
                require_profile_free(s.theta, "theta");
            } else {
                if (static_cast<int>(s.A.size()) != n * n || static_cast<int>(s.Aj.size()) != n) {
                    throw InvalidInput("general coefficients do not match dimension " + std::to_string(n));
                }
                for (int i = 0; i < n; ++i) {
                    std::string idx = std::to_string(i + 1);
                    require_real(s.entry(i, i, n), "A_" + idx + idx);
                    require_real(s.Aj[i], "A_" + idx);
                    require_1d_profiles(s.Aj[i], "A_" + idx, config);
                    for (int j = i; j < n; ++j) require_1d_profiles(s.entry(i, j, n), "A_" + idx + std::to_string(j + 1), config);
                }
                require_real(s.A0, "A_0");
                require_1d_profiles(s.A0, "A_0", config);
            }
        },
        spec);
}

bool has_real_coefficients(const PerturbationSpec& spec) {
    if (std::holds_alternative<MagneticSpec>(spec)) return false;
    if (auto* g = std::get_if<GeneralSpec>(&spec)) {
        for (const auto& a : g->Aj)
            if (!a.empty()) return false;
        for (const auto& a : g->A)
            if (!a.is_real(1e-12)) return false;
    }
    return true;
}

PerturbationSpec scaled(const PerturbationSpec& spec, double s) {
    return std::visit(
        [s](const auto& x) -> PerturbationSpec {
            using S = std::decay_t<decltype(x)>;
            S y = x;
            if constexpr (std::is_same_v<S, PotentialSpec>) {
                y.V = x.V.scaled(s);
            } else if constexpr (std::is_same_v<S, MagneticSpec>) {
                for (auto& a : y.A) a = a.scaled(s);
            } else if constexpr (std::is_same_v<S, DeformationSpec>) {
                y.h_minus = x.h_minus.scaled(s);
                y.h_plus = x.h_plus.scaled(s);
            } else if constexpr (std::is_same_v<S, TwistSpec>) {
                y.theta = x.theta.scaled(s);
            } else {
                for (auto& a : y.A) a = a.scaled(s);
                for (auto& a : y.Aj) a = a.scaled(s);
                y.A0 = x.A0.scaled(s);
            }
            return y;
        },
        spec);
}

FormCoefficients first_order_form(const PerturbationSpec& spec, const WaveguideConfig& config) {
    const int n = config.dimension;
    const double T = config.period;
    FormCoefficients f;
    f.n = n;
    f.A.assign(static_cast<std::size_t>(n * n), CellFunction{});
    f.S.assign(n, CellFunction{});
    f.R.assign(n, CellFunction{});
    auto at = [&](int i, int j) -> CellFunction& { return f.A[static_cast<std::size_t>(i * n + j)]; };

    if (auto* s = std::get_if<PotentialSpec>(&spec)) {
        f.C = s->V;
    } else if (auto* s = std::get_if<MagneticSpec>(&spec)) {
        for (int j = 0; j < n; ++j) {
            f.S[j] = s->A[j].scaled(I_unit);
            f.R[j] = s->A[j].scaled(-I_unit);
        }
    } else if (auto* s = std::get_if<GeneralSpec>(&spec)) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                at(i, j) = s->entry(i, j, n);
                if (i != j) at(j, i) = s->entry(i, j, n).conj();
            }
        for (int j = 0; j < n; ++j) {
            f.S[j] = s->Aj[j].scaled(I_unit);
            f.R[j] = s->Aj[j].scaled(-I_unit);
        }
        f.C = s->A0;
    } else if (auto* s = std::get_if<DeformationSpec>(&spec)) {
        const double w = config.cross_section.sides()[0];
        CellFunction h = s->h_plus + s->h_minus.scaled(-1.0);
        CellFunction dh = h.derivative(T);
        CellFunction shear = s->h_minus.derivative(T) + dh.times_profile(ProfileExpression::x1()).scaled(1.0 / w);
        at(0, 0) = h.scaled(-2.0 / w);
        at(0, 1) = shear.scaled(-1.0);
        at(1, 0) = shear.scaled(-1.0);
        f.S[1] = dh.scaled(-0.5 / w);
        f.R[1] = dh.scaled(-0.5 / w);
    } else if (auto* s = std::get_if<TwistSpec>(&spec)) {
        CellFunction dtheta = s->theta.derivative(T);
        at(0, 2) = at(2, 0) = dtheta.times_profile(ProfileExpression::x2());
        at(1, 2) = at(2, 1) = dtheta.times_profile(ProfileExpression::x1()).scaled(-1.0);
    }
    return f;
}

int default_overlap_order(const WaveguideConfig& config, int jmax) {
    auto modes = transverse_modes(config.cross_section, std::max(jmax, 1));
    int q = 1;
    for (const auto& m : modes) q = std::max({q, m.m(), m.l()});
    return std::max(32, 3 * q + 24);
}

cplx form_overlap(const FormCoefficients& form, const WaveguideConfig& config, double tau, BandIndex left,
                  BandIndex right, int quadrature_order) {
    if (left.j < 1 || right.j < 1) throw InvalidInput("transverse index must be >= 1");
    if (form.n != config.dimension) throw InvalidInput("form dimension does not match the waveguide");
    const int n = form.n;
    const double T = config.period;
    const int jmax = std::max(left.j, right.j);
    auto modes = transverse_modes(config.cross_section, jmax);
    const auto& ma = modes[left.j - 1];
    const auto& mb = modes[right.j - 1];
    int order = quadrature_order > 0 ? quadrature_order : default_overlap_order(config, jmax);
    auto rule = quadrature_rule(config.cross_section, order);

    const cplx ka = I_unit * kappa(T, left.p, tau);
    const cplx kb = -I_unit * kappa(T, right.p, tau);
    const int shift = right.p - left.p;

    // Transverse integral of sum_terms[mode = shift] amp * f * g(x').
    auto integrate = [&](const CellFunction& K, auto&& pattern) {
        cplx total = 0.0;
        for (const auto& t : K.terms()) {
            if (t.mode != shift) continue;
            cplx s = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const auto& x = rule.nodes[k];
                double f = t.profile ? t.profile->evaluate(x) : 1.0;
                s += rule.weights[k] * f * pattern(x);
            }
            total += t.amplitude * s;
        }
        return total;
    };
    // D_t Psi_left and conj(D_t Psi_right), transverse factor only.
    auto du = [&](int t, const Point2& x) -> cplx {
        if (t == n - 1) return ka * ma.value(x);
        return ma.gradient(x)[t];
    };
    auto dv = [&](int t, const Point2& x) -> cplx {
        if (t == n - 1) return kb * mb.value(x);
        return mb.gradient(x)[t];
    };

    cplx total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& K = form.A[static_cast<std::size_t>(i * n + j)];
            if (K.empty()) continue;
            total += integrate(K, [&](const Point2& x) { return du(j, x) * dv(i, x); });
        }
    for (int j = 0; j < n; ++j) {
        if (!form.S[j].empty()) total += integrate(form.S[j], [&](const Point2& x) { return du(j, x) * mb.value(x); });
        if (!form.R[j].empty()) total += integrate(form.R[j], [&](const Point2& x) { return ma.value(x) * dv(j, x); });
    }
    if (!form.C.empty()) total += integrate(form.C, [&](const Point2& x) { return cplx(ma.value(x) * mb.value(x)); });
    return total;
}

cplx fiber_overlap(const PerturbationSpec& spec, const WaveguideConfig& config, double tau, BandIndex left,
                   BandIndex right, int quadrature_order) {
    validate(spec, config);
    return form_overlap(first_order_form(spec, config), config, tau, left, right, quadrature_order);
}

std::string to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

BranchPair branch_pair(const Intersection& inter, Branch branch) {
    if (branch == Branch::plus) return {inter.first, inter.second, inter.tau0};
    return {{inter.first.j, -inter.first.p}, {inter.second.j, -inter.second.p}, -inter.tau0};
}

namespace {

void check_hermitian(const CouplingMatrix& B) {
    double scale = std::max({1.0, std::abs(B.b11), std::abs(B.b12), std::abs(B.b22)});
    if (std::abs(B.b21 - std::conj(B.b12)) > 1e-10 * scale || std::abs(B.b11.imag()) > 1e-10 * scale ||
        std::abs(B.b22.imag()) > 1e-10 * scale) {
        throw ConsistencyError("coupling matrix is not Hermitian");
    }
}

}  // namespace

CouplingMatrix coupling_matrix(const PerturbationSpec& spec, const WaveguideConfig& config, const Intersection& inter,
                               Branch branch) {
    validate(spec, config);
    auto form = first_order_form(spec, config);
    auto bp = branch_pair(inter, branch);
    int order = default_overlap_order(config, std::max(bp.first.j, bp.second.j));
    CouplingMatrix B;
    B.branch = branch;
    B.b11 = form_overlap(form, config, bp.tau, bp.first, bp.first, order);
    B.b12 = form_overlap(form, config, bp.tau, bp.first, bp.second, order);
    B.b21 = form_overlap(form, config, bp.tau, bp.second, bp.first, order);
    B.b22 = form_overlap(form, config, bp.tau, bp.second, bp.second, order);
    check_hermitian(B);
    return B;
}

MagneticEntries magnetic_entries(const PerturbationSpec& spec, const WaveguideConfig& config,
                                 const Intersection& inter, Branch branch) {
    const auto* mag = std::get_if<MagneticSpec>(&spec);
    if (!mag) throw InvalidInput("magnetic_entries requires a magnetic perturbation");
    validate(spec, config);
    const int n = config.dimension;
    const double T = config.period;
    auto bp = branch_pair(inter, branch);
    const int jmax = std::max(bp.first.j, bp.second.j);
    auto modes = transverse_modes(config.cross_section, jmax);
    auto rule = quadrature_rule(config.cross_section, default_overlap_order(config, jmax));

    // Longitudinal Fourier coefficient at the given mode of f * g over the cross-section.
    auto moment = [&](const CellFunction& A, int mode, auto&& g) {
        cplx total = 0.0;
        for (const auto& t : A.terms()) {
            if (t.mode != mode) continue;
            double s = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                double f = t.profile ? t.profile->evaluate(rule.nodes[k]) : 1.0;
                s += rule.weights[k] * f * g(rule.nodes[k]);
            }
            total += t.amplitude * s;
        }
        return total;
    };

    auto entry = [&](BandIndex a, BandIndex b) {
        const auto& ma = modes[a.j - 1];
        const auto& mb = modes[b.j - 1];
        int shift = b.p - a.p;
        cplx circulation = 0.0;
        for (int t = 0; t < n - 1; ++t) {
            circulation += moment(mag->A[t], shift, [&](const Point2& x) {
                return ma.gradient(x)[t] * mb.value(x) - ma.value(x) * mb.gradient(x)[t];
            });
        }
        cplx longitudinal =
            moment(mag->A[n - 1], shift, [&](const Point2& x) { return ma.value(x) * mb.value(x); });
        return I_unit * circulation - (kappa(T, a.p, bp.tau) + kappa(T, b.p, bp.tau)) * longitudinal;
    };

    MagneticEntries out;
    out.B.branch = branch;
    out.B.b11 = entry(bp.first, bp.first);
    out.B.b12 = entry(bp.first, bp.second);
    out.B.b21 = entry(bp.second, bp.first);
    out.B.b22 = entry(bp.second, bp.second);
    check_hermitian(out.B);
    const auto& An = mag->A[n - 1];
    const auto& m1 = modes[bp.first.j - 1];
    const auto& m2 = modes[bp.second.j - 1];
    out.a11 = moment(An, 0, [&](const Point2& x) { return m1.value(x) * m1.value(x); }).real();
    out.a22 = moment(An, 0, [&](const Point2& x) { return m2.value(x) * m2.value(x); }).real();
    return out;
}

DeformationOverlap deformation_overlap(const PerturbationSpec& spec, const WaveguideConfig& config,
                                       const Intersection& inter) {
    const auto* def = std::get_if<DeformationSpec>(&spec);
    if (!def) throw InvalidInput("deformation_overlap requires a boundary deformation");
    if (config.dimension != 2 || !config.cross_section.is_interval()) {
        throw InvalidInput("deformation_overlap requires dimension 2 with an interval cross-section");
    }
    validate(spec, config);
    const double T = config.period;
    const double w = config.cross_section.sides()[0];
    const int j = inter.first.j, k = inter.second.j;
    const int p = inter.first.p, q = inter.second.p;
    const int m = p - q;
    const double a = 2.0 * pi * m / T;
    const double kp = kappa(T, p, inter.tau0), kq = kappa(T, q, inter.tau0);
    const double delta = j == k ? 1.0 : 0.0;
    const double lambda_j = std::pow(pi * j / w, 2);
    // int psi_j psi_k' and int x psi_j psi_k' on (0, w)
    const double coef = (2.0 / w) * (k * pi / w);
    const double S = coef * trig::cos_sin(k, j, w);
    const double X = coef * trig::x_cos_sin(k, j, w);

    CellFunction h = def->h_plus + def->h_minus.scaled(-1.0);
    cplx hh = fourier_coefficient(h, m, T);
    cplx hm = fourier_coefficient(def->h_minus, m, T);

    DeformationOverlap out;
    out.I1 = a * a * hh * delta / (2.0 * w);
    out.I2 = (2.0 / w) * lambda_j * hh * delta;
    out.I3 = (kp + kq) * a * S * hm + (a / w) * hh * ((kp + kq) * X + kq * delta);
    out.I = -(out.I1 + out.I2 + out.I3) / T;
    return out;
}

TwistOverlap twist_overlap(const PerturbationSpec& spec, const WaveguideConfig& config, const Intersection& inter,
                           int quadrature_order) {
    const auto* tw = std::get_if<TwistSpec>(&spec);
    if (!tw) throw InvalidInput("twist_overlap requires a twist perturbation");
    if (config.dimension != 3 || config.cross_section.is_interval()) {
        throw InvalidInput("twist_overlap requires dimension 3 with a rectangle cross-section");
    }
    validate(spec, config);
    const double T = config.period;
    const auto sides = config.cross_section.sides();
    const int p = inter.first.p, q = inter.second.p;
    const int m = p - q;
    auto modes = transverse_modes(config.cross_section, std::max(inter.first.j, inter.second.j));
    const auto& mj = modes[inter.first.j - 1];
    const auto& mk = modes[inter.second.j - 1];
    const double kp = kappa(T, p, inter.tau0), kq = kappa(T, q, inter.tau0);

    TwistOverlap out;
    out.a = (2.0 * pi * m / (T * T)) * fourier_coefficient(tw->theta, m, T);

    int order = quadrature_order > 0 ? quadrature_order
                                     : default_overlap_order(config, std::max(inter.first.j, inter.second.j));
    auto rule = quadrature_rule(config.cross_section, order);
    double bsum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto& x = rule.nodes[i];
        auto gj = mj.gradient(x), gk = mk.gradient(x);
        double vj = mj.value(x), vk = mk.value(x);
        bsum += rule.weights[i] * (x[1] * (vj * gk[0] + gj[0] * vk) - x[0] * (vj * gk[1] + gj[1] * vk));
    }
    out.b = I_unit * kp * bsum;

    const double N2 = 4.0 / (sides[0] * sides[1]);
    double c1 = N2 * (mj.m() * pi / sides[0]) * trig::cos_sin(mj.m(), mk.m(), sides[0]) *
                trig::x_sin_sin(mj.l(), mk.l(), sides[1]);
    double c2 = N2 * (mj.l() * pi / sides[1]) * trig::x_sin_sin(mj.m(), mk.m(), sides[0]) *
                trig::cos_sin(mj.l(), mk.l(), sides[1]);
    out.degenerate = inter.first.j == inter.second.j;
    out.c = out.degenerate ? 0.0 : (kp + kq) * (c1 - c2);
    out.I = out.degenerate ? cplx(0.0) : out.a * (out.b - out.c);
    return out;
}

}  // namespace blochgap
