#include "blochgap/cell_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blochgap/error.hpp"

namespace blochgap {

namespace {

constexpr double pi = std::numbers::pi;

std::optional<ProfileExpression> multiply(const std::optional<ProfileExpression>& a,
                                          const std::optional<ProfileExpression>& b) {
    if (!a) return b;
    if (!b) return a;
    return ProfileExpression::product(*a, *b);
}

bool same_profile(const std::optional<ProfileExpression>& a, const std::optional<ProfileExpression>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || *a == *b;
}

}  // namespace

CellFunction CellFunction::constant(cplx c) {
    CellFunction f;
    f.add_exponential(c, 0);
    return f;
}

void CellFunction::add_cosine(double amplitude, int mode, double phase, std::optional<ProfileExpression> profile) {
    if (mode == 0) {
        add_exponential(amplitude * std::cos(phase), 0, std::move(profile));
        return;
    }
    cplx e = std::polar(0.5 * amplitude, phase);
    add_exponential(e, mode, profile);
    add_exponential(std::conj(e), -mode, std::move(profile));
}

void CellFunction::add_exponential(cplx amplitude, int mode, std::optional<ProfileExpression> profile) {
    terms_.push_back({amplitude, mode, std::move(profile)});
}

cplx CellFunction::value(const Point2& xt, double xn, double period) const {
    cplx s = 0.0;
    for (const auto& t : terms_) {
        double f = t.profile ? t.profile->evaluate(xt) : 1.0;
        s += t.amplitude * f * std::polar(1.0, 2.0 * pi * t.mode * xn / period);
    }
    return s;
}

CellFunction CellFunction::conj() const {
    CellFunction out;
    for (const auto& t : terms_) out.terms_.push_back({std::conj(t.amplitude), -t.mode, t.profile});
    return out;
}

CellFunction CellFunction::derivative(double period) const {
    CellFunction out;
    for (const auto& t : terms_) {
        if (t.mode == 0) continue;
        out.terms_.push_back({t.amplitude * cplx(0.0, 2.0 * pi * t.mode / period), t.mode, t.profile});
    }
    return out;
}

CellFunction CellFunction::scaled(cplx s) const {
    CellFunction out = *this;
    for (auto& t : out.terms_) t.amplitude *= s;
    return out;
}

CellFunction CellFunction::times_profile(const ProfileExpression& f) const {
    CellFunction out = *this;
    for (auto& t : out.terms_) t.profile = multiply(t.profile, f);
    return out;
}

CellFunction CellFunction::operator+(const CellFunction& o) const {
    CellFunction out = *this;
    out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
    return out;
}

CellFunction operator*(const CellFunction& a, const CellFunction& b) {
    CellFunction out;
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_)
            out.terms_.push_back({s.amplitude * t.amplitude, s.mode + t.mode, multiply(s.profile, t.profile)});
    return out;
}

bool CellFunction::has_profiles() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const FourierTerm& t) { return t.profile.has_value(); });
}

int CellFunction::max_mode() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.mode));
    return m;
}

bool CellFunction::is_real(double tol) const {
    // Every term needs a partner with conjugate amplitude, opposite mode and the same profile.
    std::vector<bool> used(terms_.size(), false);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (used[i]) continue;
        const auto& t = terms_[i];
        if (t.mode == 0 && std::abs(t.amplitude.imag()) <= tol * std::max(1.0, std::abs(t.amplitude))) {
            used[i] = true;
            continue;
        }
        bool found = false;
        for (std::size_t k = i + 1; k < terms_.size() && !found; ++k) {
            const auto& u = terms_[k];
            if (used[k] || u.mode != -t.mode || !same_profile(t.profile, u.profile)) continue;
            if (std::abs(u.amplitude - std::conj(t.amplitude)) <= tol * std::max(1.0, std::abs(t.amplitude))) {
                used[i] = used[k] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

cplx fourier_coefficient(const CellFunction& f, int m, double period) {
    if (f.has_profiles()) throw InvalidInput("fourier_coefficient: function depends on the cross-section");
    cplx s = 0.0;
    for (const auto& t : f.terms())
        if (t.mode == -m) s += t.amplitude;
    return s * period;
}

cplx fourier_coefficient(const std::function<double(double)>& f, int m, double period, int degree) {
    int n = std::max(16, 8 * (std::abs(m) + std::max(degree, 1)));
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = period * i / n;
        s += f(x) * std::polar(1.0, 2.0 * pi * m * x / period);
    }
    return s * (period / n);
}

}  // namespace blochgap
