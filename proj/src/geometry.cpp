#include "blochgap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "blochgap/error.hpp"

namespace blochgap {

namespace {

constexpr double pi = std::numbers::pi;

void require_side(double s, const char* name) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw InvalidInput(std::string("cross-section ") + name + " must be positive and finite");
    }
}

}  // namespace

CrossSection CrossSection::interval(double width) {
    require_side(width, "width");
    return CrossSection(Interval{width});
}

CrossSection CrossSection::rectangle(double side_a, double side_b) {
    require_side(side_a, "side_a");
    require_side(side_b, "side_b");
    return CrossSection(Rectangle{side_a, side_b});
}

double CrossSection::measure() const {
    auto s = sides();
    return s[0] * s[1];
}

std::array<double, 2> CrossSection::sides() const {
    if (auto* iv = std::get_if<Interval>(&shape_)) return {iv->width, 1.0};
    const auto& r = std::get<Rectangle>(shape_);
    return {r.side_a, r.side_b};
}

TransverseMode::TransverseMode(const CrossSection& cs, int index, int m, int l)
    : index_(index), m_(m), l_(l), interval_(cs.is_interval()) {
    auto s = cs.sides();
    a_ = s[0];
    b_ = s[1];
    if (interval_) {
        norm_ = std::sqrt(2.0 / a_);
        eigenvalue_ = std::pow(pi * m / a_, 2);
    } else {
        norm_ = 2.0 / std::sqrt(a_ * b_);
        eigenvalue_ = std::pow(pi * m / a_, 2) + std::pow(pi * l / b_, 2);
    }
}

double TransverseMode::value(const Point2& x) const {
    double v = norm_ * std::sin(pi * m_ * x[0] / a_);
    if (!interval_) v *= std::sin(pi * l_ * x[1] / b_);
    return v;
}

Point2 TransverseMode::gradient(const Point2& x) const {
    double km = pi * m_ / a_;
    if (interval_) return {norm_ * km * std::cos(km * x[0]), 0.0};
    double kl = pi * l_ / b_;
    double s1 = std::sin(km * x[0]), s2 = std::sin(kl * x[1]);
    return {norm_ * km * std::cos(km * x[0]) * s2, norm_ * s1 * kl * std::cos(kl * x[1])};
}

namespace {

// Enumerates at least `count` modes plus one more so the last multiplicity gap is known.
std::vector<TransverseMode> enumerate(const CrossSection& cs, int count) {
    std::vector<TransverseMode> out;
    if (cs.is_interval()) {
        for (int m = 1; m <= count + 1; ++m) out.emplace_back(cs, 0, m, 0);
    } else {
        // Every mode among the lowest count+1 has m, l <= count+1.
        int n = count + 1;
        for (int m = 1; m <= n; ++m)
            for (int l = 1; l <= n; ++l) out.emplace_back(cs, 0, m, l);
        std::sort(out.begin(), out.end(), [](const TransverseMode& x, const TransverseMode& y) {
            return std::tuple(x.eigenvalue(), x.m(), x.l()) < std::tuple(y.eigenvalue(), y.m(), y.l());
        });
        out.erase(out.begin() + n, out.end());
    }
    std::vector<TransverseMode> res;
    for (int i = 0; i < count; ++i) {
        TransverseMode t(cs, i + 1, out[i].m(), out[i].l());
        double gap = std::abs(out[i + 1].eigenvalue() - t.eigenvalue());
        if (i > 0) gap = std::min(gap, std::abs(t.eigenvalue() - out[i - 1].eigenvalue()));
        t.set_multiplicity_gap(gap);
        res.push_back(t);
    }
    return res;
}

}  // namespace

std::vector<TransverseMode> transverse_modes(const CrossSection& cs, int count) {
    if (count < 1) throw InvalidInput("transverse_modes: count must be >= 1");
    return enumerate(cs, count);
}

std::vector<TransverseMode> transverse_modes_below(const CrossSection& cs, double energy) {
    int count = 1;
    while (true) {
        auto modes = enumerate(cs, count);
        if (modes.back().eigenvalue() > energy) {
            while (modes.size() > 1 && modes.back().eigenvalue() > energy) modes.pop_back();
            return modes;
        }
        count *= 2;
    }
}

double transverse_eigenvalue(const CrossSection& cs, int j) {
    if (j < 1) throw InvalidInput("transverse index must be >= 1");
    if (cs.is_interval()) return std::pow(pi * j / cs.sides()[0], 2);
    return enumerate(cs, j).back().eigenvalue();
}

bool check_simplicity(const std::vector<TransverseMode>& modes, int j, double tol) {
    if (j < 1 || j > static_cast<int>(modes.size())) {
        throw InvalidInput("check_simplicity: index " + std::to_string(j) + " out of range");
    }
    double lj = modes[j - 1].eigenvalue();
    // The stored gap already sees the neighbor beyond the end of the list.
    double gap = modes[j - 1].multiplicity_gap();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (static_cast<int>(i) == j - 1) continue;
        gap = std::min(gap, std::abs(modes[i].eigenvalue() - lj));
    }
    return gap > tol * std::max(1.0, std::abs(lj));
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw InvalidInput("quadrature order must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
        }
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = weights[n - 1 - i] = half * w;
    }
    if (n % 2 == 1) nodes[n / 2] = mid;
}

QuadratureRule quadrature_rule(const CrossSection& cs, int order) {
    if (order < 1) throw InvalidInput("quadrature order must be >= 1");
    auto s = cs.sides();
    std::vector<double> x1, w1;
    gauss_legendre(order, 0.0, s[0], x1, w1);
    QuadratureRule rule;
    if (cs.is_interval()) {
        for (int i = 0; i < order; ++i) {
            rule.nodes.push_back({x1[i], 0.0});
            rule.weights.push_back(w1[i]);
        }
        return rule;
    }
    std::vector<double> x2, w2;
    gauss_legendre(order, 0.0, s[1], x2, w2);
    for (int i = 0; i < order; ++i)
        for (int k = 0; k < order; ++k) {
            rule.nodes.push_back({x1[i], x2[k]});
            rule.weights.push_back(w1[i] * w2[k]);
        }
    return rule;
}

void WaveguideConfig::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidInput("period must be positive and finite");
    if (dimension == 2 && !cross_section.is_interval()) {
        throw InvalidInput("dimension 2 requires an interval cross-section");
    }
    if (dimension == 3 && cross_section.is_interval()) {
        throw InvalidInput("dimension 3 requires a rectangle cross-section");
    }
    if (dimension != 2 && dimension != 3) throw InvalidInput("dimension must be 2 or 3");
}

double WaveguideConfig::zone_edge() const { return pi / period; }

}  // namespace blochgap
