#pragma once

#include <array>
#include <variant>
#include <vector>

namespace blochgap {

struct Interval {
    double width = 1.0;
};

struct Rectangle {
    double side_a = 1.0;
    double side_b = 1.0;
};

// Transverse cross-section. The origin sits at a corner: Interval(w) is
// (0, w), Rectangle(a, b) is (0, a) x (0, b).
class CrossSection {
public:
    static CrossSection interval(double width);
    static CrossSection rectangle(double side_a, double side_b);

    bool is_interval() const { return std::holds_alternative<Interval>(shape_); }
    int dimension() const { return is_interval() ? 1 : 2; }
    double measure() const;
    // Side lengths; the second entry is 1 for an interval.
    std::array<double, 2> sides() const;
    const std::variant<Interval, Rectangle>& shape() const { return shape_; }

private:
    explicit CrossSection(std::variant<Interval, Rectangle> s) : shape_(s) {}
    std::variant<Interval, Rectangle> shape_;
};

using Point2 = std::array<double, 2>;

// Dirichlet eigenpair of the cross-section. For an interval only the first
// quantum number and first coordinate are used.
class TransverseMode {
public:
    TransverseMode(const CrossSection& cs, int index, int m, int l);

    int index() const { return index_; }
    int m() const { return m_; }
    int l() const { return l_; }
    double eigenvalue() const { return eigenvalue_; }
    double multiplicity_gap() const { return multiplicity_gap_; }
    void set_multiplicity_gap(double g) { multiplicity_gap_ = g; }

    double value(const Point2& x) const;
    Point2 gradient(const Point2& x) const;

private:
    int index_;
    int m_;
    int l_;
    bool interval_;
    double a_;
    double b_;
    double norm_;
    double eigenvalue_;
    double multiplicity_gap_ = 0.0;
};

// First `count` modes, ascending in eigenvalue, ties broken by (m, l).
std::vector<TransverseMode> transverse_modes(const CrossSection& cs, int count);
// All modes with eigenvalue <= energy (at least one).
std::vector<TransverseMode> transverse_modes_below(const CrossSection& cs, double energy);
double transverse_eigenvalue(const CrossSection& cs, int j);

bool check_simplicity(const std::vector<TransverseMode>& modes, int j, double tol = 1e-9);

struct QuadratureRule {
    std::vector<Point2> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);
QuadratureRule quadrature_rule(const CrossSection& cs, int order);

struct WaveguideConfig {
    CrossSection cross_section = CrossSection::interval(1.0);
    double period = 1.0;
    int dimension = 2;

    void validate() const;
    double zone_edge() const;  // pi / T
};

}  // namespace blochgap
