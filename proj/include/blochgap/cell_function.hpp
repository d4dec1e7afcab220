#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "blochgap/geometry.hpp"
#include "blochgap/profile.hpp"

namespace blochgap {

using cplx = std::complex<double>;

// amplitude * profile(x') * exp(2 pi i mode x_n / T); a missing profile means 1.
struct FourierTerm {
    cplx amplitude;
    int mode = 0;
    std::optional<ProfileExpression> profile;
};

// Finite sum of separable terms, T-periodic in the longitudinal variable.
class CellFunction {
public:
    CellFunction() = default;
    static CellFunction constant(cplx c);

    // c * f(x') * cos(2 pi m x_n / T + phase)
    void add_cosine(double amplitude, int mode, double phase, std::optional<ProfileExpression> profile = {});
    void add_exponential(cplx amplitude, int mode, std::optional<ProfileExpression> profile = {});

    cplx value(const Point2& xt, double xn, double period) const;
    // Longitudinal value for functions without transverse profiles.
    cplx value(double xn, double period) const { return value(Point2{0.0, 0.0}, xn, period); }

    CellFunction conj() const;
    CellFunction derivative(double period) const;
    CellFunction scaled(cplx s) const;
    CellFunction times_profile(const ProfileExpression& f) const;
    CellFunction operator+(const CellFunction& o) const;
    friend CellFunction operator*(const CellFunction& a, const CellFunction& b);

    bool empty() const { return terms_.empty(); }
    bool has_profiles() const;
    int max_mode() const;
    // Pairs conjugate terms; true when the function is real-valued.
    bool is_real(double tol = 1e-14) const;
    const std::vector<FourierTerm>& terms() const { return terms_; }

private:
    std::vector<FourierTerm> terms_;
};

// hat f_m = int_0^T exp(2 pi i m x / T) f(x) dx, exact for profile-free cell functions.
cplx fourier_coefficient(const CellFunction& f, int m, double period);
// Trapezoid rule with 8 (|m| + degree) points at least.
cplx fourier_coefficient(const std::function<double(double)>& f, int m, double period, int degree);

}  // namespace blochgap
