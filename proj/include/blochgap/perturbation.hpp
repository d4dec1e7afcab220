#pragma once

#include <string>
#include <variant>
#include <vector>

#include "blochgap/bands.hpp"
#include "blochgap/cell_function.hpp"
#include "blochgap/geometry.hpp"

namespace blochgap {

struct PotentialSpec {
    CellFunction V;
};

// A[0..n-2] transverse components, A[n-1] longitudinal.
struct MagneticSpec {
    std::vector<CellFunction> A;
};

// Interval(w) deformed to the strip between eps*h_minus and w + eps*h_plus.
struct DeformationSpec {
    CellFunction h_minus;
    CellFunction h_plus;
};

// Rectangle rotated by eps*theta(x3) about the x3 axis through the origin.
struct TwistSpec {
    CellFunction theta;
};

// -sum d_i A_ij d_j + i sum (A_j d_j + d_j A_j) + A_0. A is n x n, row-major;
// entries below the diagonal are ignored and taken as conjugates of the upper ones.
struct GeneralSpec {
    std::vector<CellFunction> A;
    std::vector<CellFunction> Aj;
    CellFunction A0;

    const CellFunction& entry(int i, int j, int n) const { return A[static_cast<std::size_t>(i * n + j)]; }
};

using PerturbationSpec = std::variant<PotentialSpec, MagneticSpec, DeformationSpec, TwistSpec, GeneralSpec>;

std::string family_name(const PerturbationSpec& spec);
void validate(const PerturbationSpec& spec, const WaveguideConfig& config);
bool has_real_coefficients(const PerturbationSpec& spec);
PerturbationSpec scaled(const PerturbationSpec& spec, double s);

// Separable Hermitian form on the cell,
//   q(u, v) = int A_ij D_j u conj(D_i v) + S_j D_j u conj(v) + R_j u conj(D_j v) + C u conj(v),
// where D_n carries the quasi-momentum. Empty cell functions are zero.
struct FormCoefficients {
    int n = 2;
    std::vector<CellFunction> A;  // n*n, row-major, full
    std::vector<CellFunction> S;
    std::vector<CellFunction> R;
    CellFunction C;
};

// First-order form L_0 of the spec.
FormCoefficients first_order_form(const PerturbationSpec& spec, const WaveguideConfig& config);

int default_overlap_order(const WaveguideConfig& config, int jmax);

// <L_0(tau) Psi_left, Psi_right> on the cell.
cplx form_overlap(const FormCoefficients& form, const WaveguideConfig& config, double tau, BandIndex left,
                  BandIndex right, int quadrature_order = 0);
cplx fiber_overlap(const PerturbationSpec& spec, const WaveguideConfig& config, double tau, BandIndex left,
                   BandIndex right, int quadrature_order = 0);

enum class Branch { plus, minus };
std::string to_string(Branch b);

// Effective (first, second, tau) used on a branch: the minus branch takes
// (j,-p), (k,-q) at -tau0.
struct BranchPair {
    BandIndex first;
    BandIndex second;
    double tau = 0.0;
};
BranchPair branch_pair(const Intersection& inter, Branch branch);

struct CouplingMatrix {
    cplx b11, b12, b21, b22;
    Branch branch = Branch::plus;
};

CouplingMatrix coupling_matrix(const PerturbationSpec& spec, const WaveguideConfig& config, const Intersection& inter,
                               Branch branch);

struct MagneticEntries {
    CouplingMatrix B;
    double a11 = 0.0;
    double a22 = 0.0;
};
MagneticEntries magnetic_entries(const PerturbationSpec& spec, const WaveguideConfig& config,
                                 const Intersection& inter, Branch branch);

struct DeformationOverlap {
    cplx I, I1, I2, I3;
};
// Plus-branch b12 in closed form, I = -(I1 + I2 + I3) / T.
DeformationOverlap deformation_overlap(const PerturbationSpec& spec, const WaveguideConfig& config,
                                       const Intersection& inter);

struct TwistOverlap {
    cplx I, a, b, c;
    bool degenerate = false;  // j = k: c vanishes identically
};
// Plus-branch b12 in closed form, I = a (b - c).
TwistOverlap twist_overlap(const PerturbationSpec& spec, const WaveguideConfig& config, const Intersection& inter,
                           int quadrature_order = 0);

// Closed-form one-dimensional sine integrals on (0, L).
namespace trig {
double sin_sin(int m, int n, double L);     // int sin(m pi x/L) sin(n pi x/L)
double x_sin_sin(int m, int n, double L);   // int x sin sin
double cos_sin(int m, int n, double L);     // int cos(m pi x/L) sin(n pi x/L)
double x_cos_sin(int m, int n, double L);   // int x cos sin
}  // namespace trig

}  // namespace blochgap
