#pragma once

#include <Eigen/Dense>
#include <vector>

#include "blochgap/bands.hpp"
#include "blochgap/perturbation.hpp"
#include "blochgap/predictor.hpp"

namespace blochgap {

// Zero fields are filled by resolved(): J from lambda_J >= 4*energy,
// P from (2 pi P / T - pi / T)^2 >= 4*energy.
struct Truncation {
    int J = 0;
    int P = 0;
    int quadrature_order = 0;
    int longitudinal_points = 0;

    Truncation resolved(const WaveguideConfig& config, double energy) const;
    int basis_size() const { return J * (2 * P + 1); }
};

// Galerkin matrix of the exact fiber operator in the unperturbed basis, with the
// tau-independent integrals precomputed.
class FiberOperator {
public:
    FiberOperator(const PerturbationSpec& spec, const WaveguideConfig& config, double epsilon, const Truncation& trunc);

    Eigen::MatrixXcd matrix(double tau) const;
    std::vector<double> eigenvalues(double tau) const;
    const Truncation& truncation() const { return trunc_; }
    const std::vector<BandIndex>& basis() const { return basis_; }

private:
    struct Block {
        int kind = 0;  // 0: A_ij, 1: S_j, 2: R_j, 3: C
        int i = 0;
        int j = 0;
        std::vector<Eigen::MatrixXcd> moments;  // per shift q - p in [-2P, 2P], indexed (b, a)
    };

    WaveguideConfig config_;
    Truncation trunc_;
    double epsilon_;
    int n_;
    std::vector<double> lambda_;
    std::vector<BandIndex> basis_;
    std::vector<Block> blocks_;
};

Eigen::MatrixXcd assemble_fiber_matrix(const PerturbationSpec& spec, const WaveguideConfig& config, double tau,
                                       double epsilon, const Truncation& trunc);

// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& M);

struct BandStructure {
    std::vector<double> tau_grid;
    std::vector<std::vector<double>> energies;  // energies[i][m] = E_{m+1}(tau_i)
    double epsilon = 0.0;
    Truncation truncation;
};

// n points in (-pi/T, pi/T], ending at pi/T.
std::vector<double> zone_grid(const WaveguideConfig& config, int n);
int resolve_threads(int requested);

BandStructure band_structure(const PerturbationSpec& spec, const WaveguideConfig& config, double epsilon,
                             const std::vector<double>& tau_grid, const Truncation& trunc, int m_max,
                             int threads = 1);
BandStructure band_structure(const FiberOperator& op, double epsilon, const std::vector<double>& tau_grid, int m_max,
                             int threads = 1);

struct Extremum {
    double tau = 0.0;
    double energy = 0.0;
};

struct GapSearchOptions {
    int coarse_points = 256;
    double tau_resolution = 0.0;  // 0: 1e-4 * epsilon
    std::vector<double> lower_seeds;
    std::vector<double> upper_seeds;
    int threads = 1;
};

struct GapReport {
    double epsilon = 0.0;
    EnergyRange window;
    int lower_band = 0;  // 1-based; the upper band is lower_band + 1
    double alpha_l = 0.0, alpha_r = 0.0;
    double tau_l = 0.0, tau_r = 0.0;
    double width = 0.0;
    bool found = false;
    std::vector<Extremum> lower_candidates;  // refined local maxima of the lower band
    std::vector<Extremum> upper_candidates;  // refined local minima of the upper band
    Truncation truncation;
};

GapReport detect_gap(const PerturbationSpec& spec, const WaveguideConfig& config, double epsilon,
                     const EnergyRange& window, const Truncation& trunc, const GapSearchOptions& options = {});

EnergyRange default_window(const GapPrediction& prediction, const WaveguideConfig& config, const Intersection& inter,
                           double epsilon);

struct ConvergenceRow {
    double epsilon = 0.0;
    GapReport report;
    std::pair<double, double> predicted_edges;
    std::pair<double, double> predicted_extremizers;
    double tau_l = 0.0, tau_r = 0.0;  // measured extremizers nearest the prediction
    double edge_error_l = 0.0, edge_error_r = 0.0;
    double extremizer_error_l = 0.0, extremizer_error_r = 0.0;
    double width_ratio = 0.0;  // width / (eps (beta_r - beta_l)), or width / eps without a prediction
};

struct ConvergenceReport {
    GapPrediction prediction;
    std::vector<ConvergenceRow> rows;
    double slope_edge_l = 0.0, slope_edge_r = 0.0;
    double slope_extremizer_l = 0.0, slope_extremizer_r = 0.0;
};

ConvergenceReport convergence_study(const PerturbationSpec& spec, const WaveguideConfig& config,
                                    const Intersection& inter, const std::vector<double>& epsilons,
                                    const Truncation& trunc, const GapSearchOptions& options = {});

// Least-squares slope of log(y) against log(x) over entries with finite positive y; NaN below two points.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace blochgap
