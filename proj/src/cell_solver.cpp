#include "blochgap/cell_solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "blochgap/error.hpp"

namespace blochgap {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();
const cplx I_unit(0.0, 1.0);

// Kernel slot of the exact form: kind 0 = A_ij, 1 = S_j, 2 = R_j, 3 = C.
struct Slot {
    int kind;
    int i;
    int j;
};

// Pointwise values of every active kernel of the exact perturbation form at parameter eps.
struct Sampler {
    std::vector<Slot> slots;
    std::function<void(const Point2&, double, cplx*)> eval;
    int bandwidth = 0;  // largest longitudinal mode present (exact trig kernels)
    bool trig_exact = true;
};

Sampler separable_sampler(const FormCoefficients& form, double eps, const CellFunction* extra_c, double period) {
    const int n = form.n;
    std::vector<CellFunction> owned;
    owned.reserve(n * n + 2 * n + 2);
    Sampler s;
    auto add = [&](int kind, int i, int j, const CellFunction& f, double scale) {
        if (f.empty()) return;
        owned.push_back(f.scaled(scale));
        s.slots.push_back({kind, i, j});
        s.bandwidth = std::max(s.bandwidth, f.max_mode());
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) add(0, i, j, form.A[static_cast<std::size_t>(i * n + j)], eps);
    for (int j = 0; j < n; ++j) add(1, j, j, form.S[j], eps);
    for (int j = 0; j < n; ++j) add(2, j, j, form.R[j], eps);
    CellFunction c = form.C.scaled(eps);
    if (extra_c) c = c + extra_c->scaled(eps * eps);
    add(3, 0, 0, c, 1.0);
    auto shared = std::make_shared<std::vector<CellFunction>>(std::move(owned));
    s.eval = [shared, period](const Point2& x, double xn, cplx* out) {
        for (std::size_t k = 0; k < shared->size(); ++k) out[k] = (*shared)[k].value(x, xn, period);
    };
    return s;
}

Sampler deformation_sampler(const DeformationSpec& spec, const WaveguideConfig& config, double eps) {
    const double T = config.period;
    const double w = config.cross_section.sides()[0];
    CellFunction h = spec.h_plus + spec.h_minus.scaled(-1.0);
    CellFunction dh = h.derivative(T);
    CellFunction dhm = spec.h_minus.derivative(T);
    Sampler s;
    s.slots = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 1}, {2, 1, 1}, {3, 0, 0}};
    s.bandwidth = std::max(h.max_mode(), spec.h_minus.max_mode());
    s.trig_exact = false;
    s.eval = [=](const Point2& x, double xn, cplx* out) {
        double d = 1.0 + eps * h.value(xn, T).real() / w;
        if (!(d > 0.0)) throw InvalidInput("deformation folds the strip: 1 + eps h / w <= 0");
        double g = eps * (dhm.value(xn, T).real() + x[0] * dh.value(xn, T).real() / w);
        double r = eps * dh.value(xn, T).real() / (2.0 * w * d);
        double a12 = -g / d;
        out[0] = (1.0 + g * g) / (d * d) - 1.0;
        out[1] = a12;
        out[2] = a12;
        out[3] = -r * a12;
        out[4] = -r * a12;
        out[5] = -r;
        out[6] = -r;
        out[7] = r * r;
    };
    return s;
}

Sampler twist_sampler(const TwistSpec& spec, const WaveguideConfig& config, double eps) {
    const double T = config.period;
    CellFunction dtheta = spec.theta.derivative(T);
    Sampler s;
    s.slots = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 2}, {0, 2, 0}, {0, 1, 2}, {0, 2, 1}};
    s.bandwidth = 2 * spec.theta.max_mode();
    s.trig_exact = true;
    s.eval = [=](const Point2& x, double xn, cplx* out) {
        double t = eps * dtheta.value(xn, T).real();
        double u = x[1] * t, v = x[0] * t;
        out[0] = u * u;
        out[1] = -u * v;
        out[2] = -u * v;
        out[3] = v * v;
        out[4] = u;
        out[5] = u;
        out[6] = -v;
        out[7] = -v;
    };
    return s;
}

Sampler make_sampler(const PerturbationSpec& spec, const WaveguideConfig& config, double eps) {
    if (auto* d = std::get_if<DeformationSpec>(&spec)) return deformation_sampler(*d, config, eps);
    if (auto* t = std::get_if<TwistSpec>(&spec)) return twist_sampler(*t, config, eps);
    auto form = first_order_form(spec, config);
    if (auto* m = std::get_if<MagneticSpec>(&spec)) {
        CellFunction sq;
        for (const auto& a : m->A) sq = sq + a * a.conj();
        return separable_sampler(form, eps, &sq, config.period);
    }
    return separable_sampler(form, eps, nullptr, config.period);
}

double max_abs(const Eigen::MatrixXcd& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double fold(double tau, double period) {
    const double edge = pi / period, span = 2.0 * pi / period;
    double x = std::fmod(tau + edge, span);
    if (x <= 0.0) x += span;
    return x - edge;
}

// Maximizes f on [a, b] by golden-section search.
Extremum golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

}  // namespace

Truncation Truncation::resolved(const WaveguideConfig& config, double energy) const {
    Truncation t = *this;
    const double target = 4.0 * std::max(energy, 0.0);
    if (t.J <= 0) {
        auto modes = transverse_modes_below(config.cross_section, target);
        int count = static_cast<int>(modes.size());
        if (modes.back().eigenvalue() < target) ++count;
        t.J = std::max(2, count);
    }
    if (t.P <= 0) {
        // quadratic terms shift p by twice the coefficient mode; keep one extra ring of harmonics
        double need = (std::sqrt(2.0 * target) + pi / config.period) * config.period / (2.0 * pi);
        t.P = std::max(1, static_cast<int>(std::ceil(need - 1e-12)));
    }
    if (t.quadrature_order <= 0) t.quadrature_order = default_overlap_order(config, t.J);
    return t;
}

FiberOperator::FiberOperator(const PerturbationSpec& spec, const WaveguideConfig& config, double epsilon,
                             const Truncation& trunc)
    : config_(config), trunc_(trunc), epsilon_(epsilon), n_(config.dimension) {
    validate(spec, config);
    if (trunc_.J < 1 || trunc_.P < 0) throw InvalidInput("truncation needs J >= 1 and P >= 0");
    if (trunc_.quadrature_order <= 0) trunc_.quadrature_order = default_overlap_order(config, trunc_.J);
    const int J = trunc_.J, P = trunc_.P;
    const double T = config.period;
    auto modes = transverse_modes(config.cross_section, J);
    for (const auto& m : modes) lambda_.push_back(m.eigenvalue());
    for (int p = -P; p <= P; ++p)
        for (int a = 0; a < J; ++a) basis_.push_back({a + 1, p});
    if (epsilon == 0.0) return;

    Sampler sampler = make_sampler(spec, config, epsilon);
    if (sampler.slots.empty()) return;
    int N = trunc_.longitudinal_points;
    if (N <= 0) {
        N = sampler.trig_exact ? std::max(16, 2 * P + sampler.bandwidth + 1)
                               : std::max(64, 4 * P + 8 * sampler.bandwidth + 32);
    }
    trunc_.longitudinal_points = N;

    auto rule = quadrature_rule(config.cross_section, trunc_.quadrature_order);
    const int nodes = static_cast<int>(rule.nodes.size());
    const int shifts = 4 * P + 1;
    const int S = static_cast<int>(sampler.slots.size());

    // hat K_D(x) = (1/N) sum_k K(x, T k / N) exp(-2 pi i D k / N) for D in [-2P, 2P]
    std::vector<cplx> twiddle(N);
    for (int k = 0; k < N; ++k) twiddle[k] = std::polar(1.0, -2.0 * pi * k / N);
    std::vector<Eigen::MatrixXcd> hat(S, Eigen::MatrixXcd::Zero(nodes, shifts));
    std::vector<cplx> values(static_cast<std::size_t>(S) * N);
    for (int x = 0; x < nodes; ++x) {
        for (int k = 0; k < N; ++k) sampler.eval(rule.nodes[x], T * k / N, &values[static_cast<std::size_t>(k) * S]);
        for (int s = 0; s < S; ++s)
            for (int d = -2 * P; d <= 2 * P; ++d) {
                cplx acc = 0.0;
                for (int k = 0; k < N; ++k) {
                    int idx = static_cast<int>((static_cast<long long>(d) * k % N + N) % N);
                    acc += values[static_cast<std::size_t>(k) * S + s] * twiddle[idx];
                }
                hat[s](x, d + 2 * P) = acc / static_cast<double>(N);
            }
    }

    // Transverse factors: phi[t] holds d_t psi for t < n - 1 and psi for t = n - 1.
    std::vector<Eigen::MatrixXd> phi(n_, Eigen::MatrixXd(nodes, J));
    Eigen::MatrixXd psi(nodes, J);
    for (int x = 0; x < nodes; ++x)
        for (int a = 0; a < J; ++a) {
            const auto& pt = rule.nodes[x];
            double v = modes[a].value(pt);
            auto g = modes[a].gradient(pt);
            psi(x, a) = v;
            for (int t = 0; t < n_ - 1; ++t) phi[t](x, a) = g[t];
            phi[n_ - 1](x, a) = v;
        }
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nodes);

    for (int s = 0; s < S; ++s) {
        const auto& sl = sampler.slots[s];
        const Eigen::MatrixXd& left = sl.kind == 0 ? phi[sl.i] : sl.kind == 2 ? phi[sl.j] : psi;
        const Eigen::MatrixXd& right = sl.kind == 0 ? phi[sl.j] : sl.kind == 1 ? phi[sl.j] : psi;
        Block b;
        b.kind = sl.kind;
        b.i = sl.i;
        b.j = sl.j;
        for (int d = 0; d < shifts; ++d) {
            Eigen::VectorXcd weight = w.cast<cplx>().cwiseProduct(hat[s].col(d));
            b.moments.push_back(left.transpose().cast<cplx>() * weight.asDiagonal() * right.cast<cplx>());
        }
        blocks_.push_back(std::move(b));
    }
}

Eigen::MatrixXcd FiberOperator::matrix(double tau) const {
    const int J = trunc_.J, P = trunc_.P;
    const int dim = J * (2 * P + 1);
    const double T = config_.period;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    for (int pi_ = 0; pi_ <= 2 * P; ++pi_) {
        int p = pi_ - P;
        double k = tau + 2.0 * pi * p / T;
        for (int a = 0; a < J; ++a) M(pi_ * J + a, pi_ * J + a) = lambda_[a] + k * k;
    }
    const int last = n_ - 1;
    for (const auto& b : blocks_) {
        for (int pi_ = 0; pi_ <= 2 * P; ++pi_) {
            int p = pi_ - P;
            cplx fp = I_unit * (tau + 2.0 * pi * p / T);
            for (int qi = 0; qi <= 2 * P; ++qi) {
                int q = qi - P;
                cplx gq = -I_unit * (tau + 2.0 * pi * q / T);
                cplx factor = 1.0;
                if (b.kind == 0) factor = (b.j == last ? fp : 1.0) * (b.i == last ? gq : 1.0);
                else if (b.kind == 1) factor = b.j == last ? fp : 1.0;
                else if (b.kind == 2) factor = b.j == last ? gq : 1.0;
                M.block(qi * J, pi_ * J, J, J) += factor * b.moments[q - p + 2 * P];
            }
        }
    }
    double asym = max_abs(M - M.adjoint());
    if (asym > 1e-10 * std::max(1.0, 1e-2 * max_abs(M))) {
        throw ConsistencyError("fiber matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
    }
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    return H;
}

std::vector<double> FiberOperator::eigenvalues(double tau) const { return hermitian_eigenvalues(matrix(tau)); }

Eigen::MatrixXcd assemble_fiber_matrix(const PerturbationSpec& spec, const WaveguideConfig& config, double tau,
                                       double epsilon, const Truncation& trunc) {
    return FiberOperator(spec, config, epsilon, trunc).matrix(tau);
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& M) {
    if (M.rows() != M.cols()) throw InvalidInput("matrix is not square");
    if (M.size() == 0) return {};
    if (max_abs(M - M.adjoint()) > 1e-10 * std::max(1.0, max_abs(M))) throw InvalidInput("matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConsistencyError("eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> zone_grid(const WaveguideConfig& config, int n) {
    if (n < 1) throw InvalidInput("tau grid needs at least one point");
    const double edge = pi / config.period;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = -edge + 2.0 * edge * (i + 1) / n;
    g.back() = edge;
    return g;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

BandStructure band_structure(const FiberOperator& op, double epsilon, const std::vector<double>& tau_grid, int m_max,
                             int threads) {
    BandStructure bs;
    bs.tau_grid = tau_grid;
    bs.epsilon = epsilon;
    bs.truncation = op.truncation();
    const int keep = std::min(m_max, op.truncation().basis_size());
    if (m_max < 1) throw InvalidInput("m_max must be >= 1");
    bs.energies.assign(tau_grid.size(), {});
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tau_grid.size(); i = next++) {
            auto ev = op.eigenvalues(tau_grid[i]);
            ev.resize(static_cast<std::size_t>(keep));
            bs.energies[i] = std::move(ev);
        }
    };
    int nt = std::min<int>(resolve_threads(threads), static_cast<int>(std::max<std::size_t>(tau_grid.size(), 1)));
    if (nt <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return bs;
}

BandStructure band_structure(const PerturbationSpec& spec, const WaveguideConfig& config, double epsilon,
                             const std::vector<double>& tau_grid, const Truncation& trunc, int m_max, int threads) {
    const double edge = pi / config.period;
    for (double t : tau_grid)
        if (!(t > -edge - 1e-15 && t <= edge + 1e-15)) throw InvalidInput("tau grid leaves (-pi/T, pi/T]");
    FiberOperator op(spec, config, epsilon, trunc);
    return band_structure(op, epsilon, tau_grid, m_max, threads);
}

GapReport detect_gap(const PerturbationSpec& spec, const WaveguideConfig& config, double epsilon,
                     const EnergyRange& window, const Truncation& trunc_in, const GapSearchOptions& options) {
    if (!(window.hi > window.lo)) throw InvalidInput("gap window must have lo < hi");
    if (epsilon < 0.0) throw InvalidInput("epsilon must be >= 0");
    const double T = config.period;
    Truncation trunc = trunc_in.resolved(config, window.hi);

    // Count unperturbed bands below and inside the window; at eps = 0 the sorted bands are even in tau.
    const double tol = 1e-12 * std::max(1.0, std::abs(window.hi));
    auto modes = transverse_modes_below(config.cross_section, window.hi);
    const int smax = longitudinal_bound(T, window.hi);
    int below = 0, inside = 0;
    for (const auto& m : modes) {
        if (m.eigenvalue() > window.hi + tol) continue;
        for (int s = -smax; s <= smax; ++s) {
            auto r = band_range(m.eigenvalue(), T, s);
            if (r.lo > window.hi + tol) continue;
            if (m.index() > trunc.J || std::abs(s) > trunc.P) {
                throw InvalidInput("truncation J=" + std::to_string(trunc.J) + ", P=" + std::to_string(trunc.P) +
                                   " misses band (" + std::to_string(m.index()) + "," + std::to_string(s) +
                                   ") below the window");
            }
            if (r.hi < window.lo - tol) ++below;
            else ++inside;
        }
    }
    if (inside > 2) {
        throw AmbiguousWindow("window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) + "] meets " +
                              std::to_string(inside) + " unperturbed bands");
    }

    GapReport rep;
    rep.epsilon = epsilon;
    rep.window = window;
    rep.lower_band = below + 1;
    const int lo_idx = below, hi_idx = below + 1;

    FiberOperator op(spec, config, epsilon, trunc);
    rep.truncation = op.truncation();
    if (hi_idx >= op.truncation().basis_size()) throw InvalidInput("basis too small for the requested bands");

    const int npts = std::max(8, options.coarse_points);
    auto grid = zone_grid(config, npts);
    auto bs = band_structure(op, epsilon, grid, hi_idx + 3, options.threads);
    const double h = 2.0 * pi / T / npts;
    const double tau_tol = options.tau_resolution > 0.0 ? options.tau_resolution : std::max(1e-4 * epsilon, 1e-10);

    auto band = [&](int idx) { return [&, idx](double tau) { return op.eigenvalues(fold(tau, T))[idx]; }; };
    auto lower = band(lo_idx);
    auto upper_neg = [&](double tau) { return -op.eigenvalues(fold(tau, T))[hi_idx]; };

    // Local extrema on the periodic coarse grid, best first.
    auto refine = [&](int idx, double sign, const std::vector<double>& seeds,
                      const std::function<double(double)>& f) {
        std::vector<std::pair<double, int>> local;
        for (int i = 0; i < npts; ++i) {
            double v = sign * bs.energies[i][idx];
            double l = sign * bs.energies[(i + npts - 1) % npts][idx];
            double r = sign * bs.energies[(i + 1) % npts][idx];
            if (v >= l && v >= r) local.push_back({v, i});
        }
        std::sort(local.begin(), local.end(), [](auto& a, auto& b) { return a.first > b.first; });
        if (local.size() > 6) local.resize(6);
        std::vector<Extremum> out;
        for (auto& [v, i] : local) {
            auto e = golden_max(f, grid[i] - h, grid[i] + h, tau_tol);
            if (e.energy < v) e = {grid[i], v};
            out.push_back({fold(e.tau, T), e.energy});
        }
        for (double s : seeds) {
            auto e = golden_max(f, s - h, s + h, tau_tol);
            out.push_back({fold(e.tau, T), e.energy});
        }
        for (auto& e : out) e.energy *= sign;
        return out;
    };

    rep.lower_candidates = refine(lo_idx, 1.0, options.lower_seeds, lower);
    rep.upper_candidates = refine(hi_idx, -1.0, options.upper_seeds, upper_neg);

    auto pick = [](const std::vector<Extremum>& c, double sign) {
        Extremum best = c.front();
        for (const auto& e : c) {
            double d = sign * (e.energy - best.energy);
            double scale = 1e-12 * std::max(1.0, std::abs(best.energy));
            if (d > scale) best = e;
            else if (std::abs(d) <= scale && best.tau < 0.0 && e.tau >= 0.0) best = e;
        }
        return best;
    };
    auto l = pick(rep.lower_candidates, 1.0);
    auto r = pick(rep.upper_candidates, -1.0);
    rep.alpha_l = l.energy;
    rep.tau_l = l.tau;
    rep.alpha_r = r.energy;
    rep.tau_r = r.tau;
    rep.width = rep.alpha_r - rep.alpha_l;
    const double floor = 1e-7 * std::max(1.0, std::abs(0.5 * (rep.alpha_l + rep.alpha_r)));
    rep.found = rep.width > floor;
    if (rep.found) {
        for (const auto& row : bs.energies)
            for (double e : row)
                if (e > rep.alpha_l + floor && e < rep.alpha_r - floor) rep.found = false;
    }
    return rep;
}

EnergyRange default_window(const GapPrediction& prediction, const WaveguideConfig& config, const Intersection& inter,
                           double epsilon) {
    double margin = isolation_distance(config, inter.lambda0, {inter.first, inter.second});
    if (!(margin > 0.0)) throw InvalidInput("intersection is not isolated; no window available");
    double spread = 10.0 * epsilon * (prediction.beta_r - prediction.beta_l);
    double half = spread > 0.0 ? std::min(spread, 0.5 * margin) : 0.5 * margin;
    return {inter.lambda0 - half, inter.lambda0 + half};
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return nan;
    double den = n * sxx - sx * sx;
    if (den == 0.0) return nan;
    return (n * sxy - sx * sy) / den;
}

ConvergenceReport convergence_study(const PerturbationSpec& spec, const WaveguideConfig& config,
                                    const Intersection& inter, const std::vector<double>& epsilons,
                                    const Truncation& trunc, const GapSearchOptions& options) {
    if (epsilons.size() < 3) throw InvalidInput("convergence study needs at least three epsilons");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw InvalidInput("epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw InvalidInput("epsilons must be strictly decreasing");
    }
    ConvergenceReport rep;
    rep.prediction = predict_gap(spec, config, inter, epsilons.front());
    const auto& pred = rep.prediction;
    const bool predicted = pred.verdict == Verdict::GapPredicted;
    Truncation tr = trunc.resolved(config, inter.lambda0);

    std::vector<double> el, er, xl, xr;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        const double eps = epsilons[i];
        ConvergenceRow row;
        row.epsilon = eps;
        row.predicted_edges = pred.edges(eps);
        row.predicted_extremizers = pred.extremizers(eps);
        GapSearchOptions opt = options;
        if (predicted) {
            opt.lower_seeds.push_back(row.predicted_extremizers.first);
            opt.upper_seeds.push_back(row.predicted_extremizers.second);
            if (auto sec = pred.secondary_extremizers(eps)) {
                opt.lower_seeds.push_back(sec->first);
                opt.upper_seeds.push_back(sec->second);
            }
        }
        row.report = detect_gap(spec, config, eps, default_window(pred, config, inter, eps), tr, opt);
        if (i == 0 && predicted && !row.report.found) {
            throw GapNotFound("no gap found at epsilon = " + std::to_string(eps) + " (alpha_l = " +
                              std::to_string(row.report.alpha_l) + ", alpha_r = " + std::to_string(row.report.alpha_r) +
                              ")");
        }
        // Among candidates attaining the edge, take the one nearest the predicted extremizer.
        auto nearest = [&](const std::vector<Extremum>& cands, double edge, double target, double sign) {
            double best_tau = nan, best_d = std::numeric_limits<double>::infinity();
            for (const auto& c : cands) {
                if (sign * (edge - c.energy) > 1e-4 * eps + 1e-12 * std::abs(edge)) continue;
                double d = std::abs(c.tau - target);
                if (d < best_d) {
                    best_d = d;
                    best_tau = c.tau;
                }
            }
            return best_tau;
        };
        row.tau_l = row.report.tau_l;
        row.tau_r = row.report.tau_r;
        if (predicted) {
            row.tau_l = nearest(row.report.lower_candidates, row.report.alpha_l, row.predicted_extremizers.first, 1.0);
            row.tau_r = nearest(row.report.upper_candidates, row.report.alpha_r, row.predicted_extremizers.second, -1.0);
        }
        row.edge_error_l = std::abs(row.report.alpha_l - row.predicted_edges.first);
        row.edge_error_r = std::abs(row.report.alpha_r - row.predicted_edges.second);
        row.extremizer_error_l = predicted ? std::abs(row.tau_l - row.predicted_extremizers.first) : nan;
        row.extremizer_error_r = predicted ? std::abs(row.tau_r - row.predicted_extremizers.second) : nan;
        double scale = pred.beta_r - pred.beta_l;
        row.width_ratio = scale > 0.0 ? row.report.width / (eps * scale) : row.report.width / eps;
        el.push_back(row.edge_error_l);
        er.push_back(row.edge_error_r);
        xl.push_back(row.extremizer_error_l);
        xr.push_back(row.extremizer_error_r);
        rep.rows.push_back(std::move(row));
    }
    rep.slope_edge_l = fit_loglog_slope(epsilons, el);
    rep.slope_edge_r = fit_loglog_slope(epsilons, er);
    rep.slope_extremizer_l = fit_loglog_slope(epsilons, xl);
    rep.slope_extremizer_r = fit_loglog_slope(epsilons, xr);
    return rep;
}

}  // namespace blochgap
