#include "decoh/density.hpp"

#include "decoh/asymptotics.hpp"
#include "decoh/errors.hpp"
#include "decoh/fft.hpp"
#include "decoh/grid_plan.hpp"
#include "decoh/parallel.hpp"
#include "decoh/propagators.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/scattering.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace decoh {

namespace {

constexpr double kPi = std::numbers::pi;
using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::size_t kDenseLimit = 4096;

void require_dense_size(std::size_t n, const char* what) {
    if (n > kDenseLimit) {
        std::ostringstream os;
        os << what << ": grid of " << n << " points is too large for a dense kernel (limit " << kDenseLimit
           << "); use the low-rank form";
        throw ValidationError(os.str());
    }
}

// Free propagation of every column of B on grid, in place.
void propagate_columns(Eigen::MatrixXcd& B, const Grid1D& grid, double mass, double t, double hbar) {
    if (t == 0.0) return;
    const auto mult = free_multiplier(grid, mass, t, hbar);
    parallel_for(static_cast<std::size_t>(B.cols()), [&](std::size_t c) {
        std::vector<cplx> line(B.rows());
        for (Eigen::Index i = 0; i < B.rows(); ++i) line[i] = B(i, c);
        apply_multiplier(line, mult);
        for (Eigen::Index i = 0; i < B.rows(); ++i) B(i, c) = line[i];
    });
}

// Indices of rows or columns that carry any nonzero entry.
std::vector<Eigen::Index> active_indices(const Eigen::MatrixXcd& K) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        if (K.row(i).cwiseAbs().maxCoeff() > 0.0 || K.col(i).cwiseAbs().maxCoeff() > 0.0) idx.push_back(i);
    return idx;
}

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& K, const std::vector<Eigen::Index>& idx) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd S(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) S(a, b) = K(idx[a], idx[b]);
    return S;
}

// f_sigma(y_i) conj(f_sigma(z_j)) I(y_i, z_j) on the support nodes.
struct NodeDensity {
    std::vector<std::size_t> nodes;
    Eigen::MatrixXcd values;
};

NodeDensity node_density(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid) {
    NodeDensity nd;
    nd.nodes = support_nodes(spec, grid);
    if (nd.nodes.empty()) throw ResolutionError("density: no grid nodes inside supp f_sigma");
    std::vector<double> ys(nd.nodes.size());
    Eigen::VectorXcd f(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        ys[i] = grid.x(nd.nodes[i]);
        f[i] = spec.f_sigma(ys[i], params.hbar);
    }
    const OverlapKernelTable tab = overlap_table(spec, params, ys);
    nd.values = f.asDiagonal() * tab.values * f.conjugate().asDiagonal();
    return nd;
}

}  // namespace

// ---------------------------------------------------------------- DensityMatrixGrid

double DensityMatrixGrid::trace() const { return kernel.diagonal().real().sum() * grid.spacing; }

double DensityMatrixGrid::purity() const { return kernel.squaredNorm() * grid.spacing * grid.spacing; }

double DensityMatrixGrid::hermiticity_defect() const {
    return (kernel - kernel.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrixGrid::min_eigenvalue() const {
    // Eigenvalues of the full kernel are those of the active block plus zeros.
    const auto idx = active_indices(kernel);
    if (idx.empty()) return 0.0;
    Eigen::MatrixXcd S = submatrix(kernel, idx);
    S = 0.5 * (S + S.adjoint().eval()) * grid.spacing;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    if (static_cast<Eigen::Index>(idx.size()) < kernel.rows()) lo = std::min(lo, 0.0);
    return lo;
}

std::vector<double> DensityMatrixGrid::diagonal() const {
    std::vector<double> d(kernel.rows());
    for (Eigen::Index i = 0; i < kernel.rows(); ++i) d[i] = kernel(i, i).real();
    return d;
}

InvariantReport density_invariants(const DensityMatrixGrid& rho) {
    return {rho.hermiticity_defect(), rho.trace(), rho.min_eigenvalue(), rho.purity()};
}

// ---------------------------------------------------------------- LowRankDensity

double LowRankDensity::trace() const {
    const Eigen::MatrixXcd G = basis.adjoint() * basis;
    return (core * G).trace().real() * grid.spacing;
}

double LowRankDensity::purity() const {
    const Eigen::MatrixXcd G = basis.adjoint() * basis;
    const Eigen::MatrixXcd X = core * G;
    return (X * X).trace().real() * grid.spacing * grid.spacing;
}

std::vector<double> LowRankDensity::diagonal() const {
    const Eigen::MatrixXcd BC = basis * core;
    std::vector<double> d(basis.rows());
    for (Eigen::Index i = 0; i < basis.rows(); ++i) d[i] = BC.row(i).dot(basis.row(i)).real();
    return d;
}

cplx LowRankDensity::entry(std::size_t i, std::size_t j) const {
    // Eigen's dot conjugates its first argument.
    return basis.row(j).dot(basis.row(i) * core);
}

DensityMatrixGrid LowRankDensity::to_dense() const {
    require_dense_size(grid.n, "low-rank to dense");
    DensityMatrixGrid d;
    d.grid = grid;
    d.kernel = basis * core * basis.adjoint();
    return d;
}

// ---------------------------------------------------------------- reduced densities

DensityMatrixGrid reduced_density(const ComplexField2D& psi) {
    const std::size_t nr = psi.grid_r.n, nR = psi.grid_R.n;
    require_dense_size(nR, "reduced density");
    Eigen::Map<const RowMat> Psi(psi.values.data(), static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nR));
    DensityMatrixGrid rho;
    rho.grid = psi.grid_R;
    rho.kernel = psi.grid_r.spacing * (Psi.transpose() * Psi.conjugate());
    rho.kernel = 0.5 * (rho.kernel + rho.kernel.adjoint().eval());
    const double n2 = std::pow(norm(psi), 2);
    const double tr = rho.trace();
    if (std::abs(tr - n2) > 1e-3) {
        std::ostringstream os;
        os << "reduced density trace " << tr << " differs from ||psi||^2 = " << n2;
        throw AccuracyError(os.str());
    }
    return rho;
}

LowRankDensity reduced_density_low_rank(const ComplexField2D& psi, double drop_tol) {
    const std::size_t nr = psi.grid_r.n, nR = psi.grid_R.n;
    Eigen::Map<const RowMat> Psi(psi.values.data(), static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nR));
    std::vector<Eigen::Index> keep;
    const double total = Psi.squaredNorm();
    for (Eigen::Index i = 0; i < Psi.rows(); ++i)
        if (Psi.row(i).squaredNorm() > drop_tol * total) keep.push_back(i);
    LowRankDensity lr;
    lr.grid = psi.grid_R;
    lr.basis.resize(static_cast<Eigen::Index>(nR), static_cast<Eigen::Index>(keep.size()));
    const double s = std::sqrt(psi.grid_r.spacing);
    for (std::size_t c = 0; c < keep.size(); ++c) lr.basis.col(c) = s * Psi.row(keep[c]).transpose();
    lr.core = Eigen::MatrixXcd::Identity(lr.basis.cols(), lr.basis.cols());
    return lr;
}

// ---------------------------------------------------------------- overlap kernel

OverlapKernel::OverlapKernel(const InitialStateSpec& spec, const PhysicalParams& params) {
    const double hb = params.hbar, alpha = params.alpha();
    double K = std::abs(spec.k0(hb)) + spec.g.bandwidth(1e-14) / spec.delta;
    if (alpha > 0.0) {
        // Centers inside supp g put a kink in the integrand, so W(y, k) ~ 2i R(k) g(y) e^{-iky} / (sqrt(2 pi) |k|).
        // The dropped tail of f(y) conj f(z) I(y, z) is then below 4 alpha^2 max|f g|^2 / (3 pi K^3).
        double w = 0.0;
        for (auto [a, b] : spec.f_support())
            for (int i = 0; i <= 4000; ++i) {
                const double y = a + (b - a) * i / 4000.0;
                w = std::max(w, std::norm(spec.f_sigma(y, hb) * spec.g_delta(y, hb)));
            }
        K = std::max(K, std::cbrt(4.0 * alpha * alpha * w / (3.0 * kPi * 1e-9)));
    }
    const double xf = (spec.single_packet() ? 0.0 : spec.R0) + spec.f.extent(1e-14) * spec.sigma;
    const double xg = std::abs(spec.r0) + spec.g.extent(1e-14) * spec.delta;
    // Phases e^{i(|k| -+ k) y} of two rows plus the packet's own extent.
    const double X = 4.0 * xf + 2.0 * xg;
    const double width = std::min(kPi / X, 0.5 / spec.delta);
    QuadratureRule half;
    if (alpha > 0.0 && 4.0 * alpha < K) {
        half = gauss_legendre_width(0.0, 4.0 * alpha, std::min(width, 0.5 * alpha));
        half.append(gauss_legendre_width(4.0 * alpha, K, width));
    } else {
        half = gauss_legendre_width(0.0, K, alpha > 0.0 ? std::min(width, 0.5 * alpha) : width);
    }
    for (std::size_t i = half.size(); i-- > 0;) {
        ks_.push_back(-half.x[i]);
        kw_.push_back(half.w[i]);
    }
    for (std::size_t i = 0; i < half.size(); ++i) {
        ks_.push_back(half.x[i]);
        kw_.push_back(half.w[i]);
    }
    w_ = std::make_shared<const WPlusEvaluator>(spec, hb, alpha, ks_);
}

Eigen::MatrixXcd OverlapKernel::rows(const std::vector<double>& ys) const {
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(ks_.size()));
    parallel_for(ys.size(), [&](std::size_t i) {
        std::vector<cplx> r;
        w_->row(ys[i], r);
        for (std::size_t j = 0; j < r.size(); ++j) A(i, j) = std::sqrt(kw_[j]) * r[j];
    });
    return A;
}

cplx OverlapKernel::operator()(double y, double z) const {
    const Eigen::MatrixXcd A = rows({y, z});
    return A.row(1).dot(A.row(0));
}

Eigen::MatrixXcd OverlapKernel::table(const std::vector<double>& ys) const {
    const Eigen::MatrixXcd A = rows(ys);
    Eigen::MatrixXcd T = A * A.adjoint();
    return 0.5 * (T + T.adjoint().eval());
}

cplx overlap_kernel(const InitialStateSpec& spec, const PhysicalParams& params, double y, double z) {
    return OverlapKernel(spec, params)(y, z);
}

OverlapKernelTable overlap_table(const InitialStateSpec& spec, const PhysicalParams& params,
                                 const std::vector<double>& nodes) {
    OverlapKernelTable t;
    t.nodes = nodes;
    const OverlapKernel I(spec, params);
    t.values = I.table(nodes);
    const Eigen::MatrixXcd& A = t.values;
    t.max_modulus = A.size() ? A.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) t.diagonal_defect = std::max(t.diagonal_defect, std::abs(A(i, i) - 1.0));
    t.hermiticity_defect = A.size() ? (A - A.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if (t.max_modulus > 1.0 + 1e-6) {
        std::ostringstream os;
        os << "overlap kernel quadrature failure: max |I| = " << t.max_modulus;
        throw AccuracyError(os.str());
    }
    return t;
}

// ---------------------------------------------------------------- asymptotic / effective densities

DensityMatrixGrid asymptotic_density(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                     const Grid1D& grid) {
    require_dense_size(grid.n, "asymptotic density");
    if (t < 0.0) throw ValidationError("asymptotic density: t must be nonnegative");
    const NodeDensity nd = node_density(spec, params, grid);
    const auto n = static_cast<Eigen::Index>(grid.n);
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t a = 0; a < nd.nodes.size(); ++a)
        for (std::size_t b = 0; b < nd.nodes.size(); ++b) X(nd.nodes[a], nd.nodes[b]) = nd.values(a, b);
    // U rho U^dagger: propagate columns, then the columns of the adjoint.
    propagate_columns(X, grid, params.M, t, params.hbar);
    Eigen::MatrixXcd Y = X.adjoint();
    propagate_columns(Y, grid, params.M, t, params.hbar);
    DensityMatrixGrid d;
    d.grid = grid;
    d.kernel = Y.adjoint();
    d.kernel = 0.5 * (d.kernel + d.kernel.adjoint().eval());
    return d;
}

LowRankDensity asymptotic_density_low_rank(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                           const Grid1D& grid, double drop_tol) {
    if (t < 0.0) throw ValidationError("asymptotic density: t must be nonnegative");
    const NodeDensity nd = node_density(spec, params, grid);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (nd.values + nd.values.adjoint()));
    const auto& ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev.size(); i-- > 0;)
        if (std::abs(ev[i]) > drop_tol * top) keep.push_back(i);
    LowRankDensity lr;
    lr.grid = grid;
    lr.basis = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid.n), static_cast<Eigen::Index>(keep.size()));
    lr.core = Eigen::MatrixXcd::Zero(lr.basis.cols(), lr.basis.cols());
    for (std::size_t c = 0; c < keep.size(); ++c) {
        for (std::size_t a = 0; a < nd.nodes.size(); ++a) lr.basis(nd.nodes[a], c) = es.eigenvectors()(a, keep[c]);
        lr.core(c, c) = ev[keep[c]];
    }
    propagate_columns(lr.basis, grid, params.M, t, params.hbar);
    return lr;
}

LowRankDensity effective_density(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                 const LambdaResult& lam, const Grid1D& grid) {
    if (t < 0.0) throw ValidationError("effective density: t must be nonnegative");
    LowRankDensity lr;
    lr.grid = grid;
    lr.basis.resize(static_cast<Eigen::Index>(grid.n), 2);
    for (std::size_t i = 0; i < grid.n; ++i) {
        lr.basis(i, 0) = spec.f_plus(grid.x(i), params.hbar);
        lr.basis(i, 1) = spec.f_minus(grid.x(i), params.hbar);
    }
    propagate_columns(lr.basis, grid, params.M, t, params.hbar);
    const cplx c = cross_coherence(lam);
    lr.core.resize(2, 2);
    lr.core << 0.5, 0.5 * c, 0.5 * std::conj(c), 0.5;
    return lr;
}

DensityMatrixGrid momentum_density(const InitialStateSpec& spec, const PhysicalParams& params,
                                   const LambdaResult& lam, const Grid1D& kgrid) {
    require_dense_size(kgrid.n, "momentum density");
    Eigen::VectorXcd fp(kgrid.n), fm(kgrid.n);
    for (std::size_t i = 0; i < kgrid.n; ++i) {
        fp[i] = spec.f_plus_ft(kgrid.x(i), params.hbar);
        fm[i] = spec.f_minus_ft(kgrid.x(i), params.hbar);
    }
    const cplx c = cross_coherence(lam);
    DensityMatrixGrid d;
    d.grid = kgrid;
    d.representation = Representation::momentum;
    d.kernel = 0.5 * (fp * fp.adjoint() + fm * fm.adjoint() + c * fp * fm.adjoint() + std::conj(c) * fm * fp.adjoint());
    return d;
}

Grid1D momentum_grid(const InitialStateSpec& spec, const PhysicalParams& params) {
    const double K = 1.05 * (spec.P0 / params.hbar + spec.f.bandwidth(1e-14) / spec.sigma);
    const double xf = (spec.single_packet() ? 0.0 : spec.R0) + spec.f.extent(1e-14) * spec.sigma;
    const double dk = std::min(kPi / (4.0 * xf), 1.0 / (6.0 * spec.sigma));
    const std::size_t n = nice_size(static_cast<std::size_t>(std::ceil(2.0 * K / dk)));
    return Grid1D::symmetric(n, 0.5 * static_cast<double>(n) * dk);
}

// ---------------------------------------------------------------- Wigner

namespace {

template <class Entry>
WignerSample wigner_impl(const Grid1D& grid, double hbar, std::size_t stride, Entry&& entry) {
    if (stride == 0) throw ValidationError("wigner: row stride must be positive");
    const std::size_t n = grid.n;
    const std::size_t L = nice_size(n + 1);
    const double dx = 2.0 * grid.spacing / hbar;
    const double dP = 2.0 * kPi / (static_cast<double>(L) * dx);
    WignerSample w;
    for (std::size_t i = 0; i < n; i += stride) w.R.push_back(grid.x(i));
    w.P.resize(L);
    for (std::size_t p = 0; p < L; ++p) w.P[p] = (static_cast<double>(p) - static_cast<double>(L / 2)) * dP;
    w.values.resize(static_cast<Eigen::Index>(w.R.size()), static_cast<Eigen::Index>(L));
    std::vector<double> resid(w.R.size(), 0.0);
    parallel_for(w.R.size(), [&](std::size_t row) {
        const std::size_t i = row * stride;
        const std::size_t J = std::min(i, n - 1 - i);
        std::vector<cplx> a(L, 0.0);
        for (std::size_t j = 0; j <= J; ++j) {
            a[j] = entry(i - j, i + j);
            if (j > 0) a[L - j] = entry(i + j, i - j);
        }
        fft(a, +1);
        double r = 0.0;
        for (std::size_t p = 0; p < L; ++p) {
            const cplx v = a[(p + L / 2) % L] * dx / (2.0 * kPi);
            w.values(row, p) = v.real();
            r = std::max(r, std::abs(v.imag()));
        }
        resid[row] = r;
    });
    for (double r : resid) w.imag_residue = std::max(w.imag_residue, r);
    w.integral = w.values.sum() * dP * grid.spacing * static_cast<double>(stride);
    const double scale = std::max(1e-300, w.values.cwiseAbs().maxCoeff());
    if (w.imag_residue > 1e-6 * scale) {
        std::ostringstream os;
        os << "Wigner function imaginary residue " << w.imag_residue << " exceeds 1e-6 of max |W| = " << scale;
        throw AccuracyError(os.str());
    }
    return w;
}

}  // namespace

WignerSample wigner_function(const DensityMatrixGrid& rho, double hbar, std::size_t row_stride) {
    return wigner_impl(rho.grid, hbar, row_stride, [&](std::size_t a, std::size_t b) { return rho.kernel(a, b); });
}

WignerSample wigner_function(const LowRankDensity& rho, double hbar, std::size_t row_stride) {
    const Eigen::MatrixXcd BC = rho.basis * rho.core;
    return wigner_impl(rho.grid, hbar, row_stride,
                       [&](std::size_t a, std::size_t b) { return rho.basis.row(b).dot(BC.row(a)); });
}

// ---------------------------------------------------------------- distances

DistanceReport distances(const DensityMatrixGrid& a, const DensityMatrixGrid& b, bool with_trace_norm) {
    if (a.grid != b.grid || a.representation != b.representation)
        throw DimensionError("distances: density matrices live on different grids");
    const Eigen::MatrixXcd D = a.kernel - b.kernel;
    DistanceReport r;
    r.hilbert_schmidt = std::sqrt(D.squaredNorm()) * a.grid.spacing;
    if (with_trace_norm && a.grid.n <= 1024) {
        const Eigen::MatrixXcd H = 0.5 * (D + D.adjoint()) * a.grid.spacing;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
        r.trace_norm = es.eigenvalues().cwiseAbs().sum();
    }
    return r;
}

double hs_distance(const LowRankDensity& a, const LowRankDensity& b) {
    if (a.grid != b.grid) throw DimensionError("hs_distance: density matrices live on different grids");
    const Eigen::Index ra = a.basis.cols(), rb = b.basis.cols();
    Eigen::MatrixXcd S(a.basis.rows(), ra + rb);
    S << a.basis, b.basis;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(ra + rb, ra + rb);
    K.topLeftCorner(ra, ra) = a.core;
    K.bottomRightCorner(rb, rb) = -b.core;
    const Eigen::MatrixXcd X = K * (S.adjoint() * S);
    const double v = (X * X).trace().real();
    return std::sqrt(std::max(0.0, v)) * a.grid.spacing;
}

// ---------------------------------------------------------------- regime and bounds

bool RegimeReport::separation_ok(double limit) const {
    return sigma_alpha <= limit && inv_alpha_sep <= limit && delta_sep <= limit;
}

RegimeReport check_regime(const InitialStateSpec& spec, const PhysicalParams& params, double strong) {
    RegimeReport r;
    const double alpha = params.alpha(), sep = spec.R0 - std::abs(spec.r0);
    auto warn = [&](double v, const char* what) {
        if (!(v <= strong)) {
            std::ostringstream os;
            os << what << " = " << v << " is not small (<= " << strong << ")";
            r.warnings.push_back(os.str());
        }
    };
    if (sep <= 0.0) {
        r.inv_alpha_sep = r.delta_sep = std::numeric_limits<double>::infinity();
        r.warnings.push_back("R0 - |r0| is not positive");
    } else {
        r.inv_alpha_sep = alpha > 0.0 ? 1.0 / (alpha * sep) : std::numeric_limits<double>::infinity();
        r.delta_sep = spec.delta / sep;
    }
    r.sigma_alpha = spec.sigma * alpha;
    r.spreading = spec.R0 > 0.0 ? (spec.sigma / spec.R0) / (params.hbar / (spec.sigma * spec.P0)) : 0.0;
    if (alpha > 0.0) {
        warn(r.sigma_alpha, "sigma * alpha");
        warn(r.inv_alpha_sep, "1 / (alpha (R0 - |r0|))");
    }
    warn(r.delta_sep, "delta / (R0 - |r0|)");
    if (spec.P0 > 0.0) warn(r.spreading, "(sigma / R0) / (hbar / (sigma P0))");
    return r;
}

BoundReport proposition2_check(const InitialStateSpec& spec, const PhysicalParams& params,
                               std::size_t samples_per_interval) {
    const RegimeReport reg = check_regime(spec, params);
    const double alpha = params.alpha();
    if (spec.single_packet() || spec.R0 <= spec.sigma) throw ValidationError("proposition 2 needs two separated packets");
    if (alpha > 0.0 && !reg.separation_ok(0.5)) {
        std::ostringstream os;
        os << "proposition 2 regime violated: sigma*alpha = " << reg.sigma_alpha
           << ", 1/(alpha(R0-|r0|)) = " << reg.inv_alpha_sep << ", delta/(R0-|r0|) = " << reg.delta_sep;
        throw ValidationError(os.str());
    }
    if (samples_per_interval < 2) throw ValidationError("proposition 2 needs at least 2 samples per interval");
    BoundReport b;
    const LambdaResult lam = lambda_param(spec, params);
    b.Lambda = lam.Lambda;
    const double sep = spec.R0 - std::abs(spec.r0);
    b.bound_offdiag = (alpha > 0.0 ? 1.0 / (alpha * sep) : 0.0) + spec.delta / sep;
    b.bound_diag = alpha * spec.sigma + b.bound_offdiag;
    std::vector<double> ys;
    const std::size_t m = samples_per_interval;
    // ys[0, m) near +R0 (Delta+), ys[m, 2m) near -R0 (Delta-); open intervals sampled at midpoints.
    for (double c : {spec.R0, -spec.R0})
        for (std::size_t i = 0; i < m; ++i)
            ys.push_back(c - spec.sigma + 2.0 * spec.sigma * (static_cast<double>(i) + 0.5) / static_cast<double>(m));
    b.samples = ys.size();
    const OverlapKernelTable t = overlap_table(spec, params, ys);
    for (std::size_t i = 0; i < 2 * m; ++i)
        for (std::size_t j = 0; j < 2 * m; ++j) {
            const bool same = (i < m) == (j < m);
            const cplx v = t.values(i, j);
            if (same)
                b.sup_diag = std::max(b.sup_diag, std::abs(v - 1.0));
            else if (i < m)
                b.sup_offdiag = std::max(b.sup_offdiag, std::abs(v - lam.Lambda));
            else
                b.sup_offdiag_conj = std::max(b.sup_offdiag_conj, std::abs(v - std::conj(lam.Lambda)));
        }
    return b;
}

// ---------------------------------------------------------------- fringes

namespace {

// Points per fringe period 2 pi hbar / (2 P0); ResolutionError below the minimum (1e-9 relative slack).
double check_fringe_resolution(const Grid1D& grid, double P0, double hbar, double min_points) {
    const double nu = 2.0 * P0 / hbar;
    const double ppp = 2.0 * kPi / (nu * grid.spacing);
    if (ppp < min_points * (1.0 - 1e-9)) {
        std::ostringstream os;
        os << "fringe period under-resolved: " << ppp << " points per period, need >= " << min_points
           << " (R spacing <= " << 2.0 * kPi / (nu * min_points) << ")";
        throw ResolutionError(os.str());
    }
    return ppp;
}

}  // namespace

VisibilityReport fringe_visibility(const Grid1D& grid, const std::vector<double>& n, double P0, double hbar,
                                   double min_points_per_period) {
    if (n.size() != grid.n) throw DimensionError("fringe visibility: density length does not match the grid");
    if (!(P0 > 0.0)) throw ValidationError("fringe visibility needs P0 > 0");
    VisibilityReport v;
    v.frequency = 2.0 * P0 / hbar;
    v.points_per_period = check_fringe_resolution(grid, P0, hbar, min_points_per_period);
    cplx F = 0.0;
    double dc = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        F += n[j] * std::polar(1.0, -v.frequency * grid.x(j));
        dc += n[j];
    }
    F *= grid.spacing;
    dc *= grid.spacing;
    v.dc = dc;
    if (!(dc > 0.0)) throw AccuracyError("fringe visibility: density has no weight on the grid");
    v.visibility = 2.0 * std::abs(F) / dc;
    v.phase = std::arg(F);
    return v;
}

InterferencePattern interference_pattern(const InitialStateSpec& spec, const PhysicalParams& params,
                                         const InterferenceOptions& opts) {
    if (!(spec.P0 > 0.0) || !(spec.R0 > 0.0)) throw ValidationError("fringes need R0 > 0 and P0 > 0");
    InterferencePattern ip;
    ip.tau = spec.R0 * params.M / spec.P0;
    ip.regime = check_regime(spec, params);
    ip.grid = opts.grid ? *opts.grid : plan_heavy_grid(spec, params, ip.tau, opts.min_points_per_period);
    check_fringe_resolution(ip.grid, spec.P0, params.hbar, opts.min_points_per_period);
    ip.lambda = lambda_param(spec, params);
    const LowRankDensity eff = effective_density(spec, params, ip.tau, ip.lambda, ip.grid);
    ip.n_effective = eff.diagonal();
    ip.effective = fringe_visibility(ip.grid, ip.n_effective, spec.P0, params.hbar, opts.min_points_per_period);
    if (opts.with_asymptotic) {
        const LowRankDensity as = asymptotic_density_low_rank(spec, params, ip.tau, ip.grid);
        ip.n_asymptotic = as.diagonal();
        ip.asymptotic = fringe_visibility(ip.grid, ip.n_asymptotic, spec.P0, params.hbar, opts.min_points_per_period);
    }
    return ip;
}

}  // namespace decoh
