#pragma once

#include "decoh/core.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace decoh {

class WPlusEvaluator;

// ---- decoherence parameter

enum class LambdaMethod { definition_integral, rescaled, low_k0 };
std::string lambda_method_name(LambdaMethod m);
LambdaMethod parse_lambda_method(const std::string& s);

struct LambdaResult {
    cplx Lambda{1.0, 0.0};
    double modulus = 1.0;
    double phase = 0.0;
    LambdaMethod method = LambdaMethod::rescaled;
};

// definition_integral: int dk |g~_delta(k)|^2 T_alpha(k) over unscaled k.
// rescaled:            1 - int dz |g~(z)|^2 beta / (beta - i (z + k0 delta)).
// low_k0:              1 - int dz |g~(z)|^2 beta^2 / (beta^2 + z^2), the k0 -> 0 form.
// alpha = 0 returns exactly 1. Throws AccuracyError when |Lambda| > 1 + 1e-8.
LambdaResult lambda_param(const InitialStateSpec& spec, const PhysicalParams& params,
                          LambdaMethod method = LambdaMethod::rescaled);
// Same integrals in the scaled variables only (beta = alpha delta, s = k0 delta), for maps.
cplx lambda_scaled(const Envelope& g, double beta, double k0delta, LambdaMethod method = LambdaMethod::rescaled);

// Coefficient multiplying f+(y) conj(f-(z)) in the effective initial density; f+ sits at -R0 so this is
// the value the overlap kernel approaches for y near -R0, z near +R0.
cplx cross_coherence(const LambdaResult& lam);

// ---- density matrices

enum class Representation { position, momentum };

// Kernel rho(x_i, x_j) on a uniform grid; position grids are in length units, momentum grids in
// wavenumber units (P / hbar) so that trace = sum rho_ii * spacing in both cases.
struct DensityMatrixGrid {
    Grid1D grid;
    Eigen::MatrixXcd kernel;
    Representation representation = Representation::position;

    double trace() const;
    double purity() const;
    double hermiticity_defect() const;  // max |rho_ij - conj(rho_ji)|
    // Smallest eigenvalue of the discretized operator (kernel * spacing), Hermitian part.
    double min_eigenvalue() const;
    std::vector<double> diagonal() const;
};

// rho = B C B^dagger with B (n x r) columns sampled on the grid and C Hermitian (r x r).
struct LowRankDensity {
    Grid1D grid;
    Eigen::MatrixXcd basis;
    Eigen::MatrixXcd core;

    double trace() const;
    double purity() const;
    std::vector<double> diagonal() const;
    cplx entry(std::size_t i, std::size_t j) const;
    DensityMatrixGrid to_dense() const;
};

struct InvariantReport {
    double hermiticity_defect = 0.0;
    double trace = 0.0;
    double min_eigenvalue = 0.0;
    double purity = 0.0;
};
InvariantReport density_invariants(const DensityMatrixGrid& rho);

// int dr psi(r, R) conj(psi(r, R')). Throws AccuracyError when the trace misses ||psi||^2 by > 1e-3.
DensityMatrixGrid reduced_density(const ComplexField2D& psi);
// Low-rank form of the same (basis psi(r_i, .) sqrt(dr) for the rows carrying norm), for large grids.
LowRankDensity reduced_density_low_rank(const ComplexField2D& psi, double drop_tol = 1e-14);

// ---- overlap kernel I(y, z) = int dk W(y, k) conj(W(z, k))

class OverlapKernel {
public:
    OverlapKernel(const InitialStateSpec& spec, const PhysicalParams& params);
    cplx operator()(double y, double z) const;
    // Values for all pairs of the given centers (Hermitian by construction).
    Eigen::MatrixXcd table(const std::vector<double>& ys) const;
    std::size_t k_nodes() const { return kw_.size(); }

private:
    std::vector<double> ks_, kw_;
    std::shared_ptr<const WPlusEvaluator> w_;
    Eigen::MatrixXcd rows(const std::vector<double>& ys) const;  // sqrt(w_k) W(y, k), one row per y
};

cplx overlap_kernel(const InitialStateSpec& spec, const PhysicalParams& params, double y, double z);

struct OverlapKernelTable {
    std::vector<double> nodes;
    Eigen::MatrixXcd values;
    double max_modulus = 0.0;
    double diagonal_defect = 0.0;    // max |I(y, y) - 1|
    double hermiticity_defect = 0.0;
};
// Throws AccuracyError when |I| > 1 + 1e-6 anywhere.
OverlapKernelTable overlap_table(const InitialStateSpec& spec, const PhysicalParams& params,
                                 const std::vector<double>& nodes);

// ---- asymptotic and effective reduced densities

// rho^a_0(y, z) = f(y) conj(f(z)) I(y, z) on the support nodes of grid, freely conjugated to time t.
DensityMatrixGrid asymptotic_density(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                     const Grid1D& grid);
// Eigen-truncated version (eigenvalues of the node matrix below drop_tol * max dropped).
LowRankDensity asymptotic_density_low_rank(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                           const Grid1D& grid, double drop_tol = 1e-13);

// 1/2 (u+ u+* + u- u-* + c u+ u-* + conj(c) u- u+*), u_pm = U_0^M(t) f^pm, c = cross_coherence(lam).
LowRankDensity effective_density(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                 const LambdaResult& lam, const Grid1D& grid);

// Four-term momentum kernel on a wavenumber grid k = P / hbar.
DensityMatrixGrid momentum_density(const InitialStateSpec& spec, const PhysicalParams& params,
                                   const LambdaResult& lam, const Grid1D& kgrid);
// Wavenumber grid covering both packets with spacing resolving their R0 phase.
Grid1D momentum_grid(const InitialStateSpec& spec, const PhysicalParams& params);

// ---- Wigner function

struct WignerSample {
    std::vector<double> R;
    std::vector<double> P;            // ascending momenta
    Eigen::MatrixXd values;           // values(i_R, i_P)
    double imag_residue = 0.0;        // max |Im| before taking the real part
    double integral = 0.0;            // sum W dR dP
};
// W(R, P) = (1/2 pi) int dx e^{iPx} rho(R - hbar x/2, R + hbar x/2), with x stepped so that
// R +- hbar x/2 land on grid nodes. Rows are taken every row_stride grid points. Throws AccuracyError when
// the imaginary residue exceeds 1e-6 (relative to max |W|).
WignerSample wigner_function(const DensityMatrixGrid& rho, double hbar, std::size_t row_stride = 1);
WignerSample wigner_function(const LowRankDensity& rho, double hbar, std::size_t row_stride = 1);

// ---- distances

struct DistanceReport {
    double hilbert_schmidt = 0.0;
    std::optional<double> trace_norm;
};
// Trace norm only when requested and n <= 1024 (dense eigendecomposition).
DistanceReport distances(const DensityMatrixGrid& a, const DensityMatrixGrid& b, bool with_trace_norm = false);
double hs_distance(const LowRankDensity& a, const LowRankDensity& b);

// ---- regime checks and proposition-2 style bounds

struct RegimeReport {
    double sigma_alpha = 0.0;        // sigma alpha            (should be << 1)
    double inv_alpha_sep = 0.0;      // 1 / (alpha (R0 - |r0|)) (should be << 1)
    double delta_sep = 0.0;          // delta / (R0 - |r0|)     (should be << 1)
    double spreading = 0.0;          // (sigma / R0) / (hbar / (sigma P0))
    std::vector<std::string> warnings;
    bool separation_ok(double limit) const;
};
// "<<" is read as a ratio at most `strong` (warning otherwise).
RegimeReport check_regime(const InitialStateSpec& spec, const PhysicalParams& params, double strong = 0.2);

struct BoundReport {
    double sup_diag = 0.0;       // sup |I - 1| over both same-side blocks
    double sup_offdiag = 0.0;    // sup |I - Lambda| over y near +R0, z near -R0
    double sup_offdiag_conj = 0.0;  // sup |I - conj(Lambda)| over the mirrored block
    double bound_diag = 0.0;     // alpha sigma + 1/(alpha (R0-|r0|)) + delta/(R0-|r0|)
    double bound_offdiag = 0.0;  // 1/(alpha (R0-|r0|)) + delta/(R0-|r0|)
    cplx Lambda;
    std::size_t samples = 0;
};
// Samples the two intervals (+-R0 - sigma, +-R0 + sigma). Throws ValidationError when the separation
// ratios of check_regime exceed 0.5 or alpha = 0 is combined with an off-diagonal request.
BoundReport proposition2_check(const InitialStateSpec& spec, const PhysicalParams& params,
                               std::size_t samples_per_interval = 16);

// ---- fringes

struct VisibilityReport {
    double visibility = 0.0;
    double phase = 0.0;              // arg of the spectral component at 2 P0 / hbar
    double frequency = 0.0;          // 2 P0 / hbar
    double points_per_period = 0.0;
    double dc = 0.0;
};
// Fourier quotient at nu = 2 P0/hbar: V = 2 |F(nu)| / F(0), phase = arg F(nu), F(nu) = sum n e^{-i nu R} dR.
// Throws ResolutionError below min_points_per_period samples per fringe.
VisibilityReport fringe_visibility(const Grid1D& grid, const std::vector<double>& n, double P0, double hbar,
                                   double min_points_per_period = 16.0);

struct InterferencePattern {
    double tau = 0.0;
    Grid1D grid;
    std::vector<double> n_effective;
    std::vector<double> n_asymptotic;  // empty unless requested
    LambdaResult lambda;
    VisibilityReport effective;
    std::optional<VisibilityReport> asymptotic;
    RegimeReport regime;
};
struct InterferenceOptions {
    double min_points_per_period = 16.0;
    bool with_asymptotic = false;
    std::optional<Grid1D> grid;      // planned from the state when absent
};
InterferencePattern interference_pattern(const InitialStateSpec& spec, const PhysicalParams& params,
                                         const InterferenceOptions& opts = {});

}  // namespace decoh
