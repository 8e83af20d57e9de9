#pragma once

#include "decoh/core.hpp"
#include "decoh/propagators.hpp"

#include <limits>
#include <string>

namespace decoh {

struct ApproximantStage {
    enum class Stage { psi1, psi2, psi_a };
    Stage stage;
    ComplexField2D field;
    double t;
    PhysicalParams params;
    double norm;
};

std::string stage_name(ApproximantStage::Stage s);

// Indices of grid nodes inside supp f_sigma (tails below 1e-14 dropped), ascending.
std::vector<std::size_t> support_nodes(const InitialStateSpec& spec, const Grid1D& grid);

// psi^a(t, r, R) = sqrt(m / (i hbar t)) e^{i m r^2 / 2 hbar t} int dy f_sigma(y) U_0^M(t, R - y) W(y, m r / hbar t),
// W the distorted transform of g_delta with strength alpha centered at y. The y-integral runs over
// the R-grid nodes in supp f_sigma and is done by free heavy propagation of the sampled integrand.
ComplexField2D asymptotic_evolve(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                 const Grid1D& grid_r, const Grid1D& grid_R);

// psi_1: the exact relative/center-of-mass evolution applied to f_sigma(x2) g_delta(x1 + x2).
ComplexField2D psi1_evolve(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                           const Grid1D& grid_r, const Grid1D& grid_R, const EvolveOptions& opts = {});
// T psi_0 - (T psi_1)(0): the initial discrepancy, whose norm is ||psi(t) - psi_1(t)|| for all t.
double psi1_initial_gap(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid_r,
                        const Grid1D& grid_R);

// psi_2: free center-of-mass propagation of sqrt(mu/(2 pi i hbar t)) e^{i mu x1^2/2 hbar t} f_sigma(x2)
// e^{-i m x2^2 / 2 hbar t} J(x2, mu x1 / hbar t), where the r'-integral J equals sqrt(2 pi) e^{i q x2}
// times the distorted transform of g_delta with strength mu alpha0 / hbar^2 centered at x2.
ComplexField2D psi2_evolve(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                           const Grid1D& grid_r, const Grid1D& grid_R, double wrap_tol = 1e-9);

ApproximantStage make_stage(ApproximantStage::Stage s, const InitialStateSpec& spec, const PhysicalParams& params,
                            double t, const Grid1D& grid_r, const Grid1D& grid_R);

struct ErrorConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3_at_t = 0.0;
    double A_fit = std::numeric_limits<double>::quiet_NaN();
    double B_fit = std::numeric_limits<double>::quiet_NaN();

    // pieces, for reporting and limit checks
    double C2_interaction_inverse = 0.0;  // the 1/alpha^3 and 1/alpha contributions under the root
    double C2_interaction_linear = 0.0;   // the alpha-proportional contribution under the root
    double C3_free = 0.0;                 // first term of C3
    double C3_interaction = 0.0;          // second term of C3
};

struct C2Parts {
    double F4, A4, G0, G1, G2;
};
C2Parts c2_parts(const InitialStateSpec& spec, const PhysicalParams& params);
double c1_constant(const InitialStateSpec& spec, const PhysicalParams& params);
double c2_constant(const InitialStateSpec& spec, const PhysicalParams& params, ErrorConstants* pieces = nullptr);
double c3_constant(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                   ErrorConstants* pieces = nullptr);

ErrorConstants compute_error_constants(const InitialStateSpec& spec, const PhysicalParams& params, double t);

// Nonnegative least squares of y against (1/t, 1), then scaled up by the smallest factor >= 1 that makes
// a/t + b dominate every point.
struct BoundFit {
    double a = 0.0;
    double b = 0.0;
    double lift = 1.0;    // scale applied to the least-squares solution
    bool raw_dominates = false;
    std::size_t points = 0;
};
BoundFit fit_inverse_time_bound(const std::vector<double>& t, const std::vector<double>& y);

// C4, C5 with C3(t) < C4/t + C5 over the listed times.
BoundFit fit_c3(const InitialStateSpec& spec, const PhysicalParams& params, const std::vector<double>& times);

}  // namespace decoh
