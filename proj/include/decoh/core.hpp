#pragma once

#include "decoh/fft.hpp"
#include "decoh/quadrature.hpp"

#include <complex>
#include <functional>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace decoh {

struct PhysicalParams {
    double M = 1.0;       // heavy mass
    double m = 0.02;      // light mass
    double hbar = 1.0;
    double alpha0 = 0.0;  // delta strength (energy * length)

    // Builds params from the mass ratio and the light-particle inverse length alpha = alpha0 m / hbar^2.
    static PhysicalParams from_ratio(double M, double epsilon, double hbar, double alpha);

    double epsilon() const { return m / M; }
    double mu() const { return m * M / (m + M); }
    double nu() const { return m + M; }
    double alpha() const { return alpha0 * m / (hbar * hbar); }
    double beta(double delta) const { return alpha() * delta; }
    void validate() const;  // throws ValidationError
};

// Real profile on [-L, L] with unit L2 norm.
class Envelope {
public:
    enum class Kind { gaussian_truncated, smooth_bump, tabulated };

    static Envelope gaussian(double half_width = 8.0);
    static Envelope bump();
    // Samples at equally spaced points covering [-L, L] inclusive; interpolated by a cubic B-spline.
    static Envelope tabulated(std::vector<double> samples, double half_width);

    Kind kind() const;
    std::string kind_name() const;
    double half_width() const;
    double norm_constant() const;  // factor applied to the raw profile

    double operator()(double x) const;
    double derivative(double x) const;
    // Unitary Fourier transform (2 pi)^{-1/2} int g(x) e^{-i kappa x} dx and its kappa-derivative.
    cplx ft(double kappa) const;
    cplx ft_derivative(double kappa) const;
    // Smallest kappa with int_{|k|>kappa} |ft|^2 < tail (cached per tail).
    double bandwidth(double tail = 1e-12) const;
    // Smallest x with int_{|y|>x} g^2 < tail, capped by the support half-width.
    double extent(double tail = 1e-12) const;
    // Largest |g(x) - g(-x)| over 2001 samples of the support.
    double evenness_defect() const;
    // Composite Gauss-Legendre rule over the support.
    const QuadratureRule& rule() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

struct SupportIntervals {
    double plus_lo, plus_hi;    // Delta+ = (R0 - sigma, R0 + sigma)
    double minus_lo, minus_hi;  // Delta- = (-R0 - sigma, -R0 + sigma)
    bool disjoint() const { return minus_hi < plus_lo; }
};

// f_pm(R) = sigma^{-1/2} f((R +- R0)/sigma) e^{+-i P0 R/hbar}; f^+ sits at -R0 moving right.
// g_delta(r) = delta^{-1/2} g((r - r0)/delta) e^{i q0 r/hbar}.
struct InitialStateSpec {
    Envelope f = Envelope::gaussian();
    Envelope g = Envelope::gaussian();
    double sigma = 0.1, delta = 0.4, R0 = 1.5, P0 = 10.0, r0 = 0.0, q0 = 1.0;

    double k0(double hbar) const { return q0 / hbar; }
    // P0/hbar + k0; kept for completeness, not used by any computation.
    double Ktot(double hbar) const { return P0 / hbar + k0(hbar); }
    // R0 = P0 = 0 collapses the superposition to the single packet f_sigma = f^+.
    bool single_packet() const { return R0 == 0.0 && P0 == 0.0; }

    cplx f_plus(double R, double hbar) const;
    cplx f_minus(double R, double hbar) const;
    cplx f_sigma(double R, double hbar) const;
    cplx df_sigma(double R, double hbar) const;
    cplx g_delta(double r, double hbar) const;
    cplx dg_delta(double r, double hbar) const;
    cplx f_plus_ft(double k, double hbar) const;
    cplx f_minus_ft(double k, double hbar) const;
    cplx g_delta_ft(double k, double hbar) const;

    SupportIntervals intervals() const;
    // Envelope supports (half-width L sigma / L delta around the centers).
    double f_support_half() const { return f.half_width() * sigma; }
    double g_support_half() const { return g.half_width() * delta; }
    // Sorted, merged support of f_sigma as [lo, hi] pairs.
    std::vector<std::pair<double, double>> f_support() const;
    std::pair<double, double> g_support() const { return {r0 - g_support_half(), r0 + g_support_half()}; }

    // Throws ValidationError on bad values; returns warnings (geometric condition).
    std::vector<std::string> validate(bool require_even_g = true) const;
};

struct Grid1D {
    double min = -1.0;
    double spacing = 1.0;
    std::size_t n = 0;

    static Grid1D symmetric(std::size_t n, double half_width);
    double max() const { return min + spacing * static_cast<double>(n); }
    double x(std::size_t j) const { return min + spacing * static_cast<double>(j); }
    std::vector<double> points() const;
    bool operator==(const Grid1D& o) const { return min == o.min && spacing == o.spacing && n == o.n; }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }
};

struct ComplexField1D {
    Grid1D grid;
    std::vector<cplx> values;

    ComplexField1D() = default;
    explicit ComplexField1D(Grid1D g) : grid(g), values(g.n, cplx(0.0)) {}
};

// Axis 0 is r (or x1), axis 1 is R (or x2); storage index i_r * n_R + i_R.
struct ComplexField2D {
    Grid1D grid_r;
    Grid1D grid_R;
    std::vector<cplx> values;

    ComplexField2D() = default;
    ComplexField2D(Grid1D gr, Grid1D gR) : grid_r(gr), grid_R(gR), values(gr.n * gR.n, cplx(0.0)) {}
    cplx& at(std::size_t ir, std::size_t iR) { return values[ir * grid_R.n + iR]; }
    cplx at(std::size_t ir, std::size_t iR) const { return values[ir * grid_R.n + iR]; }
};

double norm(const ComplexField1D& a);
double norm(const ComplexField2D& a);
cplx inner(const ComplexField1D& a, const ComplexField1D& b);
cplx inner(const ComplexField2D& a, const ComplexField2D& b);
// ||a - b|| on a common grid.
double distance(const ComplexField2D& a, const ComplexField2D& b);

ComplexField1D sample(const Grid1D& grid, const std::function<cplx(double)>& fn);

ComplexField2D build_initial_state(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid_r,
                                   const Grid1D& grid_R);

// Resolution/coverage requirements used by build_initial_state; throws ResolutionError naming the worst axis.
void check_initial_resolution(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid_r,
                              const Grid1D& grid_R);

}  // namespace decoh
