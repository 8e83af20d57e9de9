#pragma once

#include "decoh/core.hpp"

#include <span>

namespace decoh {

struct FreePropagatorSpec {
    enum class Method { fourier_multiplier, kernel_quadrature };
    double mass = 1.0;
    double t = 0.0;
    double hbar = 1.0;
    Method method = Method::fourier_multiplier;
};

struct DeltaPropagatorSpec {
    enum class Method { faddeeva, laguerre };
    double mu = 1.0;
    double alpha0 = 0.0;
    double t = 1.0;
    double hbar = 1.0;
    Method method = Method::faddeeva;

    double damping() const { return mu * alpha0 / (hbar * hbar); }  // kappa of the u-integral
};

// U_0^mass(t, s) = sqrt(mass / (2 pi i hbar t)) exp(i mass s^2 / (2 hbar t)).
cplx free_kernel(double mass, double hbar, double t, double s);

ComplexField1D free_propagate(const ComplexField1D& field, double mass, double t, double hbar = 1.0);
// Fourier multiplier e^{-i hbar k^2 t / (2 mass)} in DFT bin order, and its application to one line.
std::vector<cplx> free_multiplier(const Grid1D& grid, double mass, double t, double hbar);
void apply_multiplier(std::vector<cplx>& line, const std::vector<cplx>& mult);
ComplexField1D free_propagate(const ComplexField1D& field, const FreePropagatorSpec& spec);

// kappa int_0^inf du e^{-kappa u} U_0^mu(t, u + a), the term subtracted from the free kernel.
cplx delta_interaction_term(const DeltaPropagatorSpec& spec, double a);
cplx delta_kernel(const DeltaPropagatorSpec& spec, double x, double xp);

// Precomputed propagator on a symmetric grid (x = 0 is a node). The interaction part is a
// trapezoid sum against the field, done as one FFT correlation because it only depends on |x|+|x'|.
class DeltaPropagator {
public:
    DeltaPropagator(const DeltaPropagatorSpec& spec, const Grid1D& grid);
    // out may alias in.
    void apply(std::span<const cplx> in, std::span<cplx> out) const;
    const Grid1D& grid() const { return grid_; }
    const DeltaPropagatorSpec& spec() const { return spec_; }

private:
    DeltaPropagatorSpec spec_;
    Grid1D grid_;
    std::vector<cplx> free_mult_;
    std::vector<cplx> h_hat_;  // FFT of the padded interaction table
    std::vector<cplx> h_slope_;  // d/da of the interaction term at the nodes a = j * spacing
    std::size_t pad_ = 0;
};

// norm_out of a propagation with the point interaction is measured in relative coordinates with the
// kink at x1 = 0 accounted for: the plain Riemann sum of |psi|^2 misses d^2 kappa |psi(0)|^2 / 3 per line.
struct PropagationReport {
    double norm_in = 0.0;
    double norm_out = 0.0;
    double drift() const { return norm_in > 0.0 ? std::abs(norm_out / norm_in - 1.0) : 0.0; }
};

// Throws AccuracyError when the relative norm drift exceeds tol.
ComplexField1D delta_propagate(const ComplexField1D& field, const DeltaPropagatorSpec& spec, double tol = 1e-4,
                               PropagationReport* report = nullptr);

// Tpsi(x1, x2) = psi(x2 + (M/nu) x1, x2 - (m/nu) x1); x1 lives on grid_r, x2 on grid_R.
// Two Fourier-interpolated shears; throws DomainError when more than wrap_tol of the norm would wrap.
ComplexField2D to_com_relative(const ComplexField2D& field, const PhysicalParams& params, double wrap_tol = 1e-9);
ComplexField2D from_com_relative(const ComplexField2D& field, const PhysicalParams& params, double wrap_tol = 1e-9);

struct EvolveOptions {
    double norm_tol = 1e-4;
    double wrap_tol = 1e-9;
    DeltaPropagatorSpec::Method method = DeltaPropagatorSpec::Method::faddeeva;
};

// psi(t) = T^{-1} U_0^nu U^mu_alpha0 T psi0: delta propagation along x1 for each x2, then free along x2.
ComplexField2D exact_evolve(const ComplexField2D& psi0, const PhysicalParams& params, double t,
                            const EvolveOptions& opts = {}, PropagationReport* report = nullptr);

// Same pipeline started from a field already in (x1, x2) coordinates; result in (r, R).
ComplexField2D evolve_from_com(const ComplexField2D& com0, const PhysicalParams& params, double t,
                               const EvolveOptions& opts = {});

// Line helpers shared by the 2D stages. fn(line, index) gets a contiguous copy of the line.
void for_each_line_axis0(ComplexField2D& f, const std::function<void(std::vector<cplx>&, std::size_t)>& fn);
void for_each_line_axis1(ComplexField2D& f, const std::function<void(std::vector<cplx>&, std::size_t)>& fn);

}  // namespace decoh
