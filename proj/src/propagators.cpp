#include "decoh/propagators.hpp"

#include "decoh/errors.hpp"
#include "decoh/faddeeva.hpp"
#include "decoh/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace decoh {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Band-limited translation line(x) -> line(x - s); returns the squared mass of samples that wrap.
double shift_line(std::vector<cplx>& line, const std::vector<double>& k, double d, double s) {
    const std::size_t n = line.size();
    const auto band = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(std::abs(s) / d)) + 2);
    double wrap = 0.0;
    if (s > 0.0)
        for (std::size_t j = n - band; j < n; ++j) wrap += std::norm(line[j]);
    else if (s < 0.0)
        for (std::size_t j = 0; j < band; ++j) wrap += std::norm(line[j]);
    if (s == 0.0) return 0.0;
    fft_forward(line);
    for (std::size_t j = 0; j < n; ++j) line[j] *= std::polar(1.0, -k[j] * s);
    fft_inverse(line);
    return wrap;
}

void check_wrap(const std::vector<double>& per_line, double cell, double total2, double tol, const char* stage) {
    double w = 0.0;
    for (double v : per_line) w += v;
    w *= cell;
    if (total2 > 0.0 && w > tol * total2) {
        std::ostringstream os;
        os << stage << ": " << w / total2 << " of the norm lies in the wrap band; enlarge the grid domain";
        throw DomainError(os.str());
    }
}

}  // namespace

std::vector<cplx> free_multiplier(const Grid1D& grid, double mass, double t, double hbar) {
    const auto k = fft_wavenumbers(grid.n, grid.spacing);
    std::vector<cplx> mult(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) mult[j] = std::polar(1.0, -hbar * k[j] * k[j] * t / (2.0 * mass));
    return mult;
}

void apply_multiplier(std::vector<cplx>& line, const std::vector<cplx>& mult) {
    fft_forward(line);
    for (std::size_t j = 0; j < line.size(); ++j) line[j] *= mult[j];
    fft_inverse(line);
}

cplx free_kernel(double mass, double hbar, double t, double s) {
    return std::sqrt(mass / (2.0 * kPi * I * hbar * t)) * std::polar(1.0, mass * s * s / (2.0 * hbar * t));
}

ComplexField1D free_propagate(const ComplexField1D& field, double mass, double t, double hbar) {
    FreePropagatorSpec spec;
    spec.mass = mass;
    spec.t = t;
    spec.hbar = hbar;
    return free_propagate(field, spec);
}

ComplexField1D free_propagate(const ComplexField1D& field, const FreePropagatorSpec& spec) {
    if (spec.t < 0.0) throw ValidationError("free_propagate: negative time " + std::to_string(spec.t));
    if (!(spec.mass > 0.0)) throw ValidationError("free_propagate: mass must be positive");
    ComplexField1D out = field;
    if (spec.t == 0.0) return out;
    if (spec.method == FreePropagatorSpec::Method::fourier_multiplier) {
        apply_multiplier(out.values, free_multiplier(field.grid, spec.mass, spec.t, spec.hbar));
        return out;
    }
    const auto& g = field.grid;
    parallel_for(g.n, [&](std::size_t i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < g.n; ++j)
            s += free_kernel(spec.mass, spec.hbar, spec.t, g.x(i) - g.x(j)) * field.values[j];
        out.values[i] = s * g.spacing;
    });
    return out;
}

cplx delta_interaction_term(const DeltaPropagatorSpec& spec, double a) {
    if (!(spec.t > 0.0)) throw ValidationError("delta kernel needs t > 0");
    const double kappa = spec.damping();
    if (kappa == 0.0) return 0.0;
    if (spec.method == DeltaPropagatorSpec::Method::laguerre) {
        static const QuadratureRule rule = gauss_laguerre(64);
        cplx s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.w[i] * free_kernel(spec.mu, spec.hbar, spec.t, rule.x[i] / kappa + a);
        return s;
    }
    const double b = spec.mu / (2.0 * spec.hbar * spec.t);
    const double sb = std::sqrt(b);
    const cplx z = std::polar(1.0, kPi / 4.0) * cplx(a * sb, kappa / (2.0 * sb));
    const cplx v = 0.5 * kappa * std::polar(1.0, b * a * a) * faddeeva_w(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "delta kernel: non-finite interaction term at a = " << a << " (z = " << z << ")";
        throw NumericalRangeError(os.str());
    }
    return v;
}

cplx delta_kernel(const DeltaPropagatorSpec& spec, double x, double xp) {
    if (!(spec.t > 0.0)) throw ValidationError("delta kernel needs t > 0");
    return free_kernel(spec.mu, spec.hbar, spec.t, x - xp) - delta_interaction_term(spec, std::abs(x) + std::abs(xp));
}

DeltaPropagator::DeltaPropagator(const DeltaPropagatorSpec& spec, const Grid1D& grid) : spec_(spec), grid_(grid) {
    if (!(spec.t > 0.0)) throw ValidationError("delta_propagate: t must be positive");
    if (!(spec.mu > 0.0)) throw ValidationError("delta_propagate: mass must be positive");
    if (spec.alpha0 < 0.0) throw ValidationError("delta_propagate: alpha0 must be nonnegative");
    if (grid.n % 2 != 0 || std::abs(grid.x(grid.n / 2)) > 1e-12 * grid.spacing)
        throw ValidationError("delta_propagate: grid must be symmetric with x = 0 at index n/2");
    free_mult_ = free_multiplier(grid, spec.mu, spec.t, spec.hbar);
    if (spec.alpha0 == 0.0) return;
    const std::size_t n = grid.n, S = n / 2;
    pad_ = next_pow2(S + n + 1);
    std::vector<cplx> h(pad_, 0.0);
    h_slope_.assign(n + 1, 0.0);
    const double kappa = spec.damping();
    parallel_for(n + 1, [&](std::size_t j) {
        const double a = grid.spacing * static_cast<double>(j);
        h[j] = delta_interaction_term(spec, a);
        // h = kappa int_0^inf e^{-kappa s} K0(a + s) ds, so h' = kappa (h - K0(a))
        h_slope_[j] = kappa * (h[j] - free_kernel(spec.mu, spec.hbar, spec.t, a));
    });
    fft_forward(h);
    h_hat_ = std::move(h);
}

void DeltaPropagator::apply(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t n = grid_.n;
    std::vector<cplx> free(in.begin(), in.end());
    apply_multiplier(free, free_mult_);
    if (spec_.alpha0 == 0.0) {
        std::copy(free.begin(), free.end(), out.begin());
        return;
    }
    const std::size_t S = n / 2, c = n / 2;
    std::vector<cplx> phi(pad_, 0.0);
    // phi[S - s] = Phi_s with Phi_0 = f_c, Phi_s = f_{c+s} + f_{c-s}, Phi_S = f_0.
    phi[S] = in[c];
    for (std::size_t s = 1; s < S; ++s) phi[S - s] = in[c + s] + in[c - s];
    phi[0] = in[0];
    fft_forward(phi);
    for (std::size_t j = 0; j < pad_; ++j) phi[j] *= h_hat_[j];
    fft_inverse(phi);
    const double d = grid_.spacing;
    // The integrand h(|x| + |x'|) psi(x') has a kink at x' = 0; the Euler-Maclaurin endpoint term
    // d^2/12 (F'(0+) - F'(0-)) = d^2/6 h'(|x|) psi(0) restores fourth order.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t u = i >= c ? i - c : c - i;
        out[i] = free[i] - d * phi[u + S] - d * d / 6.0 * h_slope_[u] * in[c];
    }
}

ComplexField1D delta_propagate(const ComplexField1D& field, const DeltaPropagatorSpec& spec, double tol,
                               PropagationReport* report) {
    DeltaPropagator prop(spec, field.grid);
    ComplexField1D out(field.grid);
    prop.apply(field.values, out.values);
    const double nrm = norm(out);
    const double kink = field.grid.spacing * field.grid.spacing * spec.damping() / 3.0 * std::norm(out.values[field.grid.n / 2]);
    PropagationReport rep{norm(field), std::sqrt(nrm * nrm + kink)};
    if (report) *report = rep;
    if (rep.drift() > tol) {
        std::ostringstream os;
        os << "delta_propagate: norm drift " << rep.drift() << " exceeds tolerance " << tol
           << "; refine the grid spacing or enlarge the domain";
        throw AccuracyError(os.str());
    }
    return out;
}

void for_each_line_axis0(ComplexField2D& f, const std::function<void(std::vector<cplx>&, std::size_t)>& fn) {
    const std::size_t nr = f.grid_r.n, nR = f.grid_R.n;
    parallel_for(nR, [&](std::size_t j) {
        std::vector<cplx> line(nr);
        for (std::size_t i = 0; i < nr; ++i) line[i] = f.values[i * nR + j];
        fn(line, j);
        for (std::size_t i = 0; i < nr; ++i) f.values[i * nR + j] = line[i];
    });
}

void for_each_line_axis1(ComplexField2D& f, const std::function<void(std::vector<cplx>&, std::size_t)>& fn) {
    const std::size_t nR = f.grid_R.n;
    parallel_for(f.grid_r.n, [&](std::size_t i) {
        std::vector<cplx> line(f.values.begin() + static_cast<long>(i * nR),
                               f.values.begin() + static_cast<long>((i + 1) * nR));
        fn(line, i);
        std::copy(line.begin(), line.end(), f.values.begin() + static_cast<long>(i * nR));
    });
}

namespace {

// sign = +1: forward map T, sign = -1: inverse.
ComplexField2D shear(const ComplexField2D& field, const PhysicalParams& params, int sign, double wrap_tol) {
    ComplexField2D out = field;
    const auto& gr = field.grid_r;
    const auto& gR = field.grid_R;
    const auto kr = fft_wavenumbers(gr.n, gr.spacing);
    const auto kR = fft_wavenumbers(gR.n, gR.spacing);
    const double total2 = std::pow(norm(field), 2);
    const double cell = gr.spacing * gR.spacing;
    const double c = params.m / params.nu();
    std::vector<double> wrap_r(gR.n, 0.0), wrap_R(gr.n, 0.0);

    auto stage_r = [&] {
        // A(x1, R) = psi(x1 + R, R) forward; psi(r, R) = A(r - R, R) inverse.
        for_each_line_axis0(out, [&](std::vector<cplx>& line, std::size_t j) {
            wrap_r[j] = shift_line(line, kr, gr.spacing, -sign * gR.x(j));
        });
        check_wrap(wrap_r, cell, total2, wrap_tol, "relative-coordinate shear");
    };
    auto stage_R = [&] {
        // T psi(x1, x2) = A(x1, x2 - (m/nu) x1) forward.
        for_each_line_axis1(out, [&](std::vector<cplx>& line, std::size_t i) {
            wrap_R[i] = shift_line(line, kR, gR.spacing, sign * c * gr.x(i));
        });
        check_wrap(wrap_R, cell, total2, wrap_tol, "center-of-mass shear");
    };
    if (sign > 0) {
        stage_r();
        stage_R();
    } else {
        stage_R();
        stage_r();
    }
    return out;
}

}  // namespace

ComplexField2D to_com_relative(const ComplexField2D& field, const PhysicalParams& params, double wrap_tol) {
    return shear(field, params, +1, wrap_tol);
}

ComplexField2D from_com_relative(const ComplexField2D& field, const PhysicalParams& params, double wrap_tol) {
    return shear(field, params, -1, wrap_tol);
}

namespace {

// Evolution in relative / center-of-mass coordinates, without shearing back.
ComplexField2D evolve_in_com(const ComplexField2D& com0, const PhysicalParams& params, double t,
                             const EvolveOptions& opts) {
    if (!(t > 0.0)) throw ValidationError("exact_evolve: t must be positive");
    ComplexField2D com = com0;
    DeltaPropagatorSpec ds;
    ds.mu = params.mu();
    ds.alpha0 = params.alpha0;
    ds.t = t;
    ds.hbar = params.hbar;
    ds.method = opts.method;
    const DeltaPropagator prop(ds, com.grid_r);
    for_each_line_axis0(com, [&](std::vector<cplx>& line, std::size_t) { prop.apply(line, line); });
    const auto mult = free_multiplier(com.grid_R, params.nu(), t, params.hbar);
    for_each_line_axis1(com, [&](std::vector<cplx>& line, std::size_t) { apply_multiplier(line, mult); });
    return com;
}

// Norm with the Euler-Maclaurin term for the derivative jump 2 kappa psi along x1 = 0.
double kinked_norm(const ComplexField2D& com, const PhysicalParams& params) {
    const double n = norm(com);
    if (params.alpha0 == 0.0) return n;
    const double kappa = params.mu() * params.alpha0 / (params.hbar * params.hbar);
    const std::size_t c = com.grid_r.n / 2;
    double line = 0.0;
    for (std::size_t j = 0; j < com.grid_R.n; ++j) line += std::norm(com.at(c, j));
    const double d = com.grid_r.spacing;
    return std::sqrt(n * n + d * d * kappa / 3.0 * line * com.grid_R.spacing);
}

}  // namespace

ComplexField2D evolve_from_com(const ComplexField2D& com0, const PhysicalParams& params, double t,
                               const EvolveOptions& opts) {
    return from_com_relative(evolve_in_com(com0, params, t, opts), params, opts.wrap_tol);
}

ComplexField2D exact_evolve(const ComplexField2D& psi0, const PhysicalParams& params, double t,
                            const EvolveOptions& opts, PropagationReport* report) {
    params.validate();
    const ComplexField2D com = evolve_in_com(to_com_relative(psi0, params, opts.wrap_tol), params, t, opts);
    // the inverse shear is a product of unitary Fourier shifts, so the norm is taken before it
    PropagationReport rep{norm(psi0), kinked_norm(com, params)};
    ComplexField2D out = from_com_relative(com, params, opts.wrap_tol);
    if (report) *report = rep;
    if (rep.drift() > opts.norm_tol) {
        std::ostringstream os;
        os << "exact_evolve: norm drift " << rep.drift() << " at t = " << t << " exceeds tolerance " << opts.norm_tol
           << "; refine the grid spacing or enlarge the domain";
        throw AccuracyError(os.str());
    }
    return out;
}

}  // namespace decoh
