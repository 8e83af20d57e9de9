#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoh/errors.hpp"
#include "decoh/grid_plan.hpp"
#include "decoh/propagators.hpp"
#include "decoh/scattering.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace decoh;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// Free Gaussian packet of width s, wavenumber k, mass m at time t (closed form).
cplx gaussian_free(double x, double t, double s, double k, double m, double hb) {
    const cplx a = 1.0 + I * hb * t / (m * s * s);
    const double xc = x - hb * k * t / m;
    return std::pow(kPi * s * s, -0.25) / std::sqrt(a) *
           std::exp(-xc * xc / (2.0 * s * s * a) + I * k * x - I * hb * k * k * t / (2.0 * m));
}

double max_diff(const ComplexField1D& f, const std::function<cplx(double)>& g) {
    double w = 0.0;
    for (std::size_t j = 0; j < f.grid.n; ++j) w = std::max(w, std::abs(f.values[j] - g(f.grid.x(j))));
    return w;
}

}  // namespace

TEST_CASE("free propagation of a Gaussian matches the closed form") {
    const Grid1D g = Grid1D::symmetric(1024, 30.0);
    const double s = 0.8, k = 2.0, m = 1.3, hb = 0.9, t = 2.5;
    const auto psi0 = sample(g, [&](double x) { return gaussian_free(x, 0.0, s, k, m, hb); });
    const auto psi = free_propagate(psi0, m, t, hb);
    CHECK(max_diff(psi, [&](double x) { return gaussian_free(x, t, s, k, m, hb); }) < 1e-10);
    CHECK(norm(psi) == doctest::Approx(norm(psi0)).epsilon(1e-13));
}

TEST_CASE("kernel quadrature and Fourier multiplier agree") {
    const Grid1D g = Grid1D::symmetric(512, 12.0);
    const auto psi0 = sample(g, [&](double x) { return gaussian_free(x, 0.0, 1.0, 1.0, 1.0, 1.0); });
    FreePropagatorSpec a{1.0, 0.7, 1.0, FreePropagatorSpec::Method::fourier_multiplier};
    FreePropagatorSpec b = a;
    b.method = FreePropagatorSpec::Method::kernel_quadrature;
    const auto fa = free_propagate(psi0, a), fb = free_propagate(psi0, b);
    double w = 0.0;
    for (std::size_t j = g.n / 4; j < 3 * g.n / 4; ++j) w = std::max(w, std::abs(fa.values[j] - fb.values[j]));
    CHECK(w < 1e-6);
}

TEST_CASE("point-interaction kernel: closed form vs Gauss-Laguerre on random samples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), ut(0.05, 0.5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        DeltaPropagatorSpec s{0.0196, 102.0, ut(rng), 1.0, DeltaPropagatorSpec::Method::faddeeva};
        const double x = ux(rng), xp = ux(rng);
        const cplx a = delta_kernel(s, x, xp);
        s.method = DeltaPropagatorSpec::Method::laguerre;
        const cplx b = delta_kernel(s, x, xp);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("kernel reduces to the free kernel without interaction and is symmetric") {
    DeltaPropagatorSpec s{0.7, 0.0, 0.4, 1.0};
    CHECK(std::abs(delta_kernel(s, 0.3, -1.1) - free_kernel(0.7, 1.0, 0.4, 1.4)) < 1e-15);
    s.alpha0 = 3.0;
    CHECK(std::abs(delta_kernel(s, 0.3, -1.1) - delta_kernel(s, -1.1, 0.3)) < 1e-15);
    CHECK_THROWS_AS(delta_kernel(DeltaPropagatorSpec{1.0, 1.0, 0.0, 1.0}, 0.0, 0.0), ValidationError);
}

TEST_CASE("transmitted probability through the delta barrier") {
    // |T(k)|^2 = k^2 / (kappa^2 + k^2) averaged over |g~|^2 of a packet coming from the left.
    const double s = 1.0, k0 = 8.0, x0 = -15.0, mass = 1.0, alpha0 = 6.0, t = 4.0;
    const Grid1D g = Grid1D::symmetric(4096, 80.0);
    const auto psi0 = sample(g, [&](double x) { return gaussian_free(x - x0, 0.0, s, k0, mass, 1.0); });
    DeltaPropagatorSpec spec{mass, alpha0, t, 1.0};
    PropagationReport rep;
    const auto psi = delta_propagate(psi0, spec, 1e-8, &rep);
    CHECK(rep.drift() < 1e-8);
    double trans = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
        if (g.x(j) > 0.0) trans += std::norm(psi.values[j]) * g.spacing;
    const double kappa = spec.damping();
    const auto r = gauss_legendre_width(k0 - 12.0, k0 + 12.0, 0.1);
    double want = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double k = r.x[i];
        want += r.w[i] * s / std::sqrt(kPi) * std::exp(-s * s * (k - k0) * (k - k0)) * k * k / (kappa * kappa + k * k);
    }
    CHECK(trans == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("delta propagation is unitary and needs a symmetric grid") {
    const Grid1D g = Grid1D::symmetric(1024, 20.0);
    const auto psi0 = sample(g, [&](double x) { return gaussian_free(x + 2.0, 0.0, 0.7, 3.0, 1.0, 1.0); });
    // the packet overlaps the origin, so the evolved state carries the kink the drift measure must handle
    PropagationReport rep;
    const auto out = delta_propagate(psi0, {1.0, 2.0, 1.0, 1.0}, 1e-6, &rep);
    CHECK(rep.drift() < 1e-6);
    CHECK(std::abs(out.values[g.n / 2]) > 0.1);
    Grid1D shifted = g;
    shifted.min += 0.5 * g.spacing;
    CHECK_THROWS_AS(DeltaPropagator({1.0, 2.0, 1.0, 1.0}, shifted), ValidationError);
}

TEST_CASE("relative / center-of-mass shears invert each other") {
    InitialStateSpec sp;
    sp.sigma = 0.2;
    sp.delta = 0.3;
    sp.R0 = 0.8;
    sp.P0 = 3.0;
    const auto p = PhysicalParams::from_ratio(1.0, 0.04, 1.0, 2.0);
    const auto gp = plan_grids(sp, p, 0.1);
    const auto psi0 = build_initial_state(sp, p, gp.r, gp.R);
    const auto back = from_com_relative(to_com_relative(psi0, p), p);
    CHECK(distance(psi0, back) < 1e-10);
    // the sheared field is f(x2 - m x1 / nu) g(x2 + M x1 / nu)
    const auto com = to_com_relative(psi0, p);
    const std::size_t i = gp.r.n / 2 + 7, j = gp.R.n / 2 - 11;
    const double x1 = gp.r.x(i), x2 = gp.R.x(j);
    const cplx want = sp.f_sigma(x2 - p.m / p.nu() * x1, 1.0) * sp.g_delta(x2 + p.M / p.nu() * x1, 1.0);
    CHECK(std::abs(com.at(i, j) - want) < 1e-10);
}

TEST_CASE("without interaction the exact evolution is a product of free evolutions") {
    InitialStateSpec sp;
    sp.sigma = 0.2;
    sp.delta = 0.3;
    sp.R0 = 0.8;
    sp.P0 = 3.0;
    const auto p = PhysicalParams::from_ratio(1.0, 0.04, 1.0, 0.0);
    const double t = 0.2;
    const auto gp = plan_grids(sp, p, t);
    const auto psi = exact_evolve(build_initial_state(sp, p, gp.r, gp.R), p, t);
    const auto gr = free_propagate(sample(gp.r, [&](double r) { return sp.g_delta(r, 1.0); }), p.m, t);
    const auto fR = free_propagate(sample(gp.R, [&](double R) { return sp.f_sigma(R, 1.0); }), p.M, t);
    double w = 0.0;
    for (std::size_t i = 0; i < gp.r.n; i += 3)
        for (std::size_t j = 0; j < gp.R.n; j += 3) w = std::max(w, std::abs(psi.at(i, j) - gr.values[i] * fR.values[j]));
    CHECK(w < 1e-8);
}

TEST_CASE("exact evolution stays unitary on planned grids") {
    InitialStateSpec sp;
    sp.sigma = 0.2;
    sp.delta = 0.3;
    sp.R0 = 0.8;
    sp.P0 = 3.0;
    const auto p = PhysicalParams::from_ratio(1.0, 0.04, 1.0, 2.0);
    for (double t : {0.1, 0.267}) {
        const auto gp = plan_grids(sp, p, t);
        PropagationReport rep;
        exact_evolve(build_initial_state(sp, p, gp.r, gp.R), p, t, {}, &rep);
        CHECK(rep.drift() < 1e-4);
    }
}
