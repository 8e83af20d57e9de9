#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoh/density.hpp"
#include "decoh/errors.hpp"
#include "decoh/propagators.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/scattering.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

using namespace decoh;

namespace {

constexpr double kPi = std::numbers::pi;

InitialStateSpec base_spec() {
    InitialStateSpec s;
    s.sigma = 0.2;
    s.delta = 0.3;
    s.R0 = 0.8;
    s.P0 = 3.0;
    s.q0 = 1.0;
    return s;
}

}  // namespace

TEST_CASE("decoherence parameter matches golden values") {
    std::ifstream in(DECOH_SOURCE_DIR "/tests/golden/lambda_golden.json");
    REQUIRE(in);
    const auto doc = nlohmann::json::parse(in);
    const Envelope g = Envelope::gaussian();
    std::size_t n = 0;
    for (const auto& c : doc.at("cases")) {
        const double beta = c.at("alpha_delta"), s = c.at("k0_delta");
        const cplx want(c.at("re").get<double>(), c.at("im").get<double>());
        INFO("beta = " << beta << " s = " << s);
        CHECK(std::abs(lambda_scaled(g, beta, s) - want) < 1e-10);
        if (s == 0.0) CHECK(std::abs(lambda_scaled(g, beta, s, LambdaMethod::low_k0) - want) < 1e-10);
        ++n;
    }
    CHECK(n == 20);
}

TEST_CASE("definition integral and rescaled form agree") {
    auto sp = base_spec();
    for (double a : {0.5, 2.0, 9.0}) {
        const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, a);
        const auto d = lambda_param(sp, p, LambdaMethod::definition_integral);
        const auto r = lambda_param(sp, p, LambdaMethod::rescaled);
        CHECK(std::abs(d.Lambda - r.Lambda) < 1e-10);
        CHECK(d.modulus <= 1.0);
        CHECK(d.phase == doctest::Approx(std::arg(d.Lambda)));
    }
    const auto free = lambda_param(sp, PhysicalParams::from_ratio(1.0, 0.02, 1.0, 0.0));
    CHECK(free.Lambda == cplx(1.0, 0.0));
    CHECK(parse_lambda_method(lambda_method_name(LambdaMethod::low_k0)) == LambdaMethod::low_k0);
    CHECK_THROWS_AS(parse_lambda_method("nope"), ValidationError);
}

TEST_CASE("overlap kernel: unit diagonal, Hermitian, bounded") {
    // I(y, y) = ||g||^2 since the distorted transform is an isometry. The wavenumber cutoff is set for
    // f(y) conj f(z) I(y, z), so the diagonal is checked with that weight.
    auto sp = base_spec();
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    std::vector<double> ys;
    for (int i = -40; i <= 40; ++i) ys.push_back(0.045 * i);
    const auto t = overlap_table(sp, p, ys);
    double weighted = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i)
        weighted = std::max(weighted, std::norm(sp.f_sigma(ys[i], 1.0)) * std::abs(t.values(i, i) - 1.0));
    CHECK(weighted < 1e-8);
    CHECK(t.diagonal_defect < 1e-3);
    CHECK(t.hermiticity_defect < 1e-14);
    CHECK(t.max_modulus <= 1.0 + 1e-6);
}

TEST_CASE("overlap kernel far on opposite sides approaches the transmission average") {
    // For y left and z right of the light packet the reflected terms oscillate away and
    // I(y, z) -> int dk |g~(k)|^2 conj T(k), the conjugate of Lambda.
    auto sp = base_spec();
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    const auto r = gauss_legendre_width(-60.0, 60.0, 0.05);
    cplx want = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        want += r.w[i] * std::norm(sp.g_delta_ft(r.x[i], 1.0)) * std::conj(transmission_coeff(p.alpha(), r.x[i]));
    const OverlapKernel I(sp, p);
    CHECK(std::abs(I(-20.0, 20.0) - want) < 1e-8);
    CHECK(std::abs(I(20.0, -20.0) - std::conj(want)) < 1e-8);
    CHECK(std::abs(want - cross_coherence(lambda_param(sp, p, LambdaMethod::definition_integral))) < 1e-8);
}

TEST_CASE("effective density: trace, purity and cross coefficient") {
    auto sp = base_spec();
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    const auto lam = lambda_param(sp, p);
    CHECK(cross_coherence(lam) == std::conj(lam.Lambda));
    const Grid1D g = Grid1D::symmetric(512, 3.0);
    const auto rho = effective_density(sp, p, 0.05, lam, g);
    // u+ and u- overlap at e^{-16.36} ~ 8e-8, which is what separates these from the orthogonal values
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rho.purity() == doctest::Approx(0.5 * (1.0 + lam.modulus * lam.modulus)).epsilon(1e-6));
    const auto dense = rho.to_dense();
    const auto inv = density_invariants(dense);
    CHECK(inv.hermiticity_defect < 1e-12);
    CHECK(inv.min_eigenvalue > -1e-10);
    CHECK(inv.purity == doctest::Approx(rho.purity()).epsilon(1e-10));
    CHECK(std::abs(rho.entry(3, 400) - dense.kernel(3, 400)) < 1e-14);
}

TEST_CASE("reduced density of a product state is pure") {
    const Grid1D gr = Grid1D::symmetric(128, 6.0), gR = Grid1D::symmetric(128, 3.0);
    ComplexField2D psi(gr, gR);
    const double nr = std::pow(kPi, -0.25), nR = std::pow(kPi * 0.09, -0.25);
    for (std::size_t i = 0; i < gr.n; ++i)
        for (std::size_t j = 0; j < gR.n; ++j) {
            const double r = gr.x(i), R = gR.x(j);
            psi.at(i, j) = nr * std::exp(-0.5 * r * r) * nR * std::exp(-R * R / 0.18) * std::polar(1.0, 2.0 * R);
        }
    const auto rho = reduced_density(psi);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-10));
    const auto lr = reduced_density_low_rank(psi);
    CHECK(lr.purity() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(distances(rho, lr.to_dense()).hilbert_schmidt < 1e-12);
}

TEST_CASE("distances between pure states") {
    const Grid1D g = Grid1D::symmetric(256, 8.0);
    auto pure = [&](double c) {
        DensityMatrixGrid d;
        d.grid = g;
        Eigen::VectorXcd u(g.n);
        for (std::size_t i = 0; i < g.n; ++i) u(i) = std::pow(kPi, -0.25) * std::exp(-0.5 * (g.x(i) - c) * (g.x(i) - c));
        d.kernel = u * u.adjoint();
        return d;
    };
    const auto a = pure(-4.0), b = pure(4.0);
    CHECK(distances(a, a).hilbert_schmidt < 1e-14);
    const auto rep = distances(a, b, true);
    CHECK(rep.hilbert_schmidt == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    REQUIRE(rep.trace_norm.has_value());
    CHECK(*rep.trace_norm == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("Wigner function of a Gaussian") {
    const Grid1D g = Grid1D::symmetric(256, 8.0);
    DensityMatrixGrid d;
    d.grid = g;
    Eigen::VectorXcd u(g.n);
    for (std::size_t i = 0; i < g.n; ++i) u(i) = std::pow(kPi, -0.25) * std::exp(-0.5 * g.x(i) * g.x(i)) * std::polar(1.0, 1.5 * g.x(i));
    d.kernel = u * u.adjoint();
    const auto w = wigner_function(d, 1.0);
    CHECK(w.integral == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.imag_residue < 1e-10);
    // W(R, P) = e^{-R^2 - (P - 1.5)^2} / pi, peaked at (0, 1.5)
    Eigen::Index ir, ip;
    const double peak = w.values.maxCoeff(&ir, &ip);
    CHECK(peak == doctest::Approx(1.0 / kPi).epsilon(2e-2));
    CHECK(std::abs(w.R[ir]) < 0.1);
    CHECK(std::abs(w.P[ip] - 1.5) < 0.2);
}

TEST_CASE("fringe visibility of a synthetic pattern") {
    const Grid1D g = Grid1D::symmetric(4096, 40.0);
    const double P0 = 5.0, V = 0.37, phi = 0.4;
    std::vector<double> n(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double R = g.x(j);
        n[j] = std::exp(-R * R / 50.0) * (1.0 + V * std::cos(2.0 * P0 * R + phi));
    }
    const auto v = fringe_visibility(g, n, P0, 1.0);
    CHECK(v.visibility == doctest::Approx(V).epsilon(1e-6));
    CHECK(v.phase == doctest::Approx(phi).epsilon(1e-6));
    CHECK(v.frequency == doctest::Approx(10.0));
    CHECK_THROWS_AS(fringe_visibility(Grid1D::symmetric(64, 40.0), std::vector<double>(64, 1.0), P0, 1.0), ResolutionError);
}

TEST_CASE("momentum density is normalized and Hermitian") {
    auto sp = base_spec();
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    const auto lam = lambda_param(sp, p);
    const auto rho = momentum_density(sp, p, lam, momentum_grid(sp, p));
    CHECK(rho.representation == Representation::momentum);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rho.hermiticity_defect() < 1e-14);
    CHECK(rho.min_eigenvalue() > -1e-10);
}

TEST_CASE("regime report and the sampled proposition bounds") {
    InitialStateSpec sp;
    sp.sigma = 0.04;
    sp.delta = 0.2;
    sp.R0 = 4.0;
    sp.P0 = 50.0;
    sp.q0 = 0.025;
    const auto p = PhysicalParams::from_ratio(1.0, 0.01, 1.0, 2.5);
    const auto reg = check_regime(sp, p);
    CHECK(reg.sigma_alpha == doctest::Approx(0.1));
    CHECK(reg.separation_ok(0.5));
    const auto b = proposition2_check(sp, p, 8);
    CHECK(b.sup_diag <= b.bound_diag);
    CHECK(b.sup_offdiag <= b.bound_offdiag);
    CHECK(b.samples > 0);
    InitialStateSpec close = sp;
    close.R0 = 0.1;
    CHECK_THROWS_AS(proposition2_check(close, p, 8), ValidationError);
}
