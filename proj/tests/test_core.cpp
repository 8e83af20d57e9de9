#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoh/core.hpp"
#include "decoh/errors.hpp"
#include "decoh/grid_plan.hpp"

#include <cmath>
#include <numbers>

using namespace decoh;

namespace {

double l2(const std::function<double(double)>& f, double a, double b) {
    const auto r = gauss_legendre_width(a, b, 0.05);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i]) * f(r.x[i]);
    return s;
}

cplx numeric_ft(const Envelope& e, double kappa) {
    const auto r = gauss_legendre_width(-e.half_width(), e.half_width(), 0.02);
    cplx s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * e(r.x[i]) * std::polar(1.0, -kappa * r.x[i]);
    return s / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("envelopes have unit norm") {
    for (const Envelope& e : {Envelope::gaussian(), Envelope::gaussian(5.0), Envelope::bump()}) {
        CHECK(l2([&](double x) { return e(x); }, -e.half_width(), e.half_width()) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.evenness_defect() < 1e-14);
    }
}

TEST_CASE("envelope Fourier transforms match direct quadrature") {
    for (const Envelope& e : {Envelope::gaussian(), Envelope::bump()}) {
        for (double k : {0.0, 0.7, 2.5, -4.0}) {
            INFO(e.kind_name() << " k=" << k);
            CHECK(std::abs(e.ft(k) - numeric_ft(e, k)) < 1e-10);
        }
    }
    // untruncated Gaussian closed form
    const Envelope g = Envelope::gaussian();
    CHECK(g.ft(1.3).real() == doctest::Approx(std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * 1.69)).epsilon(1e-12));
}

TEST_CASE("tabulated envelope reproduces a sampled Gaussian") {
    std::vector<double> s;
    const double L = 8.0;
    const int n = 801;
    for (int i = 0; i < n; ++i) {
        const double x = -L + 2.0 * L * i / (n - 1);
        s.push_back(std::exp(-0.5 * x * x));
    }
    const Envelope t = Envelope::tabulated(s, L);
    const Envelope g = Envelope::gaussian(L);
    for (double x : {-2.3, -0.1, 0.0, 0.77, 3.0}) CHECK(t(x) == doctest::Approx(g(x)).epsilon(1e-5));
    CHECK_THROWS_AS(Envelope::tabulated({1, 2, 3}, 1.0), ValidationError);
}

TEST_CASE("bandwidth and extent bound the tails") {
    const Envelope g = Envelope::gaussian();
    // |ft|^2 = e^{-k^2}/sqrt(pi): tail beyond K is erfc(K)
    const double K = g.bandwidth(1e-12);
    CHECK(std::erfc(K) <= 1.01e-12);
    CHECK(std::erfc(K * 0.98) > 1e-12);
    const double X = g.extent(1e-12);
    CHECK(std::erfc(X) <= 1.1e-12);
}

TEST_CASE("heavy packets: norms, orthogonality and transforms") {
    InitialStateSpec s;
    s.sigma = 0.2;
    s.R0 = 0.8;
    s.P0 = 3.0;
    const double hb = 1.0;
    auto fp = [&](double R) { return std::abs(s.f_plus(R, hb)); };
    CHECK(l2(fp, -3, 3) == doctest::Approx(1.0).epsilon(1e-12));
    const auto r = gauss_legendre_width(-3.0, 3.0, 0.02);
    cplx ov = 0.0, nsig = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        ov += r.w[i] * std::conj(s.f_plus(r.x[i], hb)) * s.f_minus(r.x[i], hb);
        nsig += r.w[i] * std::norm(s.f_sigma(r.x[i], hb));
    }
    // Gaussian overlap e^{-R0^2/sigma^2 - P0^2 sigma^2}
    CHECK(std::abs(ov) == doctest::Approx(std::exp(-16.0 - 0.36)).epsilon(1e-6));
    CHECK(nsig.real() == doctest::Approx(1.0 + ov.real()).epsilon(1e-10));
    // f+ sits at -R0 and moves right
    CHECK(std::abs(s.f_plus(-s.R0, hb)) > std::abs(s.f_plus(s.R0, hb)));
    for (double k : {-3.0, 0.0, 2.0, 5.0}) {
        cplx d = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) d += r.w[i] * s.f_plus(r.x[i], hb) * std::polar(1.0, -k * r.x[i]);
        d /= std::sqrt(2.0 * std::numbers::pi);
        CHECK(std::abs(d - s.f_plus_ft(k, hb)) < 1e-10);
    }
}

TEST_CASE("single packet when R0 = P0 = 0") {
    InitialStateSpec s;
    s.R0 = 0.0;
    s.P0 = 0.0;
    CHECK(s.single_packet());
    CHECK(s.f_sigma(0.03, 1.0) == s.f_plus(0.03, 1.0));
    CHECK(s.f_support().size() == 1);
}

TEST_CASE("spec validation") {
    InitialStateSpec s;
    s.sigma = -1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = InitialStateSpec{};
    s.R0 = 0.1;
    const auto w = s.validate();
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("geometric condition") != std::string::npos);
    std::vector<double> odd(21);
    for (int i = 0; i < 21; ++i) odd[i] = std::exp(-0.5 * (i - 12) * (i - 12) / 4.0);
    s = InitialStateSpec{};
    s.g = Envelope::tabulated(odd, 4.0);
    CHECK_THROWS_AS(s.validate(true), ValidationError);
    CHECK_NOTHROW(s.validate(false));
}

TEST_CASE("physical parameters") {
    const auto p = PhysicalParams::from_ratio(2.0, 0.05, 1.5, 3.0);
    CHECK(p.epsilon() == doctest::Approx(0.05));
    CHECK(p.alpha() == doctest::Approx(3.0));
    CHECK(p.mu() == doctest::Approx(0.1 * 2.0 / 2.1));
    CHECK(p.nu() == doctest::Approx(2.1));
    PhysicalParams bad = p;
    bad.alpha0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("grids and fields") {
    const Grid1D g = Grid1D::symmetric(64, 4.0);
    CHECK(g.x(32) == 0.0);
    CHECK(g.spacing == doctest::Approx(0.125));
    CHECK(g.max() == doctest::Approx(4.0));
    CHECK_THROWS_AS(Grid1D::symmetric(1, 1.0), ValidationError);

    InitialStateSpec s;
    s.sigma = 0.2;
    s.delta = 0.3;
    s.R0 = 0.8;
    s.P0 = 3.0;
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    const auto gp = plan_grids(s, p, 0.1);
    const auto psi = build_initial_state(s, p, gp.r, gp.R);
    CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-6));
    const ComplexField2D other(gp.r, Grid1D::symmetric(gp.R.n + 2, 3.0));
    CHECK_THROWS_AS(distance(psi, other), DimensionError);
}

TEST_CASE("coarse grids are rejected with the failing axis named") {
    InitialStateSpec s;
    s.P0 = 50.0;
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    try {
        build_initial_state(s, p, Grid1D::symmetric(256, 10.0), Grid1D::symmetric(64, 4.0));
        FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
        CHECK(std::string(e.what()).find("axis R") != std::string::npos);
    }
}
