#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoh/errors.hpp"
#include "decoh/scattering.hpp"

#include <cmath>
#include <numbers>

using namespace decoh;

namespace {

// Definition of the distorted transform by brute-force quadrature.
cplx w_direct(const std::function<cplx(double)>& h, double lo, double hi, double gamma, double x0, double k) {
    auto rule = gauss_legendre_width(lo, x0, 0.01);
    rule.append(gauss_legendre_width(x0, hi, 0.01));
    const cplx R = reflection_or_zero(gamma, k);
    cplx s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double x = rule.x[i];
        s += rule.w[i] * h(x) * (std::polar(1.0, -k * x) + R * std::polar(1.0, -x0 * k + std::abs(k) * std::abs(x - x0)));
    }
    return s / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("reflection and transmission coefficients") {
    CHECK(std::abs(transmission_coeff(1.0, 0.0)) == 0.0);
    CHECK(std::abs(transmission_coeff(1.0, 1.0) - cplx(0.5, -0.5)) < 1e-15);
    CHECK(std::abs(transmission_coeff(1.0, 1e6)) > 1.0 - 1e-5);
    for (double g : {0.1, 1.0, 7.0})
        for (double k : {0.01, 0.5, 3.0, 40.0}) {
            const auto c = scattering_coefficients(g, k);
            CHECK(std::norm(c.R) + std::norm(c.T) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(c.T - (1.0 + c.R)) < 1e-15);
        }
    CHECK(reflection_or_zero(0.0, 2.0) == 0.0);
    CHECK_THROWS_AS(reflection_coeff(0.0, 1.0), ValidationError);
}

TEST_CASE("distorted transform matches its definition") {
    const double s = 0.5, k0 = 1.5, xc = 0.4;
    auto h = [&](double x) {
        return std::pow(std::numbers::pi * s * s, -0.25) * std::exp(-(x - xc) * (x - xc) / (2 * s * s)) * std::polar(1.0, k0 * x);
    };
    const Grid1D g = Grid1D::symmetric(512, 12.0);
    const auto hf = sample(g, h);
    for (double x0 : {0.0, 0.3, -0.8}) {
        const auto W = w_plus_transform(hf, 2.0, x0);
        double worst = 0.0;
        for (std::size_t j = 0; j < W.grid.n; j += 17) {
            const double k = W.grid.x(j);
            if (std::abs(k) > 15.0) continue;
            worst = std::max(worst, std::abs(W.values[j] - w_direct(h, -6.0, 6.0, 2.0, x0, k)));
        }
        INFO("x0 = " << x0);
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("distorted transform is an isometry for the repulsive interaction") {
    // Measured on the DFT k-grid, so two grid effects are budgeted explicitly.
    const Grid1D g = Grid1D::symmetric(2048, 32.0);
    auto h = [](double x) { return std::exp(-x * x / 0.5) * std::polar(1.0, 2.0 * x); };
    const auto hf = sample(g, h);
    const double K = std::numbers::pi / g.spacing;
    for (double gamma : {0.5, 2.0, 10.0}) {
        INFO("gamma = " << gamma);
        // Center outside the packet: W is smooth, but R(k) e^{-2 i k x0} aliases across the k-grid period
        // with weight ~ e^{-gamma (2 pi / dk - 2 |x0|)} = e^{-46 gamma}.
        CHECK(norm(w_plus_transform(hf, gamma, 9.0)) == doctest::Approx(norm(hf)).epsilon(1e-9));
    }
    for (double gamma : {2.0, 10.0}) {
        // Center inside: W ~ 2i R(k) h(x0) / (sqrt(2 pi) |k|), so the grid misses 4 gamma^2 |h(x0)|^2 / (3 pi K^3).
        const double x0 = 0.2;
        const double tail = 4.0 * gamma * gamma * std::norm(h(x0)) / (3.0 * std::numbers::pi * K * K * K);
        const double n2 = std::pow(norm(w_plus_transform(hf, gamma, x0)), 2), h2 = std::pow(norm(hf), 2);
        INFO("gamma = " << gamma << " tail = " << tail);
        CHECK(std::abs(h2 - n2 - tail) <= 0.05 * tail);
    }
}

TEST_CASE("evaluator rows agree with the grid transform and with the definition") {
    InitialStateSpec sp;
    sp.delta = 0.3;
    sp.q0 = 1.0;
    const double gamma = 2.0;
    std::vector<double> ks{-7.0, -1.2, 0.0, 0.4, 3.3, 9.0};
    const WPlusEvaluator ev(sp, 1.0, gamma, ks);
    auto h = [&](double x) { return sp.g_delta(x, 1.0); };
    const auto [lo, hi] = sp.g_support();
    for (double y : {-3.0, -0.2, 0.0, 0.45, 5.0}) {
        const auto row = ev.row(y);
        for (std::size_t j = 0; j < ks.size(); ++j) {
            INFO("y = " << y << " k = " << ks[j]);
            CHECK(std::abs(row[j] - w_direct(h, lo, hi, gamma, y, ks[j])) < 1e-10);
        }
    }
}

TEST_CASE("centers to the right of the light packet see the transmitted plane wave") {
    InitialStateSpec sp;
    sp.delta = 0.3;
    const WPlusEvaluator ev(sp, 1.0, 2.0, {2.0, -2.0});
    const auto row = ev.row(10.0);
    // for x < y and k > 0: e^{-iyk} e^{ik(y - x)} = e^{-ikx}, so W = (1 + R) g~(k) = T g~(k)
    CHECK(std::abs(row[0] - transmission_coeff(2.0, 2.0) * sp.g_delta_ft(2.0, 1.0)) < 1e-12);
}
