#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoh/faddeeva.hpp"
#include "decoh/fft.hpp"
#include "decoh/grid_plan.hpp"
#include "decoh/parallel.hpp"
#include "decoh/quadrature.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

using namespace decoh;
using cd = std::complex<double>;

TEST_CASE("fft round trip and a known transform") {
    const std::size_t n = 48;
    std::vector<cd> a(n);
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    for (auto& v : a) v = {nd(rng), nd(rng)};
    auto b = a;
    fft_forward(b);
    fft_inverse(b);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);

    // a single complex exponential lands in one bin
    std::vector<cd> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = std::polar(1.0, 2.0 * std::numbers::pi * 5.0 * j / n);
    fft_forward(e);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(e[k]) == doctest::Approx(k == 5 ? double(n) : 0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("fft wavenumbers follow the DFT bin order") {
    const auto k = fft_wavenumbers(8, 0.5);
    const double dk = 2.0 * std::numbers::pi / 4.0;
    CHECK(k[0] == 0.0);
    CHECK(k[1] == doctest::Approx(dk));
    CHECK(k[4] == doctest::Approx(-4 * dk));
    CHECK(k[7] == doctest::Approx(-dk));
}

TEST_CASE("Gauss-Legendre panels integrate smooth functions") {
    const auto r = gauss_legendre_panels(0.0, std::numbers::pi, 4);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::sin(r.x[i]);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    const auto q = gauss_legendre_width(-1.0, 2.0, 0.1);
    double p = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) p += q.w[i] * std::pow(q.x[i], 7);
    CHECK(p == doctest::Approx((std::pow(2.0, 8) - 1.0) / 8.0).epsilon(1e-13));
}

TEST_CASE("Gauss-Laguerre moments") {
    const auto r = gauss_laguerre(32);
    double fact = 1.0;
    for (int k = 0; k < 12; ++k) {
        if (k) fact *= k;
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.x[i], k);
        CHECK(s == doctest::Approx(fact).epsilon(1e-11));
    }
}

TEST_CASE("Faddeeva function matches golden values") {
    std::ifstream in(DECOH_SOURCE_DIR "/tests/golden/faddeeva_golden.json");
    REQUIRE(in);
    const auto doc = nlohmann::json::parse(in);
    std::size_t n = 0;
    for (const auto& p : doc.at("points")) {
        const cd z(p.at("x").get<double>(), p.at("y").get<double>());
        const cd want(p.at("re").get<double>(), p.at("im").get<double>());
        const cd got = faddeeva_w(z);
        INFO("z = " << z);
        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
        ++n;
    }
    CHECK(n >= 8);
}

TEST_CASE("Faddeeva symmetry w(-conj z) = conj w(z)") {
    for (double x : {-3.0, -0.4, 0.0, 1.3, 6.0})
        for (double y : {0.0, 0.2, 2.0, 11.0}) {
            const cd z(x, y);
            CHECK(std::abs(faddeeva_w(-std::conj(z)) - std::conj(faddeeva_w(z))) < 1e-14);
        }
}

TEST_CASE("nice sizes are 2^a or 3 * 2^a") {
    CHECK(nice_size(1) == 8);
    CHECK(nice_size(9) == 12);
    CHECK(nice_size(13) == 16);
    CHECK(nice_size(1000) == 1024);
    CHECK(nice_size(1025) == 1536);
    for (std::size_t n = 1; n < 5000; n += 37) {
        const std::size_t m = nice_size(n);
        CHECK(m >= n);
        std::size_t k = m;
        while (k % 2 == 0) k /= 2;
        CHECK((k == 1 || k == 3));
    }
}

TEST_CASE("parallel_for covers each index once for any worker count") {
    for (int w : {1, 2, 3, 8}) {
        set_workers(w);
        std::vector<int> hits(101, 0);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) CHECK(h == 1);
    }
    set_workers(1);
}

TEST_CASE("parallel_for propagates exceptions") {
    set_workers(4);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    set_workers(1);
}
