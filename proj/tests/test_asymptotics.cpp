#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoh/asymptotics.hpp"
#include "decoh/errors.hpp"
#include "decoh/grid_plan.hpp"

#include <cmath>

using namespace decoh;

namespace {

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

TEST_CASE("initial gap to psi_1 is below C1 epsilon and scales linearly") {
    const auto sp = base_spec();
    std::vector<double> gaps;
    for (double eps : {0.04, 0.02, 0.01}) {
        const auto p = PhysicalParams::from_ratio(1.0, eps, 1.0, 2.0);
        const auto gp = plan_grids(sp, p, 0.05);
        const double gap = psi1_initial_gap(sp, p, gp.r, gp.R);
        INFO("eps = " << eps);
        CHECK(gap <= c1_constant(sp, p) * eps);
        gaps.push_back(gap);
    }
    CHECK(gaps[1] / gaps[0] == doctest::Approx(0.5).epsilon(0.1));
    CHECK(gaps[2] / gaps[1] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("interaction pieces of the constants vanish without interaction") {
    const auto sp = base_spec();
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 0.0);
    const auto c = compute_error_constants(sp, p, 0.3);
    CHECK(c.C2_interaction_inverse == 0.0);
    CHECK(c.C2_interaction_linear == 0.0);
    CHECK(c.C3_interaction == 0.0);
    CHECK(c.C1 > 0.0);
    const auto q = compute_error_constants(sp, PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0), 0.3);
    CHECK(q.C2 > c.C2);
    CHECK(q.C3_at_t > 0.0);
    CHECK_THROWS_AS(c3_constant(sp, p, 0.0), ValidationError);
}

TEST_CASE("C3 decays like 1/t plus a constant") {
    const auto sp = base_spec();
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    const std::vector<double> ts{0.1, 0.2, 0.4, 0.8};
    const auto fit = fit_c3(sp, p, ts);
    for (double t : ts) CHECK(c3_constant(sp, p, t) <= fit.a / t + fit.b + 1e-12);
    CHECK(c3_constant(sp, p, 0.1) > c3_constant(sp, p, 0.8));
}

TEST_CASE("inverse-time bound fit") {
    const std::vector<double> t{0.5, 1.0, 2.0, 4.0};
    std::vector<double> y;
    for (double s : t) y.push_back(2.0 / s + 3.0);
    const auto f = fit_inverse_time_bound(t, y);
    CHECK(f.a == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f.b == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(f.lift == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.points == 4);

    std::vector<double> z{4.0, 2.5, 5.0, 1.0};
    const auto g = fit_inverse_time_bound(t, z);
    CHECK(g.a >= 0.0);
    CHECK(g.b >= 0.0);
    CHECK(g.lift >= 1.0);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(g.a / t[i] + g.b >= z[i] * (1.0 - 1e-12));
    CHECK_THROWS_AS(fit_inverse_time_bound({1.0}, {}), ValidationError);
}

TEST_CASE("support nodes lie inside the heavy packets") {
    const auto sp = base_spec();
    const Grid1D g = Grid1D::symmetric(256, 4.0);
    const auto nodes = support_nodes(sp, g);
    REQUIRE(!nodes.empty());
    const auto iv = sp.f_support();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k) CHECK(nodes[k] > nodes[k - 1]);
        const double x = g.x(nodes[k]);
        bool inside = false;
        for (const auto& [a, b] : iv) inside = inside || (x >= a && x <= b);
        CHECK(inside);
    }
}

TEST_CASE("approximants keep unit norm") {
    // The distorted transform is an isometry and the heavy propagation unitary, so ||psi^a|| = ||f_sigma||.
    const auto sp = base_spec();
    const auto p = PhysicalParams::from_ratio(1.0, 0.02, 1.0, 2.0);
    const double t = 0.3;
    const auto gp = plan_grids(sp, p, t);
    for (auto s : {ApproximantStage::Stage::psi2, ApproximantStage::Stage::psi_a}) {
        const auto st = make_stage(s, sp, p, t, gp.r, gp.R);
        INFO(stage_name(s));
        CHECK(st.norm == doctest::Approx(1.0).epsilon(2e-3));
    }
    CHECK_THROWS_AS(asymptotic_evolve(sp, p, 0.0, gp.r, gp.R), ValidationError);
}
