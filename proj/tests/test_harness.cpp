#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decoh/errors.hpp"
#include "decoh/harness/config.hpp"
#include "decoh/harness/io.hpp"
#include "decoh/harness/report.hpp"
#include "decoh/harness/runs.hpp"
#include "decoh/harness/validate.hpp"
#include "decoh/propagators.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace decoh;
using namespace decoh::harness;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
      "physics": {"M": 1.0, "hbar": 1.0, "epsilon": 0.02, "alpha": 2.0},
      "state": {"sigma": 0.2, "delta": 0.3, "R0": 0.8, "P0": 3.0, "q0": 1.0},
      "grids": "auto"
    })");
}

std::string tmp_dir(const std::string& name) {
    const auto d = std::filesystem::temp_directory_path() / ("decoh_test_" + name);
    std::filesystem::create_directories(d);
    return d.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config: minimal document and defaults") {
    const auto cfg = parse_config(minimal());
    CHECK(cfg.base.params.epsilon() == doctest::Approx(0.02));
    CHECK(cfg.base.alpha == doctest::Approx(2.0));
    CHECK(cfg.grids.automatic);
    const auto times = cfg.times.resolve(cfg.base);
    REQUIRE(times.size() == 2);
    CHECK(times[1] == doctest::Approx(cfg.base.crossing_time()));
    // alpha is held fixed when epsilon changes
    const auto sc = cfg.base.with_epsilon(0.01);
    CHECK(sc.alpha() == doctest::Approx(2.0));
    CHECK(sc.epsilon() == doctest::Approx(0.01));
}

TEST_CASE("config errors name the offending key") {
    auto doc = minimal();
    doc.erase("grids");
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "grids");
    }

    doc = minimal();
    doc["state"]["sigmaa"] = 0.1;
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "state.sigmaa");
    }

    doc = minimal();
    doc["physics"]["m"] = 0.02;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);

    doc = minimal();
    doc["grids"] = json::parse(R"({"mode": "fixed", "r": {"n": 255, "half_width": 10}, "R": {"n": 256, "half_width": 4}})");
    CHECK_THROWS_AS(parse_config(doc), ConfigError);

    doc = minimal();
    doc["methods"] = json::parse(R"({"delta_kernel": "series"})");
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("shipped configurations parse") {
    for (const char* name : {"default", "no_interaction", "coarse", "fringes"}) {
        INFO(name);
        CHECK_NOTHROW(load_config(std::string(DECOH_SOURCE_DIR) + "/configs/" + name + ".json"));
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("field dumps round trip") {
    const std::string dir = tmp_dir("io");
    ComplexField2D f(Grid1D::symmetric(6, 2.0), Grid1D::symmetric(4, 1.0));
    for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = cplx(0.1 * k, -1.0 / (k + 1.0));
    write_field(dir + "/f.bin", f, {{"label", "x"}, {"time", 0.5}});
    const auto d = read_field(dir + "/f.bin");
    REQUIRE(d.axes.size() == 2);
    CHECK(d.axes[0] == f.grid_r);
    CHECK(d.axes[1] == f.grid_R);
    CHECK(d.values == f.values);
    CHECK(d.meta.at("label") == "x");

    std::ofstream(dir + "/junk.bin") << "not a dump";
    CHECK_THROWS_AS(read_field(dir + "/junk.bin"), IoError);
}

TEST_CASE("csv output uses shortest round-trip numbers") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    const std::string dir = tmp_dir("csv");
    write_csv(dir + "/a.csv", {"x", "y"}, {{1.0, 2.5}, {-0.25, 3.0}});
    CHECK(slurp(dir + "/a.csv") == "x,y\n1,-0.25\n2.5,3\n");
    CHECK_THROWS_AS(write_csv(dir + "/b.csv", {"x", "y"}, {{1.0}, {1.0, 2.0}}), ValidationError);
}

TEST_CASE("report: assertion logic and criterion status") {
    ValidationReport r;
    Assertion a;
    a.id = "a";
    a.criterion = 1;
    a.metric = "rel_diff";
    a.measured = 1.01;
    a.reference = 1.0;
    a.tolerance = 0.02;
    CHECK(r.check(a).status == Status::pass);
    a.id = "b";
    a.metric = "ratio";
    a.measured = 2.0;
    a.reference = 2.0;
    a.tolerance = 1.0;
    a.strict = true;
    CHECK(r.check(a).status == Status::fail);
    a.id = "c";
    a.metric = "value";
    a.measured = std::numeric_limits<double>::quiet_NaN();
    a.strict = false;
    CHECK(r.check(a).status == Status::fail);
    r.skip(2, "d", "claim", "no interaction");
    r.timing("t", 3, 5.0, 1.0);

    CHECK(r.criterion_status(1) == Status::fail);
    CHECK(r.criterion_status(2) == Status::skip);
    CHECK(r.criterion_status(3) == Status::fail);
    CHECK(r.criterion_status(4) == Status::skip);
    CHECK(!r.passed());
    const auto j = r.to_json();
    CHECK(j.at("passed") == false);
    CHECK(j.dump().find("timing") == std::string::npos);
    CHECK(r.summary().find("FAIL") != std::string::npos);

    ValidationReport ok;
    a.id = "e";
    a.measured = 0.5;
    ok.check(a);
    CHECK(ok.passed());
}

TEST_CASE("stage names") {
    CHECK(parse_stage("psia") == StageChoice::psia);
    CHECK(parse_stage("exact") == StageChoice::none);
    CHECK(stage_choice_name(parse_stage("psi2")) == "psi2");
    CHECK_THROWS_AS(parse_stage("psi3"), ValidationError);
}

TEST_CASE("lambda map flags") {
    LambdaMapConfig c;
    c.alpha_delta = {0.0, 0.5, 2.0};
    c.k0_over_alpha = {0.0, 1.0, 10.0};
    const auto m = run_lambda_map(Envelope::gaussian(), c);
    CHECK(m.entries.size() == 9);
    CHECK(m.zero_row_unit);
    CHECK(m.decreasing_in_beta);
    CHECK(m.increasing_in_k0);
    CHECK(m.max_path_difference < 1e-8);
}

TEST_CASE("direct quadrature reproduces the free product evolution") {
    InitialStateSpec sp;
    sp.sigma = 0.2;
    sp.delta = 0.3;
    sp.R0 = 0.8;
    sp.P0 = 3.0;
    sp.q0 = 1.0;
    const auto p = PhysicalParams::from_ratio(1.0, 0.04, 1.0, 0.0);
    const double t = 0.1;
    const Grid1D gr = Grid1D::symmetric(2048, 40.0), gR = Grid1D::symmetric(512, 4.0);
    const auto g = free_propagate(sample(gr, [&](double r) { return sp.g_delta(r, 1.0); }), p.m, t);
    const auto f = free_propagate(sample(gR, [&](double R) { return sp.f_sigma(R, 1.0); }), p.M, t);
    std::vector<std::pair<double, double>> pts;
    std::vector<cplx> want;
    for (std::size_t i : {1000u, 1024u, 1040u, 1100u})
        for (std::size_t j : {200u, 240u, 256u, 300u}) {
            pts.emplace_back(gr.x(i), gR.x(j));
            want.push_back(g.values[i] * f.values[j]);
        }
    const auto got = direct_evolution(sp, p, t, pts);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        worst = std::max(worst, std::abs(got[k] - want[k]));
        scale = std::max(scale, std::abs(want[k]));
    }
    CHECK(worst / scale < 1e-8);
}
