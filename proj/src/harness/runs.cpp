#include "decoh/harness/runs.hpp"

#include "decoh/errors.hpp"
#include "decoh/harness/io.hpp"
#include "decoh/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

namespace decoh::harness {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string path_in(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

json constants_json(const ErrorConstants& ec) {
    return {{"C1", ec.C1},
            {"C2", ec.C2},
            {"C3_at_t", ec.C3_at_t},
            {"C2_interaction_inverse", ec.C2_interaction_inverse},
            {"C2_interaction_linear", ec.C2_interaction_linear},
            {"C3_free", ec.C3_free},
            {"C3_interaction", ec.C3_interaction}};
}

json fit_json(const BoundFit& f) {
    return {{"a", f.a}, {"b", f.b}, {"lift", f.lift}, {"raw_dominates", f.raw_dominates}, {"points", f.points}};
}

// Exact field with the drift measured here instead of thrown, so callers decide what a failure means.
ComplexField2D exact_field(const ComplexField2D& psi0, const PhysicalParams& p, double t, const SimulationConfig& cfg,
                           double& drift) {
    EvolveOptions o = cfg.evolve_options();
    o.norm_tol = std::numeric_limits<double>::infinity();
    PropagationReport rep;
    ComplexField2D psi = exact_evolve(psi0, p, t, o, &rep);
    drift = rep.drift();
    return psi;
}

}  // namespace

StageChoice parse_stage(const std::string& s) {
    if (s == "psi1") return StageChoice::psi1;
    if (s == "psi2") return StageChoice::psi2;
    if (s == "psia") return StageChoice::psia;
    if (s == "exact") return StageChoice::none;
    throw ValidationError("unknown stage '" + s + "' (psi1, psi2, psia, exact)");
}

std::string stage_choice_name(StageChoice s) {
    switch (s) {
        case StageChoice::psi1: return "psi1";
        case StageChoice::psi2: return "psi2";
        case StageChoice::psia: return "psia";
        case StageChoice::none: return "exact";
    }
    return "?";
}

json scenario_json(const Scenario& sc) {
    const auto& s = sc.spec;
    const auto& p = sc.params;
    return {{"physics", {{"M", p.M}, {"m", p.m}, {"epsilon", p.epsilon()}, {"hbar", p.hbar}, {"alpha", sc.alpha}, {"alpha0", p.alpha0}}},
            {"state",
             {{"f", s.f.kind_name()},
              {"g", s.g.kind_name()},
              {"sigma", s.sigma},
              {"delta", s.delta},
              {"R0", s.R0},
              {"P0", s.P0},
              {"r0", s.r0},
              {"q0", s.q0}}}};
}

// ---------------------------------------------------------------- evolve

EvolveResult run_evolve(const SimulationConfig& cfg, StageChoice stage, const std::string& out_dir) {
    const Scenario& sc = cfg.base;
    const PhysicalParams& p = sc.params;
    const auto times = cfg.times.resolve(sc);
    EvolveResult res;
    res.stage = stage;
    res.epsilon = p.epsilon();
    if (!out_dir.empty()) ensure_directory(out_dir);

    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        EvolvePoint pt;
        pt.t = t;
        pt.grid = cfg.grids.resolve(sc, p, t);
        pt.constants = compute_error_constants(sc.spec, p, t);
        const auto t0 = std::chrono::steady_clock::now();
        ComplexField2D psi;
        {
            const ComplexField2D psi0 = build_initial_state(sc.spec, p, pt.grid.r, pt.grid.R);
            psi = exact_field(psi0, p, t, cfg, pt.drift);
        }
        pt.seconds_exact = seconds_since(t0);
        pt.norm_exact = norm(psi);
        json meta = {{"t", t}, {"epsilon", p.epsilon()}, {"alpha", sc.alpha}, {"axes", {"r", "R"}}};
        if (!out_dir.empty()) {
            meta["label"] = "exact";
            write_field(path_in(out_dir, "psi_exact_t" + std::to_string(k) + ".bin"), psi, meta);
        }
        pt.error = std::nan("");
        if (stage != StageChoice::none) {
            ComplexField2D approx;
            switch (stage) {
                case StageChoice::psi1: approx = psi1_evolve(sc.spec, p, t, pt.grid.r, pt.grid.R, cfg.evolve_options()); break;
                case StageChoice::psi2: approx = psi2_evolve(sc.spec, p, t, pt.grid.r, pt.grid.R, cfg.tol.wrap); break;
                default: approx = asymptotic_evolve(sc.spec, p, t, pt.grid.r, pt.grid.R); break;
            }
            pt.norm_stage = norm(approx);
            pt.error = distance(psi, approx);
            if (!out_dir.empty()) {
                meta["label"] = stage_choice_name(stage);
                write_field(path_in(out_dir, "psi_" + stage_choice_name(stage) + "_t" + std::to_string(k) + ".bin"), approx,
                            meta);
            }
        }
        res.points.push_back(pt);
    }

    res.c3_fit = fit_c3(sc.spec, p, times);
    const ErrorConstants& ec = res.points.front().constants;
    res.A_analytic = ec.C2 + res.c3_fit.a;
    res.B_analytic = ec.C1 + res.c3_fit.b;
    if (stage == StageChoice::psia) {
        std::vector<double> ts, ys;
        for (const auto& pt : res.points) {
            ts.push_back(pt.t);
            ys.push_back(pt.error / res.epsilon);
        }
        res.error_fit = fit_inverse_time_bound(ts, ys);
    }
    return res;
}

json evolve_summary(const EvolveResult& r) {
    json pts = json::array();
    bool bound_ok = true;
    for (const auto& pt : r.points) {
        json j = {{"t", pt.t},
                  {"grid", {{"nr", pt.grid.r.n}, {"half_r", 0.5 * pt.grid.r.n * pt.grid.r.spacing}, {"nR", pt.grid.R.n},
                            {"half_R", 0.5 * pt.grid.R.n * pt.grid.R.spacing}}},
                  {"norm_drift", pt.drift},
                  {"norm_exact", pt.norm_exact},
                  {"constants", constants_json(pt.constants)}};
        if (r.stage != StageChoice::none) {
            j["norm_stage"] = pt.norm_stage;
            j["error"] = pt.error;
        }
        if (r.stage == StageChoice::psia) {
            const double bound = (r.A_analytic / pt.t + r.B_analytic) * r.epsilon;
            j["bound_analytic"] = bound;
            j["bound_fit"] = (r.error_fit.a / pt.t + r.error_fit.b) * r.epsilon;
            j["within_analytic_bound"] = pt.error <= bound;
            bound_ok = bound_ok && pt.error <= bound;
        }
        pts.push_back(j);
    }
    json out = {{"stage", stage_choice_name(r.stage)},
                {"epsilon", r.epsilon},
                {"points", pts},
                {"C3_fit", fit_json(r.c3_fit)},
                {"A_analytic", r.A_analytic},
                {"B_analytic", r.B_analytic}};
    if (r.stage == StageChoice::psia) {
        out["A_fit"] = r.error_fit.a;
        out["B_fit"] = r.error_fit.b;
        out["fit"] = fit_json(r.error_fit);
        out["bound_flag"] = bound_ok ? "pass" : "fail";
    }
    return out;
}

// ---------------------------------------------------------------- sweep

SweepResult run_sweep(const Scenario& sc, const SimulationConfig& cfg, const std::vector<double>& epsilons,
                      const std::vector<double>& times, bool stages) {
    const auto T0 = std::chrono::steady_clock::now();
    SweepResult res;
    std::vector<double> c4(epsilons.size()), c5(epsilons.size());
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const double eps = epsilons[e];
        const PhysicalParams p = sc.with_epsilon(eps);
        BoundFit c3fit;
        try {
            c3fit = fit_c3(sc.spec, p, times);
        } catch (const Error&) {
            c3fit.a = c3fit.b = std::nan("");
        }
        c4[e] = c3fit.a;
        c5[e] = c3fit.b;
        for (double t : times) {
            SweepPoint pt;
            pt.epsilon = eps;
            pt.t = t;
            try {
                const GridPair g = cfg.grids.resolve(sc, p, t);
                pt.nr = g.r.n;
                pt.nR = g.R.n;
                pt.constants = compute_error_constants(sc.spec, p, t);
                const auto t0 = std::chrono::steady_clock::now();
                ComplexField2D psi;
                {
                    const ComplexField2D psi0 = build_initial_state(sc.spec, p, g.r, g.R);
                    psi = exact_field(psi0, p, t, cfg, pt.drift);
                }
                pt.seconds_exact = seconds_since(t0);
                ComplexField2D pa = asymptotic_evolve(sc.spec, p, t, g.r, g.R);
                pt.err = distance(psi, pa);
                if (stages) {
                    pt.gap_psi1 = psi1_initial_gap(sc.spec, p, g.r, g.R);
                    ComplexField2D p1 = psi1_evolve(sc.spec, p, t, g.r, g.R, {std::numeric_limits<double>::infinity(), cfg.tol.wrap, cfg.kernel_method});
                    pt.err_psi1 = distance(psi, p1);
                    psi = ComplexField2D();
                    const ComplexField2D p2 = psi2_evolve(sc.spec, p, t, g.r, g.R, cfg.tol.wrap);
                    pt.err_12 = distance(p1, p2);
                    pt.err_2a = distance(p2, pa);
                }
            } catch (const Error& ex) {
                pt.failure = ex.what();
                pt.err = std::nan("");
            }
            res.points.push_back(pt);
        }
    }

    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const ErrorConstants* ec = nullptr;
        for (const auto& pt : res.points)
            if (pt.epsilon == epsilons[e] && pt.failure.empty()) ec = &pt.constants;
        if (!ec) continue;
        res.A_analytic = std::max(res.A_analytic, ec->C2 + c4[e]);
        res.B_analytic = std::max(res.B_analytic, ec->C1 + c5[e]);
    }

    std::vector<double> ts, ys;
    for (double t : times) {
        SlopeFit sf;
        sf.t = t;
        double sx = 0, sy = 0, sxx = 0, sxy = 0, eps_min = std::numeric_limits<double>::infinity();
        for (const auto& pt : res.points) {
            if (pt.t != t || !pt.failure.empty() || !(pt.err > 0.0)) continue;
            const double x = std::log(pt.epsilon), y = std::log(pt.err);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++sf.points;
            if (pt.epsilon < eps_min) {
                eps_min = pt.epsilon;
                sf.point_estimate = pt.err / pt.epsilon;
            }
            ts.push_back(pt.t);
            ys.push_back(pt.err / pt.epsilon);
        }
        const double n = static_cast<double>(sf.points);
        const double den = n * sxx - sx * sx;
        if (sf.points >= 2 && den > 0.0) sf.slope = (n * sxy - sx * sy) / den;
        res.slopes.push_back(sf);
    }
    if (!ts.empty()) res.fit = fit_inverse_time_bound(ts, ys);
    res.seconds = seconds_since(T0);
    return res;
}

void write_sweep(const SweepResult& r, const std::string& out_dir) {
    ensure_directory(out_dir);
    std::vector<std::string> head{"epsilon", "t", "nr", "nR", "norm_drift", "err_exact_asym", "err_exact_psi1",
                                  "gap_psi1", "err_psi1_psi2", "err_psi2_asym", "C1_eps", "C2_eps_over_t", "C3_eps",
                                  "bound_analytic", "bound_fit"};
    std::vector<std::vector<double>> cols(head.size());
    for (const auto& pt : r.points) {
        const double e = pt.epsilon, t = pt.t;
        const double v[] = {e, t, double(pt.nr), double(pt.nR), pt.drift, pt.err, pt.err_psi1, pt.gap_psi1, pt.err_12,
                            pt.err_2a, pt.constants.C1 * e, pt.constants.C2 * e / t, pt.constants.C3_at_t * e,
                            (r.A_analytic / t + r.B_analytic) * e, (r.fit.a / t + r.fit.b) * e};
        for (std::size_t k = 0; k < head.size(); ++k) cols[k].push_back(v[k]);
    }
    write_csv(path_in(out_dir, "sweep.csv"), head, cols);
    write_json(path_in(out_dir, "sweep.json"), sweep_summary(r));
}

json sweep_summary(const SweepResult& r) {
    json slopes = json::array();
    for (const auto& s : r.slopes) {
        json j = {{"t", s.t}, {"points", s.points}, {"error_over_eps_at_smallest_eps", s.point_estimate}};
        if (s.slope) j["slope"] = *s.slope;
        else j["slope"] = nullptr, j["note"] = "fewer than two mass ratios: point estimate only";
        slopes.push_back(j);
    }
    json fails = json::array();
    for (const auto& pt : r.points)
        if (!pt.failure.empty()) fails.push_back({{"epsilon", pt.epsilon}, {"t", pt.t}, {"error", pt.failure}});
    return {{"slopes", slopes},
            {"A_fit", r.fit.a},
            {"B_fit", r.fit.b},
            {"fit", fit_json(r.fit)},
            {"A_analytic", r.A_analytic},
            {"B_analytic", r.B_analytic},
            {"failures", fails}};
}

// ---------------------------------------------------------------- Lambda map

LambdaMap run_lambda_map(const Envelope& g, const LambdaMapConfig& cfg) {
    LambdaMap m;
    m.entries.resize(cfg.alpha_delta.size() * cfg.k0_over_alpha.size());
    const std::size_t nk = cfg.k0_over_alpha.size();
    parallel_for(m.entries.size(), [&](std::size_t idx) {
        LambdaMapEntry& e = m.entries[idx];
        e.alpha_delta = cfg.alpha_delta[idx / nk];
        e.k0_over_alpha = cfg.k0_over_alpha[idx % nk];
        const double k0d = e.k0_over_alpha * e.alpha_delta;
        e.rescaled = lambda_scaled(g, e.alpha_delta, k0d, LambdaMethod::rescaled);
        e.definition = lambda_scaled(g, e.alpha_delta, k0d, LambdaMethod::definition_integral);
    });
    for (const auto& e : m.entries) {
        m.max_path_difference = std::max(m.max_path_difference, std::abs(e.rescaled - e.definition));
        if (e.alpha_delta == 0.0 && std::abs(e.rescaled) != 1.0) m.zero_row_unit = false;
    }
    auto at = [&](std::size_t b, std::size_t k) { return std::abs(m.entries[b * nk + k].rescaled); };
    // ordered views of the axes
    std::vector<std::size_t> bo(cfg.alpha_delta.size()), ko(nk);
    for (std::size_t i = 0; i < bo.size(); ++i) bo[i] = i;
    for (std::size_t i = 0; i < ko.size(); ++i) ko[i] = i;
    std::sort(bo.begin(), bo.end(), [&](auto a, auto b) { return cfg.alpha_delta[a] < cfg.alpha_delta[b]; });
    std::sort(ko.begin(), ko.end(), [&](auto a, auto b) { return cfg.k0_over_alpha[a] < cfg.k0_over_alpha[b]; });
    for (std::size_t k = 0; k < nk; ++k) {
        if (cfg.k0_over_alpha[k] != 0.0) continue;
        for (std::size_t i = 1; i < bo.size(); ++i)
            if (!(at(bo[i], k) < at(bo[i - 1], k))) m.decreasing_in_beta = false;
    }
    for (std::size_t b = 0; b < bo.size(); ++b) {
        if (cfg.alpha_delta[b] == 0.0) continue;
        for (std::size_t i = 1; i < ko.size(); ++i)
            if (!(at(b, ko[i]) > at(b, ko[i - 1]))) m.increasing_in_k0 = false;
    }
    return m;
}

void write_lambda_map(const LambdaMap& m, const std::string& out_dir) {
    ensure_directory(out_dir);
    std::vector<std::string> head{"alpha_delta", "k0_over_alpha", "re", "im", "modulus", "phase",
                                  "re_definition", "im_definition"};
    std::vector<std::vector<double>> cols(head.size());
    for (const auto& e : m.entries) {
        const double v[] = {e.alpha_delta, e.k0_over_alpha, e.rescaled.real(), e.rescaled.imag(),
                            std::abs(e.rescaled), std::arg(e.rescaled), e.definition.real(), e.definition.imag()};
        for (std::size_t k = 0; k < head.size(); ++k) cols[k].push_back(v[k]);
    }
    write_csv(path_in(out_dir, "lambda_map.csv"), head, cols);
    write_json(path_in(out_dir, "lambda_map.json"), lambda_map_summary(m));
}

json lambda_map_summary(const LambdaMap& m) {
    return {{"entries", m.entries.size()},
            {"max_path_difference", m.max_path_difference},
            {"zero_interaction_row_is_one", m.zero_row_unit},
            {"modulus_decreasing_in_alpha_delta_at_k0_zero", m.decreasing_in_beta},
            {"modulus_increasing_in_k0_over_alpha", m.increasing_in_k0}};
}

// ---------------------------------------------------------------- fringes

InterferencePattern run_fringes(const FringeConfig& cfg) {
    InterferenceOptions o;
    o.min_points_per_period = cfg.min_points_per_period;
    o.with_asymptotic = cfg.asymptotic && cfg.scenario.alpha > 0.0;
    o.grid = cfg.grid;
    return interference_pattern(cfg.scenario.spec, cfg.scenario.params, o);
}

void write_fringes(const InterferencePattern& p, const std::string& out_dir) {
    ensure_directory(out_dir);
    std::vector<std::string> head{"R", "n_effective"};
    std::vector<std::vector<double>> cols{p.grid.points(), p.n_effective};
    if (!p.n_asymptotic.empty()) {
        head.push_back("n_asymptotic");
        cols.push_back(p.n_asymptotic);
    }
    write_csv(path_in(out_dir, "fringes.csv"), head, cols);
    write_json(path_in(out_dir, "fringes.json"), fringe_summary(p));
}

json fringe_summary(const InterferencePattern& p) {
    const cplx c = cross_coherence(p.lambda);
    auto vis = [](const VisibilityReport& v) {
        return json{{"visibility", v.visibility}, {"phase", v.phase}, {"frequency", v.frequency},
                    {"points_per_period", v.points_per_period}};
    };
    json out = {{"tau", p.tau},
                {"grid", {{"n", p.grid.n}, {"min", p.grid.min}, {"spacing", p.grid.spacing}}},
                {"Lambda", {{"re", p.lambda.Lambda.real()}, {"im", p.lambda.Lambda.imag()}, {"modulus", p.lambda.modulus},
                            {"phase", p.lambda.phase}, {"method", lambda_method_name(p.lambda.method)}}},
                {"cross_coefficient_phase", std::arg(c)},
                {"effective", vis(p.effective)},
                {"regime",
                 {{"sigma_alpha", num(p.regime.sigma_alpha)},
                  {"inverse_alpha_separation", num(p.regime.inv_alpha_sep)},
                  {"delta_over_separation", num(p.regime.delta_sep)},
                  {"spreading", num(p.regime.spreading)},
                  {"warnings", p.regime.warnings}}}};
    if (p.asymptotic) out["asymptotic"] = vis(*p.asymptotic);
    return out;
}

}  // namespace decoh::harness
