#include "decoh/harness/validate.hpp"

#include "decoh/asymptotics.hpp"
#include "decoh/density.hpp"
#include "decoh/errors.hpp"
#include "decoh/grid_plan.hpp"
#include "decoh/harness/io.hpp"
#include "decoh/harness/runs.hpp"
#include "decoh/parallel.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace decoh::harness {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
const char* kNoInteraction = "no interaction";

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

std::string tag(const std::string& base, double eps, double t) {
    std::ostringstream os;
    os << base << "[eps=" << eps << ",t=" << t << "]";
    return os.str();
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

struct Checker {
    ValidationReport& rep;

    void value(int crit, const std::string& id, const std::string& claim, const std::string& basis, double measured,
               double tol, bool strict = false) {
        Assertion a;
        a.id = id;
        a.criterion = crit;
        a.claim = claim;
        a.basis = basis;
        a.metric = "value";
        a.measured = measured;
        a.tolerance = tol;
        a.strict = strict;
        rep.check(std::move(a));
    }
    void compare(int crit, const std::string& id, const std::string& claim, const std::string& basis,
                 const std::string& metric, double measured, double reference, double tol, bool strict = false) {
        Assertion a;
        a.id = id;
        a.criterion = crit;
        a.claim = claim;
        a.basis = basis;
        a.metric = metric;
        a.measured = measured;
        a.reference = reference;
        a.tolerance = tol;
        a.strict = strict;
        rep.check(std::move(a));
    }
    // Runs body; an exception becomes a failed assertion under id.
    void guard(int crit, const std::string& id, const std::string& claim, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            rep.error(crit, id, claim, e.what());
        }
    }
};

// ---- criterion 5: Lambda limits and paths
void check_lambda(Checker& c, const SimulationConfig& cfg, LambdaMap& map_out) {
    const Scenario& d = cfg.validation.decoherence;
    const auto& V = cfg.validation;
    const std::string claim_zero = "no interaction leaves the light state unchanged, so Lambda = 1";
    c.guard(5, "lambda.alpha_zero", claim_zero, [&] {
        Scenario free = d;
        free.params = PhysicalParams::from_ratio(d.params.M, d.params.epsilon(), d.params.hbar, 0.0);
        for (LambdaMethod m : {LambdaMethod::rescaled, LambdaMethod::definition_integral, LambdaMethod::low_k0}) {
            const cplx L = lambda_param(free.spec, free.params, m).Lambda;
            c.value(5, "lambda.alpha_zero." + lambda_method_name(m), claim_zero, "identity", std::abs(L - 1.0), 0.0);
        }
    });

    if (d.alpha > 0.0) {
        const double beta = d.alpha * d.spec.delta;
        c.guard(5, "lambda.high_k0", "fast light particles are transmitted, Lambda near 1", [&] {
            const cplx L = lambda_scaled(d.spec.g, beta, V.high_k0_ratio * beta, cfg.lambda_method);
            c.value(5, "lambda.high_k0", "fast light particles are transmitted, Lambda near 1", "analytic bound",
                    std::abs(L - 1.0), cfg.tol.lambda_high_k0, true);
        });
        const double b0 = V.low_k0_alpha_delta;
        c.guard(5, "lambda.low_k0", "slow light particles: Lambda reduces to the k0 -> 0 integral", [&] {
            const cplx L = lambda_scaled(d.spec.g, b0, V.low_k0_ratio * b0, cfg.lambda_method);
            const cplx L0 = lambda_scaled(d.spec.g, b0, 0.0, LambdaMethod::low_k0);
            c.value(5, "lambda.low_k0", "slow light particles: Lambda reduces to the k0 -> 0 integral",
                    "independent oracle", std::abs(L - L0), cfg.tol.lambda_low_k0);
        });
        c.guard(5, "lambda.paths.scenario", "definition and rescaled integrals give the same Lambda", [&] {
            const cplx a = lambda_param(d.spec, d.params, LambdaMethod::rescaled).Lambda;
            const cplx b = lambda_param(d.spec, d.params, LambdaMethod::definition_integral).Lambda;
            c.value(5, "lambda.paths.scenario", "definition and rescaled integrals give the same Lambda",
                    "independent oracle", std::abs(a - b), cfg.tol.lambda_paths);
        });
    } else {
        c.rep.skip(5, "lambda.high_k0", "fast light particles are transmitted, Lambda near 1", kNoInteraction);
        c.rep.skip(5, "lambda.low_k0", "slow light particles: Lambda reduces to the k0 -> 0 integral", kNoInteraction);
    }
    c.guard(5, "lambda.paths.map", "definition and rescaled integrals give the same Lambda", [&] {
        map_out = run_lambda_map(d.spec.g, cfg.lambda_map);
        c.value(5, "lambda.paths.map", "definition and rescaled integrals give the same Lambda", "independent oracle",
                map_out.max_path_difference, cfg.tol.lambda_paths);
    });
}

// ---- criterion 2: kernel methods and the direct-quadrature patch
void check_propagator(Checker& c, const SimulationConfig& cfg, const std::vector<double>& times) {
    const Scenario& sc = cfg.base;
    const PhysicalParams& p = sc.params;
    const double tref = times.back();
    const std::string claim_k = "closed-form and Laguerre evaluations of the point-interaction kernel agree";
    c.guard(2, "kernel.methods", claim_k, [&] {
        if (p.alpha0 == 0.0) {
            c.rep.skip(2, "kernel.methods", claim_k, kNoInteraction);
            return;
        }
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> ux(-3.0, 3.0), ut(0.25, 1.0);
        double worst = 0.0;
        for (std::size_t s = 0; s < cfg.validation.kernel_samples; ++s) {
            const double x = ux(rng), xp = ux(rng), t = ut(rng) * tref;
            DeltaPropagatorSpec ks{p.mu(), p.alpha0, t, p.hbar, DeltaPropagatorSpec::Method::faddeeva};
            const cplx a = delta_kernel(ks, x, xp);
            ks.method = DeltaPropagatorSpec::Method::laguerre;
            const cplx b = delta_kernel(ks, x, xp);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
        c.value(2, "kernel.methods", claim_k, "independent oracle", worst, cfg.tol.kernel_relative);
    });

    const std::string claim_p = "grid evolution matches direct quadrature of the two-body propagator integral";
    const auto t0 = std::chrono::steady_clock::now();
    c.guard(2, "evolution.direct_patch", claim_p, [&] {
        const double t = times.front();
        const GridPair g = cfg.grids.resolve(sc, p, t);
        ComplexField2D psi;
        {
            const ComplexField2D psi0 = build_initial_state(sc.spec, p, g.r, g.R);
            EvolveOptions o = cfg.evolve_options();
            o.norm_tol = std::numeric_limits<double>::infinity();
            psi = exact_evolve(psi0, p, t, o);
        }
        std::size_t imax = 0;
        for (std::size_t k = 1; k < psi.values.size(); ++k)
            if (std::abs(psi.values[k]) > std::abs(psi.values[imax])) imax = k;
        const long n = static_cast<long>(cfg.validation.patch_size), s = static_cast<long>(cfg.validation.patch_stride);
        const long i0 = static_cast<long>(imax / g.R.n), j0 = static_cast<long>(imax % g.R.n);
        std::vector<std::pair<double, double>> pts;
        std::vector<cplx> pipe;
        for (long a = 0; a < n; ++a)
            for (long b = 0; b < n; ++b) {
                const long i = std::clamp(i0 + s * (a - n / 2), 0L, static_cast<long>(g.r.n) - 1);
                const long j = std::clamp(j0 + s * (b - n / 2), 0L, static_cast<long>(g.R.n) - 1);
                pts.emplace_back(g.r.x(i), g.R.x(j));
                pipe.push_back(psi.at(i, j));
            }
        psi = ComplexField2D();
        const auto ref = direct_evolution(sc.spec, p, t, pts, DeltaPropagatorSpec::Method::laguerre);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < ref.size(); ++k) {
            num += std::norm(pipe[k] - ref[k]);
            den += std::norm(ref[k]);
        }
        c.value(2, "evolution.direct_patch", claim_p, "independent oracle", std::sqrt(num / den), cfg.tol.patch_relative);
    });
    c.rep.timing("propagator oracle checks", 2, seconds_since(t0), cfg.tol.oracle_seconds);
}

// ---- criteria 1, 3, 4: the mass-ratio sweep
void check_sweep(Checker& c, const SimulationConfig& cfg, const std::vector<double>& times, SweepResult& res) {
    res = run_sweep(cfg.base, cfg, cfg.sweep.epsilons, times, cfg.sweep.stages);
    const std::string claim_u = "the exact evolution is unitary";
    const std::string claim_t = "||psi - psi^a|| is linear in the mass ratio at fixed t";
    const std::string claim_b = "||psi - psi^a|| <= (A/t + B) eps";
    const std::string claim_l4 = "||psi - psi_1|| <= C1 eps";
    double slowest = 0.0;
    for (const auto& pt : res.points) {
        if (!pt.failure.empty()) {
            c.rep.error(1, tag("unitarity", pt.epsilon, pt.t), claim_u, pt.failure);
            continue;
        }
        slowest = std::max(slowest, pt.seconds_exact);
        c.value(1, tag("unitarity", pt.epsilon, pt.t), claim_u, "identity", pt.drift, cfg.tol.norm_drift);
        const double y = pt.err / pt.epsilon;
        c.compare(3, tag("bound.analytic", pt.epsilon, pt.t), claim_b + " with A = C2 + C4, B = C1 + C5",
                  "analytic bound", "ratio", y, res.A_analytic / pt.t + res.B_analytic, 1.0);
        c.compare(3, tag("bound.fit", pt.epsilon, pt.t), claim_b + " with fitted A, B", "run-internal", "ratio", y,
                  res.fit.a / pt.t + res.fit.b, 1.0);
        if (cfg.sweep.stages) {
            c.compare(4, tag("psi1.bound", pt.epsilon, pt.t), claim_l4, "analytic bound", "ratio", pt.err_psi1,
                      pt.constants.C1 * pt.epsilon, cfg.tol.psi1_headroom);
            c.compare(0, tag("psi2.bound", pt.epsilon, pt.t), "||psi_1 - psi_2|| <= C2 eps / t", "analytic bound", "ratio",
                      pt.err_12, pt.constants.C2 * pt.epsilon / pt.t, 1.0);
            c.compare(0, tag("psia.bound", pt.epsilon, pt.t), "||psi_2 - psi^a|| <= C3(t) eps", "analytic bound", "ratio",
                      pt.err_2a, pt.constants.C3_at_t * pt.epsilon, 1.0);
            c.compare(0, tag("psi1.consistency", pt.epsilon, pt.t),
                      "||psi - psi_1|| at t equals the initial discrepancy", "identity", "rel_diff", pt.err_psi1,
                      pt.gap_psi1, 10.0 * cfg.tol.norm_drift);
        }
    }
    if (!cfg.sweep.stages) c.rep.skip(4, "psi1.bound", claim_l4, "stages disabled in the sweep configuration");
    for (const auto& s : res.slopes) {
        std::ostringstream id;
        id << "slope[t=" << s.t << "]";
        if (s.slope) c.compare(3, id.str(), claim_t, "analytic bound", "abs_diff", *s.slope, 1.0, cfg.tol.slope);
        else c.rep.error(3, id.str(), claim_t, "a slope needs at least two mass ratios; point estimate only");
    }
    c.rep.timing("slowest exact evolution", 1, slowest, cfg.tol.evolve_seconds);
    c.rep.timing("mass-ratio sweep", 3, res.seconds, cfg.tol.sweep_seconds);
    c.rep.note("sweep", sweep_summary(res));
}

// ---- criterion 6: fringes
void check_fringes(Checker& c, const SimulationConfig& cfg, std::optional<InterferencePattern>& pat) {
    const std::string claim_v = "fringe visibility at the crossing time equals |Lambda|";
    const std::string claim_p = "fringe phase shift equals the phase of the cross coherence";
    if (cfg.fringes.scenario.alpha > 0.0) {
        c.guard(6, "fringes.visibility", claim_v, [&] {
            pat = run_fringes(cfg.fringes);
            const auto& P = *pat;
            const cplx cc = cross_coherence(P.lambda);
            c.compare(6, "fringes.visibility", claim_v, "independent oracle", "abs_diff", P.effective.visibility,
                      P.lambda.modulus, cfg.tol.visibility);
            c.compare(6, "fringes.phase", claim_p, "independent oracle", "abs_diff",
                      wrap_angle(P.effective.phase - std::arg(cc)), 0.0, cfg.tol.phase);
            c.compare(6, "fringes.phase_magnitude", "|fringe phase| equals |arg Lambda|", "independent oracle",
                      "abs_diff", std::abs(P.effective.phase), std::abs(P.lambda.phase), cfg.tol.phase);
            if (P.asymptotic)
                c.compare(6, "fringes.visibility_asymptotic", claim_v + " (asymptotic density)", "independent oracle",
                          "abs_diff", P.asymptotic->visibility, P.lambda.modulus, cfg.tol.visibility);
            c.rep.note("fringes", fringe_summary(P));
        });
    } else {
        c.rep.skip(6, "fringes.visibility", claim_v, kNoInteraction);
        c.rep.skip(6, "fringes.phase", claim_p, kNoInteraction);
    }
    const std::string claim_f = "without interaction the fringes keep full contrast";
    c.guard(6, "fringes.free_visibility", claim_f, [&] {
        FringeConfig free = cfg.fringes;
        free.scenario.alpha = 0.0;
        free.scenario.params = free.scenario.with_epsilon(free.scenario.params.epsilon());
        free.asymptotic = false;
        const auto P = run_fringes(free);
        c.compare(6, "fringes.free_visibility", claim_f, "identity", "abs_diff", P.effective.visibility, 1.0,
                  cfg.tol.visibility_free);
        if (!pat) pat = P;
    });
}

// ---- criterion 7: density-matrix laws
void check_densities(Checker& c, const SimulationConfig& cfg) {
    const Scenario& d = cfg.validation.decoherence;
    const std::string claim = "the asymptotic initial density is a state";
    c.guard(7, "density.asymptotic", claim, [&] {
        const Grid1D grid = plan_heavy_grid(d.spec, d.params, 0.0, 6.0);
        const DensityMatrixGrid rho = asymptotic_density(d.spec, d.params, 0.0, grid);
        const InvariantReport inv = density_invariants(rho);
        c.value(7, "density.hermiticity", claim + ": Hermitian", "identity", inv.hermiticity_defect, cfg.tol.hermiticity);
        c.compare(7, "density.trace", claim + ": unit trace", "identity", "abs_diff", inv.trace, 1.0, cfg.tol.trace);
        c.value(7, "density.positivity", claim + ": no eigenvalue below -tolerance", "identity", -inv.min_eigenvalue,
                cfg.tol.psd);
        const LambdaResult lam = lambda_param(d.spec, d.params, cfg.lambda_method);
        const LowRankDensity eff = effective_density(d.spec, d.params, 0.0, lam, grid);
        if (d.alpha > 0.0)
            c.value(7, "density.mixed", "scattering leaves the heavy particle in a mixed state", "analytic bound",
                    inv.purity, 1.0, true);
        else
            c.rep.skip(7, "density.mixed", "scattering leaves the heavy particle in a mixed state", kNoInteraction);
        c.compare(7, "density.effective_purity", "purity of the two-packet effective density is (1 + |Lambda|^2)/2",
                  "identity", "abs_diff", eff.purity(), 0.5 * (1.0 + lam.modulus * lam.modulus), cfg.tol.purity);
        json n = {{"grid_n", grid.n},
                  {"asymptotic_purity", inv.purity},
                  {"asymptotic_trace", inv.trace},
                  {"asymptotic_min_eigenvalue", inv.min_eigenvalue},
                  {"effective_purity", eff.purity()},
                  {"hilbert_schmidt_distance", distances(rho, eff.to_dense()).hilbert_schmidt}};
        c.rep.note("density", n);
    });
}

// ---- criterion 8: overlap-kernel scaling
void check_proposition2(Checker& c, const SimulationConfig& cfg) {
    const Scenario& d = cfg.validation.decoherence;
    const std::string claim_r = "the off-diagonal overlap approaches Lambda as the packets separate";
    const std::string claim_s = "the same-side overlap approaches 1 as the heavy packets narrow";
    if (!(d.alpha > 0.0)) {
        c.rep.skip(8, "overlap.separation", claim_r, kNoInteraction);
        c.rep.skip(8, "overlap.width", claim_s, kNoInteraction);
        return;
    }
    const std::size_t ns = cfg.validation.overlap_samples;
    json notes = json::array();
    c.guard(8, "overlap.separation", claim_r, [&] {
        InitialStateSpec a = d.spec, b = d.spec;
        b.R0 = 2.0 * a.R0;
        const BoundReport ra = proposition2_check(a, d.params, ns), rb = proposition2_check(b, d.params, ns);
        c.compare(8, "overlap.separation", claim_r + " (doubling R0)", "analytic bound", "ratio", rb.sup_offdiag,
                  ra.sup_offdiag, cfg.tol.offdiag_ratio);
        notes.push_back({{"R0", a.R0}, {"sup_offdiag", ra.sup_offdiag}, {"sup_diag", ra.sup_diag}});
        notes.push_back({{"R0", b.R0}, {"sup_offdiag", rb.sup_offdiag}, {"sup_diag", rb.sup_diag}});
    });
    c.guard(8, "overlap.width", claim_s, [&] {
        InitialStateSpec s = d.spec;
        double prev = proposition2_check(s, d.params, ns).sup_diag;
        for (int k = 1; k <= 2; ++k) {
            s.sigma *= 0.5;
            const double cur = proposition2_check(s, d.params, ns).sup_diag;
            c.compare(8, "overlap.width[sigma=" + fmt(s.sigma) + "]", claim_s + " (halving sigma)", "analytic bound",
                      "ratio", cur, prev, 1.0, true);
            notes.push_back({{"sigma", s.sigma}, {"sup_diag", cur}});
            prev = cur;
        }
    });
    c.rep.note("overlap", notes);
}

// ---- criterion 9: momentum diagonal
void check_momentum(Checker& c, const SimulationConfig& cfg) {
    const Scenario& d = cfg.validation.momentum;
    const std::string claim = "the momentum distribution is unchanged by decoherence for separated packets";
    if (!(d.alpha > 0.0)) {
        c.rep.skip(9, "momentum.diagonal", claim, kNoInteraction);
        return;
    }
    c.guard(9, "momentum.diagonal", claim, [&] {
        const Grid1D kg = momentum_grid(d.spec, d.params);
        const LambdaResult lam = lambda_param(d.spec, d.params, cfg.lambda_method);
        const auto a = momentum_density(d.spec, d.params, lam, kg).diagonal();
        const auto b = momentum_density(d.spec, d.params, LambdaResult{}, kg).diagonal();
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
        c.value(9, "momentum.diagonal", claim, "analytic bound", worst, cfg.tol.momentum, true);
    });
}

}  // namespace

std::vector<cplx> direct_evolution(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                   const std::vector<std::pair<double, double>>& points,
                                   DeltaPropagatorSpec::Method method) {
    params.validate();
    if (!(t > 0.0)) throw ValidationError("direct evolution needs t > 0");
    const double hb = params.hbar, m = params.m, M = params.M, nu = params.nu(), mu = params.mu();
    const auto [glo, ghi] = spec.g_support();
    const auto fs = spec.f_support();
    const double flo = fs.front().first, fhi = fs.back().second;
    // initial support in (x1', x2') = (r' - R', (m r' + M R') / nu), a parallelogram inside this box
    const double a1 = glo - fhi, b1 = ghi - flo;
    const double a2 = (m * glo + M * flo) / nu, b2 = (m * ghi + M * fhi) / nu;

    double X1 = 0.0, X2 = 0.0;
    for (const auto& [r, R] : points) {
        X1 = std::max(X1, std::abs(r - R));
        X2 = std::max(X2, std::abs((m * r + M * R) / nu));
    }
    const double kg = std::abs(spec.k0(hb)) + spec.g.bandwidth(1e-14) / spec.delta;
    const double kf = spec.P0 / hb + spec.f.bandwidth(1e-14) / spec.sigma;
    const double ka = mu * (X1 + std::max(std::abs(a1), std::abs(b1))) / (hb * t) + (M / nu) * kg + (m / nu) * kf;
    const double kb = nu * (X2 + std::max(std::abs(a2), std::abs(b2))) / (hb * t) + kg + kf;

    QuadratureRule q1;
    if (a1 < 0.0 && b1 > 0.0) {
        q1 = gauss_legendre_width(a1, 0.0, 3.0 / ka);
        q1.append(gauss_legendre_width(0.0, b1, 3.0 / ka));
    } else {
        q1 = gauss_legendre_width(a1, b1, 3.0 / ka);
    }
    const QuadratureRule q2 = gauss_legendre_width(a2, b2, 3.0 / kb);
    const auto N1 = static_cast<Eigen::Index>(q1.size()), N2 = static_cast<Eigen::Index>(q2.size());

    // Phi(a, b) = w_a w_b psi0(r', R') e^{i nu x2'^2 / 2 hbar t}
    Eigen::MatrixXcd Phi(N1, N2);
    parallel_for(q1.size(), [&](std::size_t a) {
        const double x1 = q1.x[a];
        for (Eigen::Index b = 0; b < N2; ++b) {
            const double x2 = q2.x[b];
            const double r = x2 + (M / nu) * x1, R = x2 - (m / nu) * x1;
            const cplx v = spec.g_delta(r, hb) * spec.f_sigma(R, hb);
            Phi(static_cast<Eigen::Index>(a), b) =
                v == 0.0 ? cplx(0.0) : q1.w[a] * q2.w[b] * v * std::polar(1.0, nu * x2 * x2 / (2.0 * hb * t));
        }
    });

    const DeltaPropagatorSpec ks{mu, params.alpha0, t, hb, method};
    const cplx pref = free_kernel(nu, hb, t, 0.0);
    std::vector<cplx> out(points.size());
    parallel_for(points.size(), [&](std::size_t p) {
        const auto [r, R] = points[p];
        const double x1 = r - R, x2 = (m * r + M * R) / nu;
        Eigen::VectorXcd E(N2);
        for (Eigen::Index b = 0; b < N2; ++b) E(b) = std::polar(1.0, -nu * x2 * q2.x[b] / (hb * t));
        const Eigen::VectorXcd S = Phi * E;
        cplx acc = 0.0;
        for (Eigen::Index a = 0; a < N1; ++a) acc += delta_kernel(ks, x1, q1.x[a]) * S(a);
        out[p] = pref * std::polar(1.0, nu * x2 * x2 / (2.0 * hb * t)) * acc;
    });
    return out;
}

ValidationReport run_validate(const SimulationConfig& cfg, const std::string& out_dir) {
    ValidationReport rep;
    Checker c{rep};
    if (!out_dir.empty()) ensure_directory(out_dir);

    std::vector<double> times;
    try {
        times = cfg.times.resolve(cfg.base);
    } catch (const Error& e) {
        rep.error(1, "times", "evaluation times are defined", e.what());
    }

    LambdaMap map;
    check_lambda(c, cfg, map);
    if (!times.empty()) {
        check_propagator(c, cfg, times);
        SweepResult sweep;
        check_sweep(c, cfg, times, sweep);
        if (!out_dir.empty()) write_sweep(sweep, out_dir);
    }
    std::optional<InterferencePattern> pattern;
    check_fringes(c, cfg, pattern);
    check_densities(c, cfg);
    check_proposition2(c, cfg);
    check_momentum(c, cfg);

    rep.note("determinism", "rerun with another worker count and compare every output except timing.json");
    if (!out_dir.empty()) {
        const std::filesystem::path dir(out_dir);
        if (!map.entries.empty()) write_lambda_map(map, out_dir);
        if (pattern) write_fringes(*pattern, out_dir);
        json doc = rep.to_json();
        doc["config"] = cfg.raw;
        write_json((dir / "report.json").string(), doc);
        write_json((dir / "timing.json").string(), rep.timing_json());
        write_text((dir / "summary.txt").string(), rep.summary());
    }
    return rep;
}

}  // namespace decoh::harness
