#include "decoh/asymptotics.hpp"

#include "decoh/errors.hpp"
#include "decoh/parallel.hpp"
#include "decoh/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace decoh {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

void check_y_resolution(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid_R) {
    if (spec.P0 <= 0.0) return;
    const double per_period = 2.0 * kPi * params.hbar / (spec.P0 * grid_R.spacing);
    if (per_period < 12.0) {
        std::ostringstream os;
        os << "y-quadrature under-resolved: " << per_period << " nodes per period of P0 y/hbar, need >= 12 (R spacing <= "
           << 2.0 * kPi * params.hbar / (12.0 * spec.P0) << ")";
        throw ResolutionError(os.str());
    }
}

void check_common(const InitialStateSpec& spec, const PhysicalParams& params, double t) {
    params.validate();
    spec.validate(true);
    if (!(t > 0.0)) throw ValidationError("approximants need t > 0");
}

}  // namespace

std::vector<std::size_t> support_nodes(const InitialStateSpec& spec, const Grid1D& grid) {
    const double ext = spec.f.extent(1e-14) * spec.sigma;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double y = grid.x(j);
        const bool in = spec.single_packet() ? std::abs(y) <= ext
                                             : (std::abs(y - spec.R0) <= ext || std::abs(y + spec.R0) <= ext);
        if (in) idx.push_back(j);
    }
    return idx;
}

std::string stage_name(ApproximantStage::Stage s) {
    switch (s) {
        case ApproximantStage::Stage::psi1: return "psi1";
        case ApproximantStage::Stage::psi2: return "psi2";
        case ApproximantStage::Stage::psi_a: return "psia";
    }
    return "?";
}

ComplexField2D asymptotic_evolve(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                 const Grid1D& grid_r, const Grid1D& grid_R) {
    check_common(spec, params, t);
    check_y_resolution(spec, params, grid_R);
    const double hb = params.hbar, m = params.m;
    const auto ys = support_nodes(spec, grid_R);
    std::vector<double> ks(grid_r.n);
    for (std::size_t i = 0; i < grid_r.n; ++i) ks[i] = m * grid_r.x(i) / (hb * t);
    const WPlusEvaluator W(spec, hb, params.alpha(), ks);

    std::vector<std::vector<cplx>> rows(ys.size());
    std::vector<cplx> fy(ys.size());
    parallel_for(ys.size(), [&](std::size_t a) {
        const double y = grid_R.x(ys[a]);
        fy[a] = spec.f_sigma(y, hb);
        W.row(y, rows[a]);
    });

    ComplexField2D out(grid_r, grid_R);
    const auto mult = free_multiplier(grid_R, params.M, t, hb);
    const cplx pref = std::sqrt(m / (I * hb * t));
    for_each_line_axis1(out, [&](std::vector<cplx>& line, std::size_t i) {
        for (std::size_t a = 0; a < ys.size(); ++a) line[ys[a]] = fy[a] * rows[a][i];
        apply_multiplier(line, mult);
        const double r = grid_r.x(i);
        const cplx c = pref * std::polar(1.0, m * r * r / (2.0 * hb * t));
        for (auto& v : line) v *= c;
    });
    return out;
}

ComplexField2D psi1_evolve(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                           const Grid1D& grid_r, const Grid1D& grid_R, const EvolveOptions& opts) {
    check_common(spec, params, t);
    ComplexField2D com(grid_r, grid_R);
    const double hb = params.hbar;
    std::vector<cplx> f(grid_R.n);
    for (std::size_t j = 0; j < grid_R.n; ++j) f[j] = spec.f_sigma(grid_R.x(j), hb);
    parallel_for(grid_r.n, [&](std::size_t i) {
        for (std::size_t j = 0; j < grid_R.n; ++j)
            com.at(i, j) = f[j] == 0.0 ? cplx(0.0) : f[j] * spec.g_delta(grid_r.x(i) + grid_R.x(j), hb);
    });
    return evolve_from_com(com, params, t, opts);
}

double psi1_initial_gap(const InitialStateSpec& spec, const PhysicalParams& params, const Grid1D& grid_r,
                        const Grid1D& grid_R) {
    const ComplexField2D psi0 = build_initial_state(spec, params, grid_r, grid_R);
    const ComplexField2D com = to_com_relative(psi0, params);
    const double hb = params.hbar;
    std::vector<double> row(grid_r.n, 0.0);
    parallel_for(grid_r.n, [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = 0; j < grid_R.n; ++j) {
            const double x2 = grid_R.x(j);
            const cplx phi = spec.f_sigma(x2, hb) * spec.g_delta(grid_r.x(i) + x2, hb);
            s += std::norm(com.at(i, j) - phi);
        }
        row[i] = s;
    });
    double s = 0.0;
    for (double v : row) s += v;
    return std::sqrt(s * grid_r.spacing * grid_R.spacing);
}

ComplexField2D psi2_evolve(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                           const Grid1D& grid_r, const Grid1D& grid_R, double wrap_tol) {
    check_common(spec, params, t);
    check_y_resolution(spec, params, grid_R);
    const double hb = params.hbar, m = params.m, mu = params.mu();
    const auto xis = support_nodes(spec, grid_R);
    std::vector<double> qs(grid_r.n);
    for (std::size_t i = 0; i < grid_r.n; ++i) qs[i] = mu * grid_r.x(i) / (hb * t);
    const WPlusEvaluator W(spec, hb, mu * params.alpha0 / (hb * hb), qs);

    std::vector<std::vector<cplx>> rows(xis.size());
    std::vector<cplx> fx(xis.size());
    parallel_for(xis.size(), [&](std::size_t a) {
        const double xi = grid_R.x(xis[a]);
        fx[a] = spec.f_sigma(xi, hb) * std::polar(std::sqrt(2.0 * kPi), -m * xi * xi / (2.0 * hb * t));
        W.row(xi, rows[a]);
    });

    ComplexField2D com(grid_r, grid_R);
    const auto mult = free_multiplier(grid_R, params.nu(), t, hb);
    const cplx pref = std::sqrt(mu / (2.0 * kPi * I * hb * t));
    for_each_line_axis1(com, [&](std::vector<cplx>& line, std::size_t i) {
        const double q = qs[i];
        for (std::size_t a = 0; a < xis.size(); ++a) {
            const double xi = grid_R.x(xis[a]);
            line[xis[a]] = fx[a] * std::polar(1.0, q * xi) * rows[a][i];
        }
        apply_multiplier(line, mult);
        const double x1 = grid_r.x(i);
        const cplx c = pref * std::polar(1.0, mu * x1 * x1 / (2.0 * hb * t));
        for (auto& v : line) v *= c;
    });
    return from_com_relative(com, params, wrap_tol);
}

ApproximantStage make_stage(ApproximantStage::Stage s, const InitialStateSpec& spec, const PhysicalParams& params,
                            double t, const Grid1D& grid_r, const Grid1D& grid_R) {
    ApproximantStage st{s, {}, t, params, 0.0};
    switch (s) {
        case ApproximantStage::Stage::psi1: st.field = psi1_evolve(spec, params, t, grid_r, grid_R); break;
        case ApproximantStage::Stage::psi2: st.field = psi2_evolve(spec, params, t, grid_r, grid_R); break;
        case ApproximantStage::Stage::psi_a: st.field = asymptotic_evolve(spec, params, t, grid_r, grid_R); break;
    }
    st.norm = norm(st.field);
    return st;
}

BoundFit fit_inverse_time_bound(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.empty()) throw ValidationError("bound fit needs matching nonempty samples");
    BoundFit fit;
    fit.points = t.size();
    auto residual = [&](double a, double b) {
        double r = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) r += std::pow(a / t[i] + b - y[i], 2);
        return r;
    };
    double best_a = 0.0, best_b = 0.0, best_r = 1e300;
    auto consider = [&](double a, double b) {
        if (a < 0.0 || b < 0.0 || !std::isfinite(a) || !std::isfinite(b)) return;
        const double r = residual(a, b);
        if (r < best_r) {
            best_r = r;
            best_a = a;
            best_b = b;
        }
    };
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double u = 1.0 / t[i];
        s11 += u * u;
        s12 += u;
        s22 += 1.0;
        r1 += u * y[i];
        r2 += y[i];
    }
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) > 1e-14 * s11 * s22) consider((r1 * s22 - r2 * s12) / det, (s11 * r2 - s12 * r1) / det);
    consider(0.0, r2 / s22);
    consider(r1 / s11, 0.0);
    fit.a = best_a;
    fit.b = best_b;
    double lift = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double bound = fit.a / t[i] + fit.b;
        if (y[i] > bound) lift = std::max(lift, bound > 0.0 ? y[i] / bound : 1e300);
    }
    fit.raw_dominates = lift == 1.0;
    if (lift >= 1e300) {
        fit.b = *std::max_element(y.begin(), y.end());
        lift = 1.0;
    }
    fit.lift = lift;
    fit.a *= lift;
    fit.b *= lift;
    return fit;
}

BoundFit fit_c3(const InitialStateSpec& spec, const PhysicalParams& params, const std::vector<double>& times) {
    std::vector<double> c3;
    for (double t : times) c3.push_back(c3_constant(spec, params, t));
    return fit_inverse_time_bound(times, c3);
}

ErrorConstants compute_error_constants(const InitialStateSpec& spec, const PhysicalParams& params, double t) {
    ErrorConstants ec;
    ec.C1 = c1_constant(spec, params);
    ec.C2 = c2_constant(spec, params, &ec);
    ec.C3_at_t = c3_constant(spec, params, t, &ec);
    return ec;
}

}  // namespace decoh
