#include "decoh/asymptotics.hpp"
#include "decoh/errors.hpp"
#include "decoh/grid_plan.hpp"
#include "decoh/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace decoh {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// Merged supports of the two heavy packets, trimmed to the 1e-14 tail extent.
std::vector<std::pair<double, double>> f_intervals(const InitialStateSpec& spec) {
    const double ext = spec.f.extent(1e-14) * spec.sigma;
    if (spec.single_packet()) return {{-ext, ext}};
    if (spec.R0 - ext <= -spec.R0 + ext) return {{-spec.R0 - ext, spec.R0 + ext}};
    return {{-spec.R0 - ext, -spec.R0 + ext}, {spec.R0 - ext, spec.R0 + ext}};
}

QuadratureRule f_rule_width(const InitialStateSpec& spec, double width) {
    QuadratureRule r;
    for (auto [lo, hi] : f_intervals(spec)) r.append(gauss_legendre_width(lo, hi, width));
    return r;
}

QuadratureRule f_rule(const InitialStateSpec& spec, double hbar) {
    return f_rule_width(spec, std::min(spec.sigma / 4.0, 8.0 / std::max(1e-300, spec.P0 / hbar)));
}

std::pair<double, double> g_span(const InitialStateSpec& spec) {
    const double ext = spec.g.extent(1e-14) * spec.delta;
    return {spec.r0 - ext, spec.r0 + ext};
}

QuadratureRule g_rule(const InitialStateSpec& spec, double hbar, double lo, double hi) {
    const double width = std::min(spec.delta / 4.0, 8.0 / std::max(1e-300, std::abs(spec.k0(hbar))));
    return gauss_legendre_width(lo, hi, width);
}

// Rule over supp g split at x when x falls inside.
QuadratureRule g_rule_split(const InitialStateSpec& spec, double hbar, double x) {
    auto [lo, hi] = g_span(spec);
    if (x <= lo || x >= hi) return g_rule(spec, hbar, lo, hi);
    QuadratureRule r = g_rule(spec, hbar, lo, x);
    r.append(g_rule(spec, hbar, x, hi));
    return r;
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericalRangeError(std::string("error constant ") + what + " is not finite");
}

}  // namespace

double c1_constant(const InitialStateSpec& spec, const PhysicalParams& params) {
    const double hb = params.hbar;
    const QuadratureRule ry = f_rule(spec, hb);
    auto [lo, hi] = g_span(spec);
    const QuadratureRule ru = g_rule(spec, hb, lo, hi);
    std::vector<cplx> gu(ru.size()), dgu(ru.size());
    for (std::size_t j = 0; j < ru.size(); ++j) {
        gu[j] = spec.g_delta(ru.x[j], hb);
        dgu[j] = spec.dg_delta(ru.x[j], hb);
    }
    // int dx x^2 int dy |d/dy (f(y) g(x+y))|^2 with u = x + y.
    std::vector<double> part(ry.size());
    parallel_for(ry.size(), [&](std::size_t i) {
        const double y = ry.x[i];
        const cplx f = spec.f_sigma(y, hb), df = spec.df_sigma(y, hb);
        double s = 0.0;
        for (std::size_t j = 0; j < ru.size(); ++j) {
            const double x = ru.x[j] - y;
            s += ru.w[j] * x * x * std::norm(df * gu[j] + f * dgu[j]);
        }
        part[i] = ry.w[i] * s;
    });
    double s = 0.0;
    for (double v : part) s += v;
    const double c1 = std::sqrt(s);
    check_finite(c1, "C1");
    return c1;
}

namespace {

// Per f-node moments of |g_delta(y + x)| in y.
struct C2Rows {
    QuadratureRule rx;
    std::vector<double> f2, a4, s1, s2;
    double S0 = 0.0;
};

C2Rows c2_rows(const InitialStateSpec& spec, double hb) {
    C2Rows r;
    r.rx = f_rule(spec, hb);
    const std::size_t n = r.rx.size();
    r.f2.resize(n);
    r.a4.resize(n);
    r.s1.resize(n);
    r.s2.resize(n);
    auto [lo, hi] = g_span(spec);
    const QuadratureRule ru_full = g_rule(spec, hb, lo, hi);
    for (std::size_t j = 0; j < ru_full.size(); ++j) r.S0 += ru_full.w[j] * std::abs(spec.g_delta(ru_full.x[j], hb));
    parallel_for(n, [&](std::size_t i) {
        const double x = r.rx.x[i];
        r.f2[i] = std::norm(spec.f_sigma(x, hb));
        const QuadratureRule ru = g_rule_split(spec, hb, x);
        double a4 = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t j = 0; j < ru.size(); ++j) {
            const double y = ru.x[j] - x;
            const double ga = std::abs(spec.g_delta(ru.x[j], hb));
            a4 += ru.w[j] * y * y * y * y * ga * ga;
            s1 += ru.w[j] * std::abs(y) * ga;
            s2 += ru.w[j] * y * y * ga;
        }
        r.a4[i] = a4;
        r.s1[i] = s1;
        r.s2[i] = s2;
    });
    return r;
}

}  // namespace

C2Parts c2_parts(const InitialStateSpec& spec, const PhysicalParams& params) {
    const C2Rows r = c2_rows(spec, params.hbar);
    C2Parts p{0, 0, r.S0 * r.S0, 0, 0};
    for (std::size_t i = 0; i < r.rx.size(); ++i) {
        const double w = r.rx.w[i] * r.f2[i];
        const double x = r.rx.x[i];
        p.F4 += w * x * x * x * x;
        p.A4 += w * r.a4[i];
        p.G1 += w * r.s1[i] * r.s1[i];
        p.G2 += w * r.s2[i] * r.s2[i];
    }
    return p;
}

double c2_constant(const InitialStateSpec& spec, const PhysicalParams& params, ErrorConstants* pieces) {
    const double eps = params.epsilon(), alpha = params.alpha();
    const C2Rows r = c2_rows(spec, params.hbar);
    double F4 = 0.0, A4 = 0.0, G2 = 0.0, mixed = 0.0;
    for (std::size_t i = 0; i < r.rx.size(); ++i) {
        const double w = r.rx.w[i] * r.f2[i];
        const double x = r.rx.x[i];
        F4 += w * x * x * x * x;
        A4 += w * r.a4[i];
        G2 += w * r.s2[i] * r.s2[i];
        if (alpha > 0.0) mixed += w * std::pow((1.0 + eps) * r.S0 / alpha + r.s1[i], 2);
    }
    double inverse = 0.0, linear = 0.0;
    if (alpha > 0.0) {
        inverse = 2.0 / ((1.0 + eps) * alpha) * mixed;
        linear = alpha * G2 / (2.0 * std::pow(1.0 + eps, 3));
    }
    const double free_part = A4 / (2.0 * std::pow(1.0 + eps, 2));
    const double c2 = params.M / params.hbar * (std::sqrt(free_part + linear + inverse) + 0.5 * std::sqrt(F4));
    check_finite(c2, "C2");
    if (pieces) {
        pieces->C2_interaction_inverse = inverse;
        pieces->C2_interaction_linear = linear;
    }
    return c2;
}

double c3_constant(const InitialStateSpec& spec, const PhysicalParams& params, double t, ErrorConstants* pieces) {
    if (!(t > 0.0)) throw ValidationError("C3 needs t > 0");
    const double hb = params.hbar, M = params.M, alpha = params.alpha();
    const double Xf = (spec.single_packet() ? 0.0 : spec.R0) + spec.f.extent(1e-14) * spec.sigma;
    const double kf = spec.P0 / hb + spec.f.bandwidth(1e-12) / spec.sigma + M * Xf / (hb * t);
    const double kg = std::abs(spec.k0(hb)) + spec.g.bandwidth(1e-12) / spec.delta;
    auto fhat = [&](double xi) { return spec.f_sigma(xi, hb) * std::polar(1.0, M * xi * xi / (2.0 * hb * t)); };

    // ---- first term: moment expansion of int dz z^2 int dx |d/dx (F(z-x) g~(x))|^2, F the transform of fhat
    const double Wmax = 1.1 * kf;
    const double dw = kPi / (4.0 * Xf);
    const auto nw = static_cast<std::size_t>(std::ceil(2.0 * Wmax / dw)) + 1;
    const QuadratureRule rxi = f_rule_width(spec, std::min(spec.sigma / 4.0, 8.0 / (2.1 * Wmax)));
    std::vector<cplx> wf(rxi.size());
    for (std::size_t i = 0; i < rxi.size(); ++i) wf[i] = rxi.w[i] * fhat(rxi.x[i]) / std::sqrt(2.0 * kPi);
    std::vector<cplx> Fw(nw), dFw(nw);
    std::vector<double> ws(nw);
    parallel_for(nw, [&](std::size_t m) {
        const double w = -Wmax + dw * static_cast<double>(m);
        ws[m] = w;
        cplx a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < rxi.size(); ++i) {
            const cplx e = wf[i] * std::polar(1.0, -w * rxi.x[i]);
            a += e;
            b += -I * rxi.x[i] * e;
        }
        Fw[m] = a;
        dFw[m] = b;
    });
    const double Xg = std::abs(spec.r0) + spec.g.extent(1e-14) * spec.delta;
    const double dx = kPi / (4.0 * Xg);
    const double Kg = 1.1 * spec.g.bandwidth(1e-12) / spec.delta;
    const auto nx = static_cast<std::size_t>(std::ceil(2.0 * Kg / dx)) + 1;
    std::vector<cplx> gx(nx), dgx(nx);
    std::vector<double> xs(nx);
    for (std::size_t j = 0; j < nx; ++j) {
        const double k = spec.k0(hb) - Kg + dx * static_cast<double>(j);
        const double kc = k - spec.k0(hb);
        xs[j] = k;
        const cplx ph = std::sqrt(spec.delta) * std::polar(1.0, -kc * spec.r0);
        gx[j] = ph * spec.g.ft(spec.delta * kc);
        dgx[j] = ph * (-I * spec.r0 * spec.g.ft(spec.delta * kc) + spec.delta * spec.g.ft_derivative(spec.delta * kc));
    }
    // a = F', c = F (in w); b = g~, d = g~' (in x); integrand (w+x)^2 |-a b + c d|^2.
    double Waa[3] = {0, 0, 0}, Wcc[3] = {0, 0, 0};
    cplx Wac[3] = {0, 0, 0};
    for (std::size_t m = 0; m < nw; ++m) {
        double p = 1.0;
        for (int q = 0; q < 3; ++q) {
            Waa[q] += dw * p * std::norm(dFw[m]);
            Wcc[q] += dw * p * std::norm(Fw[m]);
            Wac[q] += dw * p * dFw[m] * std::conj(Fw[m]);
            p *= ws[m];
        }
    }
    double Xbb[3] = {0, 0, 0}, Xdd[3] = {0, 0, 0};
    cplx Xbd[3] = {0, 0, 0};
    for (std::size_t j = 0; j < nx; ++j) {
        double p = 1.0;
        for (int q = 0; q < 3; ++q) {
            Xbb[q] += dx * p * std::norm(gx[j]);
            Xdd[q] += dx * p * std::norm(dgx[j]);
            Xbd[q] += dx * p * gx[j] * std::conj(dgx[j]);
            p *= xs[j];
        }
    }
    auto combo = [](const auto& W, const auto& X) { return W[2] * X[0] + 2.0 * W[1] * X[1] + W[0] * X[2]; };
    const double term1_sq = combo(Waa, Xbb) + combo(Wcc, Xdd) - 2.0 * std::real(combo(Wac, Xbd));
    const double term1 = std::sqrt(std::max(0.0, term1_sq));

    // ---- second term: zeta(z, r') = int dxi fhat(xi) g(r' + xi) e^{-i z xi} by FFT in xi for each r'
    double term2 = 0.0;
    if (alpha > 0.0) {
        const double dxi = kPi / (1.2 * (kf + kg));
        auto [glo, ghi] = g_span(spec);
        const auto nxi = static_cast<std::size_t>(std::ceil(2.0 * Xf / dxi)) + 1;
        const std::size_t nfft = nice_size(4 * nxi);
        const double xi0 = -Xf;
        std::vector<cplx> fh(nxi);
        for (std::size_t j = 0; j < nxi; ++j) fh[j] = fhat(xi0 + dxi * static_cast<double>(j));
        const double rlo = glo - Xf, rhi = ghi + Xf;
        const auto nrp = static_cast<std::size_t>(std::ceil((rhi - rlo) / dxi)) + 1;
        std::vector<std::vector<double>> absz(nrp);
        parallel_for(nrp, [&](std::size_t p) {
            const double rp = rlo + dxi * static_cast<double>(p);
            std::vector<cplx> line(nfft, 0.0);
            bool any = false;
            for (std::size_t j = 0; j < nxi; ++j) {
                const double u = rp + xi0 + dxi * static_cast<double>(j);
                if (u <= glo || u >= ghi) continue;
                line[j] = fh[j] * spec.g_delta(u, hb);
                any = true;
            }
            if (!any) return;
            fft_forward(line);
            absz[p].resize(nfft);
            for (std::size_t m = 0; m < nfft; ++m) absz[p][m] = dxi * std::abs(line[m]);
        });
        const double dz = 2.0 * kPi / (static_cast<double>(nfft) * dxi);
        const auto zk = fft_wavenumbers(nfft, dxi);
        std::vector<double> A(nfft, 0.0), B(nfft, 0.0);
        for (std::size_t p = 0; p < nrp; ++p) {
            if (absz[p].empty()) continue;
            const double rp = rlo + dxi * static_cast<double>(p);
            for (std::size_t m = 0; m < nfft; ++m) {
                A[m] += dxi * absz[p][m];
                B[m] += dxi * std::abs(rp) * absz[p][m];
            }
        }
        double s = 0.0;
        for (std::size_t m = 0; m < nfft; ++m) {
            const double z = zk[m];
            s += dz * ((alpha * alpha + z * z) * A[m] * A[m] + alpha * alpha * z * z * B[m] * B[m]);
        }
        term2 = 1.0 / (std::sqrt(2.0) * kPi) * std::sqrt(kPi / alpha * s);
    }
    const double c3 = term1 + term2;
    check_finite(c3, "C3");
    if (pieces) {
        pieces->C3_free = term1;
        pieces->C3_interaction = term2;
    }
    return c3;
}

}  // namespace decoh
