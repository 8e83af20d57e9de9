#include "decoh/grid_plan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace decoh {

std::size_t nice_size(std::size_t n) {
    std::size_t p = 8;
    while (p < n) {
        if (3 * p / 2 >= n && (p % 2 == 0)) return 3 * p / 2;
        p *= 2;
    }
    return p;
}

GridPair plan_grids(const InitialStateSpec& spec, const PhysicalParams& params, double t_max,
                    const GridPlanOptions& opts) {
    const double hb = params.hbar;
    const double k_light = std::abs(spec.k0(hb)) + spec.g.bandwidth(opts.tail) / spec.delta;
    const double k_heavy = spec.P0 / hb + spec.f.bandwidth(opts.tail) / spec.sigma + 2.0 * k_light;
    const double m = params.m, M = params.M, nu = params.nu(), mu = params.mu();

    const double gx = spec.g.extent(opts.tail) * spec.delta;
    const double fx = spec.f.extent(opts.tail) * spec.sigma;
    const double Rmax0 = (spec.single_packet() ? 0.0 : spec.R0) + fx;
    const double rmax0 = std::abs(spec.r0) + gx;

    const double k1 = (M * k_light + m * k_heavy) / nu;
    const double k2 = k_light + k_heavy;
    const double X1 = rmax0 + Rmax0 + hb * k1 * t_max / mu;
    const double X2 = (m * rmax0 + M * Rmax0) / nu + hb * k2 * t_max / nu;

    const double half_r = opts.pad * std::max({X1, X2 + (M / nu) * X1, rmax0});
    const double half_R = opts.pad * std::max({X2 + (m / nu) * X1, Rmax0});
    // The delta kernel's chirp mu (|x1| + |x1'|) / (hbar t) must stay below Nyquist out to the grid edge.
    const double chirp = t_max > 0.0 ? mu * (half_r + rmax0 + Rmax0) / (hb * t_max) : 0.0;
    const double dr = std::numbers::pi / (opts.oversample * std::max({k1, k_light, chirp}));
    const double dR = std::numbers::pi / (opts.oversample * k2);

    GridPair out;
    const std::size_t nr = nice_size(static_cast<std::size_t>(std::ceil(2.0 * half_r / dr)) + 8);
    const std::size_t nR = nice_size(static_cast<std::size_t>(std::ceil(2.0 * half_R / dR)) + 8);
    out.r = Grid1D::symmetric(nr, 0.5 * nr * dr);
    out.R = Grid1D::symmetric(nR, 0.5 * nR * dR);
    return out;
}

Grid1D plan_heavy_grid(const InitialStateSpec& spec, const PhysicalParams& params, double t_max,
                       double min_points_per_fringe, const GridPlanOptions& opts) {
    const double hb = params.hbar;
    const double k = spec.P0 / hb + spec.f.bandwidth(opts.tail) / spec.sigma;
    const double fx = spec.f.extent(opts.tail) * spec.sigma;
    const double X = opts.pad * ((spec.single_packet() ? 0.0 : spec.R0) + fx + hb * k * t_max / params.M);
    double d = std::numbers::pi / (opts.oversample * k);
    if (spec.P0 > 0.0) d = std::min(d, std::numbers::pi * hb / (spec.P0 * min_points_per_fringe));
    const std::size_t n = nice_size(static_cast<std::size_t>(std::ceil(2.0 * X / d)) + 8);
    return Grid1D::symmetric(n, 0.5 * n * d);
}

}  // namespace decoh
