#pragma once

#include "decoh/core.hpp"

namespace decoh {

struct GridPlanOptions {
    double oversample = 1.2;  // Nyquist margin on the largest wavenumber
    double pad = 1.05;        // relative padding of the domain half-widths
    double tail = 1e-12;      // envelope tail mass ignored when sizing
};

struct GridPair {
    Grid1D r;
    Grid1D R;
};

// Smallest 2^a or 3 * 2^a not below n.
std::size_t nice_size(std::size_t n);

// Grids on which the exact two-body evolution to time t_max stays resolved and inside the box:
// wavenumbers bounded by envelope bandwidths plus reflection recoil, extents by those
// wavenumbers times t / mass in relative and center-of-mass coordinates. The relative spacing also
// resolves the delta kernel's chirp at the grid edge, which grows like 1/t, so a grid planned for
// t_max is not valid for much earlier times; plan once per evaluation time.
GridPair plan_grids(const InitialStateSpec& spec, const PhysicalParams& params, double t_max,
                    const GridPlanOptions& opts = {});

// Heavy-particle grid for free evolution of f_sigma up to t_max (density/fringe paths).
Grid1D plan_heavy_grid(const InitialStateSpec& spec, const PhysicalParams& params, double t_max,
                       double min_points_per_fringe = 16.0, const GridPlanOptions& opts = {});

}  // namespace decoh
