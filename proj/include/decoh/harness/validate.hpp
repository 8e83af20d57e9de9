#pragma once

#include "decoh/harness/config.hpp"
#include "decoh/harness/report.hpp"

#include <string>
#include <utility>
#include <vector>

namespace decoh::harness {

// Runs every acceptance check the configuration allows and writes report.json, summary.txt,
// timing.json and the sweep / map / fringe tables into out_dir (when nonempty).
ValidationReport run_validate(const SimulationConfig& cfg, const std::string& out_dir);

// Exact two-body wavefunction at the given (r, R) points by direct quadrature of the propagator
// integral in relative / center-of-mass coordinates, without any grid, shear or FFT: Gauss-Legendre
// panels over the initial support, the relative axis split at the kink x1' = 0, the point-interaction
// kernel evaluated with the given method.
std::vector<cplx> direct_evolution(const InitialStateSpec& spec, const PhysicalParams& params, double t,
                                   const std::vector<std::pair<double, double>>& points,
                                   DeltaPropagatorSpec::Method method = DeltaPropagatorSpec::Method::laguerre);

}  // namespace decoh::harness
