#pragma once

#include "decoh/core.hpp"
#include "decoh/density.hpp"
#include "decoh/grid_plan.hpp"
#include "decoh/propagators.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace decoh::harness {

// Physics plus initial state. alpha (the light-particle inverse length) is what sweeps over epsilon hold
// fixed, so it is kept next to params.
struct Scenario {
    PhysicalParams params;
    InitialStateSpec spec;
    double alpha = 0.0;

    PhysicalParams with_epsilon(double eps) const;
    double crossing_time() const;  // R0 M / P0; throws ValidationError when undefined
};

struct GridConfig {
    bool automatic = true;
    GridPlanOptions plan;
    std::size_t nr = 0, nR = 0;
    double half_r = 0.0, half_R = 0.0;

    GridPair resolve(const Scenario& sc, const PhysicalParams& params, double t) const;
};

struct TimeConfig {
    std::vector<double> values;              // absolute times
    std::vector<double> crossing_fractions;  // multiples of R0 M / P0

    std::vector<double> resolve(const Scenario& sc) const;
};

struct Tolerances {
    double norm_drift = 1e-4;
    double wrap = 1e-9;
    double kernel_relative = 1e-8;
    double patch_relative = 1e-3;
    double slope = 0.15;
    double psi1_headroom = 1.05;
    double lambda_high_k0 = 0.05;
    double lambda_low_k0 = 1e-3;
    double lambda_paths = 1e-8;
    double visibility = 0.05;
    double phase = 0.05;
    double visibility_free = 0.02;
    double hermiticity = 1e-10;
    double trace = 1e-4;
    double psd = 1e-6;
    double purity = 1e-6;
    double offdiag_ratio = 0.65;
    double momentum = 1e-6;
    double evolve_seconds = 60.0;
    double oracle_seconds = 300.0;
    double sweep_seconds = 600.0;
};

struct SweepConfig {
    std::vector<double> epsilons{0.04, 0.02, 0.01};
    bool stages = true;
};

struct LambdaMapConfig {
    std::vector<double> alpha_delta{0.0, 0.1, 0.2, 0.5, 1.0, 2.0};
    std::vector<double> k0_over_alpha{0.0, 0.01, 0.1, 1.0, 10.0, 100.0};
};

struct FringeConfig {
    Scenario scenario;
    double min_points_per_period = 16.0;
    bool asymptotic = true;
    std::optional<Grid1D> grid;  // planned when absent
};

struct ValidationConfig {
    std::size_t kernel_samples = 100;
    std::size_t patch_size = 16;
    std::size_t patch_stride = 2;
    double low_k0_alpha_delta = 0.2;
    double low_k0_ratio = 0.01;
    double high_k0_ratio = 100.0;
    std::size_t overlap_samples = 16;
    Scenario decoherence;
    Scenario momentum;
};

struct SimulationConfig {
    std::string source;
    nlohmann::json raw;  // the document as read
    Scenario base;
    GridConfig grids;
    TimeConfig times;
    DeltaPropagatorSpec::Method kernel_method = DeltaPropagatorSpec::Method::faddeeva;
    LambdaMethod lambda_method = LambdaMethod::rescaled;
    Tolerances tol;
    SweepConfig sweep;
    LambdaMapConfig lambda_map;
    FringeConfig fringes;
    ValidationConfig validation;
    std::string output_dir = "out";
    std::uint64_t seed = 20240521;

    EvolveOptions evolve_options() const;
};

// Throws ConfigError (with the dotted key path) on schema violations, IoError when unreadable.
SimulationConfig parse_config(const nlohmann::json& doc, const std::string& source = "<inline>");
SimulationConfig load_config(const std::string& path);

}  // namespace decoh::harness
