#pragma once

#include "decoh/asymptotics.hpp"
#include "decoh/density.hpp"
#include "decoh/harness/config.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace decoh::harness {

// Which approximant evolve compares against the exact field; `none` dumps the exact field only.
enum class StageChoice { psi1, psi2, psia, none };
StageChoice parse_stage(const std::string& s);  // psi1, psi2, psia, exact
std::string stage_choice_name(StageChoice s);

// ---- evolve

struct EvolvePoint {
    double t = 0.0;
    GridPair grid;
    double drift = 0.0;
    double norm_exact = 0.0;
    double norm_stage = 0.0;
    double error = 0.0;        // ||psi - stage||, NaN for `none`
    ErrorConstants constants;
    double seconds_exact = 0.0;
};

struct EvolveResult {
    StageChoice stage = StageChoice::psia;
    double epsilon = 0.0;
    std::vector<EvolvePoint> points;
    BoundFit c3_fit;         // C3(t) <= C4/t + C5 over the evaluated times
    double A_analytic = 0.0; // C2 + C4
    double B_analytic = 0.0; // C1 + C5
    BoundFit error_fit;      // fit of ||psi - psi^a|| / eps against A/t + B
};

// Exact and approximate evolution at every configured time; dumps fields when out_dir is nonempty.
EvolveResult run_evolve(const SimulationConfig& cfg, StageChoice stage, const std::string& out_dir);
nlohmann::json evolve_summary(const EvolveResult& r);

// ---- epsilon sweep

struct SweepPoint {
    double epsilon = 0.0;
    double t = 0.0;
    std::size_t nr = 0, nR = 0;
    double drift = 0.0;
    double err = 0.0;            // ||psi - psi^a||
    double err_psi1 = NAN;       // ||psi - psi_1|| measured at t
    double gap_psi1 = NAN;       // ||T psi_0 - (T psi_1)(0)||
    double err_12 = NAN;         // ||psi_1 - psi_2||
    double err_2a = NAN;         // ||psi_2 - psi^a||
    ErrorConstants constants;
    double seconds_exact = 0.0;
    std::string failure;         // nonempty when the point could not be computed
};

struct SlopeFit {
    double t = 0.0;
    std::size_t points = 0;
    std::optional<double> slope;  // absent for a single epsilon (point estimate only)
    double point_estimate = 0.0;  // err / eps at the smallest epsilon
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<SlopeFit> slopes;
    BoundFit fit;                 // err / eps against A_fit / t + B_fit over all points
    double A_analytic = 0.0;      // max over epsilon of C2 + C4
    double B_analytic = 0.0;      // max over epsilon of C1 + C5
    double seconds = 0.0;
};

SweepResult run_sweep(const Scenario& sc, const SimulationConfig& cfg, const std::vector<double>& epsilons,
                      const std::vector<double>& times, bool stages);
void write_sweep(const SweepResult& r, const std::string& out_dir);
nlohmann::json sweep_summary(const SweepResult& r);

// ---- Lambda map

struct LambdaMapEntry {
    double alpha_delta = 0.0;
    double k0_over_alpha = 0.0;
    cplx rescaled;
    cplx definition;
};

struct LambdaMap {
    std::vector<LambdaMapEntry> entries;  // alpha_delta-major
    double max_path_difference = 0.0;
    bool zero_row_unit = true;        // |Lambda| == 1 on alpha delta = 0
    bool decreasing_in_beta = true;   // k0 = 0 column, ordered alpha delta
    bool increasing_in_k0 = true;     // each alpha delta > 0 row, ordered k0 / alpha
};

LambdaMap run_lambda_map(const Envelope& g, const LambdaMapConfig& cfg);
void write_lambda_map(const LambdaMap& m, const std::string& out_dir);
nlohmann::json lambda_map_summary(const LambdaMap& m);

// ---- fringes

InterferencePattern run_fringes(const FringeConfig& cfg);
void write_fringes(const InterferencePattern& p, const std::string& out_dir);
nlohmann::json fringe_summary(const InterferencePattern& p);

// Echo of the parameters a run used, for summaries.
nlohmann::json scenario_json(const Scenario& sc);

}  // namespace decoh::harness
